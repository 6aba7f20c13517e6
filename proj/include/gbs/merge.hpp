#pragma once
#include <functional>
#include <vector>

#include "gbs/hgraph.hpp"

namespace gbs {

// One pair of pointed preactions to be merged. Both preactions must live on
// the same GbsGraph instance and spanning tree.
struct MergePair {
  const Preaction* alpha;
  const Preaction* beta;
  Point x0, y0;  // base points, in alpha resp. beta coordinates
};

// Simultaneous merge request: edge e0 and typed words m, m' positioning the
// working points x_i = x_{i,0}·m and y_i = y_{i,0}·m'. Hypotheses:
//  - a_{src(e0)} is defined on every x_i and y_i;
//  - if e0 is a tree edge, a_{trg(e0)} is undefined on them, otherwise
//    tau_{e0} (in both directions) is undefined on them;
//  - for each i, x_i and y_i have the same phenotype at src(e0).
struct MergeRequest {
  const GbsGraph* h = nullptr;
  SpanningTree t;
  std::vector<MergePair> pairs;
  int e0 = -1;
  TypedWord m, mprime;
};

// gammas[i] starts with a verbatim copy of alpha_i (orbits [0, beta_base[i]))
// followed by a copy of beta_i (orbit ids shifted by beta_base[i]) and then
// the orbits created during the merge. `word` is the connecting word: in
// gammas[i], x_{i,0}·word = y_{i,0} (with y_{i,0} shifted by beta_base[i]).
struct MergeResult {
  std::vector<Preaction> gammas;
  std::vector<int> beta_base;
  GroupWord word;
};

// Phenotype-preserving simultaneous merge. Postconditions (extension
// witnesses, word evaluation, validity, disjointness and tree quotient of the
// added part) are re-checked on every run; a breach throws DomainError.
// Set GBS_TRACE=1 to get a machine-readable case trace on stderr.
MergeResult merge(const MergeRequest& req);

// Valuation-draining trajectory: starting from `start`, repeatedly apply the
// piecewise update |N'|_p = 0 if |N|_p <= max(|m|_p,|n|_p), else
// |N|_p + |n|_p - |m|_p, until `stop` holds. Returns the whole trajectory
// (including `start`). Throws when an update makes no progress while `stop`
// still fails.
std::vector<ExtNat> drain(const Int& m, const Int& n, const ExtNat& start,
                          const std::function<bool(const ExtNat&)>& stop);

// Reduced typed word beginning with (e, g) whose induced edge path, read from
// x in p, leaves the vertex set K (orbit ids of extract(p)). Requires the
// quotient of extract(p) by K to be a tree with at least one vertex outside
// K, and x·a_{src(e)}^g to carry an e-edge.
TypedWord escape_word(const Preaction& p, const Point& x,
                      const std::vector<int>& K, int e, const Int& g);

// Single word escaping all the K_i simultaneously: gamma such that for every
// i the edge path induced by x_i and gamma ends outside K_i.
TypedWord common_escape_typed(const std::vector<const Preaction*>& ps,
                              const std::vector<Point>& xs,
                              const std::vector<std::vector<int>>& Ks);
GroupWord common_escape(const std::vector<const Preaction*>& ps,
                        const std::vector<Point>& xs,
                        const std::vector<std::vector<int>>& Ks);

// True iff w is defined at x, its first step uses the gluing
// `first_gluing`, and the induced edge path (sequence of gluings) is reduced.
bool check_backtrack(const Preaction& p, const Point& x, const TypedWord& w,
                     int first_gluing);

}  // namespace gbs
