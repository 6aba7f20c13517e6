#pragma once
#include <optional>
#include <vector>

#include "gbs/core.hpp"
#include "gbs/words.hpp"

namespace gbs {

// A point of the carrier: an offset inside a named orbit. Points of glued
// orbits are identified; the canonical form is the least (orbit, offset) of
// the identification class.
struct Point {
  int orbit = -1;
  Int off = 0;
  bool operator==(const Point& o) const {
    return orbit == o.orbit && off == o.off;
  }
  bool operator<(const Point& o) const {
    return orbit != o.orbit ? orbit < o.orbit : off < o.off;
  }
};

struct Orbit {
  int type;     // vertex of H
  ExtNat size;  // >= 1
};

// Identification of coset points between two orbits:
//   (oa, ua + stepa·j) == (ob, ub + stepb·j)  for all j in Z,
// where for kind TreeEdge/Tau the steps are the labels of edge e (positive
// edge of H) and for PointPair only j = 0 applies (test configurations).
struct Gluing {
  enum Kind { TreeEdge, Tau, PointPair } kind;
  int e = -1;  // positive H-edge id (TreeEdge/Tau)
  int oa, ob;
  Int ua, ub;
};

class Preaction {
 public:
  Preaction(const GbsGraph& h, const SpanningTree& t) : h_(&h), tree_(t) {}

  const GbsGraph& graph() const { return *h_; }
  const SpanningTree& tree() const { return tree_; }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }

  int add_orbit(int type, const ExtNat& size);
  void add_gluing(const Gluing& g) { gluings_.push_back(g); }

  // Identification class of a point (chasing gluings); contains the input.
  std::vector<Point> closure(const Point& x) const;
  Point canonical(const Point& x) const;
  // Offset normalization inside an orbit.
  Point norm(const Point& x) const;

  // Class membership queries.
  std::optional<Point> member_of_type(const Point& x, int type) const;
  bool in_alpha_dom(const Point& x, int s) const;
  bool in_tau_dom(const Point& x, int e) const;  // e not in the tree

  // x · a_v^k and x · t_e (partial; nullopt when undefined).
  std::optional<Point> apply(const Point& x, const Letter& l) const;
  std::optional<Point> evaluate(const Point& x, const GroupWord& w) const;
  // Typed-word evaluation; records the gluing index (edge of the H-graph)
  // used at each step when `path_out` is non-null.
  std::optional<Point> evaluate(const Point& x, const TypedWord& w,
                                std::vector<int>* path_out = nullptr) const;

  // Representative points covering every coset-membership profile that is
  // reachable from the gluing anchors (used by validate()).
  std::vector<Point> interesting_points() const;

 private:
  const GbsGraph* h_;
  SpanningTree tree_;
  std::vector<Orbit> orbits_;
  std::vector<Gluing> gluings_;
};

Preaction new_orbit_preaction(const GbsGraph& h, const SpanningTree& t, int s,
                              const ExtNat& n);
Preaction disjoint_union(const Preaction& p, const Preaction& q);

// Validation of the five defining conditions; `what` is "condition-1" ...
// "condition-5" with a witness point description.
struct PreactionReport {
  bool ok = true;
  int condition = 0;
  std::string what;
};
PreactionReport validate(const Preaction& p);

// Construction A: extend tau_{e0} (e0 outside the tree) by sending the
// <alpha^{k}>-coset of x onto the <alpha^{l}>-coset of y.
void construction_A(Preaction& p, int e0, const Point& x, const Point& y);
// Construction B: e0 in the tree; identify the cosets of x and y.
void construction_B(Preaction& p, int e0, const Point& x, const Point& y);
// A'/B': same with a freshly created target orbit of size M; returns the
// new orbit id.
int construction_Aprime(Preaction& p, int e, const Point& x, const ExtNat& M);
int construction_Bprime(Preaction& p, int e, const Point& x, const ExtNat& M);

bool is_transitive(const Preaction& p);
bool is_saturated_preaction(const Preaction& p);

}  // namespace gbs
