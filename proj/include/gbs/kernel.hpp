#pragma once
#include <map>
#include <string>
#include <vector>

#include "gbs/arith.hpp"
#include "gbs/merge.hpp"

namespace gbs {

// A transitive preaction with a base point, standing for the subgroup
// Stab(x0) of the fundamental group. Saturation is required only where an
// operation needs it (documented per function).
struct PointedAction {
  Preaction p;
  Point x0;
};

// Radius-R ball around the base point in the Schreier graph over the
// generating set {a_s : s vertex} ∪ {t_e : e positive edge outside the tree}.
// Vertices are renumbered canonically (base point = 0, then breadth-first
// first-visit order scanning labels increasingly), so two balls are
// isomorphic as pointed labeled graphs iff they compare equal.
//
// Labels in `adj[v]`: generator g is numbered 0..V-1 for a_s (s = vertex id)
// and V + j for t_e (j = index of e among positive non-tree edges); the key
// 2g is the forward move v -> v·g and 2g+1 the backward move v -> v·g^{-1}.
struct SchreierBall {
  int radius = 0;
  std::vector<std::map<int, int>> adj;
  std::vector<int> dist;
  bool operator==(const SchreierBall&) const = default;
};

SchreierBall schreier_ball(const PointedAction& a, int R);
bool ball_iso(const SchreierBall& b1, const SchreierBall& b2);

// Ph of the index [<a_s> : Stab(x0) ∩ <a_s>], i.e. phenotype of the size of
// the α_s-orbit of the base point (∞ when a_s never returns).
ExtNat subgroup_phenotype(const PointedAction& a, int s);

// Carrier size of a finite saturated transitive preaction (= index of
// Stab(x0)); cross-checked against the per-type orbit-size sums. Throws on
// infinite carrier or non-transitive/non-saturated data.
ExtNat subgroup_index(const PointedAction& a);

// Smallest prime p0 witnessing non-unimodularity: some cycle has different
// p0-valuations of its source- and target-label products. Throws when the
// graph is unimodular.
Int nonunimodular_prime(const GbsGraph& h);

enum class PieceTopology { ClosedNonEmpty, Clopen, OpenNotClosed, EmptyPiece };
std::string piece_topology_name(PieceTopology t);

// Topology of the phenotype piece Ph^{-1}(N) at vertex s:
//   N = ∞                 -> closed, non-empty;
//   N attained, finite    -> clopen when unimodular, open-not-closed else;
//   otherwise             -> empty piece.
// Requires h reduced and non-amenable.
PieceTopology piece_topology(const GbsGraph& h, int s, const ExtNat& N);

// Description of the perfect kernel K(Γ); `description` is a one-line
// human-readable statement. With a finite pointed action, the subgroup
// fields (kernel membership, index, phenotype at s, piece tag) are filled.
struct KernelReport {
  GroupClass cls;
  std::string description;
  bool has_subgroup_data = false;
  bool in_kernel = false;
  ExtNat index;
  ExtNat phen;
  PieceTopology piece = PieceTopology::EmptyPiece;
};

KernelReport kernel_description(const GbsGraph& h);
KernelReport kernel_description(const GbsGraph& h, const PointedAction& a,
                                int s);

// Perfect-kernel membership from finite data (h non-amenable, else throws):
//  - a pointed action with finite carrier is never in the kernel;
//  - an infinite carrier (some infinite orbit) always is.
bool in_perfect_kernel(const GbsGraph& h, const PointedAction& a);
// Membership for a subgroup described by an H-graph: a saturated finite
// H-graph is a complete (finite-index) object, hence not in the kernel; a
// non-saturated one stands for its infinite completion, hence is.
bool in_perfect_kernel(const GbsGraph& h, const HGraph& hg);

// Tree H-graph containing, for k = 0..n_max, a vertex labeled (s, N·p0^k)
// with p0 = nonunimodular_prime(h); all of them have the same phenotype as
// N. Built by iterated single-pair merges. Requires h reduced non-amenable
// non-unimodular and N attained at s.
struct EscapeSequence {
  HGraph hg;
  std::vector<int> vertices;  // vertices[k] is labeled (s, N·p0^k)
  Int p0;
};
EscapeSequence phenotype_escape_sequence(const GbsGraph& h,
                                         const SpanningTree& t, int s,
                                         const ExtNat& N, int n_max);

// Constructive high-transitivity witness. Input: 2S pointed finite
// transitive preactions on one graph, with equal base types and
// subgroup_phenotype(balls[i]) == subgroup_phenotype(balls[S+i]) at that
// type; the R-ball of each input must be interior (every class the ball
// reaches is fully saturated in the input), so the extension cannot change
// it. Output: S extended actions gammas[i] containing balls[i] (orbits
// verbatim, base xbase[i]) and balls[S+i] (ybase[i]) with
// x_{i,0}·m = y_{i,0}, plus the verified Schreier balls. ball_iso against
// the inputs' balls is re-checked on every run; a breach throws.
struct WitnessResult {
  GroupWord m;
  std::vector<Preaction> gammas;
  std::vector<Point> xbase, ybase;
  std::vector<SchreierBall> xballs, yballs;
};
WitnessResult transitivity_witness(const std::vector<PointedAction>& balls,
                                   int R);

}  // namespace gbs
