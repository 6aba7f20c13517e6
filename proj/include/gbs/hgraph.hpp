#pragma once
#include <optional>
#include <vector>

#include "gbs/preaction.hpp"

namespace gbs {

// Finite labeled quotient graph of a preaction: vertices carry a vertex type
// of H and an orbit size, edges carry an edge of H whose endpoints and
// orientation they must match.
struct HGraph {
  OrientedGraph g;
  std::vector<int> vtype;
  std::vector<ExtNat> vsize;
  std::vector<int> etype;  // per edge id; etype[bar(E)] = bar(etype[E])

  int add_vertex(int type, const ExtNat& size) {
    vtype.push_back(type);
    vsize.push_back(size);
    return g.add_vertex();
  }
  // Adds the edge pair for an edge from->to labeled by H-edge e (any
  // orientation); stores the positive orientation and returns the id of the
  // from->to direction.
  int add_edge(const GbsGraph& h, int from, int to, int e) {
    if (h.g.epos[e]) {
      int id = g.add_edge_pair(from, to);
      etype.push_back(e);
      etype.push_back(h.g.ebar[e]);
      return id;
    }
    int id = g.add_edge_pair(to, from);
    etype.push_back(h.g.ebar[e]);
    etype.push_back(e);
    return id + 1;
  }
};

Violation validate_hgraph(const HGraph& hg, const GbsGraph& h);

struct SaturationEntry {
  int vertex;
  int edge;  // H-edge id (source side)
  Int deficit;
};
std::vector<SaturationEntry> saturation(const HGraph& hg, const GbsGraph& h);
bool is_saturated_hgraph(const HGraph& hg, const GbsGraph& h);

bool hgraph_connected(const HGraph& hg);
int betti_number(const OrientedGraph& g);

// H-graph of a preaction, with back-references recording the point each
// vertex (orbit base point) and edge (coset anchor) derives from.
struct Extraction {
  HGraph hg;
  std::vector<Point> vfrom;  // per vertex
  std::vector<Point> efrom;  // per positive edge index (edge id / 2)
};
Extraction extract(const Preaction& p);

// Realization of a finite connected valid H-graph (orbit per vertex, then
// constructions A/B edge by edge).
Preaction realize_finite(const HGraph& hg, const GbsGraph& h,
                         const SpanningTree& t);

// Embedding of a part's extracted H-graph into a larger H-graph.
struct Embedding {
  std::vector<int> vmap;  // part vertex -> hg vertex
  std::vector<int> emap;  // part edge id -> hg edge id
};

// Realization extending given preactions whose H-graphs embed disjointly in
// hg with tree quotient. `part_orbit_base`, when non-null, receives for each
// part the orbit-id offset of its copy inside the result.
Preaction realize_extending(const HGraph& hg, const GbsGraph& h,
                            const SpanningTree& t,
                            const std::vector<const Preaction*>& parts,
                            const std::vector<Embedding>& embeddings,
                            std::vector<int>* part_orbit_base = nullptr);

// d rounds of deficit-filling with the canonical new size
// M = N|k_{e,trg}| / (N ∧ k_{e,src}).
HGraph complete_to_depth(const HGraph& hg, const GbsGraph& h, int d);

// Finite connected non-simply-connected valid H-graph containing a
// non-saturated vertex labeled (src(e), N) plus another non-saturated vertex.
HGraph gadget(const GbsGraph& h, int e, const ExtNat& N);

// Label-and-orientation-preserving isomorphism (vertex map a -> b).
std::optional<std::vector<int>> labeled_iso(const HGraph& a, const HGraph& b,
                                            const GbsGraph& h);

// Phenotype of any vertex of type s (completing first when none exists).
ExtNat hgraph_phenotype(const HGraph& hg, const GbsGraph& h, int s);

}  // namespace gbs
