#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbs/extnat.hpp"

namespace gbs {

// Oriented graph with a fixed-point-free involution `bar` exchanging the
// positive and negative edge parts. Vertices and edges are dense integer ids.
struct OrientedGraph {
  int nv = 0;
  std::vector<int> esrc, etrg, ebar;
  std::vector<bool> epos;

  int ne() const { return static_cast<int>(esrc.size()); }
  int add_vertex() { return nv++; }
  // Adds a positive edge src->trg and its bar; returns the positive id.
  int add_edge_pair(int src, int trg) {
    int e = ne();
    esrc.push_back(src);
    etrg.push_back(trg);
    ebar.push_back(e + 1);
    epos.push_back(true);
    esrc.push_back(trg);
    etrg.push_back(src);
    ebar.push_back(e);
    epos.push_back(false);
    return e;
  }
};

struct Violation {
  bool ok = true;
  std::string what;   // empty when ok
  int witness = -1;   // edge or point id
};

Violation validate_graph(const OrientedGraph& g);

// GBS labeled graph: k[e] = k_{e,src}; k_{e,trg} = k[bar(e)].
struct GbsGraph {
  OrientedGraph g;
  std::vector<Int> k;
  std::vector<std::string> vname;          // per vertex
  std::vector<std::string> ename;          // per positive edge id (bar: "~"+name)
  std::map<std::string, int> vid, eid;

  int add_vertex(const std::string& name);
  // Declares a positive edge and implicitly its bar; labels nonzero.
  int add_edge(const std::string& name, int src, int trg, const Int& ksrc,
               const Int& ktrg);
  Int ksrc(int e) const { return k[e]; }
  Int ktrg(int e) const { return k[g.ebar[e]]; }
  std::string edge_name(int e) const {
    return g.epos[e] ? ename[e / 2] : "~" + ename[e / 2];
  }
  bool connected() const;
};

// Convenience builders used throughout the tests.
GbsGraph loop_graph(const Int& ksrc, const Int& ktrg);      // one vertex v, edge e
GbsGraph segment_graph(const Int& ksrc, const Int& ktrg);   // u--e-->w

struct SpanningTree {
  std::vector<bool> in_tree;  // per edge id, closed under bar
  bool contains(int e) const { return in_tree[e]; }
};

SpanningTree spanning_tree(const GbsGraph& h, int root);

using EdgePath = std::vector<int>;

bool is_reduced(const GbsGraph& h);
bool is_unimodular(const GbsGraph& h);

struct GroupClass {
  enum Kind { AmenableBS1n, UnimodularNonAmenable, NonUnimodularNonAmenable };
  Kind kind;
  Int n = 0;  // only for AmenableBS1n
  bool operator==(const GroupClass& o) const {
    return kind == o.kind && n == o.n;
  }
};

GroupClass classify(const GbsGraph& h);

// Value of the modular homomorphism on a cycle, as a reduced fraction.
struct Rational {
  Int num = 1, den = 1;
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
};
Rational modular_value(const GbsGraph& h, const EdgePath& cycle);

// Simple paths based at v and simple cycles anywhere, per the simple-path
// definition: length 1, or reduced with pairwise distinct sources and final
// target avoiding src(e_i), i >= 2. Both traversal directions are listed.
std::vector<EdgePath> simple_paths_from(const GbsGraph& h, int v);
std::vector<EdgePath> simple_cycles(const GbsGraph& h);

bool is_cycle(const GbsGraph& h, const EdgePath& c);

// Quotient of an oriented graph by disjoint connected vertex sets: edges
// inside a part disappear, endpoints are redirected to the part's new vertex.
// Returns the quotient plus the vertex map old-id -> new-id.
std::pair<OrientedGraph, std::vector<int>> quotient_graph(
    const OrientedGraph& g, const std::vector<std::vector<int>>& parts);

bool graph_is_tree(const OrientedGraph& g);
bool graph_is_forest(const OrientedGraph& g);

}  // namespace gbs
