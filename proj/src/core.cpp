#include "gbs/core.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "gbs/errors.hpp"

namespace gbs {

Violation validate_graph(const OrientedGraph& g) {
  int ne = g.ne();
  for (int e = 0; e < ne; ++e) {
    int b = g.ebar[e];
    if (b < 0 || b >= ne || b == e) return {false, "fixed-point", e};
    if (g.ebar[b] != e) return {false, "involution", e};
    if (g.esrc[b] != g.etrg[e] || g.etrg[b] != g.esrc[e])
      return {false, "involution-endpoints", e};
    if (g.epos[b] == g.epos[e]) return {false, "orientation", e};
    if (g.esrc[e] < 0 || g.esrc[e] >= g.nv || g.etrg[e] < 0 ||
        g.etrg[e] >= g.nv)
      return {false, "endpoint-range", e};
  }
  return {};
}

int GbsGraph::add_vertex(const std::string& name) {
  if (vid.count(name)) throw ParseError("duplicate vertex name: " + name);
  vid[name] = g.nv;
  vname.push_back(name);
  return g.add_vertex();
}

int GbsGraph::add_edge(const std::string& name, int src, int trg,
                       const Int& ks, const Int& kt) {
  if (eid.count(name)) throw ParseError("duplicate edge name: " + name);
  if (ks == 0 || kt == 0) throw ParseError("zero label on edge " + name);
  int e = g.add_edge_pair(src, trg);
  k.push_back(ks);
  k.push_back(kt);
  ename.push_back(name);
  eid[name] = e;
  return e;
}

bool GbsGraph::connected() const {
  if (g.nv == 0) return false;
  std::vector<bool> seen(g.nv, false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e = 0; e < g.ne(); ++e)
      if (g.esrc[e] == v && !seen[g.etrg[e]]) {
        seen[g.etrg[e]] = true;
        q.push_back(g.etrg[e]);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

GbsGraph loop_graph(const Int& ksrc, const Int& ktrg) {
  GbsGraph h;
  h.add_vertex("v");
  h.add_edge("e", 0, 0, ksrc, ktrg);
  return h;
}

GbsGraph segment_graph(const Int& ksrc, const Int& ktrg) {
  GbsGraph h;
  h.add_vertex("u");
  h.add_vertex("w");
  h.add_edge("e", 0, 1, ksrc, ktrg);
  return h;
}

SpanningTree spanning_tree(const GbsGraph& h, int root) {
  if (!h.connected()) throw DomainError("spanning_tree: disconnected graph");
  SpanningTree t;
  t.in_tree.assign(h.g.ne(), false);
  std::vector<bool> seen(h.g.nv, false);
  seen[root] = true;
  std::deque<int> q{root};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e = 0; e < h.g.ne(); ++e) {
      if (h.g.esrc[e] != v || seen[h.g.etrg[e]]) continue;
      t.in_tree[e] = t.in_tree[h.g.ebar[e]] = true;
      seen[h.g.etrg[e]] = true;
      q.push_back(h.g.etrg[e]);
    }
  }
  return t;
}

bool is_reduced(const GbsGraph& h) {
  for (int e = 0; e < h.g.ne(); ++e) {
    Int a = abs(h.ksrc(e));
    if (a == 1 && h.g.esrc[e] != h.g.etrg[e]) return false;
  }
  return true;
}

bool is_cycle(const GbsGraph& h, const EdgePath& c) {
  if (c.empty()) return true;
  for (size_t i = 0; i + 1 < c.size(); ++i)
    if (h.g.etrg[c[i]] != h.g.esrc[c[i + 1]]) return false;
  return h.g.etrg[c.back()] == h.g.esrc[c.front()];
}

namespace {

// DFS over simple paths based at v. Every emitted path satisfies the
// simple-path definition; prefixes maintained satisfy reducedness plus
// pairwise-distinct sources.
void simple_path_dfs(const GbsGraph& h, EdgePath& cur,
                     std::vector<bool>& src_seen,
                     const std::function<void(const EdgePath&)>& emit) {
  int last = cur.back();
  int t = h.g.etrg[last];
  bool t_fresh_inner = true;  // t ∉ {src(e_i), i >= 2}
  for (size_t i = 1; i < cur.size(); ++i)
    if (h.g.esrc[cur[i]] == t) t_fresh_inner = false;
  if (cur.size() == 1 || t_fresh_inner) emit(cur);
  if (src_seen[t]) return;  // next source would repeat
  src_seen[t] = true;
  for (int e = 0; e < h.g.ne(); ++e) {
    if (h.g.esrc[e] != t || e == h.g.ebar[last]) continue;
    cur.push_back(e);
    simple_path_dfs(h, cur, src_seen, emit);
    cur.pop_back();
  }
  src_seen[t] = false;
}

}  // namespace

std::vector<EdgePath> simple_paths_from(const GbsGraph& h, int v) {
  std::vector<EdgePath> out;
  std::vector<bool> src_seen(h.g.nv, false);
  src_seen[v] = true;
  for (int e = 0; e < h.g.ne(); ++e) {
    if (h.g.esrc[e] != v) continue;
    EdgePath cur{e};
    simple_path_dfs(h, cur, src_seen,
                    [&](const EdgePath& p) { out.push_back(p); });
  }
  return out;
}

std::vector<EdgePath> simple_cycles(const GbsGraph& h) {
  std::vector<EdgePath> out;
  for (int v = 0; v < h.g.nv; ++v)
    for (const EdgePath& p : simple_paths_from(h, v))
      if (h.g.etrg[p.back()] == v) out.push_back(p);
  return out;
}

Rational modular_value(const GbsGraph& h, const EdgePath& cycle) {
  if (!is_cycle(h, cycle)) throw DomainError("modular_value: not a cycle");
  Rational r;
  for (int e : cycle) {
    r.num *= h.ksrc(e);
    r.den *= h.ktrg(e);
  }
  Int g = gcd(abs(r.num), abs(r.den));
  r.num /= g;
  r.den /= g;
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  return r;
}

bool is_unimodular(const GbsGraph& h) {
  for (const EdgePath& c : simple_cycles(h)) {
    Int a = 1, b = 1;
    for (int e : c) {
      a *= abs(h.ksrc(e));
      b *= abs(h.ktrg(e));
    }
    if (a != b) return false;
  }
  return true;
}

GroupClass classify(const GbsGraph& h) {
  if (!is_reduced(h)) throw DomainError("classify: graph not reduced");
  // Loop with a ±1 label: BS(1, n).
  if (h.g.nv == 1 && h.g.ne() == 2) {
    Int a = h.ksrc(0), b = h.ktrg(0);
    if (abs(a) == 1 || abs(b) == 1) {
      Int n = a * b;  // t a^{±1} t^{-1} = a^{l} rewrites to BS(1, a·l)
      return {GroupClass::AmenableBS1n, n};
    }
  }
  // Segment with both labels ±2: Klein bottle group, i.e. BS(1,-1).
  if (h.g.nv == 2 && h.g.ne() == 2 && abs(h.ksrc(0)) == 2 &&
      abs(h.ktrg(0)) == 2) {
    return {GroupClass::AmenableBS1n, Int(-1)};
  }
  return {is_unimodular(h) ? GroupClass::UnimodularNonAmenable
                           : GroupClass::NonUnimodularNonAmenable,
          Int(0)};
}

std::pair<OrientedGraph, std::vector<int>> quotient_graph(
    const OrientedGraph& g, const std::vector<std::vector<int>>& parts) {
  std::vector<int> part_of(g.nv, -1);
  for (size_t i = 0; i < parts.size(); ++i)
    for (int v : parts[i]) {
      if (part_of[v] != -1) throw DomainError("quotient: overlapping parts");
      part_of[v] = static_cast<int>(i);
    }
  OrientedGraph q;
  std::vector<int> vmap(g.nv, -1);
  // New vertices: one per part (in order), then the untouched vertices.
  std::vector<int> part_vertex(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) part_vertex[i] = q.add_vertex();
  for (int v = 0; v < g.nv; ++v)
    vmap[v] = part_of[v] >= 0 ? part_vertex[part_of[v]] : q.add_vertex();
  // Keep edges not inside a single part, preserving pairs.
  for (int e = 0; e < g.ne(); ++e) {
    if (!g.epos[e]) continue;
    int s = g.esrc[e], t = g.etrg[e];
    if (part_of[s] >= 0 && part_of[s] == part_of[t]) continue;
    q.add_edge_pair(vmap[s], vmap[t]);
  }
  return {q, vmap};
}

bool graph_is_forest(const OrientedGraph& g) {
  // A forest has |V| - #components positive edges.
  std::vector<int> comp(g.nv, -1);
  int nc = 0;
  for (int v0 = 0; v0 < g.nv; ++v0) {
    if (comp[v0] != -1) continue;
    comp[v0] = nc;
    std::deque<int> q{v0};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e = 0; e < g.ne(); ++e)
        if (g.esrc[e] == v && comp[g.etrg[e]] == -1) {
          comp[g.etrg[e]] = nc;
          q.push_back(g.etrg[e]);
        }
    }
    ++nc;
  }
  return g.ne() / 2 == g.nv - nc;
}

bool graph_is_tree(const OrientedGraph& g) {
  if (g.nv == 0) return false;
  std::vector<bool> seen(g.nv, false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int e = 0; e < g.ne(); ++e)
      if (g.esrc[e] == v && !seen[g.etrg[e]]) {
        seen[g.etrg[e]] = true;
        q.push_back(g.etrg[e]);
      }
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    return false;
  return g.ne() / 2 == g.nv - 1;
}

}  // namespace gbs
