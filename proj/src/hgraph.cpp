#include "gbs/hgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "gbs/arith.hpp"
#include "gbs/errors.hpp"

namespace gbs {

Violation validate_hgraph(const HGraph& hg, const GbsGraph& h) {
  Violation base = validate_graph(hg.g);
  if (!base.ok) return base;
  if (static_cast<int>(hg.vtype.size()) != hg.g.nv ||
      hg.vsize.size() != hg.vtype.size() ||
      static_cast<int>(hg.etype.size()) != hg.g.ne())
    return {false, "label-arity", -1};
  for (int v = 0; v < hg.g.nv; ++v) {
    if (hg.vtype[v] < 0 || hg.vtype[v] >= h.g.nv)
      return {false, "vertex-type", v};
    if (hg.vsize[v].finite() && hg.vsize[v].v < 1)
      return {false, "vertex-size", v};
  }
  for (int E = 0; E < hg.g.ne(); ++E) {
    int e = hg.etype[E];
    if (e < 0 || e >= h.g.ne()) return {false, "edge-type", E};
    if (hg.etype[hg.g.ebar[E]] != h.g.ebar[e])
      return {false, "edge-type-involution", E};
    if (hg.g.epos[E] != h.g.epos[e]) return {false, "edge-orientation", E};
    if (hg.vtype[hg.g.esrc[E]] != h.g.esrc[e] ||
        hg.vtype[hg.g.etrg[E]] != h.g.etrg[e])
      return {false, "endpoint-type", E};
  }
  for (int E = 0; E < hg.g.ne(); E += 2) {
    int e = hg.etype[E];
    if (!transfer_ok(hg.vsize[hg.g.esrc[E]], h.ksrc(e),
                     hg.vsize[hg.g.etrg[E]], h.ktrg(e)))
      return {false, "transfer", E};
  }
  for (int v = 0; v < hg.g.nv; ++v) {
    for (int e = 0; e < h.g.ne(); ++e) {
      if (h.g.esrc[e] != hg.vtype[v]) continue;
      Int count = 0;
      for (int E = 0; E < hg.g.ne(); ++E)
        if (hg.g.esrc[E] == v && hg.etype[E] == e) ++count;
      if (count > egcd(hg.vsize[v], h.ksrc(e)).v)
        return {false, "count", v};
    }
  }
  return {};
}

std::vector<SaturationEntry> saturation(const HGraph& hg, const GbsGraph& h) {
  std::vector<SaturationEntry> out;
  for (int v = 0; v < hg.g.nv; ++v) {
    for (int e = 0; e < h.g.ne(); ++e) {
      if (h.g.esrc[e] != hg.vtype[v]) continue;
      Int count = 0;
      for (int E = 0; E < hg.g.ne(); ++E)
        if (hg.g.esrc[E] == v && hg.etype[E] == e) ++count;
      Int deficit = egcd(hg.vsize[v], h.ksrc(e)).v - count;
      if (deficit < 0) throw DomainError("saturation: count bound exceeded");
      if (deficit > 0) out.push_back({v, e, deficit});
    }
  }
  return out;
}

bool is_saturated_hgraph(const HGraph& hg, const GbsGraph& h) {
  return saturation(hg, h).empty();
}

bool hgraph_connected(const HGraph& hg) {
  if (hg.g.nv == 0) return false;
  std::vector<bool> vis(hg.g.nv, false);
  std::vector<int> bfs{0};
  vis[0] = true;
  for (size_t i = 0; i < bfs.size(); ++i)
    for (int E = 0; E < hg.g.ne(); ++E)
      if (hg.g.esrc[E] == bfs[i] && !vis[hg.g.etrg[E]]) {
        vis[hg.g.etrg[E]] = true;
        bfs.push_back(hg.g.etrg[E]);
      }
  return std::count(vis.begin(), vis.end(), true) == hg.g.nv;
}

int betti_number(const OrientedGraph& g) {
  // components
  std::vector<int> comp(g.nv, -1);
  int nc = 0;
  for (int v = 0; v < g.nv; ++v) {
    if (comp[v] >= 0) continue;
    comp[v] = nc;
    std::vector<int> bfs{v};
    for (size_t i = 0; i < bfs.size(); ++i)
      for (int E = 0; E < g.ne(); ++E)
        if (g.esrc[E] == bfs[i] && comp[g.etrg[E]] < 0) {
          comp[g.etrg[E]] = nc;
          bfs.push_back(g.etrg[E]);
        }
    ++nc;
  }
  return g.ne() / 2 - g.nv + nc;
}

Extraction extract(const Preaction& p) {
  const GbsGraph& h = p.graph();
  Extraction out;
  for (const Orbit& o : p.orbits()) out.hg.add_vertex(o.type, o.size);
  for (size_t i = 0; i < p.orbits().size(); ++i)
    out.vfrom.push_back({static_cast<int>(i), 0});
  for (const Gluing& g : p.gluings()) {
    if (g.kind == Gluing::PointPair)
      throw DomainError("extract: raw identifications present");
    out.hg.add_edge(h, g.oa, g.ob, g.e);
    out.efrom.push_back({g.oa, g.ua});
  }
  return out;
}

namespace {

// Smallest offset in an orbit whose class fails `bad` (e.g. membership in a
// domain we must avoid); throws when none is found within the window.
Int find_offset(const Preaction& p, int orbit,
                const std::function<bool(const Point&)>& good) {
  const ExtNat& n = p.orbits()[orbit].size;
  Int limit = n.finite() ? (n.v < 5000 ? n.v : Int(5000)) : Int(5000);
  for (Int i = 0; i < limit; ++i)
    if (good({orbit, i})) return i;
  throw DomainError("realize: no available point in orbit");
}

}  // namespace

Preaction realize_extending(const HGraph& hg, const GbsGraph& h,
                            const SpanningTree& t,
                            const std::vector<const Preaction*>& parts,
                            const std::vector<Embedding>& embeddings,
                            std::vector<int>* part_orbit_base) {
  Violation v = validate_hgraph(hg, h);
  if (!v.ok) throw DomainError("realize: invalid H-graph: " + v.what);
  if (!hgraph_connected(hg)) throw DomainError("realize: H-graph disconnected");
  if (parts.size() != embeddings.size())
    throw DomainError("realize: parts/embeddings mismatch");

  // Check embeddings: injective, disjoint, label-preserving; collect the
  // covered hg vertices/edges and the tree-quotient precondition.
  std::vector<int> owner(hg.g.nv, -1);        // vertex -> part
  std::vector<bool> covered(hg.g.ne(), false);
  std::vector<Extraction> pex;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (&parts[i]->graph() != &h)
      throw DomainError("realize: part on a different graph");
    pex.push_back(extract(*parts[i]));
    const HGraph& ph = pex.back().hg;
    const Embedding& em = embeddings[i];
    if (static_cast<int>(em.vmap.size()) != ph.g.nv ||
        static_cast<int>(em.emap.size()) != ph.g.ne())
      throw DomainError("realize: embedding arity mismatch");
    for (int pv = 0; pv < ph.g.nv; ++pv) {
      int w = em.vmap[pv];
      if (w < 0 || w >= hg.g.nv || owner[w] >= 0)
        throw DomainError("realize: embedding not injective/disjoint");
      owner[w] = static_cast<int>(i);
      if (hg.vtype[w] != ph.vtype[pv] || hg.vsize[w] != ph.vsize[pv])
        throw DomainError("realize: embedding label mismatch");
    }
    for (int pe = 0; pe < ph.g.ne(); ++pe) {
      int E = em.emap[pe];
      if (E < 0 || E >= hg.g.ne() || (pe % 2 == 0 && covered[E]))
        throw DomainError("realize: edge embedding not injective");
      if (hg.etype[E] != ph.etype[pe] ||
          em.vmap[ph.g.esrc[pe]] != hg.g.esrc[E] ||
          em.vmap[ph.g.etrg[pe]] != hg.g.etrg[E] ||
          em.emap[ph.g.ebar[pe]] != hg.g.ebar[E])
        throw DomainError("realize: edge embedding label mismatch");
      covered[E] = true;
    }
  }
  // Tree-quotient precondition: contract each part image and require a tree.
  // (Only when extending; plain realization closes cycles edge by edge.)
  if (!parts.empty()) {
    std::vector<std::vector<int>> groups(parts.size());
    for (int w = 0; w < hg.g.nv; ++w)
      if (owner[w] >= 0) groups[owner[w]].push_back(w);
    groups.erase(std::remove_if(groups.begin(), groups.end(),
                                [](const std::vector<int>& g) {
                                  return g.empty();
                                }),
                 groups.end());
    auto [q, vmap] = quotient_graph(hg.g, groups);
    (void)vmap;
    if (!graph_is_tree(q))
      throw DomainError("realize: quotient by parts is not a tree");
  }

  Preaction p(h, t);
  if (part_orbit_base) part_orbit_base->clear();
  std::vector<int> realized(hg.g.nv, -1);  // hg vertex -> orbit id
  for (size_t i = 0; i < parts.size(); ++i) {
    int base = static_cast<int>(p.orbits().size());
    if (part_orbit_base) part_orbit_base->push_back(base);
    for (const Orbit& o : parts[i]->orbits()) p.add_orbit(o.type, o.size);
    for (Gluing gl : parts[i]->gluings()) {
      gl.oa += base;
      gl.ob += base;
      p.add_gluing(gl);
    }
    for (int pv = 0; pv < pex[i].hg.g.nv; ++pv)
      realized[embeddings[i].vmap[pv]] = base + pv;
  }
  if (parts.empty()) realized[0] = p.add_orbit(hg.vtype[0], hg.vsize[0]);

  // Attach the remaining edges; the tree quotient guarantees each uncovered
  // edge can be processed with one endpoint already realized.
  int remaining = 0;
  for (int E = 0; E < hg.g.ne(); E += 2)
    if (!covered[E]) ++remaining;
  while (remaining > 0) {
    int pick = -1;
    for (int E = 0; E < hg.g.ne() && pick < 0; E += 2)
      if (!covered[E] &&
          (realized[hg.g.esrc[E]] >= 0 || realized[hg.g.etrg[E]] >= 0))
        pick = E;
    if (pick < 0) throw DomainError("realize: H-graph disconnected");
    // orient so the source side is realized
    int E = realized[hg.g.esrc[pick]] >= 0 ? pick : hg.g.ebar[pick];
    int e = hg.etype[E];
    int a = hg.g.esrc[E], b = hg.g.etrg[E];
    int oa = realized[a];
    bool tree = t.contains(e);
    if (realized[b] >= 0) {
      int ob = realized[b];
      if (tree) {
        Int xo = find_offset(p, oa, [&](const Point& q) {
          return !p.in_alpha_dom(q, h.g.etrg[e]);
        });
        Int yo = find_offset(p, ob, [&](const Point& q) {
          return !p.in_alpha_dom(q, h.g.esrc[e]);
        });
        construction_B(p, e, {oa, xo}, {ob, yo});
      } else {
        Int xo = find_offset(p, oa, [&](const Point& q) {
          return !p.in_tau_dom(q, e);
        });
        Int yo = find_offset(p, ob, [&](const Point& q) {
          return !p.in_tau_dom(q, h.g.ebar[e]);
        });
        construction_A(p, e, {oa, xo}, {ob, yo});
      }
    } else {
      if (tree) {
        Int xo = find_offset(p, oa, [&](const Point& q) {
          return !p.in_alpha_dom(q, h.g.etrg[e]);
        });
        realized[b] = construction_Bprime(p, e, {oa, xo}, hg.vsize[b]);
      } else {
        Int xo = find_offset(p, oa, [&](const Point& q) {
          return !p.in_tau_dom(q, e);
        });
        realized[b] = construction_Aprime(p, e, {oa, xo}, hg.vsize[b]);
      }
    }
    covered[pick] = covered[hg.g.ebar[pick]] = true;
    --remaining;
  }
  return p;
}

Preaction realize_finite(const HGraph& hg, const GbsGraph& h,
                         const SpanningTree& t) {
  return realize_extending(hg, h, t, {}, {});
}

HGraph complete_to_depth(const HGraph& hg, const GbsGraph& h, int d) {
  HGraph out = hg;
  for (int round = 0; round < d; ++round) {
    int nv0 = out.g.nv;
    for (int v = 0; v < nv0; ++v) {
      for (int e = 0; e < h.g.ne(); ++e) {
        if (h.g.esrc[e] != out.vtype[v]) continue;
        Int count = 0;
        for (int E = 0; E < out.g.ne(); ++E)
          if (out.g.esrc[E] == v && out.etype[E] == e) ++count;
        Int deficit = egcd(out.vsize[v], h.ksrc(e)).v - count;
        if (deficit < 0)
          throw DomainError("complete_to_depth: count bound exceeded");
        ExtNat m = mul(div_gcd(out.vsize[v], h.ksrc(e)), h.ktrg(e));
        for (Int i = 0; i < deficit; ++i) {
          int w = out.add_vertex(h.g.etrg[e], m);
          out.add_edge(h, v, w, e);
        }
      }
    }
  }
  return out;
}

namespace {

// Gadget builder helpers: everything goes through add(), which normalizes
// edge orientation via HGraph::add_edge.
struct GadgetBuilder {
  const GbsGraph& h;
  HGraph hg;
  int vertex(int type, const ExtNat& n) { return hg.add_vertex(type, n); }
  void edge(int from, int to, int e) { hg.add_edge(h, from, to, e); }
};

}  // namespace

HGraph gadget(const GbsGraph& h, int e, const ExtNat& N) {
  GroupClass c = classify(h);  // throws on non-reduced input
  if (c.kind == GroupClass::AmenableBS1n)
    throw DomainError("gadget: amenable graph");
  int s = h.g.esrc[e];
  Int k = h.ksrc(e), l = h.ktrg(e);
  GadgetBuilder b{h, {}};
  auto M_of = [&](const ExtNat& n, const Int& ks, const Int& kt) {
    return mul(div_gcd(n, ks), kt);
  };
  if (h.g.esrc[e] != h.g.etrg[e]) {
    // e is not a loop: k must divide N
    if (egcd(N, k) != ExtNat(abs(k)))
      throw DomainError("gadget: k_src must divide N");
    if (abs(l) > 2) {
      // losange: V,X,Y of type s; W,Z of type trg(e), size N|l|/(N∧k)
      ExtNat m = M_of(N, k, l);
      ExtNat nk = M_of(N, k, k);  // N|k|/(N∧k) = N here
      int V = b.vertex(s, N), W = b.vertex(h.g.etrg[e], m);
      int X = b.vertex(s, nk), Y = b.vertex(s, nk);
      int Z = b.vertex(h.g.etrg[e], m);
      b.edge(V, W, e);
      b.edge(X, W, e);
      b.edge(Y, W, e);
      b.edge(X, Z, e);
      b.edge(Y, Z, e);
    } else if (abs(k) > 2) {
      // |l| = 2: square with two source-type and two target-type vertices
      ExtNat m = M_of(N, k, l);
      int A = b.vertex(s, N), Z = b.vertex(s, N);
      int X = b.vertex(h.g.etrg[e], m), Y = b.vertex(h.g.etrg[e], m);
      b.edge(A, X, e);
      b.edge(A, Y, e);
      b.edge(Z, X, e);
      b.edge(Z, Y, e);
    } else {
      // |k| = |l| = 2: auxiliary edge f with source s
      int f = -1, floop = -1;
      for (int g = 0; g < h.g.ne(); ++g) {
        if (g == e || g == h.g.ebar[e] || h.g.esrc[g] != s) continue;
        if (h.g.etrg[g] != s && f < 0) f = g;
        if (h.g.etrg[g] == s && floop < 0) floop = g;
      }
      if (f >= 0) {
        // square over e plus a shared f-target
        Int m = h.ksrc(f), n = h.ktrg(f);
        ExtNat a = M_of(N, m, n), w = M_of(N, k, l);
        int A = b.vertex(h.g.etrg[f], a);
        int B = b.vertex(s, N), C = b.vertex(s, N);
        int W = b.vertex(h.g.etrg[e], w);
        b.edge(B, A, f);
        b.edge(C, A, f);
        b.edge(B, W, e);
        b.edge(C, W, e);
      } else if (floop >= 0) {
        // auxiliary loop f at s
        Int m = h.ksrc(floop), n = h.ktrg(floop);
        ExtNat M = M_of(N, m, n);
        ExtNat B2 = M_of(N, k, l), D2 = M_of(M, k, l);
        int A = b.vertex(s, N), C = b.vertex(s, M);
        int E2 = b.vertex(s, N), F = b.vertex(s, M);
        int B1 = b.vertex(h.g.etrg[e], B2), D1 = b.vertex(h.g.etrg[e], D2);
        b.edge(A, C, floop);
        b.edge(E2, F, floop);
        b.edge(A, B1, e);
        b.edge(E2, B1, e);
        b.edge(C, D1, e);
        b.edge(F, D1, e);
      } else {
        throw DomainError("gadget: no auxiliary edge at source");
      }
    }
  } else if (abs(k) >= 2 && abs(l) >= 2) {
    // e is a loop with both labels >= 2
    ExtNat M = M_of(N, k, l);
    int A = b.vertex(s, N), B = b.vertex(s, M);
    int C = b.vertex(s, M_of(N, k, k));
    int D = b.vertex(s, M_of(M, k, l)), E2 = b.vertex(s, M);
    b.edge(A, B, e);
    b.edge(C, B, e);
    b.edge(B, D, e);
    b.edge(E2, D, e);
    b.edge(C, E2, e);
  } else {
    // e is a loop with a ±1 label; normalize so |k| = 1
    int eo = e;
    if (abs(k) != 1) {
      eo = h.g.ebar[e];
      std::swap(k, l);
    }
    // auxiliary edge f != e, ē with source s (loop preferred when it has
    // both labels >= 2, in which case the previous case applies to f)
    int fbig = -1, fone = -1, fseg = -1;
    for (int g = 0; g < h.g.ne(); ++g) {
      if (g == e || g == h.g.ebar[e] || h.g.esrc[g] != s) continue;
      if (h.g.etrg[g] == s) {
        if (abs(h.ksrc(g)) >= 2 && abs(h.ktrg(g)) >= 2) {
          if (fbig < 0) fbig = g;
        } else if (fone < 0) {
          fone = abs(h.ksrc(g)) == 1 ? g : h.g.ebar[g];
        }
      } else if (fseg < 0) {
        fseg = g;
      }
    }
    if (fbig >= 0) return gadget(h, fbig, N);
    if (fone >= 0) {
      // two ±1-labeled loops: square V -> W (e), V -> X (f), W -> Y (f),
      // X -> Y (e)
      Int n = h.ktrg(fone);
      int V = b.vertex(s, N), W = b.vertex(s, mul(N, l));
      int X = b.vertex(s, mul(N, n)), Y = b.vertex(s, mul(mul(N, l), n));
      b.edge(V, W, eo);
      b.edge(X, Y, eo);
      b.edge(V, X, fone);
      b.edge(W, Y, fone);
    } else if (fseg >= 0) {
      Int m = h.ksrc(fseg), n = h.ktrg(fseg);
      ExtNat a = M_of(N, m, n);
      int A = b.vertex(h.g.etrg[fseg], a);
      int B = b.vertex(s, N), C = b.vertex(s, N);
      b.edge(B, A, fseg);
      b.edge(C, A, fseg);
      if (abs(l) >= 2) {
        int W = b.vertex(s, mul(N, l));
        b.edge(B, W, eo);
        b.edge(C, W, eo);
      } else {
        b.edge(B, C, eo);
      }
    } else {
      throw DomainError("gadget: no auxiliary edge at source");
    }
  }
  Violation v = validate_hgraph(b.hg, h);
  if (!v.ok) throw DomainError("gadget: invalid output: " + v.what);
  if (betti_number(b.hg.g) < 1)
    throw DomainError("gadget: output simply connected");
  return b.hg;
}

std::optional<std::vector<int>> labeled_iso(const HGraph& a, const HGraph& b,
                                            const GbsGraph& h) {
  if (a.g.nv != b.g.nv || a.g.ne() != b.g.ne()) return std::nullopt;
  int n = a.g.nv;
  // signature: (type, size, per-etype out-degree)
  auto signature = [&](const HGraph& x, int v) {
    std::map<int, int> deg;
    for (int E = 0; E < x.g.ne(); ++E)
      if (x.g.esrc[E] == v) ++deg[x.etype[E]];
    return std::make_tuple(x.vtype[v], x.vsize[v].is_inf,
                           x.vsize[v].finite() ? x.vsize[v].v : Int(0), deg);
  };
  std::vector<std::vector<int>> cands(n);
  for (int va = 0; va < n; ++va) {
    auto sa = signature(a, va);
    for (int vb = 0; vb < n; ++vb)
      if (sa == signature(b, vb)) cands[va].push_back(vb);
    if (cands[va].empty()) return std::nullopt;
  }
  // multiset of etypes between an ordered vertex pair
  auto pair_counts = [&](const HGraph& x, int u, int v) {
    std::map<int, int> out;
    for (int E = 0; E < x.g.ne(); ++E)
      if (x.g.esrc[E] == u && x.g.etrg[E] == v) ++out[x.etype[E]];
    return out;
  };
  std::vector<int> map(n, -1), used(n, 0);
  // order vertices by candidate count for faster pruning
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return cands[x].size() < cands[y].size();
  });
  std::function<bool(int)> rec = [&](int idx) -> bool {
    if (idx == n) return true;
    int va = order[idx];
    for (int vb : cands[va]) {
      if (used[vb]) continue;
      bool ok = true;
      for (int j = 0; j < idx && ok; ++j) {
        int wa = order[j];
        if (pair_counts(a, va, wa) != pair_counts(b, vb, map[wa]) ||
            pair_counts(a, wa, va) != pair_counts(b, map[wa], vb))
          ok = false;
      }
      if (pair_counts(a, va, va) != pair_counts(b, vb, vb)) ok = false;
      if (!ok) continue;
      map[va] = vb;
      used[vb] = 1;
      if (rec(idx + 1)) return true;
      map[va] = -1;
      used[vb] = 0;
    }
    return false;
  };
  (void)h;
  if (!rec(0)) return std::nullopt;
  return map;
}

ExtNat hgraph_phenotype(const HGraph& hg, const GbsGraph& h, int s) {
  HGraph cur = hg;
  for (int round = 0; round <= h.g.nv; ++round) {
    for (int v = 0; v < cur.g.nv; ++v)
      if (cur.vtype[v] == s) return phenotype(h, s, cur.vsize[v]);
    cur = complete_to_depth(cur, h, 1);
  }
  throw DomainError("hgraph_phenotype: type unreachable");
}

}  // namespace gbs
