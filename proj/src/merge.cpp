#include "gbs/merge.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "gbs/arith.hpp"

namespace gbs {
namespace {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

bool trace_on() {
  const char* t = std::getenv("GBS_TRACE");
  return t && *t == '1';
}

int positive(const GbsGraph& h, int e) { return h.g.epos[e] ? e : h.g.ebar[e]; }

Int emod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += abs(m);
  return r;
}

int vp(Int n, const Int& p) {
  int c = 0;
  n = abs(n);
  while (n % p == 0) {
    n /= p;
    ++c;
  }
  return c;
}

// Minimal transfer-legal size across oriented e: keeps only primes whose
// valuation exceeds the source label and shifts them by the label difference.
ExtNat canonical_step(const GbsGraph& h, int e, const ExtNat& n) {
  return phi(h.ktrg(e), h.ksrc(e), n);
}

// Size N·|k_trg| / (N ∧ k_src); always divisible by k_trg, so offset 1 of the
// new orbit stays outside the glued coset whenever |k_trg| >= 2.
ExtNat full_step(const GbsGraph& h, int e, const ExtNat& n) {
  return mul(div_gcd(n, h.ksrc(e)), h.ktrg(e));
}

ExtNat size_at(const Preaction& p, const Point& x, int type) {
  auto m = p.member_of_type(x, type);
  if (!m) throw DomainError("merge: internal: point has no member of the needed type");
  return p.orbits()[m->orbit].size;
}

// Whether some prime valuation strictly drops from a to b.
bool val_decreased(const ExtNat& a, const ExtNat& b) {
  if (!a.finite() || !b.finite()) return false;
  for (const auto& [p, e] : factorize(a.v)) {
    Int pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (b.v % pe != 0) return true;
  }
  return false;
}

// Subgraph of h with all vertices and only the flagged (positive) edges.
GbsGraph subgraph(const GbsGraph& h, const std::vector<bool>& keep) {
  GbsGraph out;
  for (int v = 0; v < h.g.nv; ++v) out.add_vertex(h.vname[v]);
  for (int e = 0; e < h.g.ne(); e += 2)
    if (keep[e])
      out.add_edge(h.ename[e / 2], h.g.esrc[e], h.g.etrg[e], h.ksrc(e),
                   h.ktrg(e));
  return out;
}

// Oriented path from v to w inside the kept part of the spanning tree.
std::vector<int> kept_tree_path(const GbsGraph& h, const SpanningTree& t,
                                const std::vector<bool>& keep, int v, int w) {
  std::vector<int> par(h.g.nv, -1);
  std::vector<bool> vis(h.g.nv, false);
  std::vector<int> bfs{v};
  vis[v] = true;
  for (size_t i = 0; i < bfs.size(); ++i) {
    for (int e = 0; e < h.g.ne(); ++e) {
      if (!t.contains(e) || !keep[positive(h, e)] || h.g.esrc[e] != bfs[i])
        continue;
      int u = h.g.etrg[e];
      if (vis[u]) continue;
      vis[u] = true;
      par[u] = e;
      bfs.push_back(u);
    }
  }
  if (!vis[w]) throw DomainError("merge: internal: kept tree is disconnected");
  std::vector<int> path;
  for (int u = w; u != v; u = h.g.esrc[par[u]]) path.push_back(par[u]);
  std::reverse(path.begin(), path.end());
  return path;
}

struct Ctx {
  const GbsGraph& h;
  const SpanningTree& t;
  std::vector<Preaction>& ps;
  bool trace;
  int depth = 0;
};

void trace_line(const Ctx& c, const std::string& s) {
  if (c.trace)
    std::cerr << "TRACE merge depth=" << c.depth << " " << s << "\n";
}

GroupWord liaison(Ctx& c, std::vector<Point> xs, std::vector<Point> ys,
                  std::vector<bool> keep, int e0);

// ---- valuation sweeps shared by the loop base case and cases 2.A.a/2.A.b.α

ExtNat sim_forward(const GbsGraph& h, int e, const std::vector<int>& path,
                   const ExtNat& n0) {
  ExtNat n = canonical_step(h, e, n0);
  for (auto it = path.rbegin(); it != path.rend(); ++it)
    n = canonical_step(h, h.g.ebar[*it], n);
  return n;
}

ExtNat sim_backward(const GbsGraph& h, int e, const std::vector<int>& path,
                    const ExtNat& n0) {
  ExtNat n = n0;
  for (int f : path) n = canonical_step(h, f, n);
  return canonical_step(h, h.g.ebar[e], n);
}

// Number of lockstep iterations of `step` before no component's valuation
// vector strictly decreases anymore.
int lockstep_count(std::vector<ExtNat> szs,
                   const std::function<ExtNat(const ExtNat&)>& step) {
  for (int j = 0;; ++j) {
    if (j > 512)
      throw DomainError("merge: internal: valuation sweep does not stabilize");
    bool dec = false;
    std::vector<ExtNat> nxt;
    nxt.reserve(szs.size());
    for (const ExtNat& s : szs) {
      nxt.push_back(step(s));
      if (val_decreased(s, nxt.back())) dec = true;
    }
    if (!dec) return j;
    szs = std::move(nxt);
  }
}

// Forward pass: cross e with the canonical size, then define the chain of
// vertex stabilizers back along the tree path with canonical sizes.
Point forward_pass(Ctx& c, int i, int e, const std::vector<int>& path,
                   const Point& start) {
  Preaction& p = c.ps[i];
  const GbsGraph& h = c.h;
  ExtNat n = size_at(p, start, h.g.esrc[e]);
  int o = construction_Aprime(p, e, start, canonical_step(h, e, n));
  Point cur{o, 0};
  ExtNat m = p.orbits()[o].size;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    int f = h.g.ebar[*it];
    m = canonical_step(h, f, m);
    construction_Bprime(p, f, cur, m);
  }
  return cur;
}

// Middle step: one full-size crossing of e, the b-shift at trg(e), and the
// imposed backward crossing with the pre-crossing size.
Point middle_pass(Ctx& c, int i, int e, const Point& start) {
  Preaction& p = c.ps[i];
  const GbsGraph& h = c.h;
  ExtNat n = size_at(p, start, h.g.esrc[e]);
  int o1 = construction_Aprime(p, e, start, full_step(h, e, n));
  Point pb{o1, 1};
  int o2 = construction_Aprime(p, h.g.ebar[e], pb, n);
  return {o2, 0};
}

// Backward pass: chain along the path, then cross bar(e) canonically.
Point backward_pass(Ctx& c, int i, int e, const std::vector<int>& path,
                    const Point& start) {
  Preaction& p = c.ps[i];
  const GbsGraph& h = c.h;
  Point cur = start;
  ExtNat n = size_at(p, cur, h.g.esrc[e]);
  for (int f : path) {
    n = canonical_step(h, f, n);
    construction_Bprime(p, f, cur, n);
  }
  int o =
      construction_Aprime(p, h.g.ebar[e], cur, canonical_step(h, h.g.ebar[e], n));
  return {o, 0};
}

struct SweepResult {
  std::vector<Point> cur;
  GroupWord w;
};

// Full sweep (forward passes, middle, backward passes) for one side.
SweepResult run_sweeps(Ctx& c, int e, const std::vector<int>& path,
                       std::vector<Point> cur) {
  const GbsGraph& h = c.h;
  GroupWord w;
  std::vector<ExtNat> szs;
  for (size_t i = 0; i < cur.size(); ++i)
    szs.push_back(size_at(c.ps[i], cur[i], h.g.esrc[e]));
  int jf = lockstep_count(
      szs, [&](const ExtNat& n) { return sim_forward(h, e, path, n); });
  for (int j = 0; j < jf; ++j) {
    for (size_t i = 0; i < cur.size(); ++i)
      cur[i] = forward_pass(c, i, e, path, cur[i]);
    w.push_back(Letter::egen(e));
  }
  for (size_t i = 0; i < cur.size(); ++i) {
    szs[i] = size_at(c.ps[i], cur[i], h.g.esrc[e]);
    cur[i] = middle_pass(c, i, e, cur[i]);
  }
  w.push_back(Letter::egen(e));
  w.push_back(Letter::vpow(h.g.etrg[e], 1));
  w.push_back(Letter::egen(h.g.ebar[e]));
  int jb = lockstep_count(
      szs, [&](const ExtNat& n) { return sim_backward(h, e, path, n); });
  for (int j = 0; j < jb; ++j) {
    for (size_t i = 0; i < cur.size(); ++i)
      cur[i] = backward_pass(c, i, e, path, cur[i]);
    w.push_back(Letter::egen(h.g.ebar[e]));
  }
  std::ostringstream os;
  os << "sweep e=" << e << " forward=" << jf << " backward=" << jb;
  trace_line(c, os.str());
  return {std::move(cur), std::move(w)};
}

// ---- base cases ------------------------------------------------------------

GroupWord base_loop(Ctx& c, const std::vector<Point>& xs,
                    const std::vector<Point>& ys, int e) {
  const GbsGraph& h = c.h;
  int v = h.g.esrc[e];
  Int m = h.ksrc(e), n = h.ktrg(e);
  trace_line(c, "case=base-loop e=" + std::to_string(e));
  if (abs(m) < 2 || abs(n) < 2)
    throw DomainError("merge: internal: unit-label loop reached the base case");
  std::vector<ExtNat> n0x, n0y;
  for (size_t i = 0; i < xs.size(); ++i) {
    n0x.push_back(size_at(c.ps[i], xs[i], v));
    n0y.push_back(size_at(c.ps[i], ys[i], v));
  }
  SweepResult rx = run_sweeps(c, e, {}, xs);
  SweepResult ry = run_sweeps(c, e, {}, ys);
  for (size_t i = 0; i < xs.size(); ++i) {
    ExtNat px = size_at(c.ps[i], rx.cur[i], v);
    ExtNat py = size_at(c.ps[i], ry.cur[i], v);
    if (px != phenotype_bs(m, n, n0x[i]) || py != phenotype_bs(m, n, n0y[i]) ||
        px != py)
      throw DomainError("merge: internal: loop sweep missed the phenotype");
  }
  int eb = h.g.ebar[e];
  for (size_t i = 0; i < xs.size(); ++i) {
    Preaction& p = c.ps[i];
    ExtNat pv = size_at(p, rx.cur[i], v);
    int o = construction_Aprime(p, eb, rx.cur[i], full_step(h, eb, pv));
    Point xb{o, 1};
    construction_A(p, eb, ry.cur[i], xb);
  }
  GroupWord mid = rx.w;
  mid.push_back(Letter::egen(eb));
  mid.push_back(Letter::vpow(v, 1));
  mid.push_back(Letter::egen(e));
  return concat(mid, inverse(ry.w, h));
}

GroupWord base_segment(Ctx& c, const std::vector<Point>& xs,
                       const std::vector<Point>& ys, int e0,
                       const GbsGraph& sg) {
  const GbsGraph& h = c.h;
  int s = h.g.esrc[e0], tv = h.g.etrg[e0];
  int eb = h.g.ebar[e0];
  Int k = h.ksrc(e0), l = h.ktrg(e0);
  trace_line(c, "case=base-segment e=" + std::to_string(e0));
  if (abs(k) < 2 || abs(l) < 2)
    throw DomainError("merge: internal: non-reduced segment in the base case");
  for (size_t i = 0; i < xs.size(); ++i) {
    Preaction& p = c.ps[i];
    ExtNat nx = size_at(p, xs[i], s);
    ExtNat ny = size_at(p, ys[i], s);
    construction_Bprime(p, e0, xs[i], full_step(h, e0, nx));
    construction_Bprime(p, e0, ys[i], full_step(h, e0, ny));
    Point xb = *p.apply(xs[i], Letter::vpow(tv, 1));
    Point yb = *p.apply(ys[i], Letter::vpow(tv, 1));
    construction_Bprime(p, eb, xb, full_step(h, eb, size_at(p, xb, tv)));
    construction_Bprime(p, eb, yb, full_step(h, eb, size_at(p, yb, tv)));
    Point xba = *p.apply(xb, Letter::vpow(s, 1));
    Point yba = *p.apply(yb, Letter::vpow(s, 1));
    ExtNat pv = phenotype(sg, s, nx);
    if (phenotype(sg, s, ny) != pv)
      throw DomainError("merge: internal: segment phenotype mismatch");
    ExtNat tgt = mul(div_gcd(pv, k), l);
    construction_Bprime(p, e0, xba, tgt);
    Point xbab = *p.apply(xba, Letter::vpow(tv, 1));
    construction_B(p, e0, yba, xbab);
  }
  return GroupWord{Letter::vpow(tv, 1), Letter::vpow(s, 1), Letter::vpow(tv, 1),
                   Letter::vpow(s, -1), Letter::vpow(tv, -1)};
}

// ---- case 1: the kept graph is a tree --------------------------------------

GroupWord case_tree(Ctx& c, const std::vector<Point>& xs,
                    const std::vector<Point>& ys, std::vector<bool> keep,
                    int e0) {
  const GbsGraph& h = c.h;
  int t0 = h.g.etrg[e0];
  trace_line(c, "case=tree e=" + std::to_string(e0));
  // Leaf to strip; never trg(e0), so the walk below ends on a fresh chain
  // orbit whose b-shift stays outside every glued coset.
  std::vector<int> deg(h.g.nv, 0);
  for (int e = 0; e < h.g.ne(); e += 2)
    if (keep[e]) {
      deg[h.g.esrc[e]]++;
      deg[h.g.etrg[e]]++;
    }
  int fv = -1;
  for (int v = 0; v < h.g.nv; ++v)
    if (deg[v] == 1 && v != t0) {
      fv = v;
      break;
    }
  if (fv < 0) throw DomainError("merge: internal: no strippable leaf");
  std::vector<int> path = kept_tree_path(h, c.t, keep, t0, fv);
  int last = path.back();
  int eback = h.g.ebar[last];
  int gv = h.g.esrc[last];

  size_t sigma = xs.size();
  std::vector<Point> xa(sigma), ya(sigma), w1(sigma), w2(sigma);
  for (size_t i = 0; i < sigma; ++i) {
    Preaction& p = c.ps[i];
    auto walk = [&](Point z, Point& out) {
      construction_Bprime(p, e0, z,
                          full_step(h, e0, size_at(p, z, h.g.esrc[e0])));
      Point zp = *p.apply(z, Letter::vpow(t0, 1));
      ExtNat n = size_at(p, zp, t0);
      for (int f : path) {
        n = full_step(h, f, n);
        construction_Bprime(p, f, zp, n);
      }
      out = *p.apply(zp, Letter::vpow(fv, 1));
      return n;
    };
    ExtNat nx = walk(xs[i], xa[i]);
    ExtNat ny = walk(ys[i], ya[i]);
    w1[i] = {p.add_orbit(gv, full_step(h, eback, nx)), 0};
    w2[i] = {p.add_orbit(gv, full_step(h, eback, ny)), 0};
  }
  std::vector<bool> keep2 = keep;
  keep2[positive(h, last)] = false;
  int e02 = -1;
  for (int f = 0; f < h.g.ne(); ++f)
    if (keep2[positive(h, f)] && h.g.esrc[f] == gv) {
      e02 = f;
      break;
    }
  if (e02 < 0) throw DomainError("merge: internal: stripped vertex isolated");
  ++c.depth;
  GroupWord inner = liaison(c, w1, w2, keep2, e02);
  --c.depth;
  for (size_t i = 0; i < sigma; ++i) {
    construction_B(c.ps[i], eback, xa[i], w1[i]);
    construction_B(c.ps[i], eback, ya[i], w2[i]);
  }
  GroupWord out{Letter::vpow(t0, 1), Letter::vpow(fv, 1)};
  out = concat(out, inner);
  out.push_back(Letter::vpow(fv, -1));
  out.push_back(Letter::vpow(t0, -1));
  return out;
}

// ---- case 2: kept graph with a cycle ---------------------------------------

void trace_thresholds(Ctx& c, int e, const std::vector<int>& path) {
  if (!c.trace) return;
  const GbsGraph& h = c.h;
  Int n = h.ksrc(e), m = h.ktrg(e);
  std::vector<Int> ks, ls;
  for (int f : path) {
    ks.push_back(h.ksrc(f));
    ls.push_back(h.ktrg(f));
  }
  std::vector<Int> prs = prime_union(primes_of(n), primes_of(m));
  for (int f : path)
    prs = prime_union(prs,
                      prime_union(primes_of(h.ksrc(f)), primes_of(h.ktrg(f))));
  int r = static_cast<int>(path.size());
  for (const Int& p : prs) {
    int np = vp(n, p), mp = vp(m, p);
    int cthr = np;
    for (int kk = 1; kk <= r; ++kk) {
      int s = np - mp + vp(ls[kk - 1], p);
      for (int j = kk + 1; j <= r; ++j) s += vp(ls[j - 1], p) - vp(ks[j - 1], p);
      cthr = std::max(cthr, s);
    }
    int sall = mp;
    for (int j = 1; j <= r; ++j) sall += vp(ks[j - 1], p) - vp(ls[j - 1], p);
    int cbar = sall;
    for (int jj = 0; jj <= r - 1; ++jj) {
      int s = vp(ks[jj], p);
      for (int mm = 1; mm <= jj; ++mm)
        s += vp(ks[mm - 1], p) - vp(ls[mm - 1], p);
      cbar = std::max(cbar, s);
    }
    std::ostringstream os;
    os << "threshold p=" << p << " C=" << cthr << " Cbar=" << cbar;
    trace_line(c, os.str());
  }
}

// Shared epilogue of 2.A.a and 2.A.b.α: sweeps around the running edge, a
// fresh pair of orbits at src(e), recursion without e, and the final gluing.
GroupWord devissage(Ctx& c, const std::vector<Point>& xs,
                    const std::vector<Point>& ys, std::vector<bool> keep,
                    int e) {
  const GbsGraph& h = c.h;
  int sa = h.g.esrc[e], sb = h.g.etrg[e];
  bool loop = sa == sb;
  std::vector<int> path;
  if (!loop) {
    path = kept_tree_path(h, c.t, keep, sa, sb);
    trace_line(c, "case=2Aa e=" + std::to_string(e));
    trace_thresholds(c, e, path);
  } else {
    trace_line(c, "case=2Ab-alpha e=" + std::to_string(e));
  }
  std::vector<ExtNat> n0x, n0y;
  for (size_t i = 0; i < xs.size(); ++i) {
    n0x.push_back(size_at(c.ps[i], xs[i], sa));
    n0y.push_back(size_at(c.ps[i], ys[i], sa));
  }
  SweepResult rx = run_sweeps(c, e, path, xs);
  SweepResult ry = run_sweeps(c, e, path, ys);
  size_t sigma = xs.size();
  std::vector<Point> w1(sigma), w2(sigma);
  for (size_t i = 0; i < sigma; ++i) {
    Preaction& p = c.ps[i];
    ExtNat kx = size_at(p, rx.cur[i], sa);
    ExtNat ky = size_at(p, ry.cur[i], sa);
    if (loop &&
        (kx != phenotype_bs(h.ksrc(e), h.ktrg(e), n0x[i]) ||
         ky != phenotype_bs(h.ksrc(e), h.ktrg(e), n0y[i])))
      throw DomainError("merge: internal: loop sweep missed the phenotype");
    // Settle the chains to trg(e) so the final gluing has both endpoints.
    ExtNat n = kx;
    for (int f : path) {
      n = canonical_step(h, f, n);
      construction_Bprime(p, f, rx.cur[i], n);
    }
    n = ky;
    for (int f : path) {
      n = canonical_step(h, f, n);
      construction_Bprime(p, f, ry.cur[i], n);
    }
    w1[i] = {p.add_orbit(sa, kx), 0};
    w2[i] = {p.add_orbit(sa, ky), 0};
  }
  std::vector<bool> keep2 = keep;
  keep2[positive(h, e)] = false;
  int e02 = -1;
  for (int f = 0; f < h.g.ne(); ++f)
    if (keep2[positive(h, f)] && h.g.esrc[f] == sa) {
      e02 = f;
      break;
    }
  if (e02 < 0) throw DomainError("merge: internal: running vertex isolated");
  ++c.depth;
  GroupWord inner = liaison(c, w1, w2, keep2, e02);
  --c.depth;
  int eb = h.g.ebar[e];
  for (size_t i = 0; i < sigma; ++i) {
    construction_A(c.ps[i], eb, rx.cur[i], w1[i]);
    construction_A(c.ps[i], eb, ry.cur[i], w2[i]);
  }
  GroupWord out = rx.w;
  out.push_back(Letter::egen(eb));
  out = concat(out, inner);
  out.push_back(Letter::egen(e));
  return concat(out, inverse(ry.w, h));
}

// Case 2.A.b.β: loop with a ±1 label; drain with t_e powers until the orbit
// size is coprime to the non-unit label, then recurse beside the loop.
GroupWord case_unit_loop(Ctx& c, std::vector<Point> xs, std::vector<Point> ys,
                         std::vector<bool> keep, int e) {
  const GbsGraph& h = c.h;
  int eo = abs(h.ktrg(e)) == 1 ? e : h.g.ebar[e];
  int s = h.g.esrc[e];
  Int n = h.ksrc(eo);
  trace_line(c, "case=2Ab-beta e=" + std::to_string(e));
  auto drain_side = [&](std::vector<Point>& cur) {
    std::vector<ExtNat> szs;
    for (size_t i = 0; i < cur.size(); ++i)
      szs.push_back(size_at(c.ps[i], cur[i], s));
    int j = lockstep_count(szs,
                           [&](const ExtNat& z) { return div_gcd(z, n); });
    for (int jj = 0; jj < j; ++jj)
      for (size_t i = 0; i < cur.size(); ++i) {
        ExtNat z = size_at(c.ps[i], cur[i], s);
        cur[i] = {construction_Aprime(c.ps[i], eo, cur[i], div_gcd(z, n)), 0};
      }
    return j;
  };
  int lx = drain_side(xs);
  int ly = drain_side(ys);
  std::ostringstream os;
  os << "unit-loop drains x=" << lx << " y=" << ly;
  trace_line(c, os.str());
  size_t sigma = xs.size();
  std::vector<Point> w1(sigma), w2(sigma);
  for (size_t i = 0; i < sigma; ++i) {
    w1[i] = {c.ps[i].add_orbit(s, size_at(c.ps[i], xs[i], s)), 0};
    w2[i] = {c.ps[i].add_orbit(s, size_at(c.ps[i], ys[i], s)), 0};
  }
  std::vector<bool> keep2 = keep;
  keep2[positive(h, e)] = false;
  int e02 = -1;
  for (int f = 0; f < h.g.ne(); ++f)
    if (keep2[positive(h, f)] && h.g.esrc[f] == s) {
      e02 = f;
      break;
    }
  if (e02 < 0) throw DomainError("merge: internal: loop vertex isolated");
  ++c.depth;
  GroupWord inner = liaison(c, w1, w2, keep2, e02);
  --c.depth;
  for (size_t i = 0; i < sigma; ++i) {
    construction_A(c.ps[i], eo, xs[i], w1[i]);
    construction_A(c.ps[i], eo, ys[i], w2[i]);
  }
  GroupWord out;
  for (int j = 0; j < lx + 1; ++j) out.push_back(Letter::egen(eo));
  out = concat(out, inner);
  for (int j = 0; j < ly + 1; ++j) out.push_back(Letter::egen(h.g.ebar[eo]));
  return out;
}

// Case 2.B: exactly two ±1-labeled loops at one vertex. Drain along e0's
// loop, clean up with the other loop, and bridge through the other loop.
GroupWord case_two_unit_loops(Ctx& c, std::vector<Point> xs,
                              std::vector<Point> ys,
                              const std::vector<bool>& keep, int e0) {
  const GbsGraph& h = c.h;
  std::vector<int> pos;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (keep[e]) pos.push_back(e);
  if (pos.size() != 2 || h.g.esrc[pos[0]] != h.g.etrg[pos[0]] ||
      h.g.esrc[pos[1]] != h.g.etrg[pos[1]] ||
      h.g.esrc[pos[0]] != h.g.esrc[pos[1]])
    throw DomainError("merge: internal: unexpected shape in the 2-loop case");
  int ep = positive(h, e0);
  int fp = pos[0] == ep ? pos[1] : pos[0];
  auto unit_trg = [&](int e) {
    if (abs(h.ktrg(e)) == 1) return e;
    if (abs(h.ksrc(e)) == 1) return h.g.ebar[e];
    throw DomainError("merge: internal: 2-loop case without unit labels");
  };
  int eo = unit_trg(ep);
  int fo = unit_trg(fp);
  int s = h.g.esrc[ep];
  trace_line(c, "case=2B e=" + std::to_string(e0));

  auto drain_side = [&](std::vector<Point>& cur) {
    GroupWord w;
    auto passes = [&](int g, bool force_first) {
      Int lab = h.ksrc(g);
      std::vector<ExtNat> szs;
      for (size_t i = 0; i < cur.size(); ++i)
        szs.push_back(size_at(c.ps[i], cur[i], s));
      int j = lockstep_count(
          szs, [&](const ExtNat& z) { return div_gcd(z, lab); });
      if (force_first && j == 0) j = 1;
      for (int jj = 0; jj < j; ++jj) {
        for (size_t i = 0; i < cur.size(); ++i) {
          ExtNat z = size_at(c.ps[i], cur[i], s);
          cur[i] = {construction_Aprime(c.ps[i], g, cur[i], div_gcd(z, lab)),
                    0};
        }
        w.push_back(Letter::egen(g));
      }
    };
    passes(eo, true);
    passes(fo, false);
    // Final pass along e0's loop so the endpoint is fresh for the bridge.
    for (size_t i = 0; i < cur.size(); ++i) {
      ExtNat z = size_at(c.ps[i], cur[i], s);
      cur[i] = {
          construction_Aprime(c.ps[i], eo, cur[i], div_gcd(z, h.ksrc(eo))), 0};
    }
    w.push_back(Letter::egen(eo));
    return w;
  };
  GroupWord wx = drain_side(xs);
  GroupWord wy = drain_side(ys);
  for (size_t i = 0; i < xs.size(); ++i) {
    if (size_at(c.ps[i], xs[i], s) != size_at(c.ps[i], ys[i], s))
      throw DomainError("merge: internal: 2-loop drain sizes differ");
    construction_A(c.ps[i], fo, xs[i], ys[i]);
  }
  GroupWord out = wx;
  out.push_back(Letter::egen(fo));
  return concat(out, inverse(wy, h));
}

GroupWord case_cycle(Ctx& c, std::vector<Point> xs, std::vector<Point> ys,
                     std::vector<bool> keep, int e0) {
  const GbsGraph& h = c.h;
  // Removal candidates: non-tree edges whose removal does not leave a single
  // unit-labeled loop.
  auto valid_removal = [&](int pe) {
    int cnt = 0, only = -1;
    for (int f = 0; f < h.g.ne(); f += 2)
      if (keep[f] && f != pe) {
        ++cnt;
        only = f;
      }
    if (cnt != 1) return true;
    bool isloop = h.g.esrc[only] == h.g.etrg[only];
    return !(isloop && (abs(h.ksrc(only)) == 1 || abs(h.ktrg(only)) == 1));
  };
  int erun = -1;
  if (!c.t.contains(e0) && valid_removal(positive(h, e0))) {
    erun = e0;
  } else {
    for (int f = 0; f < h.g.ne(); f += 2)
      if (keep[f] && !c.t.contains(f) && valid_removal(f)) {
        erun = f;
        break;
      }
  }
  if (erun < 0) return case_two_unit_loops(c, xs, ys, keep, e0);

  GroupWord prologue;
  if (erun != e0) {
    int t0 = h.g.etrg[e0];
    std::vector<int> path0 = kept_tree_path(h, c.t, keep, t0, h.g.esrc[erun]);
    for (size_t i = 0; i < xs.size(); ++i) {
      Preaction& p = c.ps[i];
      auto walk = [&](Point z) {
        if (c.t.contains(e0)) {
          construction_Bprime(p, e0, z,
                              full_step(h, e0, size_at(p, z, h.g.esrc[e0])));
          z = *p.apply(z, Letter::vpow(t0, 1));
        } else {
          z = {construction_Aprime(
                   p, e0, z, full_step(h, e0, size_at(p, z, h.g.esrc[e0]))),
               0};
        }
        ExtNat n = size_at(p, z, t0);
        for (int f : path0) {
          n = full_step(h, f, n);
          construction_Bprime(p, f, z, n);
        }
        return z;
      };
      xs[i] = walk(xs[i]);
      ys[i] = walk(ys[i]);
    }
    prologue.push_back(c.t.contains(e0) ? Letter::vpow(t0, 1)
                                        : Letter::egen(e0));
    trace_line(c, "prologue walk to e=" + std::to_string(erun));
  }
  GroupWord mid;
  bool isloop = h.g.esrc[erun] == h.g.etrg[erun];
  if (!isloop || (abs(h.ksrc(erun)) >= 2 && abs(h.ktrg(erun)) >= 2))
    mid = devissage(c, xs, ys, keep, erun);
  else
    mid = case_unit_loop(c, xs, ys, keep, erun);
  if (prologue.empty()) return mid;
  return concat(prologue, concat(mid, inverse(prologue, h)));
}

// ---- dispatch ---------------------------------------------------------------

GroupWord liaison(Ctx& c, std::vector<Point> xs, std::vector<Point> ys,
                  std::vector<bool> keep, int e0) {
  const GbsGraph& h = c.h;
  if (xs.size() != ys.size() || xs.empty())
    throw DomainError("merge: internal: mismatched point lists");
  GbsGraph sg = subgraph(h, keep);
  int sv = h.g.esrc[e0];
  for (size_t i = 0; i < xs.size(); ++i) {
    const Preaction& p = c.ps[i];
    for (const Point* z : {&xs[i], &ys[i]}) {
      if (!p.in_alpha_dom(*z, sv))
        throw DomainError("merge: a_src(e0) undefined on a working point");
      if (c.t.contains(e0)) {
        if (p.in_alpha_dom(*z, h.g.etrg[e0]))
          throw DomainError("merge: a_trg(e0) already defined on a working point");
      } else if (p.in_tau_dom(*z, e0) || p.in_tau_dom(*z, h.g.ebar[e0])) {
        throw DomainError("merge: tau_e0 already defined on a working point");
      }
    }
    if (phenotype(sg, sv, size_at(p, xs[i], sv)) !=
        phenotype(sg, sv, size_at(p, ys[i], sv)))
      throw DomainError("merge: phenotype mismatch at src(e0)");
  }
  int r = 0;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (keep[e]) ++r;
  if (r == 0) throw DomainError("merge: internal: empty kept graph");
  if (r == 1) {
    if (h.g.esrc[e0] == h.g.etrg[e0]) return base_loop(c, xs, ys, e0);
    return base_segment(c, xs, ys, e0, sg);
  }
  bool all_tree = true;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (keep[e] && !c.t.contains(e)) all_tree = false;
  if (all_tree) return case_tree(c, xs, ys, std::move(keep), e0);
  return case_cycle(c, std::move(xs), std::move(ys), std::move(keep), e0);
}

bool same_gluing(const Gluing& a, const Gluing& b, int shift) {
  return a.kind == b.kind && a.e == b.e && a.oa == b.oa + shift &&
         a.ob == b.ob + shift && a.ua == b.ua && a.ub == b.ub;
}

}  // namespace

MergeResult merge(const MergeRequest& req) {
  if (!req.h) throw DomainError("merge: no ambient graph");
  const GbsGraph& h = *req.h;
  if (req.pairs.empty()) throw DomainError("merge: no preaction pairs");
  if (req.e0 < 0 || req.e0 >= h.g.ne())
    throw DomainError("merge: edge out of range");
  if (!is_reduced(h)) throw DomainError("merge: ambient graph not reduced");
  if (classify(h).kind == GroupClass::AmenableBS1n)
    throw DomainError("merge: ambient group is amenable");

  MergeResult res;
  std::vector<Point> xs, ys;
  std::vector<size_t> glu0;
  for (const MergePair& pr : req.pairs) {
    if (!pr.alpha || !pr.beta)
      throw DomainError("merge: missing preaction");
    if (&pr.alpha->graph() != req.h || &pr.beta->graph() != req.h)
      throw DomainError("merge: preaction lives on a different graph");
    if (pr.alpha->tree().in_tree != req.t.in_tree ||
        pr.beta->tree().in_tree != req.t.in_tree)
      throw DomainError("merge: spanning tree mismatch");
    res.beta_base.push_back(static_cast<int>(pr.alpha->orbits().size()));
    res.gammas.push_back(disjoint_union(*pr.alpha, *pr.beta));
    Preaction& g = res.gammas.back();
    glu0.push_back(g.gluings().size());
    auto xv = g.evaluate(pr.x0, req.m);
    Point y0s{pr.y0.orbit + res.beta_base.back(), pr.y0.off};
    auto yv = g.evaluate(y0s, req.mprime);
    if (!xv || !yv)
      throw DomainError("merge: m or m' undefined at a base point");
    xs.push_back(*xv);
    ys.push_back(*yv);
  }

  Ctx c{h, req.t, res.gammas, trace_on()};
  GroupWord mid =
      liaison(c, xs, ys, std::vector<bool>(h.g.ne(), true), req.e0);
  res.word = concat(to_group_word(req.m, h, req.t),
                    concat(mid, inverse(to_group_word(req.mprime, h, req.t), h)));
  if (c.trace)
    std::cerr << "TRACE merge word " << word_str(res.word, h) << "\n";

  // Postconditions, re-checked on every run.
  for (size_t i = 0; i < res.gammas.size(); ++i) {
    const Preaction& g = res.gammas[i];
    auto rep = validate(g);
    if (!rep.ok)
      throw DomainError("merge: postcondition failed: invalid result: " +
                        rep.what);
    const Preaction& a = *req.pairs[i].alpha;
    const Preaction& b = *req.pairs[i].beta;
    int na = res.beta_base[i];
    int nb = static_cast<int>(b.orbits().size());
    for (int j = 0; j < na; ++j)
      if (g.orbits()[j].type != a.orbits()[j].type ||
          g.orbits()[j].size != a.orbits()[j].size)
        throw DomainError("merge: postcondition failed: alpha not extended");
    for (int j = 0; j < nb; ++j)
      if (g.orbits()[na + j].type != b.orbits()[j].type ||
          g.orbits()[na + j].size != b.orbits()[j].size)
        throw DomainError("merge: postcondition failed: beta not extended");
    size_t ga = a.gluings().size();
    for (size_t j = 0; j < ga; ++j)
      if (!same_gluing(g.gluings()[j], a.gluings()[j], 0))
        throw DomainError("merge: postcondition failed: alpha gluings changed");
    for (size_t j = 0; j < b.gluings().size(); ++j)
      if (!same_gluing(g.gluings()[ga + j], b.gluings()[j], na))
        throw DomainError("merge: postcondition failed: beta gluings changed");

    Point y0s{req.pairs[i].y0.orbit + na, req.pairs[i].y0.off};
    auto ev = g.evaluate(req.pairs[i].x0, res.word);
    if (!ev || g.canonical(*ev) != g.canonical(y0s))
      throw DomainError("merge: postcondition failed: word evaluation");

    // The added part must glue the two copies into a tree-like quotient:
    // contract alpha to one block, beta to another, each new orbit is its own
    // node, and the new gluings must form a tree on these nodes.
    int nodes = 2 + static_cast<int>(g.orbits().size()) - na - nb;
    auto block = [&](int o) {
      return o < na ? 0 : (o < na + nb ? 1 : 2 + (o - na - nb));
    };
    std::vector<int> uf(nodes);
    for (int j = 0; j < nodes; ++j) uf[j] = j;
    std::function<int(int)> find = [&](int v) {
      return uf[v] == v ? v : uf[v] = find(uf[v]);
    };
    int comps = nodes;
    for (size_t j = glu0[i]; j < g.gluings().size(); ++j) {
      int u = find(block(g.gluings()[j].oa));
      int v = find(block(g.gluings()[j].ob));
      if (u == v)
        throw DomainError("merge: postcondition failed: quotient has a cycle");
      uf[u] = v;
      --comps;
    }
    if (comps != 1)
      throw DomainError("merge: postcondition failed: quotient disconnected");
  }
  return res;
}

std::vector<ExtNat> drain(const Int& m, const Int& n, const ExtNat& start,
                          const std::function<bool(const ExtNat&)>& stop) {
  if (m == 0 || n == 0) throw DomainError("drain: zero label");
  std::vector<ExtNat> out{start};
  if (!start.finite()) return out;  // the trajectory is constant
  while (!stop(out.back())) {
    const ExtNat& cur = out.back();
    Int next = 1;
    for (const auto& [p, e] : factorize(cur.v)) {
      int mp = vp(m, p), np = vp(n, p);
      if (e <= std::max(mp, np)) continue;
      int e2 = e + np - mp;
      for (int i = 0; i < e2; ++i) next *= p;
    }
    if (ExtNat(next) == cur) throw DomainError("drain: no progress");
    out.push_back(ExtNat(next));
  }
  return out;
}

// ---- escape words -----------------------------------------------------------

namespace {

bool in_coset(const Int& off, const Int& u, const Int& step, const ExtNat& n) {
  if (n.finite()) {
    Int d = gcd(abs(step), n.v);
    return emod(off - u, d) == 0;
  }
  return (off - u) % step == 0;
}

// Gluing carrying an e-edge at z, or -1.
int gluing_at(const Preaction& p, const Point& z, int e) {
  const GbsGraph& h = p.graph();
  int ep = positive(h, e);
  for (const Point& q : p.closure(z)) {
    const ExtNat& n = p.orbits()[q.orbit].size;
    for (size_t gi = 0; gi < p.gluings().size(); ++gi) {
      const Gluing& g = p.gluings()[gi];
      if (g.kind == Gluing::PointPair || g.e != ep) continue;
      if (h.g.epos[e] && q.orbit == g.oa &&
          in_coset(q.off, g.ua, h.ksrc(ep), n))
        return static_cast<int>(gi);
      if (!h.g.epos[e] && q.orbit == g.ob &&
          in_coset(q.off, g.ub, h.ktrg(ep), n))
        return static_cast<int>(gi);
    }
  }
  return -1;
}

// Incremental translation of H-graph edge paths (edges of extract(p), i.e.
// gluings with a direction) into a reduced typed word read from a point.
struct WordBuilder {
  const Preaction& p;
  const Extraction& ex;
  const GbsGraph& h;
  Point cur;
  TypedWord w;

  WordBuilder(const Preaction& pp, const Extraction& e0, const Point& x)
      : p(pp), ex(e0), h(pp.graph()), cur(pp.canonical(x)) {}

  // Crosses H-graph edge d after applying a vertex power. When `forced` is
  // non-null that exact power is used; otherwise the smallest power reaching
  // the gluing's coset (and respecting reducedness) is chosen.
  bool cross(int d, const Int* forced = nullptr) {
    const Gluing& g = p.gluings()[d / 2];
    bool aside = (d % 2) == 0;
    int he = ex.hg.etype[d];
    int svv = h.g.esrc[he];
    auto m = p.member_of_type(cur, svv);
    if (!m) return false;
    if (m->orbit != (aside ? g.oa : g.ob)) return false;
    Int u = aside ? g.ua : g.ub;
    Int step = aside ? h.ksrc(g.e) : h.ktrg(g.e);
    const ExtNat& n = p.orbits()[m->orbit].size;
    Int mod = n.finite() ? Int(gcd(abs(step), n.v)) : Int(abs(step));
    Int kpow;
    if (forced) {
      kpow = *forced;
      if (!in_coset(m->off + kpow, u, step, n)) return false;
    } else {
      kpow = emod(u - m->off, mod);
      if (!w.path.empty() && he == h.g.ebar[w.path.back()]) {
        Int kt = h.ktrg(w.path.back());
        int guard = 0;
        while (kpow % kt == 0) {
          kpow += mod;
          if (++guard > 64) return false;
        }
      }
    }
    if (w.path.empty()) w.base = svv;
    w.pw.push_back(kpow);
    w.path.push_back(he);
    Point at = p.norm({m->orbit, m->off + kpow});
    if (g.kind == Gluing::TreeEdge) {
      cur = p.canonical(at);
    } else {
      auto nx = p.apply(at, Letter::egen(he));
      if (!nx) return false;
      cur = *nx;
    }
    return true;
  }

  TypedWord finish() {
    TypedWord out = w;
    out.pw.push_back(0);
    return out;
  }
};

// BFS over (last H-graph edge) states forbidding immediate edge reversal;
// returns the edge sequence to a vertex outside K, or empty when none exists.
std::vector<int> bfs_escape(const OrientedGraph& hg,
                            const std::vector<bool>& inK,
                            const std::vector<int>& seeds) {
  std::vector<std::vector<int>> out(hg.nv);
  for (int d = 0; d < hg.ne(); ++d) out[hg.esrc[d]].push_back(d);
  std::vector<int> par(hg.ne(), -2);
  std::vector<int> order;
  int goal = -1;
  for (int d : seeds)
    if (par[d] == -2) {
      par[d] = -1;
      order.push_back(d);
      if (!inK[hg.etrg[d]]) {
        goal = d;
        break;
      }
    }
  for (size_t qi = 0; qi < order.size() && goal < 0; ++qi) {
    int d = order[qi];
    for (int d2 : out[hg.etrg[d]]) {
      if (d2 == (d ^ 1) || par[d2] != -2) continue;
      par[d2] = d;
      order.push_back(d2);
      if (!inK[hg.etrg[d2]]) {
        goal = d2;
        break;
      }
    }
  }
  std::vector<int> path;
  for (int d = goal; d != -1; d = par[d]) path.push_back(d);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TypedWord escape_word(const Preaction& p, const Point& x,
                      const std::vector<int>& K, int e, const Int& g) {
  const GbsGraph& h = p.graph();
  Extraction ex = extract(p);
  const OrientedGraph& hg = ex.hg.g;
  if (K.empty()) throw DomainError("escape_word: empty vertex set K");
  std::vector<bool> inK(hg.nv, false);
  for (int v : K) {
    if (v < 0 || v >= hg.nv)
      throw DomainError("escape_word: K vertex out of range");
    inK[v] = true;
  }
  bool outside = false;
  for (int v = 0; v < hg.nv; ++v)
    if (!inK[v]) outside = true;
  if (!outside) throw DomainError("escape_word: K covers the whole H-graph");
  {
    auto [q, vmap] = quotient_graph(hg, {K});
    (void)vmap;
    if (!graph_is_tree(q))
      throw DomainError("escape_word: quotient by K is not a tree");
  }
  auto z = p.apply(x, Letter::vpow(h.g.esrc[e], g));
  if (!z) throw DomainError("escape_word: x·a^g undefined");
  int first = gluing_at(p, *z, e);
  if (first < 0) throw DomainError("escape_word: no e-edge at x·a^g");
  int d0 = h.g.epos[e] ? 2 * first : 2 * first + 1;

  std::vector<int> ds = bfs_escape(hg, inK, {d0});
  std::vector<int> expected;
  WordBuilder wb(p, ex, x);
  if (!ds.empty()) {
    Int g0 = g;
    for (size_t j = 0; j < ds.size(); ++j) {
      if (!wb.cross(ds[j], j == 0 ? &g0 : nullptr))
        throw DomainError("escape_word: path not realizable as a typed word");
      expected.push_back(ds[j] / 2);
    }
  } else {
    // Everything reachable after (e, g) stays inside K: walk to a dead end,
    // double back (the leaf relation makes the turnaround a reduced step),
    // and escape from the class of x itself.
    std::vector<std::vector<int>> out(hg.nv);
    for (int d = 0; d < hg.ne(); ++d) out[hg.esrc[d]].push_back(d);
    std::vector<int> fwd{d0};
    while (true) {
      int d = fwd.back();
      int cont = -1;
      for (int d2 : out[hg.etrg[d]])
        if (d2 != (d ^ 1)) {
          cont = d2;
          break;
        }
      if (cont < 0) break;
      fwd.push_back(cont);
      if (static_cast<int>(fwd.size()) > hg.ne() + 1)
        throw DomainError("escape_word: internal: dead-end search cycles");
    }
    std::vector<int> seq = fwd;
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) seq.push_back(*it ^ 1);
    Int g0 = g;
    for (size_t j = 0; j < seq.size(); ++j) {
      if (!wb.cross(seq[j], j == 0 ? &g0 : nullptr))
        throw DomainError("escape_word: doubling not realizable");
      expected.push_back(seq[j] / 2);
    }
    std::vector<int> seeds;
    std::set<int> seen;
    for (const Point& q : p.closure(wb.cur))
      if (seen.insert(q.orbit).second)
        for (int d : out[q.orbit]) seeds.push_back(d);
    std::sort(seeds.begin(), seeds.end());
    std::vector<int> tail = bfs_escape(hg, inK, seeds);
    if (tail.empty())
      throw DomainError("escape_word: no escape path from the base class");
    for (int d : tail) {
      if (!wb.cross(d))
        throw DomainError("escape_word: tail not realizable as a typed word");
      expected.push_back(d / 2);
    }
  }
  TypedWord w = wb.finish();
  if (!is_reduced_typed(w, h))
    throw DomainError("escape_word: internal: produced word not reduced");
  std::vector<int> got;
  auto endp = p.evaluate(x, w, &got);
  if (!endp || got != expected)
    throw DomainError("escape_word: internal: edge path verification failed");
  auto fin = p.member_of_type(*endp, w.trg(h));
  if (!fin || inK[fin->orbit])
    throw DomainError("escape_word: internal: end point still in K");
  return w;
}

TypedWord common_escape_typed(const std::vector<const Preaction*>& ps,
                              const std::vector<Point>& xs,
                              const std::vector<std::vector<int>>& Ks) {
  if (ps.empty() || ps.size() != xs.size() || ps.size() != Ks.size())
    throw DomainError("common_escape: mismatched inputs");
  const GbsGraph& h = ps[0]->graph();
  for (const Preaction* p : ps)
    if (&p->graph() != &h)
      throw DomainError("common_escape: preactions on different graphs");
  // Divisibility hypothesis on the labels of edges leaving each K_i.
  for (size_t i = 0; i < ps.size(); ++i) {
    Extraction ex = extract(*ps[i]);
    std::vector<bool> inK(ex.hg.g.nv, false);
    for (int v : Ks[i]) {
      if (v < 0 || v >= ex.hg.g.nv)
        throw DomainError("common_escape: K vertex out of range");
      inK[v] = true;
    }
    for (int d = 0; d < ex.hg.g.ne(); ++d) {
      if (inK[ex.hg.g.etrg[d]]) continue;
      // The hypothesis constrains only edges whose half graph (the side of
      // the target, with the edge itself removed) stays outside K.
      std::vector<bool> vis(ex.hg.g.nv, false);
      std::vector<int> bfs{ex.hg.g.etrg[d]};
      vis[bfs[0]] = true;
      bool touches_k = false;
      for (size_t qi = 0; qi < bfs.size() && !touches_k; ++qi)
        for (int d2 = 0; d2 < ex.hg.g.ne(); ++d2) {
          if (d2 == d || d2 == (d ^ 1) || ex.hg.g.esrc[d2] != bfs[qi]) continue;
          int u = ex.hg.g.etrg[d2];
          if (vis[u]) continue;
          vis[u] = true;
          if (inK[u]) {
            touches_k = true;
            break;
          }
          bfs.push_back(u);
        }
      if (touches_k) continue;
      Int kt = h.ktrg(ex.hg.etype[d]);
      if (egcd(ex.hg.vsize[ex.hg.g.etrg[d]], kt) != ExtNat(abs(kt)))
        throw DomainError("common_escape: divisibility hypothesis fails");
    }
  }
  Point x0c = ps[0]->canonical(xs[0]);
  int ty = ps[0]->orbits()[x0c.orbit].type;
  int e = -1;
  for (int d = 0; d < h.g.ne(); ++d)
    if (h.g.esrc[d] == ty) {
      e = d;
      break;
    }
  if (e < 0) throw DomainError("common_escape: isolated base vertex");
  TypedWord gamma = escape_word(*ps[0], xs[0], Ks[0], e, 0);
  for (size_t i = 1; i < ps.size(); ++i) {
    int er = gamma.path.back();
    int e2;
    Int g2;
    if (h.g.esrc[er] == h.g.etrg[er]) {
      e2 = er;
      g2 = 0;
    } else {
      e2 = h.g.ebar[er];
      g2 = 1;
    }
    auto zi = ps[i]->evaluate(xs[i], gamma);
    if (!zi)
      throw DomainError("common_escape: word undefined in a later action");
    TypedWord d = escape_word(*ps[i], *zi, Ks[i], e2, g2);
    gamma = concat_typed(gamma, d, h);
  }
  if (!is_reduced_typed(gamma, h))
    throw DomainError("common_escape: internal: result not reduced");
  for (size_t i = 0; i < ps.size(); ++i) {
    auto endp = ps[i]->evaluate(xs[i], gamma);
    if (!endp) throw DomainError("common_escape: escape verification failed");
    auto fin = ps[i]->member_of_type(*endp, gamma.trg(h));
    if (!fin)
      throw DomainError("common_escape: escape verification failed");
    for (int v : Ks[i])
      if (fin->orbit == v)
        throw DomainError("common_escape: end point still in a K_i");
  }
  return gamma;
}

GroupWord common_escape(const std::vector<const Preaction*>& ps,
                        const std::vector<Point>& xs,
                        const std::vector<std::vector<int>>& Ks) {
  TypedWord w = common_escape_typed(ps, xs, Ks);
  return to_group_word(w, ps[0]->graph(), ps[0]->tree());
}

bool check_backtrack(const Preaction& p, const Point& x, const TypedWord& w,
                     int first_gluing) {
  std::vector<int> path;
  auto endp = p.evaluate(x, w, &path);
  if (!endp || path.empty()) return false;
  if (path[0] != first_gluing) return false;
  const GbsGraph& h = p.graph();
  for (size_t i = 0; i + 1 < w.path.size(); ++i)
    if (w.path[i + 1] == h.g.ebar[w.path[i]] && path[i + 1] == path[i])
      return false;
  return true;
}

}  // namespace gbs
