#include "gbs/preaction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gbs/errors.hpp"

namespace gbs {
namespace {

Int emod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Extended Euclid: returns g = gcd(a, b) and x with a·x ≡ g (mod b).
Int modinv(const Int& a, const Int& m) {
  Int old_r = emod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw DomainError("modinv: not invertible");
  return emod(old_s, m);
}

std::string point_str(const Point& x) {
  std::ostringstream os;
  os << "(" << x.orbit << "," << x.off << ")";
  return os.str();
}

}  // namespace

int Preaction::add_orbit(int type, const ExtNat& size) {
  if (type < 0 || type >= h_->g.nv) throw DomainError("add_orbit: bad vertex");
  if (size.finite() && size.v < 1) throw DomainError("add_orbit: bad size");
  orbits_.push_back({type, size});
  return static_cast<int>(orbits_.size()) - 1;
}

Point Preaction::norm(const Point& x) const {
  Point y = x;
  const ExtNat& n = orbits_[x.orbit].size;
  if (n.finite()) y.off = emod(y.off, n.v);
  return y;
}

namespace {

// Partner of offset `a` under one side of a gluing; nullopt when `a` is not
// in the coset. `ua/stepa` describe the side holding `a`, `ub/stepb` the
// other side; `na` is the size of the orbit holding `a`.
std::optional<Int> partner_off(const Int& a, const Int& ua, const Int& stepa,
                               const Int& ub, const Int& stepb,
                               const ExtNat& na) {
  if (stepa == 0) {  // single-point identification
    return a == ua ? std::optional<Int>(ub) : std::nullopt;
  }
  if (na.finite()) {
    Int d = gcd(abs(stepa), na.v);
    if (emod(a - ua, d) != 0) return std::nullopt;
    Int q = na.v / d;
    Int j = q == 1 ? Int(0)
                   : emod(((a - ua) / d) * modinv(stepa / d, q), q);
    return ub + stepb * j;
  }
  if ((a - ua) % stepa != 0) return std::nullopt;
  return ub + stepb * ((a - ua) / stepa);
}

}  // namespace

std::vector<Point> Preaction::closure(const Point& x) const {
  std::set<Point> seen;
  std::vector<Point> todo{norm(x)};
  seen.insert(todo[0]);
  while (!todo.empty()) {
    Point p = todo.back();
    todo.pop_back();
    for (const Gluing& g : gluings_) {
      if (g.kind == Gluing::Tau) continue;  // tau relates distinct points
      Int ka = g.kind == Gluing::PointPair ? Int(0) : h_->ksrc(g.e);
      Int kb = g.kind == Gluing::PointPair ? Int(0) : h_->ktrg(g.e);
      for (int side = 0; side < 2; ++side) {
        int o = side == 0 ? g.oa : g.ob, po = side == 0 ? g.ob : g.oa;
        if (p.orbit != o) continue;
        auto im =
            side == 0
                ? partner_off(p.off, g.ua, ka, g.ub, kb, orbits_[o].size)
                : partner_off(p.off, g.ub, kb, g.ua, ka, orbits_[o].size);
        if (!im) continue;
        Point q = norm({po, *im});
        if (seen.insert(q).second) {
          if (seen.size() > 100000)
            throw DomainError("closure: identification class too large");
          todo.push_back(q);
        }
      }
    }
  }
  return {seen.begin(), seen.end()};
}

Point Preaction::canonical(const Point& x) const { return closure(x)[0]; }

std::optional<Point> Preaction::member_of_type(const Point& x,
                                               int type) const {
  for (const Point& p : closure(x))
    if (orbits_[p.orbit].type == type) return p;
  return std::nullopt;
}

bool Preaction::in_alpha_dom(const Point& x, int s) const {
  return member_of_type(x, s).has_value();
}

bool Preaction::in_tau_dom(const Point& x, int e) const {
  int ep = h_->g.epos[e] ? e : h_->g.ebar[e];
  for (const Point& p : closure(x)) {
    for (const Gluing& g : gluings_) {
      if (g.kind != Gluing::Tau || g.e != ep) continue;
      if (h_->g.epos[e]) {
        if (p.orbit == g.oa &&
            partner_off(p.off, g.ua, h_->ksrc(ep), g.ub, h_->ktrg(ep),
                        orbits_[g.oa].size))
          return true;
      } else {
        if (p.orbit == g.ob &&
            partner_off(p.off, g.ub, h_->ktrg(ep), g.ua, h_->ksrc(ep),
                        orbits_[g.ob].size))
          return true;
      }
    }
  }
  return false;
}

std::optional<Point> Preaction::apply(const Point& x, const Letter& l) const {
  if (l.kind == Letter::VertexPower) {
    auto m = member_of_type(x, l.id);
    if (!m) return std::nullopt;
    return canonical(norm({m->orbit, m->off + l.exp}));
  }
  int e = l.id;
  if (tree_.contains(e)) {  // t_e is trivial in the fundamental group
    return canonical(x);
  }
  int ep = h_->g.epos[e] ? e : h_->g.ebar[e];
  for (const Point& p : closure(x)) {
    for (size_t gi = 0; gi < gluings_.size(); ++gi) {
      const Gluing& g = gluings_[gi];
      if (g.kind != Gluing::Tau || g.e != ep) continue;
      std::optional<Int> im;
      int po;
      if (h_->g.epos[e] && p.orbit == g.oa) {
        im = partner_off(p.off, g.ua, h_->ksrc(ep), g.ub, h_->ktrg(ep),
                         orbits_[g.oa].size);
        po = g.ob;
      } else if (!h_->g.epos[e] && p.orbit == g.ob) {
        im = partner_off(p.off, g.ub, h_->ktrg(ep), g.ua, h_->ksrc(ep),
                         orbits_[g.ob].size);
        po = g.oa;
      } else {
        continue;
      }
      if (im) return canonical(norm({po, *im}));
    }
  }
  return std::nullopt;
}

std::optional<Point> Preaction::evaluate(const Point& x,
                                         const GroupWord& w) const {
  std::optional<Point> cur = canonical(x);
  for (const Letter& l : w) {
    cur = apply(*cur, l);
    if (!cur) return std::nullopt;
  }
  return cur;
}

std::optional<Point> Preaction::evaluate(const Point& x, const TypedWord& w,
                                         std::vector<int>* path_out) const {
  if (path_out) path_out->clear();
  std::optional<Point> cur = canonical(x);
  auto edge_gluing = [&](const Point& p, int e) -> int {
    int ep = h_->g.epos[e] ? e : h_->g.ebar[e];
    for (const Point& q : closure(p)) {
      for (size_t gi = 0; gi < gluings_.size(); ++gi) {
        const Gluing& g = gluings_[gi];
        if (g.kind == Gluing::PointPair || g.e != ep) continue;
        if (h_->g.epos[e] && q.orbit == g.oa &&
            partner_off(q.off, g.ua, h_->ksrc(ep), g.ub, h_->ktrg(ep),
                        orbits_[g.oa].size))
          return static_cast<int>(gi);
        if (!h_->g.epos[e] && q.orbit == g.ob &&
            partner_off(q.off, g.ub, h_->ktrg(ep), g.ua, h_->ksrc(ep),
                        orbits_[g.ob].size))
          return static_cast<int>(gi);
      }
    }
    return -1;
  };
  for (size_t i = 0; i < w.path.size(); ++i) {
    int e = w.path[i];
    cur = apply(*cur, Letter::vpow(h_->g.esrc[e], w.pw[i]));
    if (!cur) return std::nullopt;
    if (path_out) path_out->push_back(edge_gluing(*cur, e));
    if (tree_.contains(e)) {
      if (!member_of_type(*cur, h_->g.etrg[e])) return std::nullopt;
    } else {
      cur = apply(*cur, Letter::egen(e));
      if (!cur) return std::nullopt;
    }
  }
  cur = apply(*cur, Letter::vpow(w.trg(*h_), w.pw.back()));
  return cur;
}

std::vector<Point> Preaction::interesting_points() const {
  std::set<Point> cand;
  auto add = [&](const Point& p) {
    for (const Point& q : closure(p)) cand.insert(q);
  };
  // Side cosets of every gluing, as (anchor, modulus) pairs per orbit.
  struct Cos {
    int orbit;
    Int r, d;  // d = 0: single point
  };
  std::vector<Cos> cosets;
  for (const Gluing& g : gluings_) {
    Int ka = g.kind == Gluing::PointPair ? Int(0) : abs(h_->ksrc(g.e));
    Int kb = g.kind == Gluing::PointPair ? Int(0) : abs(h_->ktrg(g.e));
    auto side = [&](int o, const Int& u, const Int& step) {
      const ExtNat& n = orbits_[o].size;
      Int d = step == 0 ? Int(0)
                        : (n.finite() ? gcd(step, n.v) : step);
      Int r = d == 0 ? (n.finite() ? emod(u, n.v) : u) : emod(u, d);
      cosets.push_back({o, r, d});
      add({o, n.finite() ? emod(u, n.v) : u});
    };
    side(g.oa, g.ua, ka);
    side(g.ob, g.ub, kb);
  }
  // Small finite orbits: every point.
  for (size_t o = 0; o < orbits_.size(); ++o) {
    const ExtNat& n = orbits_[o].size;
    if (n.finite() && n.v <= 5000)
      for (Int i = 0; i < n.v; ++i) cand.insert({static_cast<int>(o), i});
  }
  // Pairwise intersection witnesses (covers large/infinite orbits).
  for (size_t i = 0; i < cosets.size(); ++i) {
    for (size_t j = i + 1; j < cosets.size(); ++j) {
      if (cosets[i].orbit != cosets[j].orbit) continue;
      const Cos &a = cosets[i], &b = cosets[j];
      if (a.d == 0 && b.d == 0) {
        if (a.r == b.r) add({a.orbit, a.r});
      } else if (a.d == 0 || b.d == 0) {
        const Cos &pt = a.d == 0 ? a : b, &co = a.d == 0 ? b : a;
        if (emod(pt.r - co.r, co.d) == 0) add({a.orbit, pt.r});
      } else {
        Int g = gcd(a.d, b.d);
        if (emod(a.r - b.r, g) != 0) continue;
        // CRT: x ≡ a.r (mod a.d), x ≡ b.r (mod b.d)
        Int m = a.d / g * b.d;
        Int t = emod((b.r - a.r) / g * modinv(a.d / g, b.d / g), b.d / g);
        add({a.orbit, emod(a.r + a.d * t, m)});
      }
    }
  }
  return {cand.begin(), cand.end()};
}

Preaction new_orbit_preaction(const GbsGraph& h, const SpanningTree& t, int s,
                              const ExtNat& n) {
  Preaction p(h, t);
  p.add_orbit(s, n);
  return p;
}

Preaction disjoint_union(const Preaction& p, const Preaction& q) {
  if (&p.graph() != &q.graph())
    throw DomainError("disjoint_union: different graphs");
  Preaction out = p;
  int off = static_cast<int>(p.orbits().size());
  for (const Orbit& o : q.orbits()) out.add_orbit(o.type, o.size);
  for (Gluing g : q.gluings()) {
    g.oa += off;
    g.ob += off;
    out.add_gluing(g);
  }
  return out;
}

namespace {

// Unique tree path between two vertices (empty when v == w).
std::vector<int> tree_path(const GbsGraph& h, const SpanningTree& t, int v,
                           int w) {
  std::vector<int> par_edge(h.g.nv, -1);
  std::vector<bool> vis(h.g.nv, false);
  std::vector<int> bfs{v};
  vis[v] = true;
  for (size_t i = 0; i < bfs.size(); ++i) {
    int u = bfs[i];
    for (int e = 0; e < h.g.ne(); ++e) {
      if (!t.contains(e) || h.g.esrc[e] != u) continue;
      int x = h.g.etrg[e];
      if (vis[x]) continue;
      vis[x] = true;
      par_edge[x] = e;
      bfs.push_back(x);
    }
  }
  if (!vis[w]) throw DomainError("tree_path: disconnected");
  std::vector<int> path;
  for (int u = w; u != v; u = h.g.esrc[par_edge[u]])
    path.push_back(par_edge[u]);
  std::reverse(path.begin(), path.end());
  return path;
}

int orbits_type(const Preaction& p, const Point& q) {
  return p.orbits()[q.orbit].type;
}

// Set of defined generators at a class: vertex types plus tau-edge ids.
std::set<int> generator_set(const Preaction& p, const Point& x) {
  const GbsGraph& h = p.graph();
  std::set<int> out;
  for (const Point& q : p.closure(x)) out.insert(orbits_type(p, q));
  for (int e = 0; e < h.g.ne(); ++e)
    if (!p.tree().contains(e) && p.in_tau_dom(x, e)) out.insert(h.g.nv + e);
  return out;
}

}  // namespace

PreactionReport validate(const Preaction& p) {
  const GbsGraph& h = p.graph();
  std::vector<Point> pts = p.interesting_points();
  // Deduplicate by class; keep one representative per class.
  std::set<Point> done;
  std::vector<std::vector<Point>> classes;
  for (const Point& x : pts) {
    if (done.count(p.norm(x))) continue;
    std::vector<Point> cls = p.closure(x);
    for (const Point& q : cls) done.insert(q);
    classes.push_back(std::move(cls));
  }
  auto fail = [&](int c, const Point& w) {
    return PreactionReport{false, c,
                           "condition-" + std::to_string(c) + " at " +
                               point_str(w)};
  };
  // (1) every alpha_s is a well-defined partial bijection: no class may hold
  // two distinct points of one orbit, nor points of two distinct orbits of
  // the same vertex type.
  for (const auto& cls : classes) {
    std::set<int> orbs, types;
    for (const Point& q : cls) {
      if (!orbs.insert(q.orbit).second) return fail(1, cls[0]);
      if (!types.insert(orbits_type(p, q)).second) return fail(1, cls[0]);
    }
  }
  // (2) tree edges agree on shared domains.
  for (const auto& cls : classes) {
    for (int e = 0; e < h.g.ne(); e += 2) {
      if (!p.tree().contains(e)) continue;
      std::optional<Point> ms, mt;
      for (const Point& q : cls) {
        if (orbits_type(p, q) == h.g.esrc[e] && !ms) ms = q;
        if (orbits_type(p, q) == h.g.etrg[e] && !mt) mt = q;
      }
      if (!ms || !mt) continue;
      Point a = p.canonical(p.norm({ms->orbit, ms->off + h.ksrc(e)}));
      Point b = p.canonical(p.norm({mt->orbit, mt->off + h.ktrg(e)}));
      if (!(a == b)) return fail(2, cls[0]);
    }
  }
  // (3) tau maps: single-valued and equivariant.
  for (const auto& cls : classes) {
    for (int e = 0; e < h.g.ne(); e += 2) {
      if (p.tree().contains(e)) continue;
      // single-valuedness in both directions across all gluings of e
      std::set<Point> fwd, bwd;
      for (const Point& q : cls) {
        for (const Gluing& g : p.gluings()) {
          if (g.kind != Gluing::Tau || g.e != e) continue;
          if (q.orbit == g.oa) {
            auto im = partner_off(q.off, g.ua, h.ksrc(e), g.ub, h.ktrg(e),
                                  p.orbits()[g.oa].size);
            if (im) fwd.insert(p.canonical(p.norm({g.ob, *im})));
          }
          if (q.orbit == g.ob) {
            auto im = partner_off(q.off, g.ub, h.ktrg(e), g.ua, h.ksrc(e),
                                  p.orbits()[g.ob].size);
            if (im) bwd.insert(p.canonical(p.norm({g.oa, *im})));
          }
        }
      }
      if (fwd.size() > 1 || bwd.size() > 1) return fail(3, cls[0]);
      // equivariance: (x·alpha^k)·tau = (x·tau)·alpha^l
      std::optional<Point> msrc;
      for (const Point& q : cls)
        if (orbits_type(p, q) == h.g.esrc[e]) msrc = q;
      if (msrc && fwd.size() == 1) {
        Point xa = p.norm({msrc->orbit, msrc->off + h.ksrc(e)});
        auto lhs = p.apply(xa, Letter::egen(e));
        auto mimg = p.member_of_type(*fwd.begin(), h.g.etrg[e]);
        if (lhs && mimg) {
          Point rhs = p.canonical(p.norm({mimg->orbit, mimg->off + h.ktrg(e)}));
          if (!(*lhs == rhs)) return fail(3, cls[0]);
        }
      }
    }
  }
  // (4) tau domains sit inside the alpha domains along the tree path.
  for (const auto& cls : classes) {
    for (int e = 0; e < h.g.ne(); ++e) {
      if (p.tree().contains(e) || !p.in_tau_dom(cls[0], e)) continue;
      for (const Point& q : cls) {
        int s = orbits_type(p, q);
        for (int pe : tree_path(h, p.tree(), s, h.g.esrc[e])) {
          if (!p.member_of_type(cls[0], h.g.esrc[pe]) ||
              !p.member_of_type(cls[0], h.g.etrg[pe]))
            return fail(4, cls[0]);
        }
      }
    }
  }
  // (5) shared alpha domains are closed along tree paths.
  for (const auto& cls : classes) {
    for (const Point& q1 : cls) {
      for (const Point& q2 : cls) {
        int v = orbits_type(p, q1), w = orbits_type(p, q2);
        if (v == w) continue;
        for (int pe : tree_path(h, p.tree(), v, w)) {
          if (!p.member_of_type(cls[0], h.g.esrc[pe]) ||
              !p.member_of_type(cls[0], h.g.etrg[pe]))
            return fail(5, cls[0]);
        }
      }
    }
  }
  return {};
}

void construction_A(Preaction& p, int e0, const Point& x, const Point& y) {
  const GbsGraph& h = p.graph();
  if (p.tree().contains(e0))
    throw DomainError("construction_A: edge lies in the tree");
  if (!h.g.epos[e0]) {
    construction_A(p, h.g.ebar[e0], y, x);
    return;
  }
  auto mx = p.member_of_type(x, h.g.esrc[e0]);
  if (!mx) throw DomainError("construction_A: x not in source domain");
  if (p.in_tau_dom(x, e0))
    throw DomainError("construction_A: x already in tau domain");
  auto my = p.member_of_type(y, h.g.etrg[e0]);
  if (!my) throw DomainError("construction_A: y not in target domain");
  if (p.in_tau_dom(y, h.g.ebar[e0]))
    throw DomainError("construction_A: y already in tau range");
  if (!transfer_ok(p.orbits()[mx->orbit].size, h.ksrc(e0),
                   p.orbits()[my->orbit].size, h.ktrg(e0)))
    throw DomainError("construction_A: transfer equation fails");
  p.add_gluing({Gluing::Tau, e0, mx->orbit, my->orbit, mx->off, my->off});
}

void construction_B(Preaction& p, int e0, const Point& x, const Point& y) {
  const GbsGraph& h = p.graph();
  if (!p.tree().contains(e0))
    throw DomainError("construction_B: edge not in the tree");
  if (!h.g.epos[e0]) {
    construction_B(p, h.g.ebar[e0], y, x);
    return;
  }
  int s0 = h.g.esrc[e0], t0 = h.g.etrg[e0];
  auto mx = p.member_of_type(x, s0);
  if (!mx) throw DomainError("construction_B: x not in source domain");
  if (p.member_of_type(x, t0))
    throw DomainError("construction_B: x already in target domain");
  auto my = p.member_of_type(y, t0);
  if (!my) throw DomainError("construction_B: y not in target domain");
  if (p.member_of_type(y, s0))
    throw DomainError("construction_B: y already in source domain");
  ExtNat n = p.orbits()[mx->orbit].size, m = p.orbits()[my->orbit].size;
  if (!transfer_ok(n, h.ksrc(e0), m, h.ktrg(e0)))
    throw DomainError("construction_B: transfer equation fails");
  // The generator sets defined at the glued pairs must be disjoint.
  ExtNat q = div_gcd(n, h.ksrc(e0));
  Int limit = q.finite() ? (q.v < 64 ? q.v : Int(64)) : Int(64);
  for (Int j = 0; j < limit; ++j) {
    Point a = p.norm({mx->orbit, mx->off + h.ksrc(e0) * j});
    Point b = p.norm({my->orbit, my->off + h.ktrg(e0) * j});
    std::set<int> sa = generator_set(p, a), sb = generator_set(p, b);
    std::vector<int> inter;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(inter));
    if (!inter.empty())
      throw DomainError("construction_B: generator sets not disjoint");
  }
  p.add_gluing({Gluing::TreeEdge, e0, mx->orbit, my->orbit, mx->off, my->off});
}

int construction_Aprime(Preaction& p, int e, const Point& x, const ExtNat& M) {
  const GbsGraph& h = p.graph();
  auto mx = p.member_of_type(x, h.g.esrc[e]);
  if (!mx) throw DomainError("construction_A': x not in source domain");
  if (!transfer_ok(p.orbits()[mx->orbit].size, h.ksrc(e), M, h.ktrg(e)))
    throw DomainError("construction_A': transfer equation fails");
  int o = p.add_orbit(h.g.etrg[e], M);
  construction_A(p, e, x, {o, 0});
  return o;
}

int construction_Bprime(Preaction& p, int e, const Point& x, const ExtNat& M) {
  const GbsGraph& h = p.graph();
  auto mx = p.member_of_type(x, h.g.esrc[e]);
  if (!mx) throw DomainError("construction_B': x not in source domain");
  if (!transfer_ok(p.orbits()[mx->orbit].size, h.ksrc(e), M, h.ktrg(e)))
    throw DomainError("construction_B': transfer equation fails");
  int o = p.add_orbit(h.g.etrg[e], M);
  construction_B(p, e, x, {o, 0});
  return o;
}

bool is_transitive(const Preaction& p) {
  int n = static_cast<int>(p.orbits().size());
  if (n == 0) return false;
  std::vector<int> comp(n, -1);
  std::vector<int> bfs{0};
  comp[0] = 0;
  for (size_t i = 0; i < bfs.size(); ++i) {
    for (const Gluing& g : p.gluings()) {
      for (auto [a, b] : {std::pair{g.oa, g.ob}, std::pair{g.ob, g.oa}}) {
        if (a == bfs[i] && comp[b] < 0) {
          comp[b] = 0;
          bfs.push_back(b);
        }
      }
    }
  }
  return std::count(comp.begin(), comp.end(), 0) == n;
}

bool is_saturated_preaction(const Preaction& p) {
  const GbsGraph& h = p.graph();
  for (size_t o = 0; o < p.orbits().size(); ++o) {
    for (int e = 0; e < h.g.ne(); ++e) {
      if (h.g.esrc[e] != p.orbits()[o].type) continue;
      int count = 0;
      for (const Gluing& g : p.gluings()) {
        if (g.kind == Gluing::PointPair) continue;
        if (h.g.epos[e] && g.e == e && g.oa == static_cast<int>(o)) ++count;
        if (!h.g.epos[e] && g.e == h.g.ebar[e] && g.ob == static_cast<int>(o))
          ++count;
      }
      ExtNat bound = egcd(p.orbits()[o].size, h.ksrc(e));
      if (!bound.finite() || Int(count) != bound.v) return false;
    }
  }
  return true;
}

}  // namespace gbs
