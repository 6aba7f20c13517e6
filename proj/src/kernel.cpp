#include "gbs/kernel.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gbs/errors.hpp"
#include "gbs/hgraph.hpp"

namespace gbs {

namespace {

// Forward generator moves of the Schreier graph, in label order: a_s for
// every vertex s, then t_e for every positive non-tree edge e.
std::vector<Letter> schreier_generators(const GbsGraph& h,
                                        const SpanningTree& t) {
  std::vector<Letter> gens;
  for (int s = 0; s < h.g.nv; ++s) gens.push_back(Letter::vpow(s, 1));
  for (int e = 0; e < h.g.ne(); e += 2)
    if (!t.contains(e)) gens.push_back(Letter::egen(e));
  return gens;
}

Letter inverse_letter(const GbsGraph& h, const Letter& l) {
  if (l.kind == Letter::VertexPower) return Letter::vpow(l.id, -l.exp);
  return Letter::egen(h.g.ebar[l.id]);
}

}  // namespace

SchreierBall schreier_ball(const PointedAction& a, int R) {
  const GbsGraph& h = a.p.graph();
  if (R < 0) throw DomainError("schreier_ball: negative radius");
  std::vector<Letter> gens = schreier_generators(h, a.p.tree());

  std::map<Point, int> id;
  std::vector<Point> pts;
  std::vector<int> dist;
  Point base = a.p.canonical(a.x0);
  id[base] = 0;
  pts.push_back(base);
  dist.push_back(0);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (dist[i] == R) continue;
    for (const Letter& g : gens) {
      for (const Letter& move : {g, inverse_letter(h, g)}) {
        auto w = a.p.apply(pts[i], move);
        if (!w || id.count(*w)) continue;
        id[*w] = static_cast<int>(pts.size());
        pts.push_back(*w);
        dist.push_back(dist[i] + 1);
      }
    }
  }

  // Induced labeled edges; keys 2g forward, 2g+1 backward. A radius-0 ball
  // is just the pointed vertex, without edges.
  std::vector<std::map<int, int>> raw(pts.size());
  for (size_t u = 0; u < pts.size() && R > 0; ++u) {
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      auto w = a.p.apply(pts[u], gens[gi]);
      if (!w || !id.count(*w)) continue;
      int v = id.at(*w);
      raw[u][2 * static_cast<int>(gi)] = v;
      raw[v][2 * static_cast<int>(gi) + 1] = static_cast<int>(u);
    }
  }

  // Canonical renumbering: breadth-first from the base point scanning
  // labels increasingly.
  std::vector<int> newid(pts.size(), -1);
  std::vector<int> order;
  newid[0] = 0;
  order.push_back(0);
  for (size_t i = 0; i < order.size(); ++i) {
    for (const auto& [lbl, v] : raw[order[i]]) {
      if (newid[v] < 0) {
        newid[v] = static_cast<int>(order.size());
        order.push_back(v);
      }
    }
  }
  if (order.size() != pts.size())
    throw DomainError("schreier_ball: internal: ball not connected");

  SchreierBall b;
  b.radius = R;
  b.adj.resize(pts.size());
  b.dist.resize(pts.size());
  for (size_t i = 0; i < order.size(); ++i) {
    int old = order[i];
    b.dist[i] = dist[old];
    for (const auto& [lbl, v] : raw[old]) b.adj[i][lbl] = newid[v];
  }
  return b;
}

bool ball_iso(const SchreierBall& b1, const SchreierBall& b2) {
  return b1 == b2;
}

ExtNat subgroup_phenotype(const PointedAction& a, int s) {
  auto m = a.p.member_of_type(a.p.canonical(a.x0), s);
  ExtNat n = m ? a.p.orbits()[m->orbit].size : ExtNat::inf();
  return phenotype(a.p.graph(), s, n);
}

ExtNat subgroup_index(const PointedAction& a) {
  const GbsGraph& h = a.p.graph();
  if (!is_transitive(a.p))
    throw DomainError("subgroup_index: preaction not transitive");
  if (!is_saturated_preaction(a.p))
    throw DomainError("subgroup_index: preaction not saturated");
  for (const Orbit& o : a.p.orbits())
    if (!o.size.finite()) throw DomainError("subgroup_index: infinite carrier");

  std::set<Point> classes;
  for (size_t o = 0; o < a.p.orbits().size(); ++o)
    for (Int off = 0; off < a.p.orbits()[o].size.v; ++off)
      classes.insert(a.p.canonical({static_cast<int>(o), off}));
  Int index(classes.size());

  // Cross-check: the carrier is in bijection with the α_s-orbits of any
  // fixed vertex type, so the type-s orbit sizes must sum to the index.
  for (int s = 0; s < h.g.nv; ++s) {
    Int sum = 0;
    for (const Orbit& o : a.p.orbits())
      if (o.type == s) sum += o.size.v;
    if (sum != index)
      throw DomainError("subgroup_index: inconsistent per-type point count");
  }
  return ExtNat(index);
}

Int nonunimodular_prime(const GbsGraph& h) {
  std::optional<Int> best;
  for (const EdgePath& c : simple_cycles(h)) {
    Rational m = modular_value(h, c);
    if (abs(m.num) == abs(m.den)) continue;
    for (const Int& side : {m.num, m.den})
      for (const Int& p : primes_of(side))
        if (!best || p < *best) best = p;
  }
  if (!best) throw DomainError("nonunimodular_prime: graph is unimodular");
  return *best;
}

std::string piece_topology_name(PieceTopology t) {
  switch (t) {
    case PieceTopology::ClosedNonEmpty:
      return "closed, non-empty";
    case PieceTopology::Clopen:
      return "clopen";
    case PieceTopology::OpenNotClosed:
      return "open, not closed";
    case PieceTopology::EmptyPiece:
      return "empty piece";
  }
  return "?";
}

PieceTopology piece_topology(const GbsGraph& h, int s, const ExtNat& N) {
  if (!is_reduced(h)) throw DomainError("piece_topology: graph not reduced");
  if (classify(h).kind == GroupClass::AmenableBS1n)
    throw DomainError("piece_topology: ambient group is amenable");
  if (!N.finite()) return PieceTopology::ClosedNonEmpty;
  if (!is_attained(h, s, N)) return PieceTopology::EmptyPiece;
  return is_unimodular(h) ? PieceTopology::Clopen
                          : PieceTopology::OpenNotClosed;
}

bool in_perfect_kernel(const GbsGraph& h, const PointedAction& a) {
  if (classify(h).kind == GroupClass::AmenableBS1n)
    throw DomainError("in_perfect_kernel: ambient group is amenable");
  for (const Orbit& o : a.p.orbits())
    if (!o.size.finite()) return true;
  return false;
}

bool in_perfect_kernel(const GbsGraph& h, const HGraph& hg) {
  if (classify(h).kind == GroupClass::AmenableBS1n)
    throw DomainError("in_perfect_kernel: ambient group is amenable");
  return !is_saturated_hgraph(hg, h);
}

KernelReport kernel_description(const GbsGraph& h) {
  if (!is_reduced(h)) throw DomainError("kernel_description: graph not reduced");
  KernelReport r;
  r.cls = classify(h);
  switch (r.cls.kind) {
    case GroupClass::AmenableBS1n:
      r.description = "K(Gamma) is empty: Gamma ~ BS(1," + r.cls.n.str() +
                      ") has countably many subgroups";
      break;
    case GroupClass::UnimodularNonAmenable:
      r.description =
          "K(Gamma) = pi^{-1}(Sub_[inf](Gamma/C)) for the canonical "
          "projection pi, with C an infinite cyclic normal subgroup of Gamma "
          "contained in <a_" +
          h.vname[0] + ">";
      break;
    case GroupClass::NonUnimodularNonAmenable:
      r.description =
          "K(Gamma) = Sub_[inf](Gamma), the subgroups of infinite index";
      break;
  }
  return r;
}

KernelReport kernel_description(const GbsGraph& h, const PointedAction& a,
                                int s) {
  KernelReport r = kernel_description(h);
  if (r.cls.kind == GroupClass::AmenableBS1n)
    throw DomainError("kernel_description: ambient group is amenable");
  r.has_subgroup_data = true;
  r.in_kernel = in_perfect_kernel(h, a);
  bool finite = true;
  for (const Orbit& o : a.p.orbits()) finite = finite && o.size.finite();
  r.index = finite ? subgroup_index(a) : ExtNat::inf();
  r.phen = subgroup_phenotype(a, s);
  r.piece = piece_topology(h, s, r.phen);
  return r;
}

namespace {

// First class point at a type-s orbit of p where the liaison move along e0
// is still free (a_{trg(e0)} resp. t_{e0} undefined).
Point liaison_slot(const Preaction& p, int s, int e0) {
  const GbsGraph& h = p.graph();
  bool tree = p.tree().contains(e0);
  for (size_t o = 0; o < p.orbits().size(); ++o) {
    if (p.orbits()[o].type != s) continue;
    const ExtNat& n = p.orbits()[o].size;
    Int lim = n.finite() ? std::min(n.v, Int(64)) : Int(64);
    for (Int off = 0; off < lim; ++off) {
      Point x = p.canonical({static_cast<int>(o), off});
      bool busy = tree ? p.in_alpha_dom(x, h.g.etrg[e0])
                       : (p.in_tau_dom(x, e0) ||
                          p.in_tau_dom(x, h.g.ebar[e0]));
      if (!busy) return x;
    }
  }
  throw DomainError("phenotype_escape_sequence: no free liaison slot");
}

Int int_pow(const Int& p, int k) {
  Int r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

Embedding identity_embedding(const HGraph& hg) {
  Embedding em;
  em.vmap.resize(hg.g.nv);
  em.emap.resize(hg.g.ne());
  for (int v = 0; v < hg.g.nv; ++v) em.vmap[v] = v;
  for (int e = 0; e < hg.g.ne(); ++e) em.emap[e] = e;
  return em;
}

}  // namespace

EscapeSequence phenotype_escape_sequence(const GbsGraph& h,
                                         const SpanningTree& t, int s,
                                         const ExtNat& N, int n_max) {
  if (!is_reduced(h))
    throw DomainError("phenotype_escape_sequence: graph not reduced");
  if (classify(h).kind == GroupClass::AmenableBS1n)
    throw DomainError("phenotype_escape_sequence: ambient group is amenable");
  Int p0 = nonunimodular_prime(h);  // throws when unimodular
  if (!N.finite())
    throw DomainError("phenotype_escape_sequence: N must be finite");
  if (!is_attained(h, s, N))
    throw DomainError("phenotype_escape_sequence: N is not attained at s");
  if (n_max < 0) throw DomainError("phenotype_escape_sequence: n_max < 0");

  int e0 = -1;
  for (int e = 0; e < h.g.ne() && e0 < 0; ++e)
    if (h.g.esrc[e] == s) e0 = e;
  if (e0 < 0) throw DomainError("phenotype_escape_sequence: no edge at s");

  TypedWord empty{{}, {Int(0)}, s};
  Preaction acc = new_orbit_preaction(h, t, s, N);
  std::vector<int> designated{0};
  for (int k = 1; k <= n_max; ++k) {
    ExtNat nk = ExtNat(N.v * int_pow(p0, k));
    Preaction beta = new_orbit_preaction(h, t, s, nk);
    MergeRequest req;
    req.h = &h;
    req.t = t;
    req.e0 = e0;
    req.m = req.mprime = empty;
    req.pairs.push_back({&acc, &beta, liaison_slot(acc, s, e0), {0, 0}});
    MergeResult res = merge(req);
    designated.push_back(res.beta_base[0]);
    acc = std::move(res.gammas[0]);
  }

  Extraction ex = extract(acc);
  if (!graph_is_tree(ex.hg.g))
    throw DomainError("phenotype_escape_sequence: internal: not a tree");
  ExtNat ph = phenotype(h, s, N);
  for (int k = 0; k <= n_max; ++k) {
    int v = designated[k];
    if (ex.hg.vtype[v] != s ||
        ex.hg.vsize[v] != ExtNat(N.v * int_pow(p0, k)))
      throw DomainError("phenotype_escape_sequence: internal: bad label");
  }
  for (int v = 0; v < ex.hg.g.nv; ++v)
    if (ex.hg.vtype[v] == s && phenotype(h, s, ex.hg.vsize[v]) != ph)
      throw DomainError(
          "phenotype_escape_sequence: internal: phenotype drift");
  return {ex.hg, designated, p0};
}

namespace {

// Sub-preaction of p induced by the base orbits [0, nbase) together with
// every orbit whose class the typed word w visits from x. Keeps orbit ids of
// the prefix; later orbits are compacted in increasing order.
Preaction materialize_path(const Preaction& p, int nbase, const Point& x,
                           const TypedWord& w) {
  const GbsGraph& h = p.graph();
  std::set<int> keep;
  for (int o = 0; o < nbase; ++o) keep.insert(o);
  auto touch = [&](const Point& q) {
    for (const Point& r : p.closure(q)) keep.insert(r.orbit);
  };
  std::optional<Point> cur = p.canonical(x);
  touch(*cur);
  for (size_t i = 0; i < w.path.size(); ++i) {
    int e = w.path[i];
    cur = p.apply(*cur, Letter::vpow(h.g.esrc[e], w.pw[i]));
    if (cur && !p.tree().contains(e)) cur = p.apply(*cur, Letter::egen(e));
    if (!cur) throw DomainError("witness: escape word left the completion");
    touch(*cur);
  }
  cur = p.apply(*cur, Letter::vpow(w.trg(h), w.pw.back()));
  if (!cur) throw DomainError("witness: escape word left the completion");
  touch(*cur);

  std::vector<int> remap(p.orbits().size(), -1);
  Preaction out(h, p.tree());
  for (int o : keep)
    remap[o] = out.add_orbit(p.orbits()[o].type, p.orbits()[o].size);
  for (Gluing g : p.gluings()) {
    if (remap[g.oa] < 0 || remap[g.ob] < 0) continue;
    g.oa = remap[g.oa];
    g.ob = remap[g.ob];
    out.add_gluing(g);
  }
  return out;
}

}  // namespace

WitnessResult transitivity_witness(const std::vector<PointedAction>& balls,
                                   int R) {
  if (balls.empty() || balls.size() % 2 != 0)
    throw DomainError("witness: need 2S pointed actions");
  int S = static_cast<int>(balls.size()) / 2;
  const GbsGraph& h = balls[0].p.graph();
  const SpanningTree& t = balls[0].p.tree();
  for (const PointedAction& b : balls)
    if (&b.p.graph() != &h)
      throw DomainError("witness: inputs on different graphs");
  int s = balls[0].p.orbits()[balls[0].x0.orbit].type;
  for (const PointedAction& b : balls)
    if (b.p.orbits()[b.x0.orbit].type != s)
      throw DomainError("witness: base types differ");
  for (int i = 0; i < S; ++i)
    if (subgroup_phenotype(balls[i], s) != subgroup_phenotype(balls[S + i], s))
      throw DomainError("witness: phenotype mismatch");

  std::vector<SchreierBall> in_balls;
  for (const PointedAction& b : balls) in_balls.push_back(schreier_ball(b, R));

  // Completion deep enough for the common escape word to stay evaluable;
  // retried deeper when the escape runs off the materialized part.
  TypedWord gamma;
  std::vector<Preaction> tilde;
  for (int depth = R + 2;; depth += 2) {
    try {
      tilde.clear();
      std::vector<const Preaction*> ps;
      std::vector<Point> xs;
      std::vector<std::vector<int>> Ks;
      for (const PointedAction& b : balls) {
        Extraction ex = extract(b.p);
        HGraph full = complete_to_depth(ex.hg, h, depth);
        tilde.push_back(realize_extending(full, h, t, {&b.p},
                                          {identity_embedding(ex.hg)}));
        std::vector<int> K(ex.hg.g.nv);
        for (int v = 0; v < ex.hg.g.nv; ++v) K[v] = v;
        Ks.push_back(K);
      }
      for (size_t i = 0; i < balls.size(); ++i) ps.push_back(&tilde[i]);
      for (const PointedAction& b : balls) xs.push_back(b.x0);
      gamma = common_escape_typed(ps, xs, Ks);
      break;
    } catch (const DomainError&) {
      if (depth >= R + 12) throw;
    }
  }

  // Materialize the escape path on top of each input and pick a common free
  // liaison move at the escape endpoints.
  std::vector<Preaction> hat;
  std::vector<Point> ends;
  for (size_t i = 0; i < balls.size(); ++i) {
    hat.push_back(materialize_path(
        tilde[i], static_cast<int>(balls[i].p.orbits().size()), balls[i].x0,
        gamma));
    auto z = hat.back().evaluate(balls[i].x0, gamma);
    if (!z) throw DomainError("witness: internal: path not materialized");
    ends.push_back(*z);
  }
  int v = gamma.trg(h);
  int e0 = -1;
  Int shift = 0;
  for (int e = 0; e < h.g.ne() && e0 < 0; ++e) {
    if (h.g.esrc[e] != v) continue;
    for (Int j = 0; j < 64 && e0 < 0; ++j) {
      bool ok = true;
      for (size_t i = 0; i < balls.size() && ok; ++i) {
        auto z = hat[i].apply(ends[i], Letter::vpow(v, j));
        if (!z) {
          ok = false;
          continue;
        }
        ok = t.contains(e) ? !hat[i].in_alpha_dom(*z, h.g.etrg[e])
                           : (!hat[i].in_tau_dom(*z, e) &&
                              !hat[i].in_tau_dom(*z, h.g.ebar[e]));
      }
      if (ok) {
        e0 = e;
        shift = j;
      }
    }
  }
  if (e0 < 0) throw DomainError("witness: no common liaison slot");
  TypedWord m = gamma;
  m.pw.back() += shift;

  MergeRequest req;
  req.h = &h;
  req.t = t;
  req.e0 = e0;
  req.m = req.mprime = m;
  for (int i = 0; i < S; ++i)
    req.pairs.push_back({&hat[i], &hat[S + i], balls[i].x0, balls[S + i].x0});
  MergeResult res = merge(req);

  WitnessResult out;
  out.m = res.word;
  for (int i = 0; i < S; ++i) {
    Extraction ex = extract(res.gammas[i]);
    HGraph full = complete_to_depth(ex.hg, h, R + 1);
    Preaction fin = realize_extending(full, h, t, {&res.gammas[i]},
                                      {identity_embedding(ex.hg)});
    Point xb = balls[i].x0;
    Point yb{balls[S + i].x0.orbit + res.beta_base[i], balls[S + i].x0.off};
    auto img = fin.evaluate(xb, res.word);
    if (!img || *img != fin.canonical(yb))
      throw DomainError("witness: internal: word does not connect the bases");
    SchreierBall bx = schreier_ball({fin, xb}, R);
    SchreierBall by = schreier_ball({fin, yb}, R);
    if (!ball_iso(bx, in_balls[i]))
      throw DomainError("witness: R-ball changed at the first base point");
    if (!ball_iso(by, in_balls[S + i]))
      throw DomainError("witness: R-ball changed at the second base point");
    out.gammas.push_back(std::move(fin));
    out.xbase.push_back(xb);
    out.ybase.push_back(yb);
    out.xballs.push_back(std::move(bx));
    out.yballs.push_back(std::move(by));
  }
  return out;
}

}  // namespace gbs
