#pragma once
// Test-only builders of finite transitive saturated preactions and the
// plumbing that feeds them to the coset-enumeration oracle.
#include <map>
#include <random>
#include <vector>

#include "coset_enum.hpp"
#include "gbs/kernel.hpp"

namespace testutil {

// Cyclic family on the (k_src, k_trg) loop graph: `k` orbits of size `len`
// (len coprime to both labels, so every orbit carries exactly one outgoing
// and one incoming tau coset) glued in a tau-cycle with arbitrary offsets.
// The result is transitive and saturated with carrier size k·len.
inline gbs::Preaction cyclic_loop_action(const gbs::GbsGraph& h,
                                         const gbs::SpanningTree& t, int k,
                                         int len, std::mt19937& rng) {
  gbs::Preaction p(h, t);
  for (int i = 0; i < k; ++i) p.add_orbit(0, gbs::ExtNat(len));
  for (int i = 0; i < k; ++i) {
    gbs::Int ua = static_cast<int>(rng() % len);
    gbs::Int ub = static_cast<int>(rng() % len);
    p.add_gluing({gbs::Gluing::Tau, 0, i, (i + 1) % k, ua, ub});
  }
  return p;
}

// Relators of the presentation defined by (h, t) over the signed alphabet
// 1..V for the vertex generators and V+1.. for the positive non-tree edge
// generators, matching the preaction convention x·a_src^k·t_e = x·t_e·a_trg^l.
inline std::vector<std::vector<int>> presentation_relators(
    const gbs::GbsGraph& h, const gbs::SpanningTree& t) {
  std::vector<int> egen_no(h.g.ne(), 0);
  int next = h.g.nv;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (!t.contains(e)) egen_no[e] = ++next;
  std::vector<std::vector<int>> rels;
  for (int e = 0; e < h.g.ne(); e += 2) {
    std::vector<int> w;
    auto push_pow = [&w](int gen, const gbs::Int& k) {
      long long n = k.convert_to<long long>();
      int g = n > 0 ? gen : -gen;
      for (long long i = 0; i < (n > 0 ? n : -n); ++i) w.push_back(g);
    };
    push_pow(h.g.esrc[e] + 1, h.ksrc(e));
    if (!t.contains(e)) w.push_back(egen_no[e]);
    push_pow(h.g.etrg[e] + 1, -h.ktrg(e));
    if (!t.contains(e)) w.push_back(-egen_no[e]);
    rels.push_back(w);
  }
  return rels;
}

// Schreier generators of Stab(x0) of a finite saturated transitive
// preaction, as signed-alphabet words (breadth-first tree representatives).
inline std::vector<std::vector<int>> schreier_subgroup_words(
    const gbs::PointedAction& a) {
  const gbs::GbsGraph& h = a.p.graph();
  // Signed generator moves, indexed like presentation_relators.
  std::vector<std::pair<int, gbs::Letter>> moves;
  for (int s = 0; s < h.g.nv; ++s)
    moves.push_back({s + 1, gbs::Letter::vpow(s, 1)});
  int next = h.g.nv;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (!a.p.tree().contains(e))
      moves.push_back({++next, gbs::Letter::egen(e)});

  std::map<gbs::Point, std::vector<int>> rep;
  std::vector<gbs::Point> queue{a.p.canonical(a.x0)};
  rep[queue[0]] = {};
  std::vector<std::vector<int>> subgens;
  for (size_t i = 0; i < queue.size(); ++i) {
    for (const auto& [g, fwd] : moves) {
      for (int dir : {+1, -1}) {
        gbs::Letter l = fwd;
        if (dir < 0)
          l = l.kind == gbs::Letter::VertexPower
                  ? gbs::Letter::vpow(l.id, -1)
                  : gbs::Letter::egen(h.g.ebar[l.id]);
        auto w = a.p.apply(queue[i], l);
        if (!w) continue;
        auto it = rep.find(*w);
        if (it == rep.end()) {  // tree edge of the Schreier graph
          std::vector<int> r = rep[queue[i]];
          r.push_back(dir * g);
          rep[*w] = r;
          queue.push_back(*w);
        } else if (dir > 0) {  // Schreier generator rep(u)·g·rep(u·g)^{-1}
          std::vector<int> word = rep[queue[i]];
          word.push_back(g);
          const std::vector<int>& back = it->second;
          for (auto rit = back.rbegin(); rit != back.rend(); ++rit)
            word.push_back(-*rit);
          subgens.push_back(word);
        }
      }
    }
  }
  return subgens;
}

// Independent index computation: coset enumeration over the presentation
// with the Schreier generators of Stab(x0) as subgroup generators.
inline int oracle_index(const gbs::PointedAction& a) {
  const gbs::GbsGraph& h = a.p.graph();
  int ng = h.g.nv;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (!a.p.tree().contains(e)) ++ng;
  oracle::CosetTable tc(ng);
  return tc.enumerate(presentation_relators(h, a.p.tree()),
                      schreier_subgroup_words(a));
}

}  // namespace testutil
