#include <algorithm>
#include <set>

#include "doctest.h"
#include "gbs/core.hpp"

using namespace gbs;

namespace {
GbsGraph theta_graph() {  // two positive edges u -> w
  GbsGraph h;
  h.add_vertex("u");
  h.add_vertex("w");
  h.add_edge("e", 0, 1, 2, 3);
  h.add_edge("f", 0, 1, 5, 7);
  return h;
}
}  // namespace

TEST_CASE("validate_graph") {
  GbsGraph loop = loop_graph(2, 3);
  CHECK(validate_graph(loop.g).ok);

  OrientedGraph bad;
  bad.add_vertex();
  bad.esrc = {0};
  bad.etrg = {0};
  bad.ebar = {0};
  bad.epos = {true};
  auto r = validate_graph(bad);
  CHECK_FALSE(r.ok);
  CHECK(r.what == "fixed-point");

  OrientedGraph bad2;
  bad2.add_vertex();
  bad2.add_vertex();
  bad2.add_edge_pair(0, 1);
  bad2.esrc[1] = 0;  // src(ē) != trg(e)
  auto r2 = validate_graph(bad2);
  CHECK_FALSE(r2.ok);
  CHECK(r2.what == "involution-endpoints");
}

TEST_CASE("spanning trees") {
  GbsGraph loop = loop_graph(2, 3);
  auto t0 = spanning_tree(loop, 0);
  CHECK(std::count(t0.in_tree.begin(), t0.in_tree.end(), true) == 0);

  GbsGraph seg = segment_graph(2, 3);
  auto t1 = spanning_tree(seg, 0);
  CHECK(t1.contains(0));
  CHECK(t1.contains(1));

  GbsGraph th = theta_graph();
  auto t2 = spanning_tree(th, 0);
  CHECK(t2.contains(0));  // smaller edge id wins
  CHECK_FALSE(t2.contains(2));
}

TEST_CASE("reducedness") {
  CHECK(is_reduced(loop_graph(1, 5)));
  CHECK_FALSE(is_reduced(segment_graph(1, 3)));
  CHECK(is_reduced(segment_graph(2, 3)));
}

TEST_CASE("unimodularity") {
  CHECK(is_unimodular(segment_graph(2, 3)));
  CHECK_FALSE(is_unimodular(loop_graph(2, 3)));
  CHECK(is_unimodular(loop_graph(2, -2)));
}

TEST_CASE("classification") {
  CHECK(classify(loop_graph(1, 5)) ==
        GroupClass{GroupClass::AmenableBS1n, Int(5)});
  CHECK(classify(segment_graph(2, -2)) ==
        GroupClass{GroupClass::AmenableBS1n, Int(-1)});
  CHECK(classify(loop_graph(2, 3)).kind ==
        GroupClass::NonUnimodularNonAmenable);
  CHECK(classify(segment_graph(2, 3)).kind ==
        GroupClass::UnimodularNonAmenable);
  CHECK_THROWS_AS(classify(segment_graph(1, 3)), DomainError);
}

TEST_CASE("modular values") {
  GbsGraph loop = loop_graph(2, 3);
  CHECK(modular_value(loop, {}) == Rational{1, 1});
  CHECK(modular_value(loop, {0}) == Rational{2, 3});
  CHECK(modular_value(loop, {0, 1}) == Rational{1, 1});
  GbsGraph seg = segment_graph(2, 3);
  CHECK_THROWS_AS(modular_value(seg, {0}), DomainError);
}

TEST_CASE("unimodular iff modular value is +-1 on simple cycles") {
  for (const GbsGraph& h :
       {loop_graph(2, 3), loop_graph(2, -2), theta_graph(),
        segment_graph(2, 3), loop_graph(6, 6)}) {
    bool all_pm1 = true;
    for (const EdgePath& c : simple_cycles(h)) {
      Rational r = modular_value(h, c);
      if (abs(r.num) != abs(r.den)) all_pm1 = false;
    }
    CHECK(all_pm1 == is_unimodular(h));
  }
}

TEST_CASE("simple path enumeration") {
  GbsGraph loop = loop_graph(2, 3);
  auto ps = simple_paths_from(loop, 0);
  REQUIRE(ps.size() == 2);  // e and ē

  GbsGraph seg = segment_graph(2, 3);
  auto qs = simple_paths_from(seg, 0);
  REQUIRE(qs.size() == 1);
  CHECK(qs[0] == EdgePath{0});

  GbsGraph th = theta_graph();
  auto rs = simple_paths_from(th, 0);
  // 2 single edges plus 2 two-edge cycles through w
  CHECK(rs.size() == 4);
  int cycles = 0;
  for (auto& p : rs)
    if (p.size() == 2) ++cycles;
  CHECK(cycles == 2);

  // no repeated sources inside one path
  for (auto& p : rs) {
    std::set<int> srcs;
    for (int e : p) srcs.insert(th.g.esrc[e]);
    CHECK(srcs.size() == p.size());
  }
}

TEST_CASE("simple cycles") {
  GbsGraph th = theta_graph();
  auto cs = simple_cycles(th);
  CHECK(cs.size() == 4);  // 2 cycles x 2 base points/directions... both directions from both vertices
  for (auto& c : cs) CHECK(is_cycle(th, c));
}

TEST_CASE("quotient graph") {
  GbsGraph th = theta_graph();
  auto [q, vmap] = quotient_graph(th.g, {{0}, {1}});
  CHECK(q.nv == 2);
  CHECK(q.ne() == 4);
  auto [q2, vmap2] = quotient_graph(th.g, {{0, 1}});
  CHECK(q2.nv == 1);
  CHECK(q2.ne() == 0);
  auto [q3, vmap3] = quotient_graph(th.g, {});
  CHECK(q3.nv == 2);
  CHECK(q3.ne() == 4);
  CHECK_THROWS_AS(quotient_graph(th.g, {{0}, {0}}), DomainError);
}

TEST_CASE("tree and forest predicates") {
  CHECK(graph_is_tree(segment_graph(2, 3).g));
  CHECK_FALSE(graph_is_tree(loop_graph(2, 3).g));
  CHECK_FALSE(graph_is_tree(theta_graph().g));
  CHECK(graph_is_forest(segment_graph(2, 3).g));
}
