#include "doctest.h"
#include "gbs/words.hpp"

using namespace gbs;

TEST_CASE("typed word reduction predicate") {
  GbsGraph loop = loop_graph(2, 3);
  TypedWord r0{{}, {Int(3)}, 0};
  CHECK(is_reduced_typed(r0, loop));
  TypedWord r0z{{}, {Int(0)}, 0};
  CHECK_FALSE(is_reduced_typed(r0z, loop));

  // (e, ē) with middle power divisible by k_{e,trg} = 3
  TypedWord back{{0, 1}, {Int(1), Int(3), Int(0)}, 0};
  CHECK_FALSE(is_reduced_typed(back, loop));
  TypedWord ok{{0, 1}, {Int(1), Int(2), Int(0)}, 0};
  CHECK(is_reduced_typed(ok, loop));

  GbsGraph th = [&] {
    GbsGraph h;
    h.add_vertex("u");
    h.add_vertex("w");
    h.add_edge("e", 0, 1, 2, 3);
    h.add_edge("f", 0, 1, 5, 7);
    return h;
  }();
  // (e, f̄): no backtrack, any powers
  TypedWord nf{{0, 3}, {Int(0), Int(3), Int(0)}, 0};
  CHECK(is_reduced_typed(nf, th));
}

TEST_CASE("typed concatenation") {
  GbsGraph loop = loop_graph(2, 3);
  TypedWord w{{0}, {Int(1), Int(1)}, 0};
  TypedWord idw{{}, {Int(0)}, 0};
  CHECK(concat_typed(w, idw, loop) == w);
  TypedWord w2{{0}, {Int(2), Int(0)}, 0};
  TypedWord c = concat_typed(w, w2, loop);
  CHECK(c.path == EdgePath{0, 0});
  CHECK(c.pw == std::vector<Int>{1, 3, 0});

  TypedWord a{{0}, {Int(1), Int(2)}, 0}, b{{1}, {Int(1), Int(0)}, 0},
      d{{0}, {Int(5), Int(1)}, 0};
  auto left = concat_typed(concat_typed(a, b, loop), d, loop);
  auto right = concat_typed(a, concat_typed(b, d, loop), loop);
  CHECK(left == right);
}

TEST_CASE("group word conversion") {
  GbsGraph seg = segment_graph(2, 3);
  SpanningTree t = spanning_tree(seg, 0);
  TypedWord w{{0}, {Int(1), Int(2)}, 0};
  GroupWord gw = to_group_word(w, seg, t);  // tree edge: no t letter
  REQUIRE(gw.size() == 2);
  CHECK(gw[0] == Letter::vpow(0, 1));
  CHECK(gw[1] == Letter::vpow(1, 2));

  TypedWord r0{{}, {Int(4)}, 1};
  GroupWord gw0 = to_group_word(r0, seg, t);
  REQUIRE(gw0.size() == 1);
  CHECK(gw0[0] == Letter::vpow(1, 4));

  GbsGraph loop = loop_graph(2, 3);
  SpanningTree tl = spanning_tree(loop, 0);
  TypedWord lw{{0}, {Int(1), Int(0)}, 0};
  GroupWord gwl = to_group_word(lw, loop, tl);
  REQUIRE(gwl.size() == 2);
  CHECK(gwl[0] == Letter::vpow(0, 1));
  CHECK(gwl[1] == Letter::egen(0));
}

TEST_CASE("subwords") {
  TypedWord w1{{0}, {Int(1), Int(2)}, 0};
  CHECK(subwords(w1).empty());
  GbsGraph loop = loop_graph(2, 3);
  TypedWord w3{{0, 0, 0}, {Int(1), Int(2), Int(1), Int(0)}, 0};
  auto subs = subwords(w3);
  REQUIRE(subs.size() == 2);
  for (auto& s : subs) CHECK(well_formed(s, loop));
  CHECK(subs[0].path.size() == 1);
  CHECK(subs[1].pw == std::vector<Int>{1, 2, 1});
}

TEST_CASE("inverse of group words") {
  GbsGraph loop = loop_graph(2, 3);
  GroupWord w{Letter::vpow(0, 2), Letter::egen(0), Letter::vpow(0, -1)};
  GroupWord iw = inverse(w, loop);
  REQUIRE(iw.size() == 3);
  CHECK(iw[0] == Letter::vpow(0, 1));
  CHECK(iw[1] == Letter::egen(1));
  CHECK(iw[2] == Letter::vpow(0, -2));
}
