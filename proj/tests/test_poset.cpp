#include <doctest.h>

#include <algorithm>

#include "netsheaf/errors.hpp"
#include "netsheaf/graph.hpp"
#include "netsheaf/poset.hpp"

using namespace netsheaf;

TEST_CASE("diamond closure holds nine related pairs") {
  Poset p({"a", "b", "c", "d"},
          {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
  CHECK(p.size() == 4);
  CHECK(p.pairs().size() == 9);  // 4 reflexive + ab ac ad bd cd
  CHECK(p.leq(p.index_of("a"), p.index_of("d")));
  CHECK(!p.leq(p.index_of("b"), p.index_of("c")));
}

TEST_CASE("cycles are rejected") {
  CHECK_THROWS_AS(Poset({"x", "y"}, {{"x", "y"}, {"y", "x"}}), CycleError);
}

TEST_CASE("unknown relation endpoints are rejected") {
  CHECK_THROWS_AS(Poset({"x"}, {{"x", "zzz"}}), UnknownElement);
}

TEST_CASE("neighborhood lists in-neighbors, own vertex first") {
  DirectedGraph g = make_graph(
      {"a", "b", "c"},
      {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"c", "a"}, {"b", "a"}});
  auto n = neighborhood(g, "a");
  REQUIRE(n.size() == 3);
  CHECK(n[0] == "a");
  CHECK(n[1] == "b");
  CHECK(n[2] == "c");
  CHECK(neighborhood(g, "b") == std::vector<std::string>{"b"});
}

TEST_CASE("neighborhood requires the self edge") {
  DirectedGraph g = make_graph({"a", "b"}, {{"a", "a"}, {"a", "b"}});
  CHECK_THROWS_AS(neighborhood(g, "b"), MissingSelfEdge);
  CHECK_THROWS_AS(neighborhood(g, "nope"), UnknownVertex);
}

TEST_CASE("face poset relates a neighborhood cell to each in-neighbor cell") {
  DirectedGraph g = make_graph(
      {"b", "v"}, {{"b", "b"}, {"v", "v"}, {"b", "v"}});
  FacePoset fp = face_poset(g);
  CHECK(fp.poset.size() == 4);
  CHECK(fp.poset.pairs().size() == 7);  // 4 reflexive + 3 strict
  CHECK(fp.poset.leq(fp.poset.index_of(neighborhood_element("v")),
                     fp.poset.index_of(vertex_element("b"))));
  CHECK(fp.poset.leq(fp.poset.index_of(neighborhood_element("b")),
                     fp.poset.index_of(vertex_element("b"))));
  CHECK(!fp.poset.leq(fp.poset.index_of(neighborhood_element("b")),
                      fp.poset.index_of(vertex_element("v"))));
}

TEST_CASE("pairs are listed ascending and include reflexive entries") {
  Poset p({"a", "b"}, {{"a", "b"}});
  const auto& pr = p.pairs();
  REQUIRE(pr.size() == 3);
  for (const auto& [x, y] : pr) CHECK(p.leq(x, y));
  // every element is related to itself
  std::size_t reflexive = 0;
  for (const auto& [x, y] : pr)
    if (x == y) ++reflexive;
  CHECK(reflexive == 2);
}
