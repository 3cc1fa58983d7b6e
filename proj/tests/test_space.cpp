#include <doctest.h>

#include <cmath>
#include <memory>

#include "netsheaf/errors.hpp"
#include "netsheaf/linalg.hpp"
#include "netsheaf/space.hpp"

using namespace netsheaf;

TEST_CASE("product spaces concatenate signatures and use euclidean distance") {
  Space s = product({Space::reals(2), Space::booleans(1)});
  CHECK(s.dim() == 3);
  CHECK(s.signature[2].tag == CoordTag::Boolean);
  CHECK(s.distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
  CHECK(s.distance({0, 0, 0}, {0, 0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("require rejects non boolean values on boolean coordinates") {
  Space s = Space::booleans(1);
  CHECK_THROWS_AS(s.require({0.5}, "here"), DimensionMismatch);
  CHECK_THROWS_AS(s.require({0.0, 1.0}, "here"), DimensionMismatch);
  s.require({1.0}, "here");
}

TEST_CASE("spectral norm of a shear is the golden ratio") {
  Matrix m(2, 2);
  m.at(0, 0) = 1;
  m.at(0, 1) = 1;
  m.at(1, 0) = 0;
  m.at(1, 1) = 1;
  CHECK(spectral_norm(m) == doctest::Approx(1.6180339887).epsilon(1e-6));
}

TEST_CASE("projection has an exact unit lipschitz bound") {
  StalkMap p = projection(Space::reals(3), {0, 2});
  REQUIRE(p.lipschitz.has_value());
  CHECK(*p.lipschitz == 1.0);
  CHECK(p.lipschitz_provenance == "exact");
  Point got = p({1, 2, 3});
  REQUIRE(got.size() == 2);
  CHECK(got[0] == 1);
  CHECK(got[1] == 3);
}

TEST_CASE("composition multiplies bounds and demotes provenance") {
  Matrix two(1, 1);
  two.at(0, 0) = 2.0;
  StalkMap a = affine_map(Space::reals(1), Space::reals(1), two, {0.0});
  Matrix three(1, 1);
  three.at(0, 0) = -3.0;
  StalkMap b = affine_map(Space::reals(1), Space::reals(1), three, {1.0});
  StalkMap c = compose(b, a);
  REQUIRE(c.lipschitz.has_value());
  CHECK(*c.lipschitz == doctest::Approx(6.0));
  CHECK(c.lipschitz_provenance == "exact");
  CHECK(c({2.0})[0] == doctest::Approx(-11.0));

  StalkMap s = scalar_map(
      Space::reals(1), [](const Point& p) { return p[0]; }, 1.0);
  CHECK(compose(s, a).lipschitz_provenance == "declared");
}

TEST_CASE("finite feasible sets give exhaustive lipschitz constants") {
  Space dom = Space::reals(1, -5, 5);
  auto pts = std::make_shared<std::vector<Point>>(
      std::vector<Point>{{0.0}, {1.0}, {3.0}});
  FeasibleSet f;
  f.points = pts;
  dom.feasible = f;
  StalkMap m;
  m.domain = dom;
  m.codomain = Space::reals(1);
  m.fn = [](const Point& p) { return Point{p[0] * p[0]}; };
  LipschitzInfo info = lipschitz_info(m, 16, 42);
  CHECK(info.provenance == "exhaustive");
  // max quotient over {0,1,3}: |9-1|/2 = 4
  CHECK(info.value == doctest::Approx(4.0));
}

TEST_CASE("sampling a finite feasible set is deterministic") {
  Space dom = Space::reals(1);
  auto pts = std::make_shared<std::vector<Point>>();
  for (int i = 0; i < 20; ++i) pts->push_back({static_cast<double>(i)});
  FeasibleSet f;
  f.points = pts;
  dom.feasible = f;
  auto a = sample_points(dom, 7, 99);
  auto b = sample_points(dom, 7, 99);
  CHECK(a == b);
  CHECK(a.size() == 7);
  auto all = sample_points(dom, 64, 99);
  CHECK(all.size() == 20);
}
