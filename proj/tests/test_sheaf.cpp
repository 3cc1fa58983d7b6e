#include <doctest.h>

#include <cmath>
#include <memory>

#include "netsheaf/errors.hpp"
#include "netsheaf/sheaf.hpp"

using namespace netsheaf;

namespace {

// Diamond a <= b <= d, a <= c <= d with identity restrictions everywhere.
Sheaf identity_diamond() {
  SheafBuilder sb(Poset({"a", "b", "c", "d"},
                        {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}));
  for (const char* e : {"a", "b", "c", "d"}) sb.set_stalk(e, Space::reals(1));
  const StalkMap id = identity_map(Space::reals(1));
  sb.set_restriction("a", "b", id);
  sb.set_restriction("a", "c", id);
  sb.set_restriction("b", "d", id);
  sb.set_restriction("c", "d", id);
  return sb.build();
}

}  // namespace

TEST_CASE("composite restrictions are derived along paths") {
  Sheaf s = identity_diamond();
  // a <= d was never set explicitly; it must exist by composition.
  const StalkMap& ad = s.restriction(s.base().index_of("a"),
                                     s.base().index_of("d"));
  CHECK(ad({7.0})[0] == doctest::Approx(7.0));
  CHECK(s.strict_pairs().size() == 5);
}

TEST_CASE("inconsistent composites fail the functoriality check") {
  SheafBuilder sb(Poset({"a", "b", "d"}, {{"a", "b"}, {"b", "d"}, {"a", "d"}}));
  for (const char* e : {"a", "b", "d"}) sb.set_stalk(e, Space::reals(1));
  const StalkMap id = identity_map(Space::reals(1));
  Matrix two(1, 1);
  two.at(0, 0) = 2.0;
  sb.set_restriction("a", "b", id);
  sb.set_restriction("b", "d", id);
  sb.set_restriction("a", "d",
                     affine_map(Space::reals(1), Space::reals(1), two, {0.0}));
  CHECK_THROWS_AS(sb.build(), FunctorialityError);
}

TEST_CASE("consistency radius of a hand-built diamond assignment") {
  Sheaf s = identity_diamond();
  Assignment a = make_assignment(s);
  set_value(s, a, "a", {0.0});
  set_value(s, a, "b", {1.0});
  set_value(s, a, "c", {1.0});
  set_value(s, a, "d", {1.0});
  // violated pairs: ab, ac, ad each contribute 1; bd, cd agree
  CHECK(consistency_radius(s, a) == doctest::Approx(std::sqrt(3.0)));
  CHECK(!is_global_section(s, a));
  set_value(s, a, "a", {1.0});
  CHECK(consistency_radius(s, a) == doctest::Approx(0.0));
  CHECK(is_global_section(s, a));
}

TEST_CASE("local radius restricts the pair sum to a sub-collection") {
  Sheaf s = identity_diamond();
  Assignment a = make_assignment(s);
  set_value(s, a, "b", {1.0});
  set_value(s, a, "d", {4.0});
  CHECK(a.set_count() == 2);
  CHECK(!a.total());
  CHECK_THROWS_AS(consistency_radius(s, a), NotGlobal);
  // only the b <= d pair is in scope; reflexive terms vanish
  CHECK(local_consistency_radius(s, a, {"b", "d"}) == doctest::Approx(3.0));
}

TEST_CASE("section bound holds on the diamond") {
  Sheaf s = identity_diamond();
  Assignment sec = make_assignment(s);
  for (const char* e : {"a", "b", "c", "d"}) set_value(s, sec, e, {2.0});
  Assignment a = make_assignment(s);
  set_value(s, a, "a", {2.5});
  set_value(s, a, "b", {1.0});
  set_value(s, a, "c", {2.0});
  set_value(s, a, "d", {3.0});
  auto [lhs, rhs] = section_bound_check(s, sec, a, 1.0);
  CHECK(lhs <= rhs + 1e-12);
  Assignment not_sec = make_assignment(s);
  set_value(s, not_sec, "a", {0.0});
  set_value(s, not_sec, "b", {5.0});
  set_value(s, not_sec, "c", {0.0});
  set_value(s, not_sec, "d", {0.0});
  CHECK_THROWS_AS(section_bound_check(s, not_sec, a, 1.0), NotASection);
}

TEST_CASE("assignment distance is the euclidean norm over shared support") {
  Sheaf s = identity_diamond();
  Assignment x = make_assignment(s);
  Assignment y = make_assignment(s);
  for (const char* e : {"a", "b", "c", "d"}) {
    set_value(s, x, e, {0.0});
    set_value(s, y, e, {1.0});
  }
  CHECK(assignment_distance(s, x, y) == doctest::Approx(2.0));
}

TEST_CASE("morphisms measure their own defect and apply elementwise") {
  auto src = std::make_shared<Sheaf>(identity_diamond());
  auto dst = std::make_shared<Sheaf>(identity_diamond());
  OrderMap base;
  for (const char* e : {"a", "b", "c", "d"}) base.map[e] = e;
  Matrix two(1, 1);
  two.at(0, 0) = 2.0;
  std::map<std::string, StalkMap> comps;
  for (const char* e : {"a", "b", "c", "d"})
    comps[e] = affine_map(Space::reals(1), Space::reals(1), two, {0.0});
  SheafMorphism m = make_morphism(src, dst, base, comps);
  CHECK(m.defect_bound == doctest::Approx(0.0));

  Assignment a = make_assignment(*src);
  set_value(*src, a, "a", {1.0});
  set_value(*src, a, "b", {2.0});
  set_value(*src, a, "c", {3.0});
  set_value(*src, a, "d", {4.0});
  Assignment b = apply_morphism(m, a);
  CHECK(get_value(*dst, b, "c")[0] == doctest::Approx(6.0));

  auto [lhs, rhs] = morphism_bound_check(m, a, 2.0, m.defect_bound);
  CHECK(lhs <= rhs + 1e-12);
}

TEST_CASE("declared defects below the measured one are rejected") {
  auto src = std::make_shared<Sheaf>(identity_diamond());
  auto dst = std::make_shared<Sheaf>(identity_diamond());
  OrderMap base;
  for (const char* e : {"a", "b", "c", "d"}) base.map[e] = e;
  std::map<std::string, StalkMap> comps;
  // component on b shifts, the others do not: commutation gap is 1 on a<=b
  for (const char* e : {"a", "b", "c", "d"}) {
    Matrix one(1, 1);
    one.at(0, 0) = 1.0;
    comps[e] = affine_map(Space::reals(1), Space::reals(1), one,
                          {e[0] == 'b' ? 1.0 : 0.0});
  }
  CHECK_THROWS_AS(make_morphism(src, dst, base, comps, 0.25),
                  DefectExceeded);
}
