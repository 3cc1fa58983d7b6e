// Stalk spaces and the maps between them. A Space is a finite product of
// tagged coordinates (real or boolean) with the Euclidean metric, optionally
// carrying a feasible subset: either an explicit point list or a membership
// predicate with a sampler. StalkMap wraps a point function together with a
// Lipschitz bound when one is known exactly.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netsheaf/linalg.hpp"

namespace netsheaf {

using Point = std::vector<double>;
using Rng = std::mt19937_64;

enum class CoordTag : std::uint8_t { Real, Boolean };

struct CoordSpec {
  CoordTag tag = CoordTag::Real;
  // Sampling / initialization range. Booleans always use {0, 1}.
  double lo = -1.0;
  double hi = 1.0;
};

struct FeasibleSet {
  // Explicit finite list (preferred; enables exhaustive evaluation), or a
  // predicate plus sampler for sets that cannot be enumerated.
  std::shared_ptr<const std::vector<Point>> points;
  std::function<bool(const Point&)> member;
  std::function<Point(Rng&)> sample;

  bool finite() const { return points != nullptr; }
};

class Space {
 public:
  std::vector<CoordSpec> signature;
  std::optional<FeasibleSet> feasible;

  std::size_t dim() const { return signature.size(); }

  // Arity matches and boolean coordinates are exactly 0 or 1.
  bool matches(const Point& p) const;
  void require(const Point& p, const std::string& where) const;

  // Euclidean distance, squared differences accumulated in coordinate order.
  double distance(const Point& a, const Point& b) const;

  static Space reals(std::size_t n, double lo = -1.0, double hi = 1.0);
  static Space booleans(std::size_t n);
  // The zero-dimensional space whose only point is the empty tuple.
  static Space trivial();
};

// Concatenated signature; the factors' feasible sets are not combined.
Space product(const std::vector<Space>& factors);

struct StalkMap {
  Space domain;
  Space codomain;
  std::function<Point(const Point&)> fn;
  std::optional<double> lipschitz;  // exact bound when known
  std::string lipschitz_provenance; // "exact", "declared", "" when unset

  Point operator()(const Point& p) const;
};

StalkMap identity_map(const Space& s);
// Keeps the listed coordinates (in the given order). Lipschitz 1 exactly.
StalkMap projection(const Space& s, const std::vector<std::size_t>& keep);
// g after f. Multiplies Lipschitz bounds when both factors carry one.
StalkMap compose(const StalkMap& g, const StalkMap& f);
// x -> W x + offset with the exact Lipschitz bound spectral_norm(W).
StalkMap affine_map(const Space& domain, const Space& codomain, Matrix w,
                    Point offset);
// Map into the 1-dim reals; Lipschitz declared by the caller (exact for the
// shapes the problem files use).
StalkMap scalar_map(const Space& domain, std::function<double(const Point&)> f,
                    std::optional<double> lipschitz,
                    std::string provenance = "declared");

// Draws up to `count` points from the space: the whole feasible list when it
// is finite and small enough, a seeded subsample when it is larger, sampler
// draws for predicate sets, and bounds-uniform synthetic points otherwise.
std::vector<Point> sample_points(const Space& s, std::size_t count,
                                 std::uint64_t seed);

// Declared bound when present; otherwise the max difference quotient over
// seeded sample pairs. Throws DegenerateDomain when no pair has positive
// distance.
double estimate_lipschitz(const StalkMap& m, std::size_t pairs,
                          std::uint64_t seed);

struct LipschitzInfo {
  double value = 0.0;
  std::string provenance;  // "exact", "declared", "estimated", "exhaustive"
};

// Like estimate_lipschitz but says where the number came from. When the
// domain feasible set is finite the quotient scan is exhaustive over all
// pairs and the result is the true Lipschitz constant on that set.
LipschitzInfo lipschitz_info(const StalkMap& m, std::size_t pairs,
                             std::uint64_t seed);

}  // namespace netsheaf
