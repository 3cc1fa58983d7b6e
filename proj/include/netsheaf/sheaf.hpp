// Sheaves of pseudometric spaces on finite posets: stalks per element,
// restriction maps along the order, assignments of points to elements, and
// the two quantities everything else is built from -- the consistency radius
// of an assignment and the distance between assignments. Morphisms carry a
// measured commutativity defect so approximate transformations (like
// thresholding) fit the same machinery as exact ones.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netsheaf/exec.hpp"
#include "netsheaf/poset.hpp"
#include "netsheaf/space.hpp"

namespace netsheaf {

class Sheaf {
 public:
  const Poset& base() const { return base_; }
  const Space& stalk(std::size_t i) const;
  const Space& stalk(const std::string& element) const;
  // Restriction along a strict related pair a < b. Reflexive restrictions are
  // identities and are not stored.
  const StalkMap& restriction(std::size_t a, std::size_t b) const;
  const StalkMap& restriction(const std::string& a, const std::string& b) const;
  // Strict (non-reflexive) closure pairs in ascending order; the reflexive
  // pairs of the full closure contribute exactly zero to every pair sum, so
  // iteration skips them.
  const std::vector<std::pair<std::size_t, std::size_t>>& strict_pairs() const {
    return strict_;
  }

 private:
  friend class SheafBuilder;
  Poset base_;
  std::vector<Space> stalks_;
  std::map<std::pair<std::size_t, std::size_t>, StalkMap> restr_;
  std::vector<std::pair<std::size_t, std::size_t>> strict_;
};

class SheafBuilder {
 public:
  explicit SheafBuilder(Poset base);

  SheafBuilder& set_stalk(const std::string& element, Space s);
  SheafBuilder& set_restriction(const std::string& from, const std::string& to,
                                StalkMap m);

  struct Checks {
    std::size_t samples = 16;     // per stalk, for the functoriality probe
    double tolerance = 1e-9;      // pointwise composition tolerance
    std::uint64_t seed = 0x5eedbeefULL;
    bool verify_functoriality = true;
  };

  // Completes missing strict-pair restrictions by composing along the order,
  // checks signatures, and (by default) verifies functoriality on sampled
  // points: every 2-step factorization of a pair must agree with the stored
  // map within tolerance. Throws MissingValue, SignatureMismatch,
  // FunctorialityError.
  Sheaf build(const Checks& checks) const;
  Sheaf build() const { return build(Checks{}); }

 private:
  Poset base_;
  std::map<std::string, Space> stalks_;
  std::map<std::pair<std::string, std::string>, StalkMap> restr_;
};

// Values attached to (some) elements of a sheaf's base. Helpers that need a
// total assignment say so.
struct Assignment {
  std::vector<std::optional<Point>> values;

  Assignment() = default;
  explicit Assignment(std::size_t n) : values(n) {}

  bool total() const;
  std::size_t set_count() const;
};

Assignment make_assignment(const Sheaf& s);
void set_value(const Sheaf& s, Assignment& a, const std::string& element,
               Point p);
const Point& get_value(const Sheaf& s, const Assignment& a,
                       const std::string& element);

// sqrt of the sum, over related pairs in the base closure, of the squared
// stalk distance between the assigned value upstairs and the restriction of
// the value downstairs. Zero exactly on global sections. Requires a total
// assignment (NotGlobal otherwise).
double consistency_radius(const Sheaf& s, const Assignment& a,
                          const ExecPolicy& exec = {});

// Same sum restricted to pairs whose endpoints both lie in `sub`. The
// assignment must cover `sub` (SupportMismatch).
double local_consistency_radius(const Sheaf& s, const Assignment& a,
                                const std::vector<std::string>& sub,
                                const ExecPolicy& exec = {});

// sqrt of the sum of squared stalk distances over the common support, which
// must be identical for both assignments (SupportMismatch).
double assignment_distance(const Sheaf& s, const Assignment& a,
                           const Assignment& b);

// True when every restriction of a total assignment matches within tol.
bool is_global_section(const Sheaf& s, const Assignment& a, double tol = 1e-9);

// Morphism into `target`: a monotone base map from the target base into the
// source base and one component map per target element, from the source stalk
// over the mapped element into the target stalk. defect_bound records how far
// the components are from commuting with the restrictions.
struct SheafMorphism {
  std::shared_ptr<const Sheaf> source;
  std::shared_ptr<const Sheaf> target;
  OrderMap base_map;                 // target element -> source element
  std::vector<StalkMap> components;  // indexed by target element
  double defect_bound = 0.0;
};

struct MorphismChecks {
  std::size_t samples = 32;  // per source stalk when not exhaustive
  std::uint64_t seed = 0x60a7ULL;
  ExecPolicy exec;
};

// Builds and validates: base map monotone, component signatures line up, and
// the measured defect does not exceed `declared_defect` when one is given
// (DefectExceeded). Without a declared bound the measured defect is stored.
SheafMorphism make_morphism(std::shared_ptr<const Sheaf> source,
                            std::shared_ptr<const Sheaf> target,
                            OrderMap base_map,
                            std::map<std::string, StalkMap> components,
                            std::optional<double> declared_defect = {},
                            const MorphismChecks& checks = {});

// b[x] = component_x(a[base_map(x)]). The input must cover the image of the
// base map (SupportMismatch); the result is total on the target.
Assignment apply_morphism(const SheafMorphism& m, const Assignment& a);

// Max commutativity gap over strict target pairs and sampled source points
// (exhaustive over finite feasible sets up to 65536 points).
double morphism_defect(const SheafMorphism& m, std::size_t samples = 32,
                       std::uint64_t seed = 0xdefec7ULL,
                       const ExecPolicy& exec = {});

// Max Lipschitz bound across the morphism's components (exact/declared where
// available, exhaustive pair scan on finite feasible stalks otherwise).
LipschitzInfo component_lipschitz_bound(const SheafMorphism& m,
                                        std::size_t pairs = 64,
                                        std::uint64_t seed = 0x11bULL);

// (consistency radius of a, (1 + K) * distance(section, a)). The first is
// bounded by the second when K dominates the restriction Lipschitz constants;
// `section` must be a global section at 1e-9 (NotASection).
std::pair<double, double> section_bound_check(const Sheaf& s,
                                              const Assignment& section,
                                              const Assignment& a, double K,
                                              const ExecPolicy& exec = {});

// (consistency radius of m(a), K * consistency radius of a + C * eps) with
// C^2 = number of related pairs (reflexive included) in the target base.
std::pair<double, double> morphism_bound_check(const SheafMorphism& m,
                                               const Assignment& a, double K,
                                               double eps,
                                               const ExecPolicy& exec = {});

}  // namespace netsheaf
