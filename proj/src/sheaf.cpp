#include "netsheaf/sheaf.hpp"

#include <algorithm>
#include <cmath>

#include "netsheaf/errors.hpp"

namespace netsheaf {

const Space& Sheaf::stalk(std::size_t i) const {
  if (i >= stalks_.size()) throw IndexOutOfRange("stalk index out of range");
  return stalks_[i];
}

const Space& Sheaf::stalk(const std::string& element) const {
  return stalks_[base_.index_of(element)];
}

const StalkMap& Sheaf::restriction(std::size_t a, std::size_t b) const {
  auto it = restr_.find({a, b});
  if (it == restr_.end())
    throw UnknownElement("no restriction stored for pair " + base_.name(a) +
                         " <= " + base_.name(b));
  return it->second;
}

const StalkMap& Sheaf::restriction(const std::string& a,
                                   const std::string& b) const {
  return restriction(base_.index_of(a), base_.index_of(b));
}

SheafBuilder::SheafBuilder(Poset base) : base_(std::move(base)) {}

SheafBuilder& SheafBuilder::set_stalk(const std::string& element, Space s) {
  base_.index_of(element);  // validates
  stalks_[element] = std::move(s);
  return *this;
}

SheafBuilder& SheafBuilder::set_restriction(const std::string& from,
                                            const std::string& to,
                                            StalkMap m) {
  if (!base_.leq(from, to) || from == to)
    throw UnknownElement("restriction pair is not a strict relation: " + from +
                         " <= " + to);
  restr_[{from, to}] = std::move(m);
  return *this;
}

Sheaf SheafBuilder::build(const Checks& checks) const {
  Sheaf s;
  s.base_ = base_;
  const std::size_t n = base_.size();
  s.stalks_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = stalks_.find(base_.name(i));
    if (it == stalks_.end())
      throw MissingValue("no stalk set for element " + base_.name(i));
    s.stalks_[i] = it->second;
  }

  for (const auto& [a, b] : base_.pairs())
    if (a != b) s.strict_.emplace_back(a, b);

  for (const auto& [key, m] : restr_) {
    const std::size_t a = base_.index_of(key.first);
    const std::size_t b = base_.index_of(key.second);
    s.restr_[{a, b}] = m;
  }

  // Complete missing strict pairs by composing along intermediate elements.
  // Repeats until a full pass adds nothing, so longer chains fill in after
  // their sub-chains.
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [a, b] : s.strict_) {
      if (s.restr_.count({a, b})) continue;
      for (std::size_t m = 0; m < n; ++m) {
        if (m == a || m == b) continue;
        if (!base_.leq(a, m) || !base_.leq(m, b)) continue;
        auto lo = s.restr_.find({a, m});
        auto hi = s.restr_.find({m, b});
        if (lo == s.restr_.end() || hi == s.restr_.end()) continue;
        s.restr_[{a, b}] = compose(hi->second, lo->second);
        progress = true;
        break;
      }
    }
  }

  for (const auto& [a, b] : s.strict_) {
    auto it = s.restr_.find({a, b});
    if (it == s.restr_.end())
      throw MissingValue("no restriction (and no composable path) for " +
                         base_.name(a) + " <= " + base_.name(b));
    const StalkMap& m = it->second;
    if (m.domain.dim() != s.stalks_[a].dim() ||
        m.codomain.dim() != s.stalks_[b].dim())
      throw SignatureMismatch("restriction " + base_.name(a) + " <= " +
                              base_.name(b) + " does not match its stalks");
  }

  if (checks.verify_functoriality) {
    for (const auto& [a, b] : s.strict_) {
      for (std::size_t m = 0; m < n; ++m) {
        if (m == a || m == b) continue;
        if (!base_.leq(a, m) || !base_.leq(m, b)) continue;
        const StalkMap& direct = s.restr_.at({a, b});
        const StalkMap& lo = s.restr_.at({a, m});
        const StalkMap& hi = s.restr_.at({m, b});
        auto pts = sample_points(s.stalks_[a], checks.samples,
                                 checks.seed + 0x9e3779b9ULL * a + b);
        for (const auto& p : pts) {
          const double gap = s.stalks_[b].distance(hi(lo(p)), direct(p));
          if (gap > checks.tolerance)
            throw FunctorialityError(
                "restrictions fail to compose through " + base_.name(m) +
                " on " + base_.name(a) + " <= " + base_.name(b) + " (gap " +
                std::to_string(gap) + ")");
        }
      }
    }
  }
  return s;
}

bool Assignment::total() const {
  for (const auto& v : values)
    if (!v) return false;
  return true;
}

std::size_t Assignment::set_count() const {
  std::size_t n = 0;
  for (const auto& v : values)
    if (v) ++n;
  return n;
}

Assignment make_assignment(const Sheaf& s) {
  return Assignment(s.base().size());
}

void set_value(const Sheaf& s, Assignment& a, const std::string& element,
               Point p) {
  const std::size_t i = s.base().index_of(element);
  if (a.values.size() != s.base().size())
    throw SupportMismatch("assignment not sized for this sheaf");
  s.stalk(i).require(p, "assignment value at " + element);
  a.values[i] = std::move(p);
}

const Point& get_value(const Sheaf& s, const Assignment& a,
                       const std::string& element) {
  const std::size_t i = s.base().index_of(element);
  if (a.values.size() != s.base().size() || !a.values[i])
    throw SupportMismatch("assignment has no value at " + element);
  return *a.values[i];
}

namespace {

void require_sized(const Sheaf& s, const Assignment& a, const char* where) {
  if (a.values.size() != s.base().size())
    throw SupportMismatch(std::string(where) +
                          ": assignment not sized for this sheaf");
}

double pair_gap(const Sheaf& s, const Assignment& a, std::size_t x,
                std::size_t y) {
  const StalkMap& r = s.restriction(x, y);
  return s.stalk(y).distance(*a.values[y], r(*a.values[x]));
}

}  // namespace

double consistency_radius(const Sheaf& s, const Assignment& a,
                          const ExecPolicy& exec) {
  require_sized(s, a, "consistency_radius");
  if (!a.total())
    throw NotGlobal("consistency_radius needs a value on every element");
  const auto& pairs = s.strict_pairs();
  const double sq = sum_terms(
      pairs.size(),
      [&](std::size_t i) {
        const double g = pair_gap(s, a, pairs[i].first, pairs[i].second);
        return g * g;
      },
      exec);
  return std::sqrt(sq);
}

double local_consistency_radius(const Sheaf& s, const Assignment& a,
                                const std::vector<std::string>& sub,
                                const ExecPolicy& exec) {
  require_sized(s, a, "local_consistency_radius");
  std::vector<char> in(s.base().size(), 0);
  for (const auto& e : sub) {
    const std::size_t i = s.base().index_of(e);
    if (!a.values[i])
      throw SupportMismatch("local assignment has no value at " + e);
    in[i] = 1;
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [x, y] : s.strict_pairs())
    if (in[x] && in[y]) pairs.emplace_back(x, y);
  const double sq = sum_terms(
      pairs.size(),
      [&](std::size_t i) {
        const double g = pair_gap(s, a, pairs[i].first, pairs[i].second);
        return g * g;
      },
      exec);
  return std::sqrt(sq);
}

double assignment_distance(const Sheaf& s, const Assignment& a,
                           const Assignment& b) {
  require_sized(s, a, "assignment_distance");
  require_sized(s, b, "assignment_distance");
  double sq = 0.0;
  for (std::size_t i = 0; i < s.base().size(); ++i) {
    if (a.values[i].has_value() != b.values[i].has_value())
      throw SupportMismatch("assignments have different support at " +
                            s.base().name(i));
    if (!a.values[i]) continue;
    const double d = s.stalk(i).distance(*a.values[i], *b.values[i]);
    sq += d * d;
  }
  return std::sqrt(sq);
}

bool is_global_section(const Sheaf& s, const Assignment& a, double tol) {
  require_sized(s, a, "is_global_section");
  if (!a.total())
    throw NotGlobal("is_global_section needs a value on every element");
  for (const auto& [x, y] : s.strict_pairs())
    if (pair_gap(s, a, x, y) > tol) return false;
  return true;
}

SheafMorphism make_morphism(std::shared_ptr<const Sheaf> source,
                            std::shared_ptr<const Sheaf> target,
                            OrderMap base_map,
                            std::map<std::string, StalkMap> components,
                            std::optional<double> declared_defect,
                            const MorphismChecks& checks) {
  if (!source || !target) throw MissingValue("morphism needs both sheaves");
  SheafMorphism m;
  m.source = std::move(source);
  m.target = std::move(target);
  m.base_map = std::move(base_map);
  if (!is_order_preserving(m.target->base(), m.source->base(), m.base_map))
    throw FunctorialityError("morphism base map is not order preserving");

  const std::size_t n = m.target->base().size();
  m.components.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::string& name = m.target->base().name(x);
    auto it = components.find(name);
    if (it == components.end())
      throw MissingValue("morphism misses a component at " + name);
    const std::string& src = m.base_map.map.at(name);
    if (it->second.domain.dim() != m.source->stalk(src).dim() ||
        it->second.codomain.dim() != m.target->stalk(x).dim())
      throw SignatureMismatch("morphism component at " + name +
                              " does not match the stalks");
    m.components[x] = it->second;
  }

  const double measured = morphism_defect(m, checks.samples, checks.seed,
                                          checks.exec);
  if (declared_defect) {
    if (measured > *declared_defect + 1e-9)
      throw DefectExceeded("measured defect " + std::to_string(measured) +
                           " exceeds declared bound " +
                           std::to_string(*declared_defect));
    m.defect_bound = *declared_defect;
  } else {
    m.defect_bound = measured;
  }
  return m;
}

Assignment apply_morphism(const SheafMorphism& m, const Assignment& a) {
  if (a.values.size() != m.source->base().size())
    throw SupportMismatch("apply_morphism: input not sized for the source");
  Assignment b(m.target->base().size());
  for (std::size_t x = 0; x < b.values.size(); ++x) {
    const std::string& name = m.target->base().name(x);
    const std::size_t fx = m.source->base().index_of(m.base_map.map.at(name));
    if (!a.values[fx])
      throw SupportMismatch("apply_morphism: input has no value at " +
                            m.source->base().name(fx));
    b.values[x] = m.components[x](*a.values[fx]);
  }
  return b;
}

double morphism_defect(const SheafMorphism& m, std::size_t samples,
                       std::uint64_t seed, const ExecPolicy& exec) {
  const Sheaf& src = *m.source;
  const Sheaf& tgt = *m.target;
  double worst = 0.0;
  for (const auto& [x, y] : tgt.strict_pairs()) {
    const std::string& xn = tgt.base().name(x);
    const std::string& yn = tgt.base().name(y);
    const std::size_t fx = src.base().index_of(m.base_map.map.at(xn));
    const std::size_t fy = src.base().index_of(m.base_map.map.at(yn));
    const Space& dom = src.stalk(fx);
    std::vector<Point> pts;
    if (dom.feasible && dom.feasible->finite() &&
        dom.feasible->points->size() <= 65536) {
      pts = *dom.feasible->points;  // exhaustive
    } else {
      pts = sample_points(dom, samples, seed + 0x9e3779b9ULL * x + y);
    }
    const StalkMap& down = tgt.restriction(x, y);
    const StalkMap* across = (fx == fy) ? nullptr : &src.restriction(fx, fy);
    const double local = max_terms(
        pts.size(),
        [&](std::size_t i) {
          const Point& z = pts[i];
          const Point via_target = down(m.components[x](z));
          const Point via_source =
              m.components[y](across ? (*across)(z) : z);
          return tgt.stalk(y).distance(via_target, via_source);
        },
        exec);
    if (local > worst) worst = local;
  }
  return worst;
}

LipschitzInfo component_lipschitz_bound(const SheafMorphism& m,
                                        std::size_t pairs,
                                        std::uint64_t seed) {
  LipschitzInfo out{0.0, "exact"};
  auto rank = [](const std::string& p) {
    if (p == "exact") return 0;
    if (p == "declared") return 1;
    if (p == "exhaustive") return 2;
    return 3;  // estimated
  };
  for (std::size_t x = 0; x < m.components.size(); ++x) {
    LipschitzInfo li = lipschitz_info(m.components[x], pairs, seed + x);
    if (li.value > out.value) out.value = li.value;
    if (rank(li.provenance) > rank(out.provenance)) out.provenance = li.provenance;
  }
  return out;
}

std::pair<double, double> section_bound_check(const Sheaf& s,
                                              const Assignment& section,
                                              const Assignment& a, double K,
                                              const ExecPolicy& exec) {
  if (!is_global_section(s, section, 1e-9))
    throw NotASection("section_bound_check: reference is not a global section");
  const double lhs = consistency_radius(s, a, exec);
  const double rhs = (1.0 + K) * assignment_distance(s, section, a);
  return {lhs, rhs};
}

std::pair<double, double> morphism_bound_check(const SheafMorphism& m,
                                               const Assignment& a, double K,
                                               double eps,
                                               const ExecPolicy& exec) {
  const Assignment b = apply_morphism(m, a);
  // C counts every related pair of the target base, reflexive ones included.
  const double C =
      std::sqrt(static_cast<double>(m.target->base().pairs().size()));
  const double lhs = consistency_radius(*m.target, b, exec);
  const double rhs = K * consistency_radius(*m.source, a, exec) + C * eps;
  return {lhs, rhs};
}

}  // namespace netsheaf
