#include "netsheaf/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netsheaf/errors.hpp"

namespace netsheaf {

bool Space::matches(const Point& p) const {
  if (p.size() != signature.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (signature[i].tag == CoordTag::Boolean && p[i] != 0.0 && p[i] != 1.0)
      return false;
  return true;
}

void Space::require(const Point& p, const std::string& where) const {
  if (p.size() != signature.size())
    throw DimensionMismatch(where + ": point has " + std::to_string(p.size()) +
                            " coords, space has " +
                            std::to_string(signature.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    if (signature[i].tag == CoordTag::Boolean && p[i] != 0.0 && p[i] != 1.0)
      throw DimensionMismatch(where + ": boolean coordinate " +
                              std::to_string(i) + " is not 0/1");
}

double Space::distance(const Point& a, const Point& b) const {
  require(a, "distance lhs");
  require(b, "distance rhs");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Space Space::reals(std::size_t n, double lo, double hi) {
  Space s;
  s.signature.assign(n, CoordSpec{CoordTag::Real, lo, hi});
  return s;
}

Space Space::booleans(std::size_t n) {
  Space s;
  s.signature.assign(n, CoordSpec{CoordTag::Boolean, 0.0, 1.0});
  return s;
}

Space Space::trivial() { return Space{}; }

Space product(const std::vector<Space>& factors) {
  Space s;
  for (const auto& f : factors)
    s.signature.insert(s.signature.end(), f.signature.begin(),
                       f.signature.end());
  return s;
}

Point StalkMap::operator()(const Point& p) const {
  domain.require(p, "stalk map input");
  Point out = fn(p);
  codomain.require(out, "stalk map output");
  return out;
}

StalkMap identity_map(const Space& s) {
  StalkMap m;
  m.domain = s;
  m.codomain = s;
  m.fn = [](const Point& p) { return p; };
  m.lipschitz = 1.0;
  m.lipschitz_provenance = "exact";
  return m;
}

StalkMap projection(const Space& s, const std::vector<std::size_t>& keep) {
  for (std::size_t i : keep)
    if (i >= s.dim()) throw IndexOutOfRange("projection index out of range");
  StalkMap m;
  m.domain = s;
  for (std::size_t i : keep) m.codomain.signature.push_back(s.signature[i]);
  m.fn = [keep](const Point& p) {
    Point out;
    out.reserve(keep.size());
    for (std::size_t i : keep) out.push_back(p[i]);
    return out;
  };
  m.lipschitz = 1.0;
  m.lipschitz_provenance = "exact";
  return m;
}

StalkMap compose(const StalkMap& g, const StalkMap& f) {
  if (g.domain.dim() != f.codomain.dim())
    throw DimensionMismatch("compose: inner dimensions disagree");
  StalkMap m;
  m.domain = f.domain;
  m.codomain = g.codomain;
  auto ff = f.fn;
  auto gf = g.fn;
  m.fn = [ff, gf](const Point& p) { return gf(ff(p)); };
  if (f.lipschitz && g.lipschitz) {
    m.lipschitz = *f.lipschitz * *g.lipschitz;
    m.lipschitz_provenance =
        (f.lipschitz_provenance == "exact" && g.lipschitz_provenance == "exact")
            ? "exact"
            : "declared";
  }
  return m;
}

StalkMap affine_map(const Space& domain, const Space& codomain, Matrix w,
                    Point offset) {
  if (w.cols != domain.dim() || w.rows != codomain.dim() ||
      offset.size() != codomain.dim())
    throw DimensionMismatch("affine_map: shape mismatch");
  StalkMap m;
  m.domain = domain;
  m.codomain = codomain;
  m.lipschitz = spectral_norm(w);
  m.lipschitz_provenance = "exact";
  m.fn = [w = std::move(w), offset = std::move(offset)](const Point& p) {
    Point out = apply(w, p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i];
    return out;
  };
  return m;
}

StalkMap scalar_map(const Space& domain, std::function<double(const Point&)> f,
                    std::optional<double> lipschitz, std::string provenance) {
  StalkMap m;
  m.domain = domain;
  m.codomain = Space::reals(1);
  m.fn = [f = std::move(f)](const Point& p) { return Point{f(p)}; };
  m.lipschitz = lipschitz;
  m.lipschitz_provenance = lipschitz ? std::move(provenance) : "";
  return m;
}

std::vector<Point> sample_points(const Space& s, std::size_t count,
                                 std::uint64_t seed) {
  Rng rng(seed);
  if (s.feasible && s.feasible->finite()) {
    const auto& pts = *s.feasible->points;
    if (pts.size() <= count) return pts;
    // Seeded subsample without replacement, order-preserving.
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i : idx) out.push_back(pts[i]);
    return out;
  }
  if (s.feasible && s.feasible->sample) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(s.feasible->sample(rng));
    return out;
  }
  // Synthetic: bounds-uniform reals, fair-coin booleans.
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p(s.dim());
    for (std::size_t c = 0; c < s.dim(); ++c) {
      const auto& spec = s.signature[c];
      if (spec.tag == CoordTag::Boolean) {
        p[c] = (rng() & 1) ? 1.0 : 0.0;
      } else {
        std::uniform_real_distribution<double> u(spec.lo, spec.hi);
        p[c] = u(rng);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

LipschitzInfo quotient_scan(const StalkMap& m, std::size_t pairs,
                            std::uint64_t seed) {
  LipschitzInfo info;
  bool any = false;
  auto consider = [&](const Point& a, const Point& b) {
    const double dd = m.domain.distance(a, b);
    if (dd <= 1e-12) return;
    const double dc = m.codomain.distance(m(a), m(b));
    any = true;
    if (dc / dd > info.value) info.value = dc / dd;
  };
  if (m.domain.feasible && m.domain.feasible->finite() &&
      m.domain.feasible->points->size() <= 512) {
    const auto& pts = *m.domain.feasible->points;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) consider(pts[i], pts[j]);
    info.provenance = "exhaustive";
  } else {
    auto xs = sample_points(m.domain, 2 * pairs, seed);
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) consider(xs[i], xs[i + 1]);
    info.provenance = "estimated";
  }
  if (!any)
    throw DegenerateDomain("lipschitz scan found no pair at positive distance");
  return info;
}

}  // namespace

LipschitzInfo lipschitz_info(const StalkMap& m, std::size_t pairs,
                             std::uint64_t seed) {
  if (m.lipschitz) {
    return {*m.lipschitz, m.lipschitz_provenance.empty()
                              ? "declared"
                              : m.lipschitz_provenance};
  }
  return quotient_scan(m, pairs, seed);
}

double estimate_lipschitz(const StalkMap& m, std::size_t pairs,
                          std::uint64_t seed) {
  return lipschitz_info(m, pairs, seed).value;
}

}  // namespace netsheaf
