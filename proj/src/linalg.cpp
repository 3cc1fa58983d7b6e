#include "netsheaf/linalg.hpp"

#include <cmath>

#include "netsheaf/errors.hpp"

namespace netsheaf {

std::vector<double> apply(const Matrix& m, const std::vector<double>& x) {
  if (x.size() != m.cols) throw DimensionMismatch("matrix apply: size mismatch");
  std::vector<double> y(m.rows, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += m.at(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> apply_transpose(const Matrix& m,
                                    const std::vector<double>& x) {
  if (x.size() != m.rows)
    throw DimensionMismatch("matrix apply_transpose: size mismatch");
  std::vector<double> y(m.cols, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += m.at(r, c) * x[r];
  return y;
}

double spectral_norm(const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) return 0.0;
  // Power iteration on M^T M. The start vector mixes coordinates unevenly so
  // it is almost never orthogonal to the top singular direction.
  std::vector<double> v(m.cols);
  for (std::size_t i = 0; i < m.cols; ++i)
    v[i] = 1.0 + 0.37 * static_cast<double>(i % 7);
  double prev = 0.0;
  for (int round = 0; round < 200; ++round) {
    std::vector<double> w = apply_transpose(m, apply(m, v));
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;  // v landed in the kernel: M^T M v = 0
    for (double& x : w) x /= norm;
    v = std::move(w);
    // Rayleigh quotient of M^T M at the current (unit) vector.
    std::vector<double> mv = apply(m, v);
    double quot = 0.0;
    for (double x : mv) quot += x * x;
    if (std::abs(quot - prev) < 1e-12) return std::sqrt(quot);
    prev = quot;
  }
  return std::sqrt(prev);
}

}  // namespace netsheaf
