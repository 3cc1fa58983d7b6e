// Minimal dense matrix helper. Problems here have at most a handful of
// vertices, so this stays a flat row-major buffer with the two products the
// library needs plus a power-iteration spectral norm.
#pragma once

#include <cstddef>
#include <vector>

namespace netsheaf {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// y = M x  (y_r = sum_c M[r][c] x_c)
std::vector<double> apply(const Matrix& m, const std::vector<double>& x);

// y = M^T x (y_c = sum_r M[r][c] x_r)
std::vector<double> apply_transpose(const Matrix& m,
                                    const std::vector<double>& x);

// Largest singular value via power iteration on M^T M (200 rounds or until
// the Rayleigh quotient moves less than 1e-12). Deterministic start vector.
double spectral_norm(const Matrix& m);

}  // namespace netsheaf
