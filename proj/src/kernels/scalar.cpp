// SPDX-License-Identifier: Apache-2.0
#include <array>

#include "lse/grid.hpp"
#include "lse/kernels/kernels.hpp"

namespace lse::kernels::scalar {

double multilinear_point(int dim, const double* values, const double* t) {
  std::array<double, (1 << kMaxDim)> w;
  const int n = 1 << dim;
  for (int j = 0; j < n; ++j) w[j] = values[j];
  for (int k = 0, m = n; k < dim; ++k) {
    m >>= 1;
    const double tk = t[k];
    const double sk = 1.0 - tk;
    for (int j = 0; j < m; ++j) w[j] = w[2 * j] * sk + w[2 * j + 1] * tk;
  }
  return w[0];
}

void multilinear_eval(int dim, const double* values, const double* const* t, std::size_t n, double* out) {
  std::array<double, kMaxDim> p;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) p[k] = t[k][i];
    out[i] = multilinear_point(dim, values, p.data());
  }
}

std::size_t count_sign_mismatch(const double* a, const double* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += (a[i] <= 0.0) != (b[i] <= 0.0);
  return count;
}

void affine_map(const double* u, std::size_t n, double origin, double scale, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = origin + scale * u[i];
}

void styblinski_tang(int dim, const double* const* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double v = x[k][i];
      const double v2 = v * v;
      sum = sum + ((v2 * v2 - 16.0 * v2) + 5.0 * v);
    }
    out[i] = sum / 122.0 + 1.0;
  }
}

}  // namespace lse::kernels::scalar
