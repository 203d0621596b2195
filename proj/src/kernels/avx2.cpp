// SPDX-License-Identifier: Apache-2.0
//
// Compiled with -mavx2 -mno-fma; only reached after a runtime CPU check.
#include "lse/kernels/kernels.hpp"

#if defined(LSE_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <array>

#include "lse/grid.hpp"

namespace lse::kernels::avx2 {

void multilinear_eval(int dim, const double* values, const double* const* t, std::size_t n, double* out) {
  const int nv = 1 << dim;
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d w[1 << kMaxDim];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < nv; ++j) w[j] = _mm256_set1_pd(values[j]);
    for (int k = 0, m = nv; k < dim; ++k) {
      m >>= 1;
      const __m256d tk = _mm256_loadu_pd(t[k] + i);
      const __m256d sk = _mm256_sub_pd(one, tk);
      for (int j = 0; j < m; ++j) {
        w[j] = _mm256_add_pd(_mm256_mul_pd(w[2 * j], sk), _mm256_mul_pd(w[2 * j + 1], tk));
      }
    }
    _mm256_storeu_pd(out + i, w[0]);
  }
  // Clean upper state before any SSE code (libm, scalar tail) runs.
  _mm256_zeroupper();
  if (i < n) {
    std::array<const double*, kMaxDim> tail;
    for (int k = 0; k < dim; ++k) tail[k] = t[k] + i;
    scalar::multilinear_eval(dim, values, tail.data(), n - i, out + i);
  }
}

std::size_t count_sign_mismatch(const double* a, const double* b, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ma = _mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_LE_OQ);
    const __m256d mb = _mm256_cmp_pd(_mm256_loadu_pd(b + i), zero, _CMP_LE_OQ);
    const int bits = _mm256_movemask_pd(_mm256_xor_pd(ma, mb));
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
  }
  _mm256_zeroupper();
  return count + scalar::count_sign_mismatch(a + i, b + i, n - i);
}

void affine_map(const double* u, std::size_t n, double origin, double scale, double* out) {
  const __m256d o = _mm256_set1_pd(origin);
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(o, _mm256_mul_pd(s, _mm256_loadu_pd(u + i))));
  }
  _mm256_zeroupper();
  scalar::affine_map(u + i, n - i, origin, scale, out + i);
}

void styblinski_tang(int dim, const double* const* x, std::size_t n, double* out) {
  const __m256d c16 = _mm256_set1_pd(16.0);
  const __m256d c5 = _mm256_set1_pd(5.0);
  const __m256d c122 = _mm256_set1_pd(122.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sum = _mm256_setzero_pd();
    for (int k = 0; k < dim; ++k) {
      const __m256d v = _mm256_loadu_pd(x[k] + i);
      const __m256d v2 = _mm256_mul_pd(v, v);
      const __m256d quartic = _mm256_sub_pd(_mm256_mul_pd(v2, v2), _mm256_mul_pd(c16, v2));
      sum = _mm256_add_pd(sum, _mm256_add_pd(quartic, _mm256_mul_pd(c5, v)));
    }
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_div_pd(sum, c122), one));
  }
  _mm256_zeroupper();
  if (i < n) {
    std::array<const double*, kMaxDim> tail;
    for (int k = 0; k < dim; ++k) tail[k] = x[k] + i;
    scalar::styblinski_tang(dim, tail.data(), n - i, out + i);
  }
}

}  // namespace lse::kernels::avx2

#endif
