// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops of the estimator. Every kernel has a scalar
// reference implementation and, where the target supports it, an AVX2
// variant selected at runtime. Variants perform the same IEEE operations in
// the same order (no FMA), so their results are bitwise identical.
#pragma once

#include <cstddef>
#include <string_view>

namespace lse::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// Best instruction set supported by this build and CPU.
Isa detect_isa();

/// The instruction set used by `active()`. Initialized from the LSE_ISA
/// environment variable ("scalar" or "avx2") when set, else `detect_isa()`.
Isa active_isa();

/// Overrides the active instruction set. Throws UnsupportedError when the
/// CPU or build lacks it.
void set_active_isa(Isa isa);

bool isa_available(Isa isa);

struct KernelTable {
  /// out[i] = multilinear blend of the 2^dim `values` at the local point
  /// (t[0][i], ..., t[dim-1][i]). Vertex numbering: bit k selects the upper
  /// side of axis k. Axes are reduced in order 0, 1, ... with
  /// a * (1 - t) + b * t.
  void (*multilinear_eval)(int dim, const double* values, const double* const* t, std::size_t n, double* out);

  /// Number of i with (a[i] <= 0) != (b[i] <= 0).
  std::size_t (*count_sign_mismatch)(const double* a, const double* b, std::size_t n);

  /// out[i] = origin + scale * u[i].
  void (*affine_map)(const double* u, std::size_t n, double origin, double scale, double* out);

  /// Shifted and scaled Styblinski-Tang function
  /// sum_k (x^4 - 16 x^2 + 5 x) / 122 + 1 over `dim` coordinate arrays.
  void (*styblinski_tang)(int dim, const double* const* x, std::size_t n, double* out);
};

const KernelTable& table(Isa isa);
inline const KernelTable& active() { return table(active_isa()); }

namespace scalar {
void multilinear_eval(int dim, const double* values, const double* const* t, std::size_t n, double* out);
std::size_t count_sign_mismatch(const double* a, const double* b, std::size_t n);
void affine_map(const double* u, std::size_t n, double origin, double scale, double* out);
void styblinski_tang(int dim, const double* const* x, std::size_t n, double* out);

/// Single-point multilinear blend; the reference every other path matches.
double multilinear_point(int dim, const double* values, const double* t);
}  // namespace scalar

#if defined(LSE_HAVE_AVX2_KERNELS)
namespace avx2 {
void multilinear_eval(int dim, const double* values, const double* const* t, std::size_t n, double* out);
std::size_t count_sign_mismatch(const double* a, const double* b, std::size_t n);
void affine_map(const double* u, std::size_t n, double origin, double scale, double* out);
void styblinski_tang(int dim, const double* const* x, std::size_t n, double* out);
}  // namespace avx2
#endif

}  // namespace lse::kernels
