// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string>

#include "lse/error.hpp"
#include "lse/kernels/kernels.hpp"

namespace lse::kernels {

namespace {

constexpr KernelTable kScalarTable{&scalar::multilinear_eval, &scalar::count_sign_mismatch, &scalar::affine_map,
                                   &scalar::styblinski_tang};

#if defined(LSE_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{&avx2::multilinear_eval, &avx2::count_sign_mismatch, &avx2::affine_map,
                                 &avx2::styblinski_tang};
#endif

Isa initial_isa() {
  if (const char* env = std::getenv("LSE_ISA")) {
    const std::string v(env);
    if (v == "scalar") return Isa::kScalar;
    if (v == "avx2" && isa_available(Isa::kAvx2)) return Isa::kAvx2;
  }
  return detect_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(LSE_HAVE_AVX2_KERNELS)
  if (isa == Isa::kAvx2) return __builtin_cpu_supports("avx2");
#endif
  return false;
}

Isa detect_isa() { return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw UnsupportedError("kernel ISA " + std::string(isa_name(isa)) + " is not available");
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
#if defined(LSE_HAVE_AVX2_KERNELS)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

}  // namespace lse::kernels
