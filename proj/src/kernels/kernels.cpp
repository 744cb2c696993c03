// Scalar reference kernels and the runtime dispatcher.
//
// Compiled with -ffp-contract=off: the scalar expressions below must round
// exactly like the mul/add instruction sequences in the vector variants.

#include "hoppetree/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string_view>

namespace hoppetree::kernels {

namespace detail {

void pb_convolve_step_scalar(double* pmf, std::size_t len, double p) {
  const double q = 1.0 - p;
  pmf[len] = pmf[len - 1] * p;
  for (std::size_t k = len - 1; k >= 1; --k) {
    pmf[k] = pmf[k] * q + pmf[k - 1] * p;
  }
  pmf[0] *= q;
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double bins[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    bins[i & 3] += std::abs(a[i] - b[i]);
  }
  return (bins[0] + bins[1]) + (bins[2] + bins[3]);
}

void standardize_scalar(const std::int64_t* x, std::size_t n, double center,
                        double inv_scale, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (static_cast<double>(x[i]) - center) * inv_scale;
  }
}

}  // namespace detail

namespace {

struct KernelTable {
  void (*pb_convolve_step)(double*, std::size_t, double);
  double (*sum_abs_diff)(const double*, const double*, std::size_t);
  void (*standardize)(const std::int64_t*, std::size_t, double, double, double*);
};

constexpr KernelTable kScalarTable = {
    &detail::pb_convolve_step_scalar,
    &detail::sum_abs_diff_scalar,
    &detail::standardize_scalar,
};

bool cpu_has_avx2() {
#if defined(HOPPETREE_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

bool cpu_has_neon() {
#if defined(HOPPETREE_HAVE_NEON)
  return true;  // mandatory on aarch64
#else
  return false;
#endif
}

Isa resolve_isa() {
  if (const char* env = std::getenv("HOPPETREE_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && cpu_has_avx2()) return Isa::avx2;
    if (want == "neon" && cpu_has_neon()) return Isa::neon;
    // Unknown or unavailable request: fall through to auto-detection.
  }
  if (cpu_has_avx2()) return Isa::avx2;
  if (cpu_has_neon()) return Isa::neon;
  return Isa::scalar;
}

KernelTable resolve_table() {
  switch (resolve_isa()) {
#ifdef HOPPETREE_HAVE_AVX2
    case Isa::avx2:
      return {&detail::pb_convolve_step_avx2, &detail::sum_abs_diff_avx2,
              &detail::standardize_avx2};
#endif
#ifdef HOPPETREE_HAVE_NEON
    case Isa::neon:
      return {&detail::pb_convolve_step_neon, &detail::sum_abs_diff_neon,
              &detail::standardize_neon};
#endif
    default:
      return kScalarTable;
  }
}

const KernelTable& table() {
  static const KernelTable t = resolve_table();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
    default:
      return "scalar";
  }
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return cpu_has_avx2();
    case Isa::neon:
      return cpu_has_neon();
    default:
      return true;
  }
}

Isa active_isa() {
  static const Isa isa = resolve_isa();
  return isa;
}

void pb_convolve_step(double* pmf, std::size_t len, double p) {
  table().pb_convolve_step(pmf, len, p);
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return table().sum_abs_diff(a, b, n);
}

void standardize(const std::int64_t* x, std::size_t n, double center,
                 double inv_scale, double* out) {
  table().standardize(x, n, center, inv_scale, out);
}

}  // namespace hoppetree::kernels
