#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace hoppetree::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// Instruction set used by the dispatched entry points below. Resolved once:
// best available unless the environment variable HOPPETREE_KERNELS
// (scalar|avx2|neon) forces a specific one.
Isa active_isa();

// Fold one Bernoulli(p) into the pmf held in pmf[0..len-1]; pmf[len] is
// written, so the buffer must have len+1 slots. In-place, descending.
void pb_convolve_step(double* pmf, std::size_t len, double p);

// Sum of |a[i]-b[i]| accumulated into four interleaved bins (bin i&3),
// combined as (b0+b1)+(b2+b3). The bin layout makes the scalar and vector
// variants produce identical bits.
double sum_abs_diff(const double* a, const double* b, std::size_t n);

// out[i] = (double(x[i]) - center) * inv_scale. Requires |x[i]| < 2^51.
void standardize(const std::int64_t* x, std::size_t n, double center,
                 double inv_scale, double* out);

// Per-ISA entry points, exposed so equivalence tests can pin variants
// against each other regardless of what the dispatcher picked.
namespace detail {

void pb_convolve_step_scalar(double* pmf, std::size_t len, double p);
double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n);
void standardize_scalar(const std::int64_t* x, std::size_t n, double center,
                        double inv_scale, double* out);

#ifdef HOPPETREE_HAVE_AVX2
void pb_convolve_step_avx2(double* pmf, std::size_t len, double p);
double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n);
void standardize_avx2(const std::int64_t* x, std::size_t n, double center,
                      double inv_scale, double* out);
#endif

#ifdef HOPPETREE_HAVE_NEON
void pb_convolve_step_neon(double* pmf, std::size_t len, double p);
double sum_abs_diff_neon(const double* a, const double* b, std::size_t n);
void standardize_neon(const std::int64_t* x, std::size_t n, double center,
                      double inv_scale, double* out);
#endif

}  // namespace detail

}  // namespace hoppetree::kernels
