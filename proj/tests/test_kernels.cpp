#include <doctest.h>

#include <cstring>
#include <vector>

#include "hoppetree/kernels.hpp"
#include "hoppetree/rng.hpp"

using namespace hoppetree;

namespace {

std::vector<double> random_vector(std::size_t n, Xoshiro256pp& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.next_double() * 2.0 - 1.0;
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("dispatcher reports an available isa") {
  const kernels::Isa isa = kernels::active_isa();
  CHECK(kernels::isa_available(isa));
  CHECK(!kernels::isa_name(isa).empty());
}

TEST_CASE("pb_convolve_step scalar matches a direct convolution") {
  // One Bernoulli(p) folded into {0.25, 0.75}.
  std::vector<double> pmf = {0.25, 0.75, 0.0};
  kernels::detail::pb_convolve_step_scalar(pmf.data(), 2, 0.5);
  CHECK(pmf[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(pmf[1] == doctest::Approx(0.25 * 0.5 + 0.75 * 0.5).epsilon(1e-15));
  CHECK(pmf[2] == doctest::Approx(0.375).epsilon(1e-15));
}

#ifdef HOPPETREE_HAVE_AVX2
TEST_CASE("avx2 variants are bit-identical to scalar") {
  if (!kernels::isa_available(kernels::Isa::avx2)) {
    return;  // host without AVX2; dispatcher already falls back
  }
  Xoshiro256pp rng(20240915);

  for (const std::size_t len : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 65u, 1000u}) {
    // pb_convolve_step
    std::vector<double> a = random_vector(len + 1, rng);
    for (auto& x : a) x = std::abs(x);
    std::vector<double> b = a;
    const double p = rng.next_double();
    kernels::detail::pb_convolve_step_scalar(a.data(), len, p);
    kernels::detail::pb_convolve_step_avx2(b.data(), len, p);
    CHECK(bit_equal(a, b));

    // sum_abs_diff
    const std::vector<double> u = random_vector(len, rng);
    const std::vector<double> v = random_vector(len, rng);
    const double s = kernels::detail::sum_abs_diff_scalar(u.data(), v.data(), len);
    const double t = kernels::detail::sum_abs_diff_avx2(u.data(), v.data(), len);
    CHECK(std::memcmp(&s, &t, sizeof(double)) == 0);

    // standardize
    std::vector<std::int64_t> xs(len);
    for (auto& x : xs) {
      x = static_cast<std::int64_t>(rng.next_below(2000000)) - 1000000;
    }
    std::vector<double> o1(len), o2(len);
    kernels::detail::standardize_scalar(xs.data(), len, 3.25, 0.125, o1.data());
    kernels::detail::standardize_avx2(xs.data(), len, 3.25, 0.125, o2.data());
    CHECK(bit_equal(o1, o2));
  }
}
#endif

TEST_CASE("sum_abs_diff handles empty and small inputs") {
  const double a[4] = {1.0, 2.0, 3.0, 4.0};
  const double b[4] = {0.5, 2.5, 3.0, 5.0};
  CHECK(kernels::sum_abs_diff(a, b, 0) == 0.0);
  CHECK(kernels::sum_abs_diff(a, b, 4) == doctest::Approx(2.0).epsilon(1e-15));
}
