#include "hoppetree/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "hoppetree/numeric.hpp"

namespace hoppetree::specfun {

namespace {

constexpr double kShiftThreshold = 10.0;
constexpr std::int64_t kDirectSumLimit = 10'000'000;

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("digamma: argument must be positive");
  }
  double acc = 0.0;
  while (x < kShiftThreshold) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("trigamma: argument must be positive");
  }
  double acc = 0.0;
  while (x < kShiftThreshold) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * inv2 *
      (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0))));
  return acc + inv + 0.5 * inv2 + series;
}

double shifted_harmonic(double theta, std::int64_t m, int power) {
  if (!(theta > 0.0)) {
    throw std::domain_error("shifted_harmonic: theta must be positive");
  }
  if (m < 0) {
    throw std::invalid_argument("shifted_harmonic: m must be >= 0");
  }
  if (power != 1 && power != 2) {
    throw std::invalid_argument("shifted_harmonic: power must be 1 or 2");
  }
  if (m == 0) return 0.0;

  if (m > kDirectSumLimit) {
    const double upper = theta + static_cast<double>(m) + 1.0;
    return power == 1 ? digamma(upper) - digamma(theta + 1.0)
                      : trigamma(theta + 1.0) - trigamma(upper);
  }

  // Smallest terms first.
  NeumaierSum sum;
  for (std::int64_t i = m; i >= 1; --i) {
    const double t = 1.0 / (theta + static_cast<double>(i));
    sum.add(power == 1 ? t : t * t);
  }
  return sum.value();
}

}  // namespace hoppetree::specfun
