#pragma once

#include <cstdint>

namespace hoppetree::specfun {

// Digamma Psi(x) for x > 0: upward recurrence Psi(x+1) = Psi(x) + 1/x until
// x >= 10, then the asymptotic series through the x^-8 term. Absolute error
// <= 1e-12 on [1e-3, 1e6].
double digamma(double x);

// Trigamma Psi1(x) for x > 0: recurrence Psi1(x+1) = Psi1(x) - 1/x^2, then
// the asymptotic series through the x^-9 term.
double trigamma(double x);

// Sum_{i=1}^{m} (theta+i)^(-power), power in {1, 2}. Direct compensated
// summation up to m = 1e7; the digamma/trigamma difference form beyond.
double shifted_harmonic(double theta, std::int64_t m, int power);

}  // namespace hoppetree::specfun
