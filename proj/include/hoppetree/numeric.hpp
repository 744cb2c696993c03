#pragma once

#include <cmath>
#include <cstddef>

namespace hoppetree {

// Neumaier-compensated summation. Accumulation order is fixed by the caller,
// which keeps every reduction reproducible across runs and worker counts.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <typename It>
double compensated_sum(It first, It last) {
  NeumaierSum acc;
  for (; first != last; ++first) acc.add(static_cast<double>(*first));
  return acc.value();
}

}  // namespace hoppetree
