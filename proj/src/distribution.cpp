#include "hoppetree/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hoppetree/kernels.hpp"
#include "hoppetree/numeric.hpp"

namespace hoppetree {

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::depth_last:
      return "depth";
    case Statistic::height:
      return "height";
    case Statistic::ipl:
      return "ipl";
    case Statistic::leaves:
      return "leaves";
    case Statistic::subtree2:
      return "subtree";
  }
  return "?";
}

Statistic statistic_from_name(std::string_view name) {
  if (name == "depth") return Statistic::depth_last;
  if (name == "height") return Statistic::height;
  if (name == "ipl") return Statistic::ipl;
  if (name == "leaves") return Statistic::leaves;
  if (name == "subtree") return Statistic::subtree2;
  throw std::invalid_argument("unknown statistic: " + std::string(name));
}

DiscreteDistribution::DiscreteDistribution(std::int64_t offset, std::vector<double> pmf)
    : offset_(offset), pmf_(std::move(pmf)) {
  if (pmf_.empty()) {
    throw std::invalid_argument("DiscreteDistribution: empty pmf");
  }
}

double DiscreteDistribution::prob(std::int64_t k) const {
  const std::int64_t idx = k - offset_;
  if (idx < 0 || idx >= static_cast<std::int64_t>(pmf_.size())) return 0.0;
  return pmf_[static_cast<std::size_t>(idx)];
}

double DiscreteDistribution::mass() const {
  return compensated_sum(pmf_.begin(), pmf_.end());
}

double DiscreteDistribution::mean() const {
  NeumaierSum acc;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    acc.add(static_cast<double>(offset_ + static_cast<std::int64_t>(i)) * pmf_[i]);
  }
  return acc.value();
}

double DiscreteDistribution::variance() const {
  const double m = mean();
  NeumaierSum acc;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    const double d = static_cast<double>(offset_ + static_cast<std::int64_t>(i)) - m;
    acc.add(d * d * pmf_[i]);
  }
  return acc.value();
}

void DiscreteDistribution::check_normalized(double tol) const {
  for (const double p : pmf_) {
    if (p < 0.0 || !std::isfinite(p)) {
      throw std::runtime_error("DiscreteDistribution: negative or non-finite mass");
    }
  }
  const double m = mass();
  if (std::abs(m - 1.0) > tol) {
    throw std::runtime_error("DiscreteDistribution: mass " + std::to_string(m) +
                             " outside tolerance " + std::to_string(tol));
  }
}

double total_variation(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  const std::int64_t lo = std::min(a.offset(), b.offset());
  const std::int64_t hi = std::max(a.max_support(), b.max_support());
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);

  std::vector<double> pa(len, 0.0);
  std::vector<double> pb(len, 0.0);
  std::copy(a.pmf().begin(), a.pmf().end(), pa.begin() + (a.offset() - lo));
  std::copy(b.pmf().begin(), b.pmf().end(), pb.begin() + (b.offset() - lo));

  return 0.5 * kernels::sum_abs_diff(pa.data(), pb.data(), len);
}

}  // namespace hoppetree
