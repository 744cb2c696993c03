#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hoppetree {

enum class Statistic { depth_last, height, ipl, leaves, subtree2 };

std::string_view statistic_name(Statistic s);
Statistic statistic_from_name(std::string_view name);

// Distinguishes exact closed forms from asymptotic expansions so callers
// never compare an asymptotic value against an exact oracle with a tight
// tolerance.
enum class ValueKind { exact, asymptotic };

struct MomentReport {
  Statistic statistic;
  double theta;
  std::int64_t n;
  double mean;
  double variance;
  ValueKind kind;
};

// Exact pmf over consecutive integers starting at `offset`.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::int64_t offset, std::vector<double> pmf);

  std::int64_t offset() const { return offset_; }
  std::int64_t max_support() const {
    return offset_ + static_cast<std::int64_t>(pmf_.size()) - 1;
  }
  std::span<const double> pmf() const { return pmf_; }

  double prob(std::int64_t k) const;
  double mass() const;
  double mean() const;
  double variance() const;

  // Throws if any entry is negative or |mass - 1| > tol.
  void check_normalized(double tol) const;

 private:
  std::int64_t offset_;
  std::vector<double> pmf_;
};

// Half the L1 distance between two pmfs.
double total_variation(const DiscreteDistribution& a, const DiscreteDistribution& b);

}  // namespace hoppetree
