#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hoppetree/core.hpp"
#include "hoppetree/distribution.hpp"

namespace hoppetree::oracle {

// Hard cap: (n-1)! histories.
inline constexpr std::int64_t kMaxNodes = 10;

struct HistoryAtom {
  HoppeTree tree;
  double probability;
};

// Visits every insertion history of an n-node tree exactly once with its
// probability under the growth dynamic. parent[i] is the parent of node i.
void for_each_history(
    double theta, std::int64_t n,
    const std::function<void(const std::vector<std::int32_t>& parent, double prob)>& fn);

std::vector<HistoryAtom> enumerate(double theta, std::int64_t n);

DiscreteDistribution exact_distribution(double theta, std::int64_t n, Statistic statistic);

double exact_moment(double theta, std::int64_t n, Statistic statistic, int order);

// Exact P(node i is an ancestor of node n) by enumeration.
double exact_ancestor_probability(double theta, std::int64_t i, std::int64_t n);

// Exact E[# descendants of node i] in an n-node tree.
double exact_mean_descendants(double theta, std::int64_t i, std::int64_t n);

struct MartingaleResiduals {
  double ipl_residual;
  double leaf_residual;
};

// Max over length-(n-1) prefixes of |E[Z_n | prefix] - Z_{n-1}| for the
// scaled path-length martingale Z and the leaf martingale X. 3 <= n <= 8.
MartingaleResiduals martingale_residuals(double theta, std::int64_t n);

// Max over length-(n-1) prefixes of
// |E[D_n | prefix] - (1 + I_{n-1}/(theta+n-2))|.
double conditional_depth_residual(double theta, std::int64_t n);

}  // namespace hoppetree::oracle
