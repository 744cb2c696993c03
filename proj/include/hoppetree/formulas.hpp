#pragma once

#include <cstdint>

#include "hoppetree/distribution.hpp"

namespace hoppetree::formulas {

// Largest n accepted by the O(n^2) depth pmf dynamic program.
inline constexpr std::int64_t kDepthPmfMaxNodes = 50'000;
// Largest n for the node-2 subtree pmf (log-space products).
inline constexpr std::int64_t kSubtreePmfMaxNodes = 10'000;

// E[D_n] = 1 + sum_{i=1}^{n-2} 1/(theta+i) and the matching Bernoulli-sum
// variance. Requires n >= 2.
MomentReport depth_moments(double theta, std::int64_t n);

// Exact law of D_n: Poisson-binomial over success probabilities 1/(theta+i),
// i = 1..n-2, shifted by 1.
DiscreteDistribution depth_pmf_exact(double theta, std::int64_t n);

// Exact total variation distance between D_n and Poisson(E[D_n]).
double depth_poisson_tv(double theta, std::int64_t n);

// E[L_n] = (n-1)/2 + theta(n-1)/(2(theta+n-2)). Requires n >= 2.
double leaf_mean_exact(double theta, std::int64_t n);

// Var(L_n) via the exact second-moment recursion of the leaf martingale.
double leaf_var_exact(double theta, std::int64_t n);

// Concentration bound 2 exp(-6 t^2 / (n + theta + 1)), t > 0.
double leaf_tail_bound(double theta, std::int64_t n, double t);

// E[I_n] = (theta+n-1) sum_{i=1}^{n-1} 1/(theta+i). n >= 1.
double ipl_mean_exact(double theta, std::int64_t n);

// Leading coefficient of Var(I_n)/n^2: 2/(theta+1) - trigamma(theta+1).
double ipl_var_coefficient(double theta);

// Exact law of N_n, the size of the subtree rooted at node 2; support 1..n-1.
DiscreteDistribution subtree_pmf_exact(double theta, std::int64_t n);

// Bound 3(theta+1)eps on P(N_n <= eps n), eps in (0,1).
double small_subtree_bound(double theta, double eps);

struct AncestorStats {
  double probability;           // P(node i is an ancestor of node n)
  double expected_descendants;  // E[xi_{i,n-1}] in the (n-1)-node tree
};

// Requires i >= 2 and n > i.
AncestorStats ancestor_stats(double theta, std::int64_t i, std::int64_t n);

// Center of the admissible height band: e ln n - (3/2) ln ln n. Requires
// n >= 3; callers supply the slack constant.
double height_band(std::int64_t n);

}  // namespace hoppetree::formulas
