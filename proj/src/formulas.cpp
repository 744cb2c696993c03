#include "hoppetree/formulas.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hoppetree/kernels.hpp"
#include "hoppetree/numeric.hpp"
#include "hoppetree/specfun.hpp"

namespace hoppetree::formulas {

namespace {

void require_theta(double theta) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("formulas: theta must be > 0");
  }
}

void require_n_at_least(std::int64_t n, std::int64_t lo, const char* what) {
  if (n < lo) {
    throw std::invalid_argument(std::string(what) + ": n out of range");
  }
}

}  // namespace

MomentReport depth_moments(double theta, std::int64_t n) {
  require_theta(theta);
  require_n_at_least(n, 2, "depth_moments");
  const double s1 = specfun::shifted_harmonic(theta, n - 2, 1);
  const double s2 = specfun::shifted_harmonic(theta, n - 2, 2);
  return {Statistic::depth_last, theta, n, 1.0 + s1, s1 - s2, ValueKind::exact};
}

DiscreteDistribution depth_pmf_exact(double theta, std::int64_t n) {
  require_theta(theta);
  require_n_at_least(n, 2, "depth_pmf_exact");
  if (n > kDepthPmfMaxNodes) {
    throw std::invalid_argument("depth_pmf_exact: n exceeds the dynamic-program budget");
  }
  // pmf of sum of Bernoulli(1/(theta+i)), i = 1..n-2; support offset 1.
  std::vector<double> pmf(static_cast<std::size_t>(n - 1), 0.0);
  pmf[0] = 1.0;
  for (std::int64_t i = 1; i <= n - 2; ++i) {
    kernels::pb_convolve_step(pmf.data(), static_cast<std::size_t>(i),
                              1.0 / (theta + static_cast<double>(i)));
  }
  return DiscreteDistribution(1, std::move(pmf));
}

double depth_poisson_tv(double theta, std::int64_t n) {
  const DiscreteDistribution depth = depth_pmf_exact(theta, n);
  const double lambda = depth_moments(theta, n).mean;

  // Truncate the Poisson pmf where the discarded tail is < 1e-13.
  const std::int64_t cutoff =
      static_cast<std::int64_t>(lambda + 12.0 * std::sqrt(lambda) + 30.0);
  std::vector<double> poisson(static_cast<std::size_t>(cutoff + 1), 0.0);
  poisson[0] = std::exp(-lambda);
  for (std::int64_t k = 1; k <= cutoff; ++k) {
    poisson[static_cast<std::size_t>(k)] =
        poisson[static_cast<std::size_t>(k - 1)] * lambda / static_cast<double>(k);
  }
  const double truncated_tail =
      std::max(0.0, 1.0 - compensated_sum(poisson.begin(), poisson.end()));

  const std::int64_t hi = std::max<std::int64_t>(depth.max_support(), cutoff);
  std::vector<double> a(static_cast<std::size_t>(hi + 1), 0.0);
  std::vector<double> b(static_cast<std::size_t>(hi + 1), 0.0);
  for (std::int64_t k = depth.offset(); k <= depth.max_support(); ++k) {
    a[static_cast<std::size_t>(k)] = depth.prob(k);
  }
  for (std::int64_t k = 0; k <= cutoff; ++k) {
    b[static_cast<std::size_t>(k)] = poisson[static_cast<std::size_t>(k)];
  }
  return 0.5 * (kernels::sum_abs_diff(a.data(), b.data(), a.size()) + truncated_tail);
}

double leaf_mean_exact(double theta, std::int64_t n) {
  require_theta(theta);
  require_n_at_least(n, 2, "leaf_mean_exact");
  const double nn = static_cast<double>(n);
  return (nn - 1.0) / 2.0 + theta * (nn - 1.0) / (2.0 * (theta + nn - 2.0));
}

double leaf_var_exact(double theta, std::int64_t n) {
  require_theta(theta);
  require_n_at_least(n, 2, "leaf_var_exact");
  // Second moment of the leaf martingale X_k, advanced exactly:
  //   E[X_k^2] = a(a-2)/b^2 E[X_{k-1}^2] + a^2 Var(Y_k),
  // a = theta+k-2, b = theta+k-3, Y_k the new-leaf indicator.
  double ex2 = 0.0;  // X_2 = 0 deterministically
  for (std::int64_t k = 3; k <= n; ++k) {
    const double a = theta + static_cast<double>(k) - 2.0;
    const double b = theta + static_cast<double>(k) - 3.0;
    const double ey = 1.0 - leaf_mean_exact(theta, k - 1) / a;
    ex2 = a * (a - 2.0) / (b * b) * ex2 + a * a * ey * (1.0 - ey);
  }
  const double scale = theta + static_cast<double>(n) - 2.0;
  return ex2 / (scale * scale);
}

double leaf_tail_bound(double theta, std::int64_t n, double t) {
  require_theta(theta);
  require_n_at_least(n, 1, "leaf_tail_bound");
  if (!(t > 0.0)) {
    throw std::invalid_argument("leaf_tail_bound: t must be > 0");
  }
  return 2.0 * std::exp(-6.0 * t * t / (static_cast<double>(n) + theta + 1.0));
}

double ipl_mean_exact(double theta, std::int64_t n) {
  require_theta(theta);
  require_n_at_least(n, 1, "ipl_mean_exact");
  return (theta + static_cast<double>(n) - 1.0) *
         specfun::shifted_harmonic(theta, n - 1, 1);
}

double ipl_var_coefficient(double theta) {
  require_theta(theta);
  return 2.0 / (theta + 1.0) - specfun::trigamma(theta + 1.0);
}

DiscreteDistribution subtree_pmf_exact(double theta, std::int64_t n) {
  require_theta(theta);
  require_n_at_least(n, 2, "subtree_pmf_exact");
  if (n > kSubtreePmfMaxNodes) {
    throw std::invalid_argument("subtree_pmf_exact: n exceeds the log-space budget");
  }
  // P(N_n = k) = C(n-2,k-1) (k-1)! theta(theta+1)...(theta+n-k-2)
  //              / ((theta+1)...(theta+n-2)), empty products = 1.
  const double nn = static_cast<double>(n);
  const double log_denom = std::lgamma(theta + nn - 1.0) - std::lgamma(theta + 1.0);
  std::vector<double> pmf(static_cast<std::size_t>(n - 1));
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    const double kk = static_cast<double>(k);
    const double log_p = std::lgamma(nn - 1.0) - std::lgamma(nn - kk) +
                         std::lgamma(theta + nn - kk - 1.0) - std::lgamma(theta) -
                         log_denom;
    pmf[static_cast<std::size_t>(k - 1)] = std::exp(log_p);
  }
  return DiscreteDistribution(1, std::move(pmf));
}

double small_subtree_bound(double theta, double eps) {
  require_theta(theta);
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("small_subtree_bound: eps must lie in (0,1)");
  }
  return 3.0 * (theta + 1.0) * eps;
}

AncestorStats ancestor_stats(double theta, std::int64_t i, std::int64_t n) {
  require_theta(theta);
  if (i < 2 || n <= i) {
    throw std::invalid_argument("ancestor_stats: requires 2 <= i < n");
  }
  const double denom = theta + static_cast<double>(i) - 1.0;
  return {1.0 / denom, (theta + static_cast<double>(n) - 2.0) / denom - 1.0};
}

double height_band(std::int64_t n) {
  require_n_at_least(n, 3, "height_band");
  const double ln = std::log(static_cast<double>(n));
  return std::exp(1.0) * ln - 1.5 * std::log(ln);
}

}  // namespace hoppetree::formulas
