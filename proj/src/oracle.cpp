#include "hoppetree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hoppetree::oracle {

namespace {

void require_range(double theta, std::int64_t n, std::int64_t lo, std::int64_t hi,
                   const char* what) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument(std::string(what) + ": theta must be > 0");
  }
  if (n < lo || n > hi) {
    throw std::invalid_argument(std::string(what) + ": n out of range");
  }
}

std::int64_t stat_value(const TreeStats& st, Statistic s) {
  switch (s) {
    case Statistic::depth_last:
      return st.depth_last;
    case Statistic::height:
      return st.height;
    case Statistic::ipl:
      return st.ipl;
    case Statistic::leaves:
      return st.leaves;
    case Statistic::subtree2:
      return st.subtree2.value();
  }
  return 0;
}

TreeStats stats_of_parents(const std::vector<std::int32_t>& parent, std::int64_t n) {
  std::vector<std::int32_t> copy(parent.begin(), parent.begin() + n + 1);
  return tree_stats(HoppeTree::from_parents(n, std::move(copy)));
}

}  // namespace

void for_each_history(
    double theta, std::int64_t n,
    const std::function<void(const std::vector<std::int32_t>&, double)>& fn) {
  require_range(theta, n, 2, kMaxNodes, "for_each_history");

  std::vector<std::int32_t> parent(static_cast<std::size_t>(n + 1), 0);
  parent[2] = 1;

  // Depth-first over parent choices; inserting node k+1 into a k-node tree
  // picks the root with weight theta, any other node with weight 1.
  auto rec = [&](auto&& self, std::int64_t k, double prob) -> void {
    if (k == n) {
      fn(parent, prob);
      return;
    }
    const double total = theta + static_cast<double>(k - 1);
    for (std::int32_t c = 1; c <= k; ++c) {
      parent[static_cast<std::size_t>(k + 1)] = c;
      self(self, k + 1, prob * (c == 1 ? theta : 1.0) / total);
    }
  };
  rec(rec, 2, 1.0);
}

std::vector<HistoryAtom> enumerate(double theta, std::int64_t n) {
  std::vector<HistoryAtom> atoms;
  for_each_history(theta, n, [&](const std::vector<std::int32_t>& parent, double prob) {
    std::vector<std::int32_t> copy(parent.begin(), parent.begin() + n + 1);
    atoms.push_back({HoppeTree::from_parents(n, std::move(copy)), prob});
  });
  return atoms;
}

DiscreteDistribution exact_distribution(double theta, std::int64_t n, Statistic statistic) {
  std::map<std::int64_t, double> mass;
  for_each_history(theta, n, [&](const std::vector<std::int32_t>& parent, double prob) {
    mass[stat_value(stats_of_parents(parent, n), statistic)] += prob;
  });

  const std::int64_t lo = mass.begin()->first;
  const std::int64_t hi = mass.rbegin()->first;
  std::vector<double> pmf(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [value, p] : mass) {
    pmf[static_cast<std::size_t>(value - lo)] = p;
  }
  return DiscreteDistribution(lo, std::move(pmf));
}

double exact_moment(double theta, std::int64_t n, Statistic statistic, int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("exact_moment: order must be 1 or 2");
  }
  double acc = 0.0;
  for_each_history(theta, n, [&](const std::vector<std::int32_t>& parent, double prob) {
    const double v = static_cast<double>(stat_value(stats_of_parents(parent, n), statistic));
    acc += (order == 1 ? v : v * v) * prob;
  });
  return acc;
}

double exact_ancestor_probability(double theta, std::int64_t i, std::int64_t n) {
  if (i < 1 || i >= n) {
    throw std::invalid_argument("exact_ancestor_probability: requires 1 <= i < n");
  }
  double acc = 0.0;
  for_each_history(theta, n, [&](const std::vector<std::int32_t>& parent, double prob) {
    std::int64_t cur = n;
    while (cur > i) cur = parent[static_cast<std::size_t>(cur)];
    if (cur == i) acc += prob;
  });
  return acc;
}

double exact_mean_descendants(double theta, std::int64_t i, std::int64_t n) {
  if (i < 1 || i > n) {
    throw std::invalid_argument("exact_mean_descendants: requires 1 <= i <= n");
  }
  double acc = 0.0;
  for_each_history(theta, n, [&](const std::vector<std::int32_t>& parent, double prob) {
    std::int64_t count = 0;
    for (std::int64_t j = i + 1; j <= n; ++j) {
      std::int64_t cur = j;
      while (cur > i) cur = parent[static_cast<std::size_t>(cur)];
      count += (cur == i);
    }
    acc += static_cast<double>(count) * prob;
  });
  return acc;
}

MartingaleResiduals martingale_residuals(double theta, std::int64_t n) {
  require_range(theta, n, 3, 8, "martingale_residuals");

  // Z_k = I_k/(theta+k-1) - sum_{i=1}^{k-1} 1/(theta+i),
  // X_k = (theta+k-2)(L_k - ((k-1)/2 + theta(k-1)/(2(theta+k-2)))).
  auto z_of = [&](std::int64_t k, double ipl) {
    double harm = 0.0;
    for (std::int64_t i = 1; i <= k - 1; ++i) harm += 1.0 / (theta + static_cast<double>(i));
    return ipl / (theta + static_cast<double>(k) - 1.0) - harm;
  };
  auto x_of = [&](std::int64_t k, double leaves) {
    const double kk = static_cast<double>(k);
    const double center =
        (kk - 1.0) / 2.0 + theta * (kk - 1.0) / (2.0 * (theta + kk - 2.0));
    return (theta + kk - 2.0) * (leaves - center);
  };

  MartingaleResiduals worst{0.0, 0.0};
  const double total = theta + static_cast<double>(n) - 2.0;

  for_each_history(theta, n - 1, [&](const std::vector<std::int32_t>& parent, double) {
    // Depths and leaf statuses of the prefix tree.
    std::vector<std::int32_t> depth(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> has_child(static_cast<std::size_t>(n), 0);
    double ipl = 0.0;
    for (std::int64_t i = 2; i <= n - 1; ++i) {
      const std::int32_t p = parent[static_cast<std::size_t>(i)];
      depth[static_cast<std::size_t>(i)] = depth[static_cast<std::size_t>(p)] + 1;
      has_child[static_cast<std::size_t>(p)] = 1;
      ipl += depth[static_cast<std::size_t>(i)];
    }
    double leaves = 0.0;
    for (std::int64_t i = 1; i <= n - 1; ++i) leaves += (has_child[static_cast<std::size_t>(i)] == 0);

    double ez = 0.0;
    double ex = 0.0;
    for (std::int64_t c = 1; c <= n - 1; ++c) {
      const double w = (c == 1 ? theta : 1.0) / total;
      const double ipl_next = ipl + depth[static_cast<std::size_t>(c)] + 1.0;
      const double leaves_next = leaves + (has_child[static_cast<std::size_t>(c)] ? 1.0 : 0.0);
      ez += w * z_of(n, ipl_next);
      ex += w * x_of(n, leaves_next);
    }
    worst.ipl_residual = std::max(worst.ipl_residual, std::abs(ez - z_of(n - 1, ipl)));
    worst.leaf_residual = std::max(worst.leaf_residual, std::abs(ex - x_of(n - 1, leaves)));
  });
  return worst;
}

double conditional_depth_residual(double theta, std::int64_t n) {
  require_range(theta, n, 3, 9, "conditional_depth_residual");
  const double total = theta + static_cast<double>(n) - 2.0;
  double worst = 0.0;
  for_each_history(theta, n - 1, [&](const std::vector<std::int32_t>& parent, double) {
    std::vector<std::int32_t> depth(static_cast<std::size_t>(n), 0);
    double ipl = 0.0;
    for (std::int64_t i = 2; i <= n - 1; ++i) {
      depth[static_cast<std::size_t>(i)] =
          depth[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])] + 1;
      ipl += depth[static_cast<std::size_t>(i)];
    }
    double ed = 0.0;
    for (std::int64_t c = 1; c <= n - 1; ++c) {
      ed += (c == 1 ? theta : 1.0) / total * (depth[static_cast<std::size_t>(c)] + 1.0);
    }
    worst = std::max(worst, std::abs(ed - (1.0 + ipl / total)));
  });
  return worst;
}

}  // namespace hoppetree::oracle
