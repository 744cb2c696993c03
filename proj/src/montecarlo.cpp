#include "hoppetree/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hoppetree/kernels.hpp"
#include "hoppetree/numeric.hpp"

namespace hoppetree::mc {

int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::int64_t count, int workers,
                  const std::function<void(int, std::int64_t, std::int64_t)>& body) {
  if (workers <= 0) workers = default_workers();
  workers = static_cast<int>(std::min<std::int64_t>(workers, std::max<std::int64_t>(count, 1)));
  if (workers <= 1 || count <= 1) {
    body(0, 0, count);
    return;
  }
  const std::int64_t base = count / workers;
  const std::int64_t rem = count % workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  std::int64_t lo = base + (rem > 0 ? 1 : 0);
  for (int w = 1; w < workers; ++w) {
    const std::int64_t span = base + (w < rem ? 1 : 0);
    pool.emplace_back(body, w, lo, lo + span);
    lo += span;
  }
  body(0, 0, base + (rem > 0 ? 1 : 0));
  for (auto& t : pool) t.join();
}

StatMoments moments_of(const std::vector<std::int64_t>& samples) {
  StatMoments m;
  m.count = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return m;
  m.min = *std::min_element(samples.begin(), samples.end());
  m.max = *std::max_element(samples.begin(), samples.end());
  m.mean = compensated_sum(samples.begin(), samples.end()) / static_cast<double>(m.count);
  if (m.count > 1) {
    NeumaierSum sq;
    for (const std::int64_t x : samples) {
      const double d = static_cast<double>(x) - m.mean;
      sq.add(d * d);
    }
    m.variance = sq.value() / static_cast<double>(m.count - 1);
  }
  return m;
}

SampleSummary run_experiment(const ExperimentConfig& config) {
  if (config.replicates < 1) {
    throw std::invalid_argument("run_experiment: replicates must be >= 1");
  }
  if (config.statistics.empty()) {
    throw std::invalid_argument("run_experiment: no statistic selected");
  }
  TreeParams params{config.theta, config.n, config.seed, config.theta_zero_extremal};
  validate(params);
  for (const Statistic s : config.statistics) {
    if (s == Statistic::subtree2 && config.n < 2) {
      throw std::invalid_argument("run_experiment: subtree statistic needs n >= 2");
    }
  }

  SampleSummary out;
  out.config = config;
  for (const Statistic s : config.statistics) {
    out.samples[s].resize(static_cast<std::size_t>(config.replicates));
  }

  const std::int64_t r_total = config.replicates;
  parallel_for(r_total, config.workers, [&](int, std::int64_t lo, std::int64_t hi) {
    GrowWorkspace ws;
    TreeParams local = params;
    for (std::int64_t r = lo; r < hi; ++r) {
      Xoshiro256pp rng = Xoshiro256pp::for_stream(config.seed, static_cast<std::uint64_t>(r));
      const TreeStats st = simulate_tree_stats(local, rng, ws);
      for (const Statistic s : config.statistics) {
        std::int64_t v = 0;
        switch (s) {
          case Statistic::depth_last:
            v = st.depth_last;
            break;
          case Statistic::height:
            v = st.height;
            break;
          case Statistic::ipl:
            v = st.ipl;
            break;
          case Statistic::leaves:
            v = st.leaves;
            break;
          case Statistic::subtree2:
            v = st.subtree2.value();
            break;
        }
        out.samples[s][static_cast<std::size_t>(r)] = v;
      }
    }
  });

  for (const Statistic s : config.statistics) {
    out.moments[s] = moments_of(out.samples[s]);
  }
  return out;
}

DiscreteDistribution empirical_distribution(const std::vector<std::int64_t>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("empirical_distribution: no samples");
  }
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const std::int64_t lo = *lo_it;
  std::vector<double> pmf(static_cast<std::size_t>(*hi_it - lo + 1), 0.0);
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const std::int64_t x : samples) {
    pmf[static_cast<std::size_t>(x - lo)] += w;
  }
  return DiscreteDistribution(lo, std::move(pmf));
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0x1.6a09e667f3bcdp-1);  // 1/sqrt(2)
}

double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf) {
  const std::size_t m = sorted.size();
  if (m < 100) {
    throw std::invalid_argument("ks_statistic: needs at least 100 samples");
  }
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("ks_statistic: samples must be sorted ascending");
  }
  double d = 0.0;
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, f - static_cast<double>(i) * inv);
    d = std::max(d, static_cast<double>(i + 1) * inv - f);
  }
  return d;
}

double two_sample_ks(const std::vector<double>& sorted_a,
                     const std::vector<double>& sorted_b) {
  if (sorted_a.empty() || sorted_b.empty()) {
    throw std::invalid_argument("two_sample_ks: empty sample");
  }
  if (!std::is_sorted(sorted_a.begin(), sorted_a.end()) ||
      !std::is_sorted(sorted_b.begin(), sorted_b.end())) {
    throw std::invalid_argument("two_sample_ks: samples must be sorted ascending");
  }
  const double na = static_cast<double>(sorted_a.size());
  const double nb = static_cast<double>(sorted_b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sorted_a.size() && j < sorted_b.size()) {
    const double x = std::min(sorted_a[i], sorted_b[j]);
    while (i < sorted_a.size() && sorted_a[i] <= x) ++i;
    while (j < sorted_b.size() && sorted_b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

TailCheckReport tail_check(const std::vector<std::int64_t>& samples, double center,
                           const std::function<double(double)>& bound,
                           const std::vector<double>& t_grid) {
  if (samples.empty()) {
    throw std::invalid_argument("tail_check: no samples");
  }
  const double r = static_cast<double>(samples.size());
  TailCheckReport report;
  report.pass = true;
  report.worst_margin = -std::numeric_limits<double>::infinity();
  for (const double t : t_grid) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("tail_check: t grid must be positive");
    }
    std::int64_t hits = 0;
    for (const std::int64_t x : samples) {
      hits += (std::abs(static_cast<double>(x) - center) >= t);
    }
    const double freq = static_cast<double>(hits) / r;
    const double se = std::sqrt(freq * (1.0 - freq) / r);
    const double b = bound(t);
    const double margin = freq - (b + 3.0 * se);
    report.rows.push_back({t, freq, b, se, margin <= 0.0});
    report.pass = report.pass && margin <= 0.0;
    report.worst_margin = std::max(report.worst_margin, margin);
  }
  return report;
}

DominanceReport dominance_check(const std::vector<std::int64_t>& lo_theta_samples,
                                const std::vector<std::int64_t>& hi_theta_samples) {
  if (lo_theta_samples.empty() || hi_theta_samples.empty()) {
    throw std::invalid_argument("dominance_check: empty sample");
  }
  std::vector<std::int64_t> lo = lo_theta_samples;
  std::vector<std::int64_t> hi = hi_theta_samples;
  std::sort(lo.begin(), lo.end());
  std::sort(hi.begin(), hi.end());

  const double nlo = static_cast<double>(lo.size());
  const double nhi = static_cast<double>(hi.size());
  double min_margin = std::numeric_limits<double>::infinity();

  // Evaluate both ECDFs at every support point of either sample.
  std::size_t i = 0, j = 0;
  while (i < lo.size() || j < hi.size()) {
    std::int64_t x;
    if (i >= lo.size()) {
      x = hi[j];
    } else if (j >= hi.size()) {
      x = lo[i];
    } else {
      x = std::min(lo[i], hi[j]);
    }
    while (i < lo.size() && lo[i] <= x) ++i;
    while (j < hi.size() && hi[j] <= x) ++j;
    min_margin = std::min(min_margin,
                          static_cast<double>(j) / nhi - static_cast<double>(i) / nlo);
  }

  const double tol = 2.0 * std::sqrt(1.0 / std::min(nlo, nhi));
  return {min_margin, tol, min_margin >= -tol};
}

std::vector<double> height_variance_probe(double theta,
                                          const std::vector<std::int64_t>& n_grid,
                                          std::int64_t replicates, std::uint64_t seed,
                                          int workers) {
  std::vector<double> variances;
  variances.reserve(n_grid.size());
  std::uint64_t salt = 0;
  for (const std::int64_t n : n_grid) {
    ExperimentConfig cfg;
    cfg.theta = theta;
    cfg.n = n;
    cfg.replicates = replicates;
    cfg.seed = seed + salt++;
    cfg.statistics = {Statistic::height};
    cfg.workers = workers;
    variances.push_back(run_experiment(cfg).moments[Statistic::height].variance);
  }
  return variances;
}

std::vector<double> standardized_sorted(const std::vector<std::int64_t>& samples,
                                        double center, double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("standardized_sorted: scale must be > 0");
  }
  std::vector<double> out(samples.size());
  kernels::standardize(samples.data(), samples.size(), center, 1.0 / scale, out.data());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sorted_doubles(const std::vector<std::int64_t>& samples, double scale) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = static_cast<double>(samples[i]) * scale;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hoppetree::mc
