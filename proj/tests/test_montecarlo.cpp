#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hoppetree/formulas.hpp"
#include "hoppetree/montecarlo.hpp"

using namespace hoppetree;
namespace f = hoppetree::formulas;

namespace {

mc::ExperimentConfig config(double theta, std::int64_t n, std::int64_t r,
                            std::uint64_t seed, std::vector<Statistic> stats,
                            int workers = 0) {
  mc::ExperimentConfig cfg;
  cfg.theta = theta;
  cfg.n = n;
  cfg.replicates = r;
  cfg.seed = seed;
  cfg.statistics = std::move(stats);
  cfg.workers = workers;
  return cfg;
}

}  // namespace

TEST_CASE("parallel_for covers the range once") {
  std::vector<std::atomic<int>> touched(1000);
  mc::parallel_for(1000, 4, [&](int, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) touched[static_cast<std::size_t>(i)] += 1;
  });
  for (const auto& t : touched) CHECK(t.load() == 1);
}

TEST_CASE("two-node experiment is deterministic in value") {
  const auto s = mc::run_experiment(config(1.0, 2, 100, 9, {Statistic::depth_last}));
  const mc::StatMoments& m = s.moments.at(Statistic::depth_last);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == 0.0);
  CHECK(m.min == 1);
  CHECK(m.max == 1);
}

TEST_CASE("experiments reproduce bit-identically across runs and workers") {
  const auto cfg1 = config(2.0, 500, 1000, 4242,
                           {Statistic::depth_last, Statistic::ipl, Statistic::subtree2}, 1);
  auto cfg3 = cfg1;
  cfg3.workers = 3;
  const auto a = mc::run_experiment(cfg1);
  const auto b = mc::run_experiment(cfg1);
  const auto c = mc::run_experiment(cfg3);
  for (const auto& [stat, values] : a.samples) {
    CHECK(values == b.samples.at(stat));
    CHECK(values == c.samples.at(stat));
  }
}

TEST_CASE("estimator consistency against exact means") {
  struct Case {
    double theta;
    std::int64_t n;
  };
  for (const Case cs : {Case{1.0, 100}, Case{0.5, 400}, Case{2.0, 1000}}) {
    const std::int64_t r = 4000;
    const auto s = mc::run_experiment(config(
        cs.theta, cs.n, r, 77, {Statistic::depth_last, Statistic::leaves, Statistic::ipl}));

    const MomentReport dm = f::depth_moments(cs.theta, cs.n);
    const double d_se = std::sqrt(dm.variance / static_cast<double>(r));
    CHECK(std::abs(s.moments.at(Statistic::depth_last).mean - dm.mean) <= 4.0 * d_se);

    const double l_mean = f::leaf_mean_exact(cs.theta, cs.n);
    const double l_se =
        std::sqrt(f::leaf_var_exact(cs.theta, cs.n) / static_cast<double>(r));
    CHECK(std::abs(s.moments.at(Statistic::leaves).mean - l_mean) <= 4.0 * l_se);

    const double i_mean = f::ipl_mean_exact(cs.theta, cs.n);
    const double i_sd = std::sqrt(s.moments.at(Statistic::ipl).variance);
    const double i_se = i_sd / std::sqrt(static_cast<double>(r));
    CHECK(std::abs(s.moments.at(Statistic::ipl).mean - i_mean) <= 4.0 * i_se);
  }
}

TEST_CASE("subtree mean matches the exact pmf mean") {
  const std::int64_t n = 1000;
  const std::int64_t r = 4000;
  for (const double theta : {0.5, 2.0}) {
    const auto s = mc::run_experiment(config(theta, n, r, 123, {Statistic::subtree2}));
    const auto pmf = f::subtree_pmf_exact(theta, n);
    const double se = std::sqrt(pmf.variance() / static_cast<double>(r));
    CHECK(std::abs(s.moments.at(Statistic::subtree2).mean - pmf.mean()) <= 4.0 * se);
  }
}

TEST_CASE("height dominance between far-apart thetas is strict at the median") {
  const std::int64_t n = 1000;
  const std::int64_t r = 2000;
  const auto lo = mc::run_experiment(config(0.5, n, r, 555, {Statistic::height}));
  const auto hi = mc::run_experiment(config(5.0, n, r, 556, {Statistic::height}));
  auto median = [](std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const auto d = mc::dominance_check(lo.samples.at(Statistic::height),
                                     hi.samples.at(Statistic::height));
  CHECK(d.pass);
  CHECK(median(hi.samples.at(Statistic::height)) <
        median(lo.samples.at(Statistic::height)));
}

TEST_CASE("empirical depth pmf is close to the exact law in total variation") {
  const std::int64_t n = 50;
  const auto s = mc::run_experiment(config(1.0, n, 1000000, 99, {Statistic::depth_last}));
  const double tv = total_variation(mc::empirical_distribution(s.samples.at(Statistic::depth_last)),
                                    f::depth_pmf_exact(1.0, n));
  CHECK(tv <= 0.01);
}

TEST_CASE("subtree statistic requires n >= 2") {
  CHECK_THROWS_AS(mc::run_experiment(config(1.0, 1, 10, 1, {Statistic::subtree2})),
                  std::invalid_argument);
}

TEST_CASE("ks statistic at exact reference quantiles is tiny") {
  const std::size_t m = 1000;
  std::vector<double> samples(m);
  for (std::size_t i = 0; i < m; ++i) {
    // Quantiles (i+0.5)/m of the uniform law on [0,1].
    samples[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
  }
  const double d = mc::ks_statistic(samples, [](double x) { return x; });
  CHECK(d <= 0.5 / static_cast<double>(m) + 1e-12);
}

TEST_CASE("ks statistic detects a unit shift") {
  const std::size_t m = 10000;
  std::vector<double> samples(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    // Normal quantiles shifted by +1, via bisection on the CDF.
    double lo = -10.0, hi = 10.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (mc::standard_normal_cdf(mid) < u ? lo : hi) = mid;
    }
    samples[i] = 0.5 * (lo + hi) + 1.0;
  }
  CHECK(mc::ks_statistic(samples, mc::standard_normal_cdf) > 0.3);
}

TEST_CASE("ks statistic input validation") {
  std::vector<double> too_few(50, 0.0);
  CHECK_THROWS_AS(mc::ks_statistic(too_few, [](double) { return 0.5; }),
                  std::invalid_argument);
  std::vector<double> unsorted(200, 0.0);
  unsorted[0] = 1.0;
  CHECK_THROWS_AS(mc::ks_statistic(unsorted, [](double) { return 0.5; }),
                  std::invalid_argument);
}

TEST_CASE("two-sample ks on identical samples is zero") {
  std::vector<double> a(500);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i) * 0.01;
  CHECK(mc::two_sample_ks(a, a) == 0.0);
}

TEST_CASE("tail check passes on degenerate samples") {
  const std::vector<std::int64_t> samples(1000, 5);
  const auto report = mc::tail_check(samples, 5.0, [](double) { return 0.001; },
                                     {1.0, 2.0, 3.0});
  CHECK(report.pass);
  CHECK(report.worst_margin <= 0.0);
}

TEST_CASE("tail check fails when the spread is too large for the bound") {
  // Alternating +-40 around 0: every |x| >= 40, variance far above n/12.
  std::vector<std::int64_t> samples(2000);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = (i % 2 == 0) ? 40 : -40;
  const std::int64_t n = 1920;
  const auto report = mc::tail_check(
      samples, 0.0,
      [&](double t) { return f::leaf_tail_bound(1.0, n, t); }, {40.0});
  CHECK(!report.pass);
}

TEST_CASE("dominance check on identical samples passes") {
  std::vector<std::int64_t> s(1000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::int64_t>(i % 17);
  const auto d = mc::dominance_check(s, s);
  CHECK(d.pass);
  CHECK(d.min_margin == 0.0);
}

TEST_CASE("dominance check fails on reversed inputs") {
  // hi-sample values strictly larger: passing them as the high-theta side
  // (which must be stochastically smaller) fails.
  std::vector<std::int64_t> small(1000), large(1000);
  for (std::size_t i = 0; i < 1000; ++i) {
    small[i] = static_cast<std::int64_t>(i % 10);
    large[i] = static_cast<std::int64_t>(i % 10) + 5;
  }
  CHECK(mc::dominance_check(large, small).pass);
  CHECK(!mc::dominance_check(small, large).pass);
}

TEST_CASE("height variance probe small cases") {
  const auto vars = mc::height_variance_probe(1.0, {2, 3}, 10000, 314);
  CHECK(vars[0] == 0.0);  // H_2 = 1 deterministically
  CHECK(vars[1] == doctest::Approx(0.25).epsilon(0.15));  // H_3 uniform on {1,2}
}

TEST_CASE("standardized_sorted matches a direct transform") {
  const std::vector<std::int64_t> xs = {4, 1, 3, 2};
  const auto out = mc::standardized_sorted(xs, 2.0, 2.0);
  CHECK(out.size() == 4);
  CHECK(out[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(out[3] == doctest::Approx(1.0).epsilon(1e-15));
}
