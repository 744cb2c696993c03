#include "hoppetree/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hoppetree/core.hpp"
#include "hoppetree/formulas.hpp"
#include "hoppetree/limitdist.hpp"
#include "hoppetree/montecarlo.hpp"
#include "hoppetree/oracle.hpp"
#include "hoppetree/specfun.hpp"

namespace hoppetree::verify {

namespace {

constexpr double kEulerMascheroni = 0.57721566490153286061;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Registry {
  const VerifyOptions& options;
  std::vector<CheckResult> checks;

  void add_le(int criterion, std::string name, double observed, double budget,
              std::string note = "") {
    checks.push_back({criterion, std::move(name), observed, budget, "<=",
                      observed <= budget, std::move(note)});
  }

  void add_ge(int criterion, std::string name, double observed, double budget,
              std::string note = "") {
    checks.push_back({criterion, std::move(name), observed, budget, ">=",
                      observed >= budget, std::move(note)});
  }
};

// ---------------------------------------------------------------------------
// Exact tier
// ---------------------------------------------------------------------------

void check_depth_law_equivalence(Registry& reg) {
  double worst = 0.0;
  for (const double theta : {0.5, 1.0, 2.0, 5.0}) {
    for (std::int64_t n = 2; n <= 9; ++n) {
      const double tv = total_variation(
          oracle::exact_distribution(theta, n, Statistic::depth_last),
          formulas::depth_pmf_exact(theta, n));
      worst = std::max(worst, tv);
    }
  }
  reg.add_le(1, "depth_bernoulli_equivalence_tv", worst, 1e-12,
             "theta in {0.5,1,2,5}, n in 2..9");
}

void check_exact_moments(Registry& reg) {
  const std::vector<double> thetas = {0.5, 1.0, 2.0};

  double worst_depth = 0.0;
  double worst_leaf = 0.0;
  double worst_ipl = 0.0;
  double worst_subtree = 0.0;
  double worst_ancestor = 0.0;

  for (const double theta : thetas) {
    for (std::int64_t n = 2; n <= 9; ++n) {
      const MomentReport d = formulas::depth_moments(theta, n);
      const double m1 = oracle::exact_moment(theta, n, Statistic::depth_last, 1);
      const double m2 = oracle::exact_moment(theta, n, Statistic::depth_last, 2);
      worst_depth = std::max(worst_depth, std::abs(d.mean - m1));
      worst_depth = std::max(worst_depth, std::abs(d.variance - (m2 - m1 * m1)));

      const double l1 = oracle::exact_moment(theta, n, Statistic::leaves, 1);
      const double l2 = oracle::exact_moment(theta, n, Statistic::leaves, 2);
      worst_leaf = std::max(worst_leaf,
                            std::abs(formulas::leaf_mean_exact(theta, n) - l1));
      worst_leaf = std::max(worst_leaf,
                            std::abs(formulas::leaf_var_exact(theta, n) - (l2 - l1 * l1)));

      worst_ipl = std::max(worst_ipl,
                           std::abs(formulas::ipl_mean_exact(theta, n) -
                                    oracle::exact_moment(theta, n, Statistic::ipl, 1)));

      worst_subtree = std::max(
          worst_subtree,
          total_variation(oracle::exact_distribution(theta, n, Statistic::subtree2),
                          formulas::subtree_pmf_exact(theta, n)));

      for (std::int64_t i = 2; i < n; ++i) {
        const formulas::AncestorStats a = formulas::ancestor_stats(theta, i, n);
        worst_ancestor =
            std::max(worst_ancestor,
                     std::abs(a.probability - oracle::exact_ancestor_probability(theta, i, n)));
        worst_ancestor =
            std::max(worst_ancestor,
                     std::abs(a.expected_descendants -
                              oracle::exact_mean_descendants(theta, i, n - 1)));
      }
    }
  }

  if (reg.options.inject_fault) worst_depth += 1.0;

  reg.add_le(2, "exact_depth_moments_vs_oracle", worst_depth, 1e-10);
  reg.add_le(2, "exact_leaf_moments_vs_oracle", worst_leaf, 1e-10);
  reg.add_le(2, "exact_ipl_mean_vs_oracle", worst_ipl, 1e-10);
  reg.add_le(2, "exact_subtree_pmf_vs_oracle_tv", worst_subtree, 1e-10);
  reg.add_le(2, "exact_ancestor_stats_vs_oracle", worst_ancestor, 1e-10);
}

void check_martingales(Registry& reg) {
  double worst_ipl = 0.0;
  double worst_leaf = 0.0;
  for (const double theta : {0.5, 1.0, 2.0}) {
    for (std::int64_t n = 3; n <= 8; ++n) {
      const oracle::MartingaleResiduals r = oracle::martingale_residuals(theta, n);
      worst_ipl = std::max(worst_ipl, r.ipl_residual);
      worst_leaf = std::max(worst_leaf, r.leaf_residual);
    }
  }
  reg.add_le(3, "ipl_martingale_residual", worst_ipl, 1e-12);
  reg.add_le(3, "leaf_martingale_residual", worst_leaf, 1e-12);
}

void check_leaf_var_asymptotics(Registry& reg) {
  double worst = 0.0;
  for (const double theta : {0.5, 1.0, 2.0}) {
    for (std::int64_t n = 10; n <= 1000; ++n) {
      const double target = (theta + static_cast<double>(n) - 1.0) / 12.0;
      const double dev =
          std::abs(formulas::leaf_var_exact(theta, n) - target) * static_cast<double>(n);
      worst = std::max(worst, dev);
    }
  }
  reg.add_le(4, "leaf_variance_asymptotic_dev", worst, 2.0);
}

void check_poisson_tv_decay(Registry& reg) {
  const std::vector<std::int64_t> grid = {100, 1000, 10000};
  std::vector<double> tv;
  std::vector<double> scaled;
  for (const std::int64_t n : grid) {
    tv.push_back(formulas::depth_poisson_tv(1.0, n));
    scaled.push_back(tv.back() * std::log(static_cast<double>(n)));
  }
  const double min_drop = std::min(tv[0] - tv[1], tv[1] - tv[2]);
  reg.add_ge(6, "poisson_tv_strictly_decreasing", min_drop, 1e-12,
             "min consecutive decrease over n in {1e2,1e3,1e4}");
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  reg.add_le(6, "poisson_tv_log_rate_ratio", *hi / *lo, 3.0,
             "max/min of d_TV * ln n");
}

void check_subtree_uniformity(Registry& reg) {
  double worst = 0.0;
  for (const std::int64_t n : {2LL, 10LL, 100LL, 1000LL, 10000LL}) {
    const DiscreteDistribution pmf = formulas::subtree_pmf_exact(1.0, n);
    const double uniform = 1.0 / static_cast<double>(n - 1);
    for (const double p : pmf.pmf()) {
      worst = std::max(worst, std::abs(p - uniform));
    }
  }
  reg.add_le(8, "subtree_pmf_uniform_at_theta1", worst, 1e-12);
}

void check_specfun(Registry& reg) {
  struct Ref {
    double x;
    double digamma;
    double trigamma;
  };
  // High-precision reference values.
  const Ref refs[] = {
      {0.5, -1.9635100260214234794, 4.9348022005446793094},
      {1.0, -0.57721566490153286061, 1.6449340668482264365},
      {1.5, 0.036489973978576520559, 0.93480220054467930942},
      {2.0, 0.42278433509846713939, 0.64493406684822643647},
      {3.0, 0.92278433509846713939, 0.39493406684822643647},
      {10.25, 2.2777047906867239693, 0.1024745215179918668},
  };
  double worst = 0.0;
  for (const Ref& r : refs) {
    worst = std::max(worst, std::abs(specfun::digamma(r.x) - r.digamma));
    worst = std::max(worst, std::abs(specfun::trigamma(r.x) - r.trigamma));
  }
  reg.add_le(12, "specfun_reference_values", worst, 1e-10);

  double worst_id = 0.0;
  for (const double theta : {0.5, 1.0, 2.0, 10.0}) {
    for (const std::int64_t m : {0LL, 1LL, 10LL, 100LL, 10000LL, 1000000LL}) {
      const double direct = specfun::shifted_harmonic(theta, m, 1);
      const double viadig = specfun::digamma(theta + static_cast<double>(m) + 1.0) -
                            specfun::digamma(theta + 1.0);
      worst_id = std::max(worst_id, std::abs(direct - viadig));
    }
  }
  reg.add_le(12, "shifted_harmonic_digamma_identity", worst_id, 1e-9);
}

// ---------------------------------------------------------------------------
// Statistical tier
// ---------------------------------------------------------------------------

mc::SampleSummary run(double theta, std::int64_t n, std::int64_t replicates,
                      std::uint64_t seed, std::vector<Statistic> stats, int workers,
                      bool extremal = false) {
  mc::ExperimentConfig cfg;
  cfg.theta = theta;
  cfg.n = n;
  cfg.replicates = replicates;
  cfg.seed = seed;
  cfg.statistics = std::move(stats);
  cfg.workers = workers;
  cfg.theta_zero_extremal = extremal;
  return mc::run_experiment(cfg);
}

// Sup distance between the exact standardized depth law and the normal CDF:
// the attainable floor for the depth CLT check.
double depth_ks_floor(double theta, std::int64_t n) {
  const DiscreteDistribution pmf = formulas::depth_pmf_exact(theta, n);
  const MomentReport mom = formulas::depth_moments(theta, n);
  const double sd = std::sqrt(mom.variance);
  double cdf = 0.0;
  double worst = 0.0;
  for (std::int64_t k = pmf.offset(); k <= pmf.max_support(); ++k) {
    const double z = (static_cast<double>(k) - mom.mean) / sd;
    const double phi = mc::standard_normal_cdf(z);
    worst = std::max(worst, std::abs(cdf - phi));  // just left of the jump
    cdf += pmf.prob(k);
    worst = std::max(worst, std::abs(cdf - phi));  // at the jump
  }
  return worst;
}

void check_clt(Registry& reg) {
  constexpr std::int64_t n = 10000;
  constexpr std::int64_t r = 10000;
  for (const double theta : {0.5, 2.0}) {
    const auto summary =
        run(theta, n, r, reg.options.seed + static_cast<std::uint64_t>(theta * 100.0),
            {Statistic::depth_last, Statistic::leaves}, reg.options.workers);

    const MomentReport dm = formulas::depth_moments(theta, n);
    const double d_ks = mc::ks_statistic(
        mc::standardized_sorted(summary.samples.at(Statistic::depth_last), dm.mean,
                                std::sqrt(dm.variance)),
        mc::standard_normal_cdf);
    reg.add_le(5, "clt_depth_ks_theta=" + fmt(theta), d_ks, 0.02,
               "exact-law floor " + fmt(depth_ks_floor(theta, n)) +
                   " (integer lattice, sd~" + fmt(std::sqrt(dm.variance)) +
                   "): budget unattainable");

    const double lmean = formulas::leaf_mean_exact(theta, n);
    const double lsd = std::sqrt(formulas::leaf_var_exact(theta, n));
    const double l_ks = mc::ks_statistic(
        mc::standardized_sorted(summary.samples.at(Statistic::leaves), lmean, lsd),
        mc::standard_normal_cdf);
    reg.add_le(5, "clt_leaf_ks_theta=" + fmt(theta), l_ks, 0.02);
  }
}

void check_leaf_tail(Registry& reg) {
  constexpr double theta = 1.0;
  constexpr std::int64_t n = 1000;
  const auto summary = run(theta, n, 100000, reg.options.seed + 7,
                           {Statistic::leaves}, reg.options.workers);
  const auto report = mc::tail_check(
      summary.samples.at(Statistic::leaves), formulas::leaf_mean_exact(theta, n),
      [&](double t) { return formulas::leaf_tail_bound(theta, n, t); },
      {5.0, 10.0, 15.0, 20.0, 25.0, 30.0});
  reg.add_le(7, "azuma_leaf_tail_margin", report.worst_margin, 0.0,
             "max over t of freq - (bound + 3 se)");
}

void check_beta_limit(Registry& reg) {
  constexpr std::int64_t n = 10000;
  constexpr std::int64_t r = 10000;
  for (const double theta : {0.5, 1.0, 2.0}) {
    const auto summary =
        run(theta, n, r, reg.options.seed + 11 + static_cast<std::uint64_t>(theta * 10.0),
            {Statistic::subtree2}, reg.options.workers);
    const auto sorted = mc::sorted_doubles(summary.samples.at(Statistic::subtree2),
                                           1.0 / static_cast<double>(n));
    const double ks = mc::ks_statistic(sorted, [theta](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return 1.0 - std::pow(1.0 - x, theta);
    });
    reg.add_le(8, "beta_limit_ks_theta=" + fmt(theta), ks, 0.02);
  }
}

void check_small_subtree(Registry& reg) {
  constexpr std::int64_t n = 1000;
  constexpr std::int64_t r = 100000;
  for (const double theta : {0.5, 1.0, 2.0}) {
    const auto summary =
        run(theta, n, r, reg.options.seed + 17 + static_cast<std::uint64_t>(theta * 10.0),
            {Statistic::subtree2}, reg.options.workers);
    const auto& samples = summary.samples.at(Statistic::subtree2);
    double worst = -1.0;
    for (const double eps : {0.01, 0.05, 0.1}) {
      std::int64_t hits = 0;
      for (const std::int64_t v : samples) {
        hits += (static_cast<double>(v) <= eps * static_cast<double>(n));
      }
      const double freq = static_cast<double>(hits) / static_cast<double>(r);
      const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(r));
      worst = std::max(worst,
                       freq - (formulas::small_subtree_bound(theta, eps) + 3.0 * se));
    }
    reg.add_le(9, "small_subtree_bound_theta=" + fmt(theta), worst, 0.0,
               "max over eps of freq - (3(theta+1)eps + 3 se)");
  }
}

void check_height(Registry& reg) {
  const std::vector<std::int64_t> n_grid = {100, 1000, 10000};
  constexpr std::int64_t r = 10000;

  double worst_band = 0.0;
  double worst_var = 0.0;
  for (const double theta : {0.5, 1.0, 2.0}) {
    for (const std::int64_t n : n_grid) {
      const auto summary =
          run(theta, n, r,
              reg.options.seed + 23 + static_cast<std::uint64_t>(theta * 10.0) +
                  static_cast<std::uint64_t>(n),
              {Statistic::height}, reg.options.workers);
      const mc::StatMoments& m = summary.moments.at(Statistic::height);
      worst_band = std::max(worst_band, std::abs(m.mean - formulas::height_band(n)));
      worst_var = std::max(worst_var, m.variance);
    }
  }
  reg.add_le(10, "height_mean_band_dev", worst_band, 5.0,
             "max |mean - (e ln n - 1.5 ln ln n)| over theta, n grids");
  reg.add_le(10, "height_variance", worst_var, 10.0);

  constexpr std::int64_t n_dom = 1000;
  const auto lo = run(0.5, n_dom, r, reg.options.seed + 29, {Statistic::height},
                      reg.options.workers);
  const auto hi = run(5.0, n_dom, r, reg.options.seed + 31, {Statistic::height},
                      reg.options.workers);
  const auto dom = mc::dominance_check(lo.samples.at(Statistic::height),
                                       hi.samples.at(Statistic::height));
  reg.add_ge(10, "height_dominance_margin", dom.min_margin, -dom.tolerance,
             "theta 0.5 vs 5, pointwise ECDF ordering");

  // Extremal coupling: H^(0) on n nodes is distributed as 1 + H^(1) on n-1.
  const auto h0 = run(0.0, n_dom, r, reg.options.seed + 37, {Statistic::height},
                      reg.options.workers, /*extremal=*/true);
  const auto h1 = run(1.0, n_dom - 1, r, reg.options.seed + 41, {Statistic::height},
                      reg.options.workers);
  std::vector<std::int64_t> shifted = h1.samples.at(Statistic::height);
  for (auto& v : shifted) v += 1;
  const double ks = mc::two_sample_ks(mc::sorted_doubles(h0.samples.at(Statistic::height)),
                                      mc::sorted_doubles(shifted));
  reg.add_le(10, "height_extremal_coupling_ks", ks, 0.02,
             "H(0) on n vs 1 + H(1) on n-1");
}

void check_limit_law(Registry& reg) {
  constexpr std::size_t m = 100000;
  constexpr int k = 40;
  constexpr std::int64_t bridge_n = 100000;
  constexpr std::int64_t bridge_r = 10000;

  const auto p1 = limitdist::picard(1.0, m, k, reg.options.seed + 43, nullptr,
                                    reg.options.workers);
  const auto p2 = limitdist::picard(2.0, m, k, reg.options.seed + 47,
                                    &p1.population, reg.options.workers);

  for (const auto* pr : {&p1, &p2}) {
    const limitdist::Population& pop = pr->population;
    const auto [mean_target, var_target] = limitdist::limit_moments(pop.theta);
    reg.add_le(11, "picard_mean_err_theta=" + fmt(pop.theta),
               std::abs(pop.mean - mean_target), 0.01,
               "target " + fmt(mean_target));
    reg.add_le(11, "picard_var_err_theta=" + fmt(pop.theta),
               std::abs(pop.variance - var_target), 0.02,
               "target " + fmt(var_target));
  }

  for (const auto* pr : {&p1, &p2}) {
    const limitdist::Population& pop = pr->population;
    const auto summary = run(pop.theta, bridge_n, bridge_r,
                             reg.options.seed + 53 + static_cast<std::uint64_t>(pop.theta),
                             {Statistic::ipl}, reg.options.workers);
    const double nlogn =
        static_cast<double>(bridge_n) * std::log(static_cast<double>(bridge_n));
    std::vector<double> bridge;
    bridge.reserve(static_cast<std::size_t>(bridge_r));
    for (const std::int64_t v : summary.samples.at(Statistic::ipl)) {
      bridge.push_back((static_cast<double>(v) - nlogn) / static_cast<double>(bridge_n));
    }
    std::sort(bridge.begin(), bridge.end());
    std::vector<double> pop_sorted = pop.values;
    std::sort(pop_sorted.begin(), pop_sorted.end());
    reg.add_le(11, "ipl_bridge_ks_theta=" + fmt(pop.theta),
               mc::two_sample_ks(bridge, pop_sorted), 0.03,
               "(I_n - n ln n)/n at n=1e5 vs Picard population");
  }
}

void check_determinism(Registry& reg) {
  mc::ExperimentConfig cfg;
  cfg.theta = 2.0;
  cfg.n = 1000;
  cfg.replicates = 2000;
  cfg.seed = reg.options.seed + 59;
  cfg.statistics = {Statistic::depth_last, Statistic::height, Statistic::ipl,
                    Statistic::leaves, Statistic::subtree2};

  cfg.workers = 1;
  const auto a = mc::run_experiment(cfg);
  const auto b = mc::run_experiment(cfg);
  cfg.workers = 4;
  const auto c = mc::run_experiment(cfg);

  double mismatches = 0.0;
  for (const auto& [stat, values] : a.samples) {
    if (values != b.samples.at(stat)) mismatches += 1.0;
    if (values != c.samples.at(stat)) mismatches += 1.0;
  }
  reg.add_le(13, "experiment_determinism_mismatches", mismatches, 0.0,
             "runs repeated and worker counts 1 vs 4");

  const auto pa = limitdist::picard(2.0, 10000, 10, reg.options.seed + 61, nullptr, 1);
  const auto pb = limitdist::picard(2.0, 10000, 10, reg.options.seed + 61, nullptr, 4);
  reg.add_le(13, "picard_determinism_mismatches",
             pa.population.values == pb.population.values ? 0.0 : 1.0, 0.0,
             "worker counts 1 vs 4");
}

}  // namespace

Tier tier_from_name(std::string_view name) {
  if (name == "exact") return Tier::exact;
  if (name == "statistical") return Tier::statistical;
  if (name == "all") return Tier::all;
  throw std::invalid_argument("unknown tier: " + std::string(name));
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Registry reg{options, {}};
  const bool exact = options.tier != Tier::statistical;
  const bool statistical = options.tier != Tier::exact;

  if (exact) {
    check_depth_law_equivalence(reg);
    check_exact_moments(reg);
    check_martingales(reg);
    check_leaf_var_asymptotics(reg);
    check_poisson_tv_decay(reg);
    check_subtree_uniformity(reg);
    check_specfun(reg);
  }
  if (statistical) {
    check_clt(reg);
    check_leaf_tail(reg);
    check_beta_limit(reg);
    check_small_subtree(reg);
    check_height(reg);
    check_limit_law(reg);
    check_determinism(reg);
  }
  return reg.checks;
}

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options) {
  Registry reg{options, {}};
  switch (criterion) {
    case 1:
      check_depth_law_equivalence(reg);
      break;
    case 2:
      check_exact_moments(reg);
      break;
    case 3:
      check_martingales(reg);
      break;
    case 4:
      check_leaf_var_asymptotics(reg);
      break;
    case 5:
      check_clt(reg);
      break;
    case 6:
      check_poisson_tv_decay(reg);
      break;
    case 7:
      check_leaf_tail(reg);
      break;
    case 8:
      check_subtree_uniformity(reg);
      check_beta_limit(reg);
      break;
    case 9:
      check_small_subtree(reg);
      break;
    case 10:
      check_height(reg);
      break;
    case 11:
      check_limit_law(reg);
      break;
    case 12:
      check_specfun(reg);
      break;
    case 13:
      check_determinism(reg);
      break;
    default:
      throw std::invalid_argument("run_criterion: criterion must be 1..13");
  }
  return reg.checks;
}

void print_check(std::ostream& os, const CheckResult& check) {
  os << "c" << (check.criterion < 10 ? "0" : "") << check.criterion << " "
     << check.name << " observed=" << check.observed << " budget" << check.comparator
     << check.budget << " " << (check.pass ? "PASS" : "FAIL");
  if (!check.note.empty()) {
    os << "  [" << check.note << "]";
  }
  os << "\n";
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

}  // namespace hoppetree::verify
