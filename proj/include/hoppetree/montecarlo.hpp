#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "hoppetree/core.hpp"
#include "hoppetree/distribution.hpp"

namespace hoppetree::mc {

// Splits [0, count) into contiguous chunks, one per worker, and runs body on
// std::threads (chunk 0 on the calling thread). body(worker, lo, hi).
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(int, std::int64_t, std::int64_t)>& body);

int default_workers();

struct ExperimentConfig {
  double theta = 1.0;
  std::int64_t n = 1;
  std::int64_t replicates = 1;
  std::uint64_t seed = 0;
  std::vector<Statistic> statistics = {Statistic::depth_last};
  int workers = 0;  // 0 = available parallelism
  bool theta_zero_extremal = false;
};

struct StatMoments {
  std::int64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct SampleSummary {
  ExperimentConfig config;
  // Per selected statistic: aggregate moments and the per-replicate values
  // in replicate order.
  std::map<Statistic, StatMoments> moments;
  std::map<Statistic, std::vector<std::int64_t>> samples;
};

// Replicate r draws from the stream keyed by (seed, r); results are
// bit-identical for a fixed config regardless of worker count.
SampleSummary run_experiment(const ExperimentConfig& config);

StatMoments moments_of(const std::vector<std::int64_t>& samples);

// Counts-based pmf of integer samples.
DiscreteDistribution empirical_distribution(const std::vector<std::int64_t>& samples);

// Sup distance between the ECDF of `sorted` (ascending, >= 100 entries) and
// the reference CDF.
double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf);

// Sup distance between the ECDFs of two ascending samples.
double two_sample_ks(const std::vector<double>& sorted_a,
                     const std::vector<double>& sorted_b);

double standard_normal_cdf(double x);

struct TailCheckRow {
  double t;
  double frequency;
  double bound;
  double stderr_freq;
  bool pass;
};

struct TailCheckReport {
  std::vector<TailCheckRow> rows;
  bool pass;
  // Worst frequency - (bound + 3 se); <= 0 iff pass.
  double worst_margin;
};

// For each t: empirical frequency of |x - center| >= t must not exceed
// bound(t) + 3 binomial standard errors.
TailCheckReport tail_check(const std::vector<std::int64_t>& samples, double center,
                           const std::function<double(double)>& bound,
                           const std::vector<double>& t_grid);

struct DominanceReport {
  double min_margin;  // min over x of F_hi(x) - F_lo(x)
  double tolerance;   // 2 sqrt(1/R)
  bool pass;
};

// Checks that the sample drawn at the larger theta is stochastically smaller:
// its ECDF dominates the lower-theta ECDF pointwise up to the tolerance.
DominanceReport dominance_check(const std::vector<std::int64_t>& lo_theta_samples,
                                const std::vector<std::int64_t>& hi_theta_samples);

// Empirical Var(H_n) across an n grid.
std::vector<double> height_variance_probe(double theta,
                                          const std::vector<std::int64_t>& n_grid,
                                          std::int64_t replicates, std::uint64_t seed,
                                          int workers = 0);

// Sorted standardized copy of integer samples: (x - center) * inv_scale.
std::vector<double> standardized_sorted(const std::vector<std::int64_t>& samples,
                                        double center, double scale);

std::vector<double> sorted_doubles(const std::vector<std::int64_t>& samples,
                                   double scale = 1.0);

}  // namespace hoppetree::mc
