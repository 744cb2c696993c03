#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hoppetree/rng.hpp"

namespace hoppetree::limitdist {

inline constexpr std::size_t kMinPopulation = 10'000;
inline constexpr double kDriftTolerance = 1e-3;

// Inverse-CDF map for Beta(1, theta): u -> 1 - (1-u)^(1/theta).
double beta_from_uniform(double theta, double u);

// Beta(1, theta) draw: 1 - U^(1/theta). Uniform at theta = 1.
double sample_beta(double theta, Xoshiro256pp& rng);

// b log(b) + (1-b) log(1-b) + b with the 0 log 0 = 0 convention; b in [0,1].
double toll(double b);

struct Population {
  std::vector<double> values;
  double theta = 1.0;
  int generations = 0;
  bool converged = false;
  double mean = 0.0;
  double variance = 0.0;
};

struct PicardResult {
  Population population;
  // Present when a theta != 1 run had to build its own theta = 1 stage.
  std::optional<Population> stage1;
};

// Population Picard iteration for the limit law of the normalized internal
// path length. Stage 1 (theta = 1) maps entry j to
// (1-B) X[i1] + B X[i2] + toll(B) with B uniform and i1, i2 uniform indices
// into the previous generation; since that map conserves the population mean
// (the equation is shift-invariant at theta = 1), each generation is
// recentered to the known limit mean -digamma(2). Stage 2 (theta != 1) draws
// B ~ Beta(1,theta), i1 from the current theta-population and i2 from the
// frozen theta = 1 population; no recentering, the map contracts the mean.
// Stops early once mean and variance both move < 1e-3 between generations.
PicardResult picard(double theta, std::size_t population_size, int iterations,
                    std::uint64_t seed, const Population* frozen_theta1 = nullptr,
                    int workers = 0);

// One Picard generation applied to an existing population; streams are keyed
// by (seed, generation_index, entry). pop.theta == 1 uses the stage-1 map
// (recentered, frozen ignored); otherwise frozen_theta1 is required.
Population picard_step(const Population& pop, const Population* frozen_theta1,
                       std::uint64_t seed, std::uint64_t generation_index,
                       int workers = 0);

// (-digamma(theta+1), 2/(theta+1) - trigamma(theta+1)).
std::pair<double, double> limit_moments(double theta);

}  // namespace hoppetree::limitdist
