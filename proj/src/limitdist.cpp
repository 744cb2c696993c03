#include "hoppetree/limitdist.hpp"

#include <cmath>
#include <stdexcept>

#include "hoppetree/montecarlo.hpp"
#include "hoppetree/numeric.hpp"
#include "hoppetree/specfun.hpp"

namespace hoppetree::limitdist {

double beta_from_uniform(double theta, double u) {
  if (!(theta > 0.0)) {
    throw std::domain_error("beta_from_uniform: theta must be > 0");
  }
  return 1.0 - std::pow(1.0 - u, 1.0 / theta);
}

double sample_beta(double theta, Xoshiro256pp& rng) {
  return beta_from_uniform(theta, rng.next_double());
}

double toll(double b) {
  if (b < 0.0 || b > 1.0) {
    throw std::domain_error("toll: argument must lie in [0,1]");
  }
  if (b == 0.0 || b == 1.0) return b;  // 0 log 0 = 0; endpoints 0 and 1
  return b * std::log(b) + (1.0 - b) * std::log1p(-b) + b;
}

namespace {

void set_moments(Population& pop) {
  const double m = compensated_sum(pop.values.begin(), pop.values.end()) /
                   static_cast<double>(pop.values.size());
  NeumaierSum sq;
  for (const double v : pop.values) {
    const double d = v - m;
    sq.add(d * d);
  }
  pop.mean = m;
  pop.variance = sq.value() / static_cast<double>(pop.values.size() - 1);
}

}  // namespace

Population picard_step(const Population& pop, const Population* frozen_theta1,
                       std::uint64_t seed, std::uint64_t generation_index,
                       int workers) {
  const bool stage1 = (pop.theta == 1.0);
  if (!stage1 && frozen_theta1 == nullptr) {
    throw std::invalid_argument("picard_step: theta != 1 requires a frozen theta = 1 stage");
  }
  const std::vector<double>& src2 = stage1 ? pop.values : frozen_theta1->values;
  const std::size_t m = pop.values.size();
  const std::size_t m2 = src2.size();

  Population next = pop;
  next.generations = pop.generations + 1;

  mc::parallel_for(
      static_cast<std::int64_t>(m), workers, [&](int, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t j = lo; j < hi; ++j) {
          Xoshiro256pp rng = Xoshiro256pp::for_stream(
              seed, generation_index, static_cast<std::uint64_t>(j));
          const double b = stage1 ? rng.next_double() : sample_beta(pop.theta, rng);
          const std::size_t i1 = static_cast<std::size_t>(rng.next_below(m));
          const std::size_t i2 = static_cast<std::size_t>(rng.next_below(m2));
          next.values[static_cast<std::size_t>(j)] =
              (1.0 - b) * pop.values[i1] + b * src2[i2] + toll(b);
        }
      });

  if (stage1) {
    // The theta = 1 map conserves the population mean (the fixed-point
    // equation is shift-invariant there); pin it to the limit mean.
    const double target = -specfun::digamma(2.0);
    const double shift = target - compensated_sum(next.values.begin(), next.values.end()) /
                                      static_cast<double>(m);
    for (double& v : next.values) v += shift;
  }

  set_moments(next);
  return next;
}

namespace {

Population run_stage(double theta, std::size_t m, int iterations, std::uint64_t seed,
                     const Population* frozen, int workers) {
  Population pop;
  pop.theta = theta;
  pop.values.assign(m, 0.0);

  double prev_mean = 0.0;
  double prev_var = 0.0;
  for (int gen = 0; gen < iterations; ++gen) {
    pop = picard_step(pop, frozen, seed, static_cast<std::uint64_t>(gen), workers);
    if (gen > 0 && std::abs(pop.mean - prev_mean) < kDriftTolerance &&
        std::abs(pop.variance - prev_var) < kDriftTolerance) {
      pop.converged = true;
      return pop;
    }
    prev_mean = pop.mean;
    prev_var = pop.variance;
  }
  return pop;
}

}  // namespace

PicardResult picard(double theta, std::size_t population_size, int iterations,
                    std::uint64_t seed, const Population* frozen_theta1, int workers) {
  if (!(theta > 0.0)) {
    throw std::domain_error("picard: theta must be > 0");
  }
  if (population_size < kMinPopulation) {
    throw std::invalid_argument("picard: population size must be >= 10000");
  }
  if (iterations < 0) {
    throw std::invalid_argument("picard: iterations must be >= 0");
  }

  PicardResult result;
  if (theta == 1.0) {
    result.population = run_stage(1.0, population_size, iterations, seed, nullptr, workers);
    return result;
  }

  const Population* base = frozen_theta1;
  if (base != nullptr) {
    if (base->theta != 1.0 || base->values.size() < kMinPopulation) {
      throw std::invalid_argument("picard: frozen population must be a theta = 1 stage");
    }
  } else {
    result.stage1 = run_stage(1.0, population_size, iterations,
                              mix64(seed ^ 0x5bd1e995a4c2b2b1ULL), nullptr, workers);
    base = &*result.stage1;
  }
  result.population = run_stage(theta, population_size, iterations, seed, base, workers);
  return result;
}

std::pair<double, double> limit_moments(double theta) {
  if (!(theta > 0.0)) {
    throw std::domain_error("limit_moments: theta must be > 0");
  }
  return {-specfun::digamma(theta + 1.0),
          2.0 / (theta + 1.0) - specfun::trigamma(theta + 1.0)};
}

}  // namespace hoppetree::limitdist
