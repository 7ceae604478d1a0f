#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mee/population.hpp"
#include "mee/stratified.hpp"

namespace mee {

// Small counter-hashed generator. Each replication gets its own stream
// derived from (seed, replication index), so results are independent of how
// replications are partitioned across workers.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next();
  double u01();  // uniform on (0, 1]
  void gauss_pair(double& z1, double& z2);  // Marsaglia polar method
};

SplitMix64 replication_stream(std::uint64_t seed, std::uint64_t replication);

struct Observation {
  double y;  // observed study value (true value plus error)
  double x;  // observed auxiliary value
};

// One (y, x) draw from the bivariate-normal population with normal errors.
// Consumes exactly two gauss_pair calls in fixed order.
Observation generate_observation(SplitMix64& rng, const PopulationSummary& s);

struct SimulationConfig {
  long replications = 0;
  std::uint64_t seed = 1;
  std::optional<int> sample_size;       // overrides n (every n_h when stratified)
  std::vector<std::string> estimators;  // names; empty selects the default set
  int workers = 1;
};

struct EstimatorResult {
  std::string name;
  long used = 0;       // replications contributing to the sums
  long failures = 0;   // evaluations that were undefined and were skipped
  double empirical_bias = 0;
  double empirical_mse = 0;
  double theoretical_mse = 0;  // first-order series value at the resolved constants
  double relative_gap = 0;     // |empirical - theoretical| / theoretical
  double mc_se = 0;            // standard error of the empirical MSE
};

struct EmpiricalReport {
  long replications = 0;
  std::uint64_t seed = 0;
  int sample_size = 0;  // n (SRS) or the common override; 0 when per-stratum sizes differ
  int workers = 1;
  std::vector<EstimatorResult> estimators;
};

// Estimator names accepted by the resolvers (same vocabulary as the analyze
// report): ybar, ybar_R, ybar_d, ybar_s, walsh, ray_sahai, ybar_DS, t1..t7.
std::vector<std::string> default_estimator_names();

// usual_mean, combined_ratio, combined_product, combined_difference, t1..t7.
std::vector<std::string> default_stratified_estimator_names();

EmpiricalReport run_simulation(const SimulationConfig& cfg, const PopulationSummary& s);
EmpiricalReport run_stratified_simulation(const SimulationConfig& cfg, const StratifiedDesign& d);

}  // namespace mee
