#pragma once

#include <optional>

#include "mee/population.hpp"

namespace mee {

// The classical mean estimators. Every one except usual_mean exploits the
// known auxiliary mean mu_x; difference/srivastava/walsh/ray_sahai carry one
// tunable constant and share the same minimum first-order MSE.
enum class ClassicalEstimatorId {
  usual_mean,  // ybar
  ratio,       // ybar * mu_x / xbar
  difference,  // ybar + k * (mu_x - xbar)
  srivastava,  // ybar * (mu_x / xbar)^l
  walsh,       // ybar * mu_x / (l*xbar + (1-l)*mu_x)
  ray_sahai,   // ybar * ((1-l) + l*xbar/mu_x)
};

const char* estimator_name(ClassicalEstimatorId id);

struct SampleStats {
  double ybar = 0;
  double xbar = 0;
  int n = 0;
};

// MSE-minimizing constant. Errors for usual_mean and ratio (no constant).
double classical_optimum(ClassicalEstimatorId id, const PopulationSummary& s);

// First-order MSE at the optimum constant (exact formula for usual_mean and
// ratio, which have none).
double classical_mse(ClassicalEstimatorId id, const PopulationSummary& s);

// First-order MSE at a caller-supplied constant.
double classical_mse_at(ClassicalEstimatorId id, const PopulationSummary& s, double constant);

// First-order bias. The constant defaults to the optimum; usual_mean is
// unsupported (exactly unbiased), ratio takes no constant.
double classical_bias(ClassicalEstimatorId id, const PopulationSummary& s,
                      std::optional<double> constant = {});

// Plug-in value on observed sample means. The constant defaults to the
// optimum computed from the summary.
double point_estimate(ClassicalEstimatorId id, const SampleStats& st, const PopulationSummary& s,
                      std::optional<double> constant = {});

// Percent relative efficiency: 100 * reference_mse / mse.
double pre(double mse, double reference_mse);

}  // namespace mee
