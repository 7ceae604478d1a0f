#pragma once

#include <optional>
#include <vector>

#include "mee/population.hpp"
#include "mee/proposed.hpp"

namespace mee {

// One stratum of a stratified design, observed with additive measurement
// error; field meanings mirror PopulationSummary.
struct StratumSummary {
  double w = 0;  // population share N_h/N, in (0, 1]
  int n_h = 0;   // sample size drawn in the stratum (>= 2)
  double mu_y = 0, mu_x = 0;
  double sigma2_y = 0, sigma2_x = 0;
  double rho = 0;
  double sigma2_u = 0, sigma2_v = 0;
};

// Per-stratum derived quantities.
struct StratumMoments {
  double theta_y;  // reliability ratio sigma2_y / (sigma2_y + sigma2_u)
  double theta_x;  // reliability ratio sigma2_x / (sigma2_x + sigma2_v)
  double beta_yx;  // regression slope rho * sd(y) / sd(x)
  double g;        // design factor w^2 / n_h
};

StratumMoments derive_stratum_moments(const StratumSummary& h);

// Validated stratified design. Weights must sum to 1; overall means are the
// weight-combined stratum means and must be nonzero.
class StratifiedDesign {
 public:
  explicit StratifiedDesign(std::vector<StratumSummary> strata);

  const std::vector<StratumSummary>& strata() const { return strata_; }
  std::size_t size() const { return strata_.size(); }
  double mu_y() const { return mu_y_; }
  double mu_x() const { return mu_x_; }

 private:
  std::vector<StratumSummary> strata_;
  double mu_y_ = 0;
  double mu_x_ = 0;
};

enum class StratifiedEstimatorId {
  usual_mean,           // ybar_st
  combined_ratio,       // ybar_st * mu_x / xbar_st
  combined_product,     // ybar_st * xbar_st / mu_x
  combined_difference,  // ybar_st + d * (mu_x - xbar_st)
};

const char* estimator_name(StratifiedEstimatorId id);

// First-order MSE of the combined estimators. The constant applies only to
// combined_difference and defaults to d_opt.
double stratified_classical_mse(StratifiedEstimatorId id, const StratifiedDesign& d,
                                std::optional<double> constant = {});

// MSE-minimizing constant of the combined difference estimator.
double d_opt(const StratifiedDesign& d);

// Design-level aggregate moments: per-stratum variance contributions
// summed with weights w^2/n_h and normalized by the overall means, so that
// every class formula applies unchanged with delta* read as aggregates.
// theta is the summed design factor; c_y/c_x are the weight-averaged
// coefficients of variation (used by member policies that shift by them).
MomentSet aggregate_moments(const StratifiedDesign& d);

// Point estimate of a combined estimator from the overall sample means.
double stratified_point_estimate(StratifiedEstimatorId id, double ybar_st, double xbar_st,
                                 const StratifiedDesign& d, std::optional<double> constant = {});

struct StratifiedClassResult {
  MseDecomposition decomposition;
  OptimalScalars scalars;
  double min_mse;       // closed-form constant
  double min_mse_series;
  double bias;
  double bias_series;
};

// The class machinery evaluated on the design's aggregate moments.
StratifiedClassResult stratified_class_mse(const ClassParams& p, const StratifiedDesign& d);

// The member catalog resolved against design-level quantities (weighted
// correlation and coefficient of variation for the shifted members).
std::vector<CatalogEntry> stratified_member_catalog(const StratifiedDesign& d);

MemberAnalysis analyze_stratified_member(const CatalogEntry& e, const StratifiedDesign& d);

}  // namespace mee
