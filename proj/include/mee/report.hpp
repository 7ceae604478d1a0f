#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mee/params_io.hpp"
#include "mee/proposed.hpp"
#include "mee/simulate.hpp"
#include "mee/stratified.hpp"

namespace mee {

// One analyzed estimator: resolved exponent and scalars, first-order bias,
// minimum MSE (reported convention), and efficiency relative to the usual
// mean in percent.
struct ReportRow {
  std::string name;
  double alpha = 0;
  double alpha1 = 0;
  double alpha2 = 0;
  double bias = 0;
  double mse = 0;
  double pre = 0;
};

struct AnalyzeReport {
  double reference_mse = 0;  // MSE of the usual mean (the PRE denominator)
  std::vector<ReportRow> rows;
};

// Analyzes the named estimators (empty selects the full catalog).
AnalyzeReport analyze_srs(const PopulationSummary& s, const std::vector<std::string>& names = {});
AnalyzeReport analyze_stratified(const StratifiedDesign& d,
                                 const std::vector<std::string>& names = {});

// One point estimate computed from data.
struct EstimateResult {
  std::string name;
  double value = 0;
  double ybar = 0;  // (weight-combined) sample means fed to the estimator
  double xbar = 0;
  long rows = 0;
  std::vector<double> constants;  // tuning constants actually used
};

// Resolves the estimator by name against the params (summary or design) and
// evaluates it on the data. Explicit constants override the optima: one
// value for tunable classical estimators, two scalars for class members.
EstimateResult estimate_named(const std::string& name, const SampleData& data,
                              const Params& params, const std::vector<double>& constants = {});

// Renderers. CSV uses six significant digits; JSON keeps full precision.
std::string to_csv(const AnalyzeReport& r);
std::string to_json(const AnalyzeReport& r);
std::string to_csv(const EmpiricalReport& r);
std::string to_json(const EmpiricalReport& r);
std::string to_csv(const EstimateResult& r);
std::string to_json(const EstimateResult& r);
std::string members_csv(const std::vector<CatalogEntry>& cat);
std::string members_json(const std::vector<CatalogEntry>& cat);

// Known mismatches between computed values and the tabulated reference for
// this population, as JSON: the t1 minimum-MSE cell, the two constant-term
// conventions, the bias constant term, and the regression-in-scalars pinning
// policy. mc_reps > 0 appends a simulation cross-check to the t1 record.
std::string ledger_json(const PopulationSummary& s, long mc_reps = 0);

}  // namespace mee
