#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mee/classical.hpp"
#include "mee/population.hpp"
#include "mee/stratified.hpp"

namespace mee {

// A params file is either one population summary or a stratified design.
using Params = std::variant<PopulationSummary, StratifiedDesign>;

// Parses the JSON params format. A top-level "strata" array selects the
// stratified form; otherwise the object itself is the summary. Structural
// problems (missing fields, wrong types) throw std::invalid_argument;
// value problems propagate from validation as std::domain_error.
Params parse_params(const std::string& json_text);
Params load_params(const std::string& path);  // throws std::runtime_error on IO failure

// Raw paired observations, read from CSV with header "y,x" or
// "stratum,y,x" (stratum indices are 1-based).
struct SampleData {
  std::vector<double> y;
  std::vector<double> x;
  std::vector<int> stratum;  // empty for the two-column form
  bool is_stratified() const { return !stratum.empty(); }
};

SampleData parse_data_csv(const std::string& text);
SampleData load_data_csv(const std::string& path);

// Plain means of a two-column data set.
SampleStats sample_stats(const SampleData& data);

// Weight-combined stratum means; every stratum in the design must have rows.
void stratified_sample_means(const SampleData& data, const StratifiedDesign& d,
                             double& ybar_st, double& xbar_st);

}  // namespace mee
