#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mee/params_io.hpp"
#include "mee/report.hpp"
#include "mee/simulate.hpp"

namespace {

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
  f.flush();
  if (!f) throw std::runtime_error("cannot write output file: " + out_path);
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(tok.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> split_constants(const std::string& csv) {
  std::vector<double> out;
  for (const auto& tok : split_names(csv)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("constants: not a number: " + tok);
    }
  }
  return out;
}

struct CommonOpts {
  std::string params_path;
  std::string format = "csv";
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--params", o.params_path, "params JSON file")->required();
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-order analysis of mean estimators under measurement error"};
  app.require_subcommand(1);

  CommonOpts an_opts, est_opts, sim_opts, mem_opts;
  std::string an_estimators = "all";
  std::string an_ledger;
  auto* an = app.add_subcommand("analyze", "bias, minimum MSE and PRE of the estimator catalog");
  add_common(an, an_opts);
  an->add_option("--estimators", an_estimators, "comma-separated names, or 'all'")
      ->capture_default_str();
  an->add_option("--ledger", an_ledger, "also write the known-discrepancy ledger to this file");

  std::string est_data, est_name, est_constants;
  auto* est = app.add_subcommand("estimate", "evaluate one estimator on observed data");
  add_common(est, est_opts);
  est->add_option("--data", est_data, "CSV data file: y,x or stratum,y,x")->required();
  est->add_option("--estimator", est_name, "estimator name")->required();
  est->add_option("--constants", est_constants,
                  "comma-separated tuning constants overriding the optima");

  long sim_reps = 200000;
  std::uint64_t sim_seed = 1;
  int sim_sample = 0;
  int sim_workers = 1;
  std::string sim_estimators;
  auto* sim = app.add_subcommand("simulate", "empirical MSE against the first-order values");
  add_common(sim, sim_opts);
  sim->add_option("--replications", sim_reps, "number of replications")->capture_default_str();
  sim->add_option("--seed", sim_seed, "stream seed")->capture_default_str();
  sim->add_option("--sample-size", sim_sample, "override the sample size(s) in the params");
  sim->add_option("--estimators", sim_estimators, "comma-separated names (default set if omitted)");
  sim->add_option("--workers", sim_workers, "worker threads; the result does not depend on this")
      ->capture_default_str();

  auto* mem = app.add_subcommand("members", "list the estimator catalog for the given params");
  add_common(mem, mem_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 2;
  }

  try {
    if (an->parsed()) {
      const mee::Params params = mee::load_params(an_opts.params_path);
      std::vector<std::string> names;
      if (an_estimators != "all") names = split_names(an_estimators);
      mee::AnalyzeReport rep;
      if (std::holds_alternative<mee::PopulationSummary>(params))
        rep = mee::analyze_srs(std::get<mee::PopulationSummary>(params), names);
      else
        rep = mee::analyze_stratified(std::get<mee::StratifiedDesign>(params), names);
      if (!an_ledger.empty()) {
        if (!std::holds_alternative<mee::PopulationSummary>(params))
          throw std::invalid_argument("ledger: available for population summaries only");
        write_output(mee::ledger_json(std::get<mee::PopulationSummary>(params), 200000),
                     an_ledger);
      }
      write_output(an_opts.format == "csv" ? mee::to_csv(rep) : mee::to_json(rep),
                   an_opts.out_path);
    } else if (est->parsed()) {
      const mee::Params params = mee::load_params(est_opts.params_path);
      const mee::SampleData data = mee::load_data_csv(est_data);
      const mee::EstimateResult r =
          mee::estimate_named(est_name, data, params, split_constants(est_constants));
      write_output(est_opts.format == "csv" ? mee::to_csv(r) : mee::to_json(r), est_opts.out_path);
    } else if (sim->parsed()) {
      const mee::Params params = mee::load_params(sim_opts.params_path);
      mee::SimulationConfig cfg;
      cfg.replications = sim_reps;
      cfg.seed = sim_seed;
      if (sim_sample > 0) cfg.sample_size = sim_sample;
      if (!sim_estimators.empty() && sim_estimators != "all")
        cfg.estimators = split_names(sim_estimators);
      cfg.workers = sim_workers;
      mee::EmpiricalReport rep;
      if (std::holds_alternative<mee::PopulationSummary>(params))
        rep = mee::run_simulation(cfg, std::get<mee::PopulationSummary>(params));
      else
        rep = mee::run_stratified_simulation(cfg, std::get<mee::StratifiedDesign>(params));
      write_output(sim_opts.format == "csv" ? mee::to_csv(rep) : mee::to_json(rep),
                   sim_opts.out_path);
    } else if (mem->parsed()) {
      const mee::Params params = mee::load_params(mem_opts.params_path);
      std::vector<mee::CatalogEntry> cat;
      if (std::holds_alternative<mee::PopulationSummary>(params))
        cat = mee::member_catalog(std::get<mee::PopulationSummary>(params));
      else
        cat = mee::stratified_member_catalog(std::get<mee::StratifiedDesign>(params));
      write_output(mem_opts.format == "csv" ? mee::members_csv(cat) : mee::members_json(cat),
                   mem_opts.out_path);
    }
  } catch (const std::invalid_argument& e) {
    emit_error("validation", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    emit_error("validation", e.what());
    return 1;
  } catch (const std::runtime_error& e) {
    emit_error("io", e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error("computation", e.what());
    return 1;
  }
  return 0;
}
