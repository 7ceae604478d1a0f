#include "mee/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mee/classical.hpp"

namespace mee {

namespace {

using nlohmann::json;

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool is_integral(double v) { return v == std::rint(v); }

std::string canonical_srs_name(const std::string& n) {
  if (n == "usual_mean") return "ybar";
  if (n == "ratio") return "ybar_R";
  if (n == "difference") return "ybar_d";
  if (n == "srivastava") return "ybar_s";
  if (n == "dubey_singh") return "ybar_DS";
  return n;
}

std::string canonical_strat_name(const std::string& n) {
  if (n == "ybar_st") return "usual_mean";
  return n;
}

// Walsh and Ray-Sahai are expressible inside the class through the affine
// transform with eta = l, lambda = (1-l)*mu_x, which leaves the transformed
// mean at mu_x; exponent +1 gives Walsh, -1 gives Ray-Sahai.
CatalogEntry classical_as_member(const std::string& name, double l, double mu_x) {
  const double alpha = name == "walsh" ? 1.0 : -1.0;
  return {name, {alpha, l, (1.0 - l) * mu_x}, 1.0, 0.0, true};
}

ReportRow make_row(const std::string& name, const CatalogEntry& e, const MemberAnalysis& a,
                   double ref) {
  return {name, e.params.alpha, a.scalars.alpha1, a.scalars.alpha2, a.bias, a.mse,
          pre(a.mse, ref)};
}

double member_point_design(const ClassParams& p, const OptimalScalars& sc, double yb, double xb,
                           double mu_x) {
  const double xt = p.eta * xb + p.lambda;
  const double mt = p.eta * mu_x + p.lambda;
  const double bracket = sc.alpha1 * yb + sc.alpha2 * xt + (1.0 - sc.alpha1 - sc.alpha2) * mt;
  if (p.alpha == 0.0) return bracket;
  if (xt == 0.0) throw std::domain_error("eta*xbar + lambda: transformed sample mean is zero");
  const double base = mt / xt;
  if (!is_integral(p.alpha) && base <= 0.0)
    throw std::domain_error("mu_x_star/xbar_star: non-integer power of a nonpositive ratio");
  return bracket * std::pow(base, p.alpha);
}

bool near(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// The worked numerical population the reference table tabulates.
bool is_reference_population(const PopulationSummary& s) {
  return near(s.mu_y, 127) && near(s.mu_x, 170) && near(s.sigma2_y, 1278) &&
         near(s.sigma2_x, 3300) && near(s.rho, 0.964) && near(s.sigma2_u, 36) &&
         near(s.sigma2_v, 36) && s.n == 10;
}

json row_json(const ReportRow& r) {
  return {{"name", r.name},   {"alpha", r.alpha}, {"alpha1", r.alpha1}, {"alpha2", r.alpha2},
          {"bias", r.bias},   {"mse", r.mse},     {"pre", r.pre}};
}

}  // namespace

AnalyzeReport analyze_srs(const PopulationSummary& s, const std::vector<std::string>& names) {
  validate_summary(s);
  const auto cat = member_catalog(s);
  const double ref = classical_mse(ClassicalEstimatorId::usual_mean, s);
  std::vector<std::string> want = names;
  if (want.empty())
    for (const auto& e : cat) want.push_back(e.name);

  AnalyzeReport rep;
  rep.reference_mse = ref;
  for (const auto& raw : want) {
    const std::string name = canonical_srs_name(raw);
    if (name == "walsh" || name == "ray_sahai") {
      const auto id =
          name == "walsh" ? ClassicalEstimatorId::walsh : ClassicalEstimatorId::ray_sahai;
      const CatalogEntry e = classical_as_member(name, classical_optimum(id, s), s.mu_x);
      rep.rows.push_back(make_row(name, e, analyze_member(e, s), ref));
    } else {
      const CatalogEntry& e = find_member(cat, name);
      rep.rows.push_back(make_row(name, e, analyze_member(e, s), ref));
    }
  }
  return rep;
}

AnalyzeReport analyze_stratified(const StratifiedDesign& d, const std::vector<std::string>& names) {
  const auto cat = stratified_member_catalog(d);
  const double ref = stratified_classical_mse(StratifiedEstimatorId::usual_mean, d);
  std::vector<std::string> want = names;
  if (want.empty())
    for (const auto& e : cat) want.push_back(e.name);

  AnalyzeReport rep;
  rep.reference_mse = ref;
  for (const auto& raw : want) {
    const std::string name = canonical_strat_name(raw);
    const CatalogEntry& e = find_member(cat, name);
    rep.rows.push_back(make_row(name, e, analyze_stratified_member(e, d), ref));
  }
  return rep;
}

EstimateResult estimate_named(const std::string& raw, const SampleData& data,
                              const Params& params, const std::vector<double>& constants) {
  EstimateResult r;
  if (std::holds_alternative<PopulationSummary>(params)) {
    const auto& s = std::get<PopulationSummary>(params);
    const SampleStats st = sample_stats(data);
    const std::string name = canonical_srs_name(raw);
    r.name = name;
    r.ybar = st.ybar;
    r.xbar = st.xbar;
    r.rows = st.n;
    if (name == "ybar" || name == "ybar_R") {
      if (!constants.empty())
        throw std::invalid_argument("constants: " + name + " takes no tuning constant");
      const auto id = name == "ybar" ? ClassicalEstimatorId::usual_mean : ClassicalEstimatorId::ratio;
      r.value = point_estimate(id, st, s, {});
    } else if (name == "ybar_d" || name == "ybar_s" || name == "walsh" || name == "ray_sahai") {
      ClassicalEstimatorId id;
      if (name == "ybar_d") id = ClassicalEstimatorId::difference;
      else if (name == "ybar_s") id = ClassicalEstimatorId::srivastava;
      else if (name == "walsh") id = ClassicalEstimatorId::walsh;
      else id = ClassicalEstimatorId::ray_sahai;
      if (constants.size() > 1)
        throw std::invalid_argument("constants: expected one value for " + name);
      const double c = constants.empty() ? classical_optimum(id, s) : constants[0];
      r.value = point_estimate(id, st, s, c);
      r.constants = {c};
    } else {
      const auto cat = member_catalog(s);
      const CatalogEntry& e = find_member(cat, name);
      OptimalScalars sc{};
      if (constants.empty())
        sc = analyze_member(e, s).scalars;
      else if (constants.size() == 2)
        sc = {constants[0], constants[1]};
      else
        throw std::invalid_argument("constants: expected two scalars for " + name);
      r.value = point_estimate_tp(e.params, sc, st, s);
      r.constants = {sc.alpha1, sc.alpha2};
    }
    return r;
  }

  const auto& d = std::get<StratifiedDesign>(params);
  double yb = 0, xb = 0;
  stratified_sample_means(data, d, yb, xb);
  const std::string name = canonical_strat_name(raw);
  r.name = name;
  r.ybar = yb;
  r.xbar = xb;
  r.rows = static_cast<long>(data.y.size());
  if (name == "usual_mean" || name == "combined_ratio" || name == "combined_product" ||
      name == "combined_difference") {
    StratifiedEstimatorId id;
    if (name == "usual_mean") id = StratifiedEstimatorId::usual_mean;
    else if (name == "combined_ratio") id = StratifiedEstimatorId::combined_ratio;
    else if (name == "combined_product") id = StratifiedEstimatorId::combined_product;
    else id = StratifiedEstimatorId::combined_difference;
    if (id != StratifiedEstimatorId::combined_difference) {
      if (!constants.empty())
        throw std::invalid_argument("constants: " + name + " takes no tuning constant");
      r.value = stratified_point_estimate(id, yb, xb, d, {});
    } else {
      if (constants.size() > 1)
        throw std::invalid_argument("constants: expected one value for " + name);
      const double c = constants.empty() ? d_opt(d) : constants[0];
      r.value = stratified_point_estimate(id, yb, xb, d, c);
      r.constants = {c};
    }
  } else {
    const auto cat = stratified_member_catalog(d);
    const CatalogEntry& e = find_member(cat, name);
    OptimalScalars sc{};
    if (constants.empty())
      sc = analyze_stratified_member(e, d).scalars;
    else if (constants.size() == 2)
      sc = {constants[0], constants[1]};
    else
      throw std::invalid_argument("constants: expected two scalars for " + name);
    r.value = member_point_design(e.params, sc, yb, xb, d.mu_x());
    r.constants = {sc.alpha1, sc.alpha2};
  }
  return r;
}

std::string to_csv(const AnalyzeReport& r) {
  std::ostringstream out;
  out << "name,alpha,alpha1,alpha2,bias,mse,pre\n";
  for (const auto& row : r.rows)
    out << row.name << ',' << g6(row.alpha) << ',' << g6(row.alpha1) << ',' << g6(row.alpha2)
        << ',' << g6(row.bias) << ',' << g6(row.mse) << ',' << g6(row.pre) << '\n';
  return out.str();
}

std::string to_json(const AnalyzeReport& r) {
  json j;
  j["reference_mse"] = r.reference_mse;
  j["estimators"] = json::array();
  for (const auto& row : r.rows) j["estimators"].push_back(row_json(row));
  return j.dump(2) + "\n";
}

std::string to_csv(const EmpiricalReport& r) {
  std::ostringstream out;
  out << "name,used,failures,empirical_bias,empirical_mse,theoretical_mse,relative_gap,mc_se\n";
  for (const auto& e : r.estimators)
    out << e.name << ',' << e.used << ',' << e.failures << ',' << g6(e.empirical_bias) << ','
        << g6(e.empirical_mse) << ',' << g6(e.theoretical_mse) << ',' << g6(e.relative_gap)
        << ',' << g6(e.mc_se) << '\n';
  return out.str();
}

std::string to_json(const EmpiricalReport& r) {
  json j;
  j["replications"] = r.replications;
  j["seed"] = r.seed;
  j["sample_size"] = r.sample_size;
  j["estimators"] = json::array();
  for (const auto& e : r.estimators)
    j["estimators"].push_back({{"name", e.name},
                               {"used", e.used},
                               {"failures", e.failures},
                               {"empirical_bias", e.empirical_bias},
                               {"empirical_mse", e.empirical_mse},
                               {"theoretical_mse", e.theoretical_mse},
                               {"relative_gap", e.relative_gap},
                               {"mc_se", e.mc_se}});
  return j.dump(2) + "\n";
}

std::string to_csv(const EstimateResult& r) {
  std::ostringstream out;
  out << "name,value,ybar,xbar,rows,constants\n";
  out << r.name << ',' << g6(r.value) << ',' << g6(r.ybar) << ',' << g6(r.xbar) << ',' << r.rows
      << ',';
  for (std::size_t i = 0; i < r.constants.size(); ++i) {
    if (i) out << ';';
    out << g6(r.constants[i]);
  }
  out << '\n';
  return out.str();
}

std::string to_json(const EstimateResult& r) {
  json j;
  j["name"] = r.name;
  j["value"] = r.value;
  j["ybar"] = r.ybar;
  j["xbar"] = r.xbar;
  j["rows"] = r.rows;
  j["constants"] = r.constants;
  return j.dump(2) + "\n";
}

std::string members_csv(const std::vector<CatalogEntry>& cat) {
  std::ostringstream out;
  out << "name,alpha,eta,lambda,alpha1,alpha2,alpha_optimized\n";
  for (const auto& e : cat) {
    out << e.name << ',' << g6(e.params.alpha) << ',' << g6(e.params.eta) << ','
        << g6(e.params.lambda) << ',';
    if (e.fixed_alpha1) out << g6(*e.fixed_alpha1);
    out << ',';
    if (e.fixed_alpha2) out << g6(*e.fixed_alpha2);
    out << ',' << (e.alpha_is_optimized ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string members_json(const std::vector<CatalogEntry>& cat) {
  json arr = json::array();
  for (const auto& e : cat) {
    json j;
    j["name"] = e.name;
    j["alpha"] = e.params.alpha;
    j["eta"] = e.params.eta;
    j["lambda"] = e.params.lambda;
    j["alpha1"] = e.fixed_alpha1 ? json(*e.fixed_alpha1) : json(nullptr);
    j["alpha2"] = e.fixed_alpha2 ? json(*e.fixed_alpha2) : json(nullptr);
    j["alpha_optimized"] = e.alpha_is_optimized;
    arr.push_back(j);
  }
  return json{{"members", arr}}.dump(2) + "\n";
}

std::string ledger_json(const PopulationSummary& s, long mc_reps) {
  validate_summary(s);
  const auto cat = member_catalog(s);
  const double ref = classical_mse(ClassicalEstimatorId::usual_mean, s);
  json records = json::array();

  if (is_reference_population(s)) {
    const CatalogEntry& t1 = find_member(cat, "t1");
    const MemberAnalysis a = analyze_member(t1, s);
    json r;
    r["id"] = "t1_min_mse_cell";
    r["kind"] = "reference_mismatch";
    r["reference_mse"] = 10.0625;
    r["reference_pre"] = 1236.648;
    r["computed_mse"] = a.mse;
    r["computed_pre"] = pre(a.mse, ref);
    r["pre_implied_mse"] = 100.0 * ref / 1236.648;
    r["note"] =
        "the tabulated PRE implies the computed minimum to seven digits, so the tabulated "
        "MSE cell disagrees with its own PRE; the computed value is kept";
    if (mc_reps > 0) {
      SimulationConfig cfg;
      cfg.replications = mc_reps;
      cfg.seed = 20250819;
      cfg.sample_size = 400;
      cfg.estimators = {"t1"};
      const EmpiricalReport rep = run_simulation(cfg, s);
      const EstimatorResult& e = rep.estimators.front();
      json mc;
      mc["sample_size"] = 400;
      mc["replications"] = mc_reps;
      mc["seed"] = cfg.seed;
      mc["empirical_mse"] = e.empirical_mse;
      mc["theoretical_mse"] = e.theoretical_mse;
      mc["relative_gap"] = e.relative_gap;
      mc["note"] =
          "at this sample size the first-order value sits within about one percent of the "
          "exact MSE, so the simulation pins the scale of the computed optimum";
      r["monte_carlo"] = mc;
    }
    records.push_back(r);
  }

  {
    json members = json::array();
    for (const auto& e : cat) {
      const MemberAnalysis a = analyze_member(e, s);
      if (!near(a.mse, a.mse_series))
        members.push_back({{"name", e.name}, {"mse", a.mse}, {"mse_series", a.mse_series}});
    }
    json r;
    r["id"] = "power_term_constant";
    r["kind"] = "convention";
    r["note"] =
        "reported minima scale the squared exponent term by the auxiliary mean, while the "
        "degree-2 expansion scales it by the transformed mean; the optimal scalars agree, the "
        "constant differs whenever the transform moves the mean. mse is the reported value, "
        "mse_series the expansion value";
    r["members"] = members;
    records.push_back(r);
  }

  {
    json members = json::array();
    for (const auto& e : cat) {
      const MemberAnalysis a = analyze_member(e, s);
      if (!near(a.bias, a.bias_series))
        members.push_back({{"name", e.name}, {"bias", a.bias}, {"bias_series", a.bias_series}});
    }
    json r;
    r["id"] = "bias_constant_term";
    r["kind"] = "convention";
    r["note"] =
        "the reported bias omits the scalar-deficiency term (alpha1 - 1)(mu_y - mu_x_star) "
        "that the degree-2 expansion carries; the forms agree only when alpha1 = 1";
    r["members"] = members;
    records.push_back(r);
  }

  {
    const CatalogEntry& ds = find_member(cat, "ybar_DS");
    const MemberAnalysis pinned = analyze_member(ds, s);
    CatalogEntry freed = ds;
    freed.fixed_alpha1.reset();
    freed.fixed_alpha2.reset();
    const MemberAnalysis joint = analyze_member(freed, s);
    json r;
    r["id"] = "ybar_DS_scalar_policy";
    r["kind"] = "policy";
    r["note"] =
        "the regression-in-scalars row pins alpha1 = 1, matching the tabulated value; the "
        "joint optimum over both scalars is strictly lower and is recorded here";
    r["pinned"] = {{"alpha1", pinned.scalars.alpha1},
                   {"alpha2", pinned.scalars.alpha2},
                   {"mse", pinned.mse}};
    r["joint"] = {{"alpha1", joint.scalars.alpha1},
                  {"alpha2", joint.scalars.alpha2},
                  {"mse", joint.mse}};
    records.push_back(r);
  }

  return json{{"discrepancies", records}}.dump(2) + "\n";
}

}  // namespace mee
