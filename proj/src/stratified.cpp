#include "mee/stratified.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mee {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

void validate_stratum(const StratumSummary& h, std::size_t index) {
  const std::string at = " in stratum " + std::to_string(index + 1);
  require(std::isfinite(h.w) && h.w > 0.0 && h.w <= 1.0, "w: weight out of range (0, 1]" + at);
  require(h.n_h >= 2, "n_h: sample size must be at least 2" + at);
  require(std::isfinite(h.mu_y) && h.mu_y != 0.0, "mu_y: mean must be finite and nonzero" + at);
  require(std::isfinite(h.mu_x) && h.mu_x != 0.0, "mu_x: mean must be finite and nonzero" + at);
  require(std::isfinite(h.sigma2_y) && h.sigma2_y > 0.0, "sigma2_y: variance must be positive" + at);
  require(std::isfinite(h.sigma2_x) && h.sigma2_x > 0.0, "sigma2_x: variance must be positive" + at);
  require(std::isfinite(h.rho) && h.rho >= -1.0 && h.rho <= 1.0,
          "rho: correlation out of range [-1, 1]" + at);
  require(std::isfinite(h.sigma2_u) && h.sigma2_u >= 0.0,
          "sigma2_u: error variance must be nonnegative" + at);
  require(std::isfinite(h.sigma2_v) && h.sigma2_v >= 0.0,
          "sigma2_v: error variance must be nonnegative" + at);
}

detail::ErrorMoments design_moments(const StratifiedDesign& d) {
  const MomentSet m = aggregate_moments(d);
  return {d.mu_y(), d.mu_x(), m.delta0, m.delta1, m.delta01};
}

}  // namespace

StratumMoments derive_stratum_moments(const StratumSummary& h) {
  validate_stratum(h, 0);
  StratumMoments m;
  m.theta_y = h.sigma2_y / (h.sigma2_y + h.sigma2_u);
  m.theta_x = h.sigma2_x / (h.sigma2_x + h.sigma2_v);
  m.beta_yx = h.rho * std::sqrt(h.sigma2_y) / std::sqrt(h.sigma2_x);
  m.g = h.w * h.w / static_cast<double>(h.n_h);
  return m;
}

StratifiedDesign::StratifiedDesign(std::vector<StratumSummary> strata)
    : strata_(std::move(strata)) {
  require(!strata_.empty(), "strata: design needs at least one stratum");
  double wsum = 0;
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    validate_stratum(strata_[i], i);
    wsum += strata_[i].w;
    mu_y_ += strata_[i].w * strata_[i].mu_y;
    mu_x_ += strata_[i].w * strata_[i].mu_x;
  }
  require(std::fabs(wsum - 1.0) <= 1e-12, "w: stratum weights must sum to 1");
  require(mu_y_ != 0.0, "mu_y: overall study mean must be nonzero");
  require(mu_x_ != 0.0, "mu_x: overall auxiliary mean must be nonzero");
}

const char* estimator_name(StratifiedEstimatorId id) {
  switch (id) {
    case StratifiedEstimatorId::usual_mean: return "usual_mean";
    case StratifiedEstimatorId::combined_ratio: return "combined_ratio";
    case StratifiedEstimatorId::combined_product: return "combined_product";
    case StratifiedEstimatorId::combined_difference: return "combined_difference";
  }
  throw std::invalid_argument("unknown estimator id");
}

double stratified_classical_mse(StratifiedEstimatorId id, const StratifiedDesign& d,
                                std::optional<double> constant) {
  if (constant && id != StratifiedEstimatorId::combined_difference)
    throw std::invalid_argument(std::string(estimator_name(id)) + " has no tunable constant");
  const double R = d.mu_y() / d.mu_x();
  double mse = 0;
  const double k = (id == StratifiedEstimatorId::combined_difference)
                       ? constant.value_or(d_opt(d))
                       : 0.0;
  for (const auto& h : d.strata()) {
    const StratumMoments m = derive_stratum_moments(h);
    const double vy = h.sigma2_y + h.sigma2_u;
    const double vx = h.sigma2_x + h.sigma2_v;
    const double cxy = h.rho * std::sqrt(h.sigma2_y) * std::sqrt(h.sigma2_x);
    switch (id) {
      case StratifiedEstimatorId::usual_mean:
        mse += m.g * vy;
        break;
      case StratifiedEstimatorId::combined_ratio:
        mse += m.g * (vy + R * R * vx - 2.0 * R * cxy);
        break;
      case StratifiedEstimatorId::combined_product:
        mse += m.g * (vy + R * R * vx + 2.0 * R * cxy);
        break;
      case StratifiedEstimatorId::combined_difference:
        mse += m.g * (vy + k * k * vx - 2.0 * k * cxy);
        break;
    }
  }
  return mse;
}

double d_opt(const StratifiedDesign& d) {
  double num = 0, den = 0;
  for (const auto& h : d.strata()) {
    const double g = h.w * h.w / static_cast<double>(h.n_h);
    num += g * h.rho * std::sqrt(h.sigma2_y) * std::sqrt(h.sigma2_x);
    den += g * (h.sigma2_x + h.sigma2_v);
  }
  return num / den;
}

MomentSet aggregate_moments(const StratifiedDesign& d) {
  MomentSet m{};
  double a0 = 0, a1 = 0, a01 = 0;
  double cy = 0, cx = 0;
  for (const auto& h : d.strata()) {
    const double g = h.w * h.w / static_cast<double>(h.n_h);
    a0 += g * (h.sigma2_y + h.sigma2_u);
    a1 += g * (h.sigma2_x + h.sigma2_v);
    a01 += g * h.rho * std::sqrt(h.sigma2_y) * std::sqrt(h.sigma2_x);
    m.theta += g;
    cy += h.w * std::sqrt(h.sigma2_y) / h.mu_y;
    cx += h.w * std::sqrt(h.sigma2_x) / h.mu_x;
  }
  m.c_y = cy;
  m.c_x = cx;
  m.delta0 = a0 / (d.mu_y() * d.mu_y());
  m.delta1 = a1 / (d.mu_x() * d.mu_x());
  m.delta01 = a01 / (d.mu_y() * d.mu_x());
  return m;
}

double stratified_point_estimate(StratifiedEstimatorId id, double ybar_st, double xbar_st,
                                 const StratifiedDesign& d, std::optional<double> constant) {
  switch (id) {
    case StratifiedEstimatorId::usual_mean:
      return ybar_st;
    case StratifiedEstimatorId::combined_ratio:
      if (constant) throw std::invalid_argument("combined_ratio has no tunable constant");
      if (xbar_st == 0.0) throw std::domain_error("xbar_st: ratio estimate undefined at zero");
      return ybar_st * d.mu_x() / xbar_st;
    case StratifiedEstimatorId::combined_product:
      if (constant) throw std::invalid_argument("combined_product has no tunable constant");
      return ybar_st * xbar_st / d.mu_x();
    case StratifiedEstimatorId::combined_difference: {
      const double k = constant.value_or(d_opt(d));
      return ybar_st + k * (d.mu_x() - xbar_st);
    }
  }
  throw std::invalid_argument("unknown estimator id");
}

StratifiedClassResult stratified_class_mse(const ClassParams& p, const StratifiedDesign& d) {
  const detail::ErrorMoments m = design_moments(d);
  if (p.alpha != 0.0 && p.eta * m.mu_x + p.lambda == 0.0)
    throw std::domain_error("eta*mu_x + lambda: transformed auxiliary mean is zero");
  StratifiedClassResult out;
  out.decomposition = detail::decompose(p, m);
  out.scalars = optimal_scalars(out.decomposition);
  out.min_mse = mse_at(out.decomposition, out.scalars.alpha1, out.scalars.alpha2);
  out.min_mse_series = mse_at_series(out.decomposition, out.scalars.alpha1, out.scalars.alpha2);
  out.bias = detail::bias_closed(p, out.scalars.alpha1, out.scalars.alpha2, m);
  out.bias_series = detail::bias_series(p, out.scalars.alpha1, out.scalars.alpha2, m);
  return out;
}

std::vector<CatalogEntry> stratified_member_catalog(const StratifiedDesign& d) {
  const MomentSet agg = aggregate_moments(d);
  double rho_bar = 0;
  for (const auto& h : d.strata()) rho_bar += h.w * h.rho;
  std::vector<CatalogEntry> cat;
  cat.push_back({"usual_mean", {0, 1, 0}, 1.0, 0.0, false});
  cat.push_back({"combined_ratio", {1, 1, 0}, 1.0, 0.0, false});
  cat.push_back({"combined_product", {-1, 1, 0}, 1.0, 0.0, false});
  cat.push_back({"combined_difference", {0, -1, d.mu_x()}, 1.0, std::nullopt, false});
  cat.push_back({"t1", {-1, 1, 0}, std::nullopt, std::nullopt, false});
  cat.push_back({"t2", {1, 1, 1}, std::nullopt, std::nullopt, false});
  cat.push_back({"t3", {-1, 1, 1}, std::nullopt, std::nullopt, false});
  cat.push_back({"t4", {-1, 1, rho_bar}, std::nullopt, std::nullopt, false});
  cat.push_back({"t5", {-1, 1, agg.c_x}, std::nullopt, std::nullopt, false});
  cat.push_back({"t6", {-1, 1, -agg.c_x}, std::nullopt, std::nullopt, false});
  cat.push_back({"t7", {-1, -1, -1}, std::nullopt, std::nullopt, false});
  return cat;
}

MemberAnalysis analyze_stratified_member(const CatalogEntry& e, const StratifiedDesign& d) {
  return detail::analyze_entry(e, design_moments(d));
}

}  // namespace mee
