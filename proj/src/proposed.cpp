#include "mee/proposed.hpp"

#include <cmath>
#include <stdexcept>

namespace mee {

namespace {

bool is_integral(double v) { return std::isfinite(v) && std::nearbyint(v) == v; }

detail::ErrorMoments srs_moments(const PopulationSummary& s) {
  const MomentSet m = derive_moments(s);
  return {s.mu_y, s.mu_x, m.delta0, m.delta1, m.delta01};
}

// alpha*a and b with the alpha == 0 case short-circuited so members whose
// transformed mean vanishes stay finite (no power factor is taken).
struct PowerTerms {
  double g;  // alpha * a
  double b;
  double p;  // mu_x_star
  double mx; // eta * mu_x
};

PowerTerms power_terms(const ClassParams& p, const detail::ErrorMoments& m) {
  const double mt = p.eta * m.mu_x + p.lambda;
  const double mx = p.eta * m.mu_x;
  if (p.alpha == 0.0) return {0.0, 0.0, mt, mx};
  if (mt == 0.0) throw std::domain_error("eta*mu_x + lambda: transformed auxiliary mean is zero");
  const double a = mx / mt;
  return {p.alpha * a, 0.5 * p.alpha * (p.alpha + 1.0) * a * a, mt, mx};
}

}  // namespace

ClassContext build_context(const ClassParams& p, const PopulationSummary& s) {
  validate_summary(s);
  const double mt = p.eta * s.mu_x + p.lambda;
  if (mt == 0.0) throw std::domain_error("eta*mu_x + lambda: transformed auxiliary mean is zero");
  ClassContext ctx;
  ctx.mu_x_star = mt;
  ctx.a = p.eta * s.mu_x / mt;
  ctx.b = 0.5 * p.alpha * (p.alpha + 1.0) * ctx.a * ctx.a;
  ctx.c = s.mu_y - mt;
  return ctx;
}

namespace detail {

MseDecomposition decompose(const ClassParams& p, const ErrorMoments& m) {
  const PowerTerms t = power_terms(p, m);
  const double g = t.g, b = t.b, P = t.p, M = t.mx;
  const double C = m.mu_y - P;
  MseDecomposition d;
  d.phi1 = C * C + m.mu_y * m.mu_y * m.d0 + m.d1 * (g * g * C * C + 2.0 * b * C * C) -
           4.0 * g * C * m.mu_y * m.d01;
  d.phi2 = M * M * m.d1;
  d.phi3 = C * C + m.d1 * (b * C * C - b * C * P - g * g * C * P) +
           m.d01 * g * m.mu_y * (P - C);
  d.phi4 = M * g * m.d1 * (P - C);
  d.phi5 = M * (m.mu_y * m.d01 - 2.0 * g * C * m.d1);
  d.phi = C * C + m.d1 * (g * g * m.mu_x * m.mu_x - 2.0 * b * C * P);
  d.phi_series = C * C + m.d1 * (g * g * P * P - 2.0 * b * C * P);
  return d;
}

double bias_closed(const ClassParams& p, double a1, double a2, const ErrorMoments& m) {
  const PowerTerms t = power_terms(p, m);
  const double C = m.mu_y - t.p;
  return t.b * t.p * m.d1 + a1 * (t.b * C * m.d1 - t.g * m.mu_y * m.d01) -
         a2 * t.mx * t.g * m.d1;
}

double bias_series(const ClassParams& p, double a1, double a2, const ErrorMoments& m) {
  const PowerTerms t = power_terms(p, m);
  return (a1 - 1.0) * (m.mu_y - t.p) + bias_closed(p, a1, a2, m);
}

MemberAnalysis analyze_entry(const CatalogEntry& e, const ErrorMoments& m) {
  const MseDecomposition d = decompose(e.params, m);
  OptimalScalars sc{};
  if (e.fixed_alpha1 && e.fixed_alpha2) {
    sc = {*e.fixed_alpha1, *e.fixed_alpha2};
  } else if (e.fixed_alpha1) {
    if (d.phi2 == 0.0) throw std::domain_error("phi2: no scalar direction to optimize");
    sc = {*e.fixed_alpha1, (d.phi4 - *e.fixed_alpha1 * d.phi5) / d.phi2};
  } else {
    sc = optimal_scalars(d);
  }
  MemberAnalysis out;
  out.scalars = sc;
  out.mse = mse_at(d, sc.alpha1, sc.alpha2);
  out.mse_series = mse_at_series(d, sc.alpha1, sc.alpha2);
  out.bias = bias_closed(e.params, sc.alpha1, sc.alpha2, m);
  out.bias_series = bias_series(e.params, sc.alpha1, sc.alpha2, m);
  return out;
}

}  // namespace detail

MseDecomposition mse_decomposition(const ClassParams& p, const PopulationSummary& s) {
  build_context(p, s);  // enforce the contract even when alpha == 0
  return detail::decompose(p, srs_moments(s));
}

double mse_at(const MseDecomposition& d, double alpha1, double alpha2) {
  return alpha1 * alpha1 * d.phi1 + alpha2 * alpha2 * d.phi2 - 2.0 * alpha1 * d.phi3 -
         2.0 * alpha2 * d.phi4 + 2.0 * alpha1 * alpha2 * d.phi5 + d.phi;
}

double mse_at_series(const MseDecomposition& d, double alpha1, double alpha2) {
  return mse_at(d, alpha1, alpha2) - d.phi + d.phi_series;
}

OptimalScalars optimal_scalars(const MseDecomposition& d) {
  const double det = d.phi1 * d.phi2 - d.phi5 * d.phi5;
  const double scale = std::max(1.0, std::max(std::fabs(d.phi1 * d.phi2), d.phi5 * d.phi5));
  if (std::fabs(det) <= 1e-14 * scale)
    throw std::domain_error("phi1*phi2 - phi5^2: quadratic is degenerate");
  return {(d.phi2 * d.phi3 - d.phi4 * d.phi5) / det,
          (d.phi1 * d.phi4 - d.phi3 * d.phi5) / det};
}

double min_mse(const ClassParams& p, const PopulationSummary& s) {
  const MseDecomposition d = mse_decomposition(p, s);
  const OptimalScalars sc = optimal_scalars(d);
  return mse_at(d, sc.alpha1, sc.alpha2);
}

double min_mse_series(const ClassParams& p, const PopulationSummary& s) {
  const MseDecomposition d = mse_decomposition(p, s);
  const OptimalScalars sc = optimal_scalars(d);
  return mse_at_series(d, sc.alpha1, sc.alpha2);
}

double bias_tp(const ClassParams& p, const OptimalScalars& sc, const PopulationSummary& s) {
  return detail::bias_closed(p, sc.alpha1, sc.alpha2, srs_moments(s));
}

double bias_tp_series(const ClassParams& p, const OptimalScalars& sc, const PopulationSummary& s) {
  return detail::bias_series(p, sc.alpha1, sc.alpha2, srs_moments(s));
}

double point_estimate_tp(const ClassParams& p, const OptimalScalars& sc, const SampleStats& st,
                         const PopulationSummary& s) {
  validate_summary(s);
  const double xt = p.eta * st.xbar + p.lambda;
  const double mt = p.eta * s.mu_x + p.lambda;
  const double bracket =
      sc.alpha1 * st.ybar + sc.alpha2 * xt + (1.0 - sc.alpha1 - sc.alpha2) * mt;
  if (p.alpha == 0.0) return bracket;
  if (xt == 0.0) throw std::domain_error("eta*xbar + lambda: transformed sample mean is zero");
  const double base = mt / xt;
  if (!is_integral(p.alpha) && base <= 0.0)
    throw std::domain_error("mu_x_star/xbar_star: non-integer power of a nonpositive ratio");
  return bracket * std::pow(base, p.alpha);
}

std::vector<CatalogEntry> member_catalog(const PopulationSummary& s) {
  const MomentSet m = derive_moments(s);
  const double l_opt = m.delta01 / m.delta1;
  std::vector<CatalogEntry> cat;
  cat.push_back({"ybar", {0, 1, 0}, 1.0, 0.0, false});
  cat.push_back({"ybar_R", {1, 1, 0}, 1.0, 0.0, false});
  cat.push_back({"ybar_d", {0, -1, s.mu_x}, 1.0, std::nullopt, false});
  cat.push_back({"ybar_s", {l_opt, 1, 0}, 1.0, 0.0, true});
  cat.push_back({"ybar_DS", {0, 1, 0}, 1.0, std::nullopt, false});
  cat.push_back({"t1", {-1, 1, 0}, std::nullopt, std::nullopt, false});
  cat.push_back({"t2", {1, 1, 1}, std::nullopt, std::nullopt, false});
  cat.push_back({"t3", {-1, 1, 1}, std::nullopt, std::nullopt, false});
  cat.push_back({"t4", {-1, 1, s.rho}, std::nullopt, std::nullopt, false});
  cat.push_back({"t5", {-1, 1, m.c_x}, std::nullopt, std::nullopt, false});
  cat.push_back({"t6", {-1, 1, -m.c_x}, std::nullopt, std::nullopt, false});
  cat.push_back({"t7", {-1, -1, -1}, std::nullopt, std::nullopt, false});
  return cat;
}

const CatalogEntry& find_member(const std::vector<CatalogEntry>& catalog, const std::string& name) {
  for (const auto& e : catalog)
    if (e.name == name) return e;
  throw std::invalid_argument("unknown member: " + name);
}

MemberAnalysis analyze_member(const CatalogEntry& e, const PopulationSummary& s) {
  return detail::analyze_entry(e, srs_moments(s));
}

}  // namespace mee
