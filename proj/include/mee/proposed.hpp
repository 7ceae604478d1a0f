#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mee/classical.hpp"
#include "mee/population.hpp"

namespace mee {

// Constants selecting one member of the difference-type class
//   t = [a1*ybar + a2*xt + (1 - a1 - a2)*mt] * (mt / xt)^alpha,
// where xt = eta*xbar + lambda and mt = eta*mu_x + lambda are the transformed
// auxiliary mean and its population value.
struct ClassParams {
  double alpha = 0;
  double eta = 1;
  double lambda = 0;
};

// Derived quantities of a member on a given population.
struct ClassContext {
  double mu_x_star;  // eta*mu_x + lambda, must be nonzero
  double a;          // eta*mu_x / mu_x_star
  double b;          // alpha*(alpha+1)/2 * a^2
  double c;          // mu_y - mu_x_star
};

// First-order MSE of a member as a quadratic in the scalars (a1, a2):
//   mse(a1, a2) = a1^2*phi1 + a2^2*phi2 - 2*a1*phi3 - 2*a2*phi4
//                 + 2*a1*a2*phi5 + constant.
// Two values of the scalar-free constant are carried. `phi` is the closed
// form this toolkit reports (its quadratic term uses the untransformed
// auxiliary mean); `phi_series` is what the degree-2 series expansion
// produces (the transformed mean instead). They coincide whenever
// mu_x_star^2 equals mu_x^2; otherwise the difference is recorded in the
// discrepancy ledger, and simulation theory uses the series value.
struct MseDecomposition {
  double phi1, phi2, phi3, phi4, phi5;
  double phi;
  double phi_series;
};

struct OptimalScalars {
  double alpha1;
  double alpha2;
};

// Errors when eta*mu_x + lambda == 0 (the transformed mean degenerates).
ClassContext build_context(const ClassParams& p, const PopulationSummary& s);

MseDecomposition mse_decomposition(const ClassParams& p, const PopulationSummary& s);

// Quadratic evaluated at given scalars, with either constant term.
double mse_at(const MseDecomposition& d, double alpha1, double alpha2);
double mse_at_series(const MseDecomposition& d, double alpha1, double alpha2);

// Unique stationary point of the quadratic. Errors when the discriminant
// phi1*phi2 - phi5^2 is degenerate.
OptimalScalars optimal_scalars(const MseDecomposition& d);

// Minimum first-order MSE over (a1, a2), closed-form and series constants.
double min_mse(const ClassParams& p, const PopulationSummary& s);
double min_mse_series(const ClassParams& p, const PopulationSummary& s);

// First-order bias at given scalars. bias_tp is the closed form reported by
// this toolkit; bias_tp_series adds the constant term (a1 - 1)*(mu_y -
// mu_x_star) that the series expansion produces (ledgered discrepancy; the
// two agree whenever a1 == 1).
double bias_tp(const ClassParams& p, const OptimalScalars& sc, const PopulationSummary& s);
double bias_tp_series(const ClassParams& p, const OptimalScalars& sc, const PopulationSummary& s);

// Plug-in value on observed sample means.
double point_estimate_tp(const ClassParams& p, const OptimalScalars& sc, const SampleStats& st,
                         const PopulationSummary& s);

// One catalog row: a published member with its scalar policy. Fixed scalars
// pin a1/a2; unset ones are optimized. alpha_is_optimized marks the member
// whose exponent itself is set to the MSE-minimizing power.
struct CatalogEntry {
  std::string name;
  ClassParams params;  // lambda already resolved against the summary
  std::optional<double> fixed_alpha1;
  std::optional<double> fixed_alpha2;
  bool alpha_is_optimized = false;
};

// The twelve published members: five classical-equivalent rows (usual mean,
// ratio, difference, power, regression-in-scalars) and the seven shrinkage
// members t1..t7.
std::vector<CatalogEntry> member_catalog(const PopulationSummary& s);

const CatalogEntry& find_member(const std::vector<CatalogEntry>& catalog, const std::string& name);

struct MemberAnalysis {
  OptimalScalars scalars;  // resolved per the entry's policy
  double mse;              // closed-form constant
  double mse_series;
  double bias;
  double bias_series;
};

// Resolves the entry's scalars and evaluates MSE/bias. Handles the
// alpha == 0 members whose transformed mean vanishes (no power is taken, so
// the context degeneracy is immaterial).
MemberAnalysis analyze_member(const CatalogEntry& e, const PopulationSummary& s);

namespace detail {

// Moment bundle the class formulas actually consume. SRS fills it from
// derive_moments; the stratified design fills it with aggregate moments.
struct ErrorMoments {
  double mu_y, mu_x;
  double d0, d1, d01;
};

MseDecomposition decompose(const ClassParams& p, const ErrorMoments& m);
double bias_closed(const ClassParams& p, double a1, double a2, const ErrorMoments& m);
double bias_series(const ClassParams& p, double a1, double a2, const ErrorMoments& m);
MemberAnalysis analyze_entry(const CatalogEntry& e, const ErrorMoments& m);

}  // namespace detail

}  // namespace mee
