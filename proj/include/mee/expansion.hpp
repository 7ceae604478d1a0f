#pragma once

#include <array>
#include <optional>

#include "mee/classical.hpp"
#include "mee/population.hpp"
#include "mee/proposed.hpp"

namespace mee {

// Bivariate polynomial in the relative errors (e0, e1), truncated at total
// degree 2. Basis order: 1, e0, e1, e0^2, e0*e1, e1^2.
class TruncatedPoly {
 public:
  TruncatedPoly() = default;
  explicit TruncatedPoly(double constant) { c_[0] = constant; }

  static TruncatedPoly e0(double coeff = 1.0);
  static TruncatedPoly e1(double coeff = 1.0);

  double constant() const { return c_[0]; }
  double ce0() const { return c_[1]; }
  double ce1() const { return c_[2]; }
  double ce00() const { return c_[3]; }
  double ce01() const { return c_[4]; }
  double ce11() const { return c_[5]; }

  double& coeff(int i) { return c_[i]; }
  double coeff(int i) const { return c_[i]; }

  TruncatedPoly& operator+=(const TruncatedPoly& o);
  TruncatedPoly& operator-=(const TruncatedPoly& o);
  TruncatedPoly& operator*=(double k);

  friend TruncatedPoly operator+(TruncatedPoly a, const TruncatedPoly& b) { return a += b; }
  friend TruncatedPoly operator-(TruncatedPoly a, const TruncatedPoly& b) { return a -= b; }
  friend TruncatedPoly operator*(TruncatedPoly a, double k) { return a *= k; }
  friend TruncatedPoly operator*(double k, TruncatedPoly a) { return a *= k; }

 private:
  std::array<double, 6> c_{};
};

// Product with every term above total degree 2 dropped.
TruncatedPoly poly_mul(const TruncatedPoly& a, const TruncatedPoly& b);

// (1 + a*e1)^(-p) expanded to second order:
//   1 - p*a*e1 + p*(p+1)/2 * a^2 * e1^2.
TruncatedPoly binomial_series(double a, double p);

// Deviation polynomial (estimator - mu_y) of a classical estimator; the
// constant defaults to its optimum.
TruncatedPoly expand_estimator(ClassicalEstimatorId id, const PopulationSummary& s,
                               std::optional<double> constant = {});

// Deviation polynomial of a class member at given scalars.
TruncatedPoly expand_estimator(const ClassParams& p, double alpha1, double alpha2,
                               const PopulationSummary& s);

// E[poly] under E[e0] = E[e1] = 0, E[e0^2] = delta0, E[e0 e1] = delta01,
// E[e1^2] = delta1.
double expected_value(const TruncatedPoly& p, const MomentSet& m);
double expected_value(const TruncatedPoly& p, double delta0, double delta1, double delta01);

// E[poly^2] with the square truncated at degree 2 before taking expectations:
// the first-order MSE when poly is a deviation.
double expected_square(const TruncatedPoly& p, const MomentSet& m);
double expected_square(const TruncatedPoly& p, double delta0, double delta1, double delta01);

// Quadratic-form coefficients of the member MSE recovered purely from
// expected_square probes of the deviation polynomial at six scalar pairs.
// Drives the oracle-vs-closed-form equivalence checks.
MseDecomposition extract_quadratic(const ClassParams& p, const PopulationSummary& s);

}  // namespace mee
