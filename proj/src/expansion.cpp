#include "mee/expansion.hpp"

#include <stdexcept>

namespace mee {

TruncatedPoly TruncatedPoly::e0(double coeff) {
  TruncatedPoly p;
  p.c_[1] = coeff;
  return p;
}

TruncatedPoly TruncatedPoly::e1(double coeff) {
  TruncatedPoly p;
  p.c_[2] = coeff;
  return p;
}

TruncatedPoly& TruncatedPoly::operator+=(const TruncatedPoly& o) {
  for (int i = 0; i < 6; ++i) c_[i] += o.c_[i];
  return *this;
}

TruncatedPoly& TruncatedPoly::operator-=(const TruncatedPoly& o) {
  for (int i = 0; i < 6; ++i) c_[i] -= o.c_[i];
  return *this;
}

TruncatedPoly& TruncatedPoly::operator*=(double k) {
  for (int i = 0; i < 6; ++i) c_[i] *= k;
  return *this;
}

TruncatedPoly poly_mul(const TruncatedPoly& a, const TruncatedPoly& b) {
  TruncatedPoly r;
  r.coeff(0) = a.coeff(0) * b.coeff(0);
  r.coeff(1) = a.coeff(0) * b.coeff(1) + a.coeff(1) * b.coeff(0);
  r.coeff(2) = a.coeff(0) * b.coeff(2) + a.coeff(2) * b.coeff(0);
  r.coeff(3) = a.coeff(0) * b.coeff(3) + a.coeff(3) * b.coeff(0) + a.coeff(1) * b.coeff(1);
  r.coeff(4) = a.coeff(0) * b.coeff(4) + a.coeff(4) * b.coeff(0) + a.coeff(1) * b.coeff(2) +
               a.coeff(2) * b.coeff(1);
  r.coeff(5) = a.coeff(0) * b.coeff(5) + a.coeff(5) * b.coeff(0) + a.coeff(2) * b.coeff(2);
  return r;
}

TruncatedPoly binomial_series(double a, double p) {
  TruncatedPoly r(1.0);
  r.coeff(2) = -p * a;
  r.coeff(5) = 0.5 * p * (p + 1.0) * a * a;
  return r;
}

namespace {

TruncatedPoly one_plus_e0() {
  TruncatedPoly p(1.0);
  p.coeff(1) = 1.0;
  return p;
}

}  // namespace

TruncatedPoly expand_estimator(ClassicalEstimatorId id, const PopulationSummary& s,
                               std::optional<double> constant) {
  validate_summary(s);
  const TruncatedPoly ybar = one_plus_e0() * s.mu_y;
  const TruncatedPoly mu(s.mu_y);
  switch (id) {
    case ClassicalEstimatorId::usual_mean:
      return ybar - mu;
    case ClassicalEstimatorId::ratio:
      if (constant) throw std::invalid_argument("ratio has no tunable constant");
      return poly_mul(ybar, binomial_series(1.0, 1.0)) - mu;
    case ClassicalEstimatorId::difference: {
      const double k = constant.value_or(classical_optimum(id, s));
      return ybar - mu - TruncatedPoly::e1(k * s.mu_x);
    }
    case ClassicalEstimatorId::srivastava: {
      const double l = constant.value_or(classical_optimum(id, s));
      return poly_mul(ybar, binomial_series(1.0, l)) - mu;
    }
    case ClassicalEstimatorId::walsh: {
      const double l = constant.value_or(classical_optimum(id, s));
      return poly_mul(ybar, binomial_series(l, 1.0)) - mu;
    }
    case ClassicalEstimatorId::ray_sahai: {
      const double l = constant.value_or(classical_optimum(id, s));
      TruncatedPoly mix(1.0);
      mix.coeff(2) = l;  // (1-l) + l*(1+e1)
      return poly_mul(ybar, mix) - mu;
    }
  }
  throw std::invalid_argument("unknown estimator id");
}

TruncatedPoly expand_estimator(const ClassParams& p, double alpha1, double alpha2,
                               const PopulationSummary& s) {
  validate_summary(s);
  const double mt = p.eta * s.mu_x + p.lambda;
  TruncatedPoly bracket(alpha1 * s.mu_y + alpha2 * mt + (1.0 - alpha1 - alpha2) * mt);
  bracket += TruncatedPoly::e0(alpha1 * s.mu_y);
  bracket += TruncatedPoly::e1(alpha2 * p.eta * s.mu_x);
  if (p.alpha == 0.0) return bracket - TruncatedPoly(s.mu_y);
  if (mt == 0.0) throw std::domain_error("eta*mu_x + lambda: transformed auxiliary mean is zero");
  const double a = p.eta * s.mu_x / mt;
  return poly_mul(bracket, binomial_series(a, p.alpha)) - TruncatedPoly(s.mu_y);
}

double expected_value(const TruncatedPoly& p, double delta0, double delta1, double delta01) {
  return p.constant() + p.ce00() * delta0 + p.ce01() * delta01 + p.ce11() * delta1;
}

double expected_value(const TruncatedPoly& p, const MomentSet& m) {
  return expected_value(p, m.delta0, m.delta1, m.delta01);
}

double expected_square(const TruncatedPoly& p, double delta0, double delta1, double delta01) {
  return expected_value(poly_mul(p, p), delta0, delta1, delta01);
}

double expected_square(const TruncatedPoly& p, const MomentSet& m) {
  return expected_square(p, m.delta0, m.delta1, m.delta01);
}

MseDecomposition extract_quadratic(const ClassParams& p, const PopulationSummary& s) {
  const MomentSet m = derive_moments(s);
  const auto probe = [&](double a1, double a2) {
    return expected_square(expand_estimator(p, a1, a2, s), m);
  };
  const double f00 = probe(0, 0), f10 = probe(1, 0), f01 = probe(0, 1);
  const double f11 = probe(1, 1), f20 = probe(2, 0), f02 = probe(0, 2);
  MseDecomposition d;
  d.phi1 = 0.5 * (f20 - 2.0 * f10 + f00);
  d.phi2 = 0.5 * (f02 - 2.0 * f01 + f00);
  d.phi3 = 0.5 * (d.phi1 + f00 - f10);
  d.phi4 = 0.5 * (d.phi2 + f00 - f01);
  d.phi5 = 0.5 * (f11 - d.phi1 - d.phi2 + 2.0 * d.phi3 + 2.0 * d.phi4 - f00);
  d.phi = f00;
  d.phi_series = f00;
  return d;
}

}  // namespace mee
