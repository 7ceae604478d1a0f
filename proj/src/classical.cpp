#include "mee/classical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mee {

namespace {

[[noreturn]] void no_constant(ClassicalEstimatorId id) {
  throw std::invalid_argument(std::string(estimator_name(id)) + " has no tunable constant");
}

bool is_integral(double v) { return std::isfinite(v) && std::nearbyint(v) == v; }

// Shared minimum of the one-constant family: mu_y^2 * (delta0 - delta01^2/delta1).
double tuned_minimum(const PopulationSummary& s, const MomentSet& m) {
  return s.mu_y * s.mu_y * (m.delta0 - m.delta01 * m.delta01 / m.delta1);
}

}  // namespace

const char* estimator_name(ClassicalEstimatorId id) {
  switch (id) {
    case ClassicalEstimatorId::usual_mean: return "usual_mean";
    case ClassicalEstimatorId::ratio: return "ratio";
    case ClassicalEstimatorId::difference: return "difference";
    case ClassicalEstimatorId::srivastava: return "srivastava";
    case ClassicalEstimatorId::walsh: return "walsh";
    case ClassicalEstimatorId::ray_sahai: return "ray_sahai";
  }
  throw std::invalid_argument("unknown estimator id");
}

double classical_optimum(ClassicalEstimatorId id, const PopulationSummary& s) {
  const MomentSet m = derive_moments(s);
  switch (id) {
    case ClassicalEstimatorId::difference:
      return s.mu_y * m.delta01 / (s.mu_x * m.delta1);
    case ClassicalEstimatorId::srivastava:
    case ClassicalEstimatorId::walsh:
      return m.delta01 / m.delta1;
    case ClassicalEstimatorId::ray_sahai:
      return -m.delta01 / m.delta1;
    default:
      no_constant(id);
  }
}

double classical_mse(ClassicalEstimatorId id, const PopulationSummary& s) {
  const MomentSet m = derive_moments(s);
  const double mu2 = s.mu_y * s.mu_y;
  switch (id) {
    case ClassicalEstimatorId::usual_mean:
      return mu2 * m.delta0;
    case ClassicalEstimatorId::ratio:
      return mu2 * (m.delta0 + m.delta1 - 2.0 * m.delta01);
    case ClassicalEstimatorId::difference:
    case ClassicalEstimatorId::srivastava:
    case ClassicalEstimatorId::walsh:
    case ClassicalEstimatorId::ray_sahai:
      return tuned_minimum(s, m);
  }
  throw std::invalid_argument("unknown estimator id");
}

double classical_mse_at(ClassicalEstimatorId id, const PopulationSummary& s, double constant) {
  const MomentSet m = derive_moments(s);
  const double mu2 = s.mu_y * s.mu_y;
  switch (id) {
    case ClassicalEstimatorId::difference: {
      const double k = constant;
      return mu2 * m.delta0 + k * k * s.mu_x * s.mu_x * m.delta1 -
             2.0 * k * s.mu_x * s.mu_y * m.delta01;
    }
    case ClassicalEstimatorId::srivastava:
    case ClassicalEstimatorId::walsh: {
      const double l = constant;
      return mu2 * (m.delta0 + l * l * m.delta1 - 2.0 * l * m.delta01);
    }
    case ClassicalEstimatorId::ray_sahai: {
      const double l = constant;
      return mu2 * (m.delta0 + l * l * m.delta1 + 2.0 * l * m.delta01);
    }
    default:
      no_constant(id);
  }
}

double classical_bias(ClassicalEstimatorId id, const PopulationSummary& s,
                      std::optional<double> constant) {
  const MomentSet m = derive_moments(s);
  switch (id) {
    case ClassicalEstimatorId::usual_mean:
      throw std::invalid_argument("usual_mean is unbiased; bias is not tabulated");
    case ClassicalEstimatorId::ratio:
      if (constant) no_constant(id);
      return s.mu_y * (m.delta1 - m.delta01);
    case ClassicalEstimatorId::difference:
      // Linear in the sample means, so unbiased for every k.
      return 0.0;
    case ClassicalEstimatorId::srivastava: {
      const double l = constant.value_or(classical_optimum(id, s));
      return s.mu_y * (0.5 * l * (l + 1.0) * m.delta1 - l * m.delta01);
    }
    case ClassicalEstimatorId::walsh: {
      const double l = constant.value_or(classical_optimum(id, s));
      return s.mu_y * (l * l * m.delta1 - l * m.delta01);
    }
    case ClassicalEstimatorId::ray_sahai: {
      const double l = constant.value_or(classical_optimum(id, s));
      return s.mu_y * l * m.delta01;
    }
  }
  throw std::invalid_argument("unknown estimator id");
}

double point_estimate(ClassicalEstimatorId id, const SampleStats& st, const PopulationSummary& s,
                      std::optional<double> constant) {
  validate_summary(s);
  switch (id) {
    case ClassicalEstimatorId::usual_mean:
      return st.ybar;
    case ClassicalEstimatorId::ratio:
      if (constant) no_constant(id);
      if (st.xbar == 0.0) throw std::domain_error("xbar: ratio estimate undefined at zero");
      return st.ybar * s.mu_x / st.xbar;
    case ClassicalEstimatorId::difference: {
      const double k = constant.value_or(classical_optimum(id, s));
      return st.ybar + k * (s.mu_x - st.xbar);
    }
    case ClassicalEstimatorId::srivastava: {
      const double l = constant.value_or(classical_optimum(id, s));
      if (st.xbar == 0.0) throw std::domain_error("xbar: power estimate undefined at zero");
      const double base = s.mu_x / st.xbar;
      if (!is_integral(l) && base <= 0.0)
        throw std::domain_error("xbar: non-integer power of a nonpositive ratio");
      return st.ybar * std::pow(base, l);
    }
    case ClassicalEstimatorId::walsh: {
      const double l = constant.value_or(classical_optimum(id, s));
      const double den = l * st.xbar + (1.0 - l) * s.mu_x;
      if (den == 0.0) throw std::domain_error("xbar: walsh denominator vanishes");
      return st.ybar * s.mu_x / den;
    }
    case ClassicalEstimatorId::ray_sahai: {
      const double l = constant.value_or(classical_optimum(id, s));
      return st.ybar * ((1.0 - l) + l * st.xbar / s.mu_x);
    }
  }
  throw std::invalid_argument("unknown estimator id");
}

double pre(double mse, double reference_mse) {
  if (!(mse > 0.0)) throw std::domain_error("mse: efficiency requires a positive MSE");
  return 100.0 * reference_mse / mse;
}

}  // namespace mee
