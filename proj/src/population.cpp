#include "mee/population.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mee {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

const PopulationSummary& validate_summary(const PopulationSummary& s) {
  require(finite(s.mu_y) && s.mu_y != 0.0, "mu_y: study mean must be finite and nonzero");
  require(finite(s.mu_x) && s.mu_x != 0.0, "mu_x: auxiliary mean must be finite and nonzero");
  require(finite(s.sigma2_y) && s.sigma2_y > 0.0, "sigma2_y: variance must be positive");
  require(finite(s.sigma2_x) && s.sigma2_x > 0.0, "sigma2_x: variance must be positive");
  require(finite(s.rho) && s.rho >= -1.0 && s.rho <= 1.0, "rho: correlation out of range [-1, 1]");
  require(finite(s.sigma2_u) && s.sigma2_u >= 0.0, "sigma2_u: error variance must be nonnegative");
  require(finite(s.sigma2_v) && s.sigma2_v >= 0.0, "sigma2_v: error variance must be nonnegative");
  require(s.n >= 2, "n: sample size must be at least 2");
  return s;
}

MomentSet derive_moments(const PopulationSummary& s) {
  validate_summary(s);
  MomentSet m;
  m.theta = 1.0 / static_cast<double>(s.n);
  m.c_y = std::sqrt(s.sigma2_y) / s.mu_y;
  m.c_x = std::sqrt(s.sigma2_x) / s.mu_x;
  m.delta0 = m.theta * m.c_y * m.c_y * (1.0 + s.sigma2_u / s.sigma2_y);
  m.delta1 = m.theta * m.c_x * m.c_x * (1.0 + s.sigma2_v / s.sigma2_x);
  m.delta01 = m.theta * s.rho * m.c_y * m.c_x;
  return m;
}

}  // namespace mee
