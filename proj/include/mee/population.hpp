#pragma once

namespace mee {

// Known population quantities for simple random sampling where both the study
// variable y and the auxiliary variable x are observed with additive,
// zero-mean, mutually independent measurement errors.
struct PopulationSummary {
  double mu_y = 0;      // mean of the study variable (nonzero)
  double mu_x = 0;      // mean of the auxiliary variable (nonzero)
  double sigma2_y = 0;  // variance of the true study variable (> 0)
  double sigma2_x = 0;  // variance of the true auxiliary variable (> 0)
  double rho = 0;       // correlation of the true variables, in [-1, 1]
  double sigma2_u = 0;  // variance of the error on y (>= 0)
  double sigma2_v = 0;  // variance of the error on x (>= 0)
  int n = 0;            // sample size (>= 2)
};

// First-order moments of the relative errors e0 = (ybar - mu_y)/mu_y and
// e1 = (xbar - mu_x)/mu_x. These are the only ingredients every closed-form
// bias/MSE expression needs:
//   E[e0^2]  = delta0,  E[e1^2] = delta1,  E[e0*e1] = delta01.
struct MomentSet {
  double theta;    // 1/n
  double c_y;      // sd(y) / mu_y
  double c_x;      // sd(x) / mu_x
  double delta0;   // theta * c_y^2 * (1 + sigma2_u/sigma2_y)
  double delta1;   // theta * c_x^2 * (1 + sigma2_v/sigma2_x)
  double delta01;  // theta * rho * c_y * c_x
};

// Throws std::domain_error naming the violated field.
const PopulationSummary& validate_summary(const PopulationSummary& s);

// Validates, then derives the moment set.
MomentSet derive_moments(const PopulationSummary& s);

}  // namespace mee
