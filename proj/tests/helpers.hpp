#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mee/population.hpp"
#include "mee/proposed.hpp"
#include "mee/stratified.hpp"

namespace tt {

// The worked example population behind the tabulated reference values.
inline mee::PopulationSummary ref_pop() {
  mee::PopulationSummary s;
  s.mu_y = 127.0;
  s.mu_x = 170.0;
  s.sigma2_y = 1278.0;
  s.sigma2_x = 3300.0;
  s.rho = 0.964;
  s.sigma2_u = 36.0;
  s.sigma2_v = 36.0;
  s.n = 10;
  return s;
}

inline bool close_rel(double a, double b, double tol, double floor = 0.0) {
  const double scale = std::max({std::fabs(a), std::fabs(b), floor});
  if (scale == 0.0) return true;
  return std::fabs(a - b) <= tol * scale;
}

// Runs fn and returns the exception message, or "" when nothing was thrown.
template <class Fn>
std::string caught(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

inline bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// Magnitude of the terms a scalar quadratic sums; comparisons of values
// assembled from it use this as the cancellation floor.
inline double phi_scale(const mee::MseDecomposition& d) {
  return std::fabs(d.phi1) + std::fabs(d.phi2) + std::fabs(d.phi3) + std::fabs(d.phi4) +
         std::fabs(d.phi5) + std::fabs(d.phi_series);
}

// Deterministic source of valid inputs for property tests.
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int int_uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double signed_mag(double lo, double hi) {
    const double m = uni(lo, hi);
    return int_uni(0, 1) ? m : -m;
  }

  mee::PopulationSummary summary() {
    mee::PopulationSummary s;
    s.mu_y = signed_mag(20.0, 300.0);
    s.mu_x = signed_mag(20.0, 300.0);
    s.sigma2_y = uni(1.0, 4000.0);
    s.sigma2_x = uni(1.0, 4000.0);
    s.rho = uni(-0.99, 0.99);
    s.sigma2_u = uni(0.0, 100.0);
    s.sigma2_v = uni(0.0, 100.0);
    s.n = int_uni(2, 400);
    return s;
  }

  // Transform kept away from the degenerate eta*mu_x + lambda = 0 line.
  mee::ClassParams params(const mee::PopulationSummary& s) {
    mee::ClassParams p;
    p.alpha = int_uni(0, 1) ? static_cast<double>(int_uni(-2, 2)) : uni(-1.5, 1.5);
    do {
      p.eta = uni(0.2, 2.0);
      p.lambda = uni(-0.3, 0.3) * s.mu_x;
    } while (std::fabs(p.eta * s.mu_x + p.lambda) < 0.05 * std::fabs(s.mu_x));
    return p;
  }

  mee::StratifiedDesign design(int strata_count) {
    std::vector<mee::StratumSummary> strata(strata_count);
    double wsum = 0;
    for (auto& h : strata) {
      h.w = uni(0.2, 1.0);
      wsum += h.w;
    }
    double assigned = 0;
    for (auto& h : strata) {
      h.w /= wsum;
      assigned += h.w;
      h.n_h = int_uni(2, 80);
      h.mu_y = uni(40.0, 200.0);
      h.mu_x = uni(40.0, 200.0);
      h.sigma2_y = uni(1.0, 2000.0);
      h.sigma2_x = uni(1.0, 2000.0);
      h.rho = uni(-0.95, 0.95);
      h.sigma2_u = uni(0.0, 60.0);
      h.sigma2_v = uni(0.0, 60.0);
    }
    strata.back().w += 1.0 - assigned;  // exact sum for the validator
    return mee::StratifiedDesign(std::move(strata));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace tt
