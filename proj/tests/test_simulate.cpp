#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "mee/simulate.hpp"

using namespace mee;

namespace {

StratifiedDesign single_stratum(const PopulationSummary& s) {
  StratumSummary h;
  h.w = 1.0;
  h.n_h = s.n;
  h.mu_y = s.mu_y;
  h.mu_x = s.mu_x;
  h.sigma2_y = s.sigma2_y;
  h.sigma2_x = s.sigma2_x;
  h.rho = s.rho;
  h.sigma2_u = s.sigma2_u;
  h.sigma2_v = s.sigma2_v;
  return StratifiedDesign({h});
}

}  // namespace

TEST_CASE("generator streams are reproducible and separated") {
  auto a = replication_stream(9, 3);
  auto b = replication_stream(9, 3);
  for (int i = 0; i < 5; ++i) CHECK(a.next() == b.next());

  CHECK(replication_stream(9, 3).next() != replication_stream(9, 4).next());
  CHECK(replication_stream(9, 3).next() != replication_stream(10, 3).next());
}

TEST_CASE("uniform draws live on the half-open unit interval") {
  auto rng = replication_stream(1, 0);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.u01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("gaussian pairs have the right moments") {
  auto rng = replication_stream(42, 0);
  double sum = 0, sum2 = 0;
  const long pairs = 100000;
  for (long i = 0; i < pairs; ++i) {
    double z1, z2;
    rng.gauss_pair(z1, z2);
    sum += z1 + z2;
    sum2 += z1 * z1 + z2 * z2;
  }
  const double n = 2.0 * pairs;
  CHECK(std::fabs(sum / n) < 0.02);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.03);
}

TEST_CASE("perfect correlation without errors aligns the draws") {
  PopulationSummary s = tt::ref_pop();
  s.rho = 1.0;
  s.sigma2_x = s.sigma2_y;
  s.sigma2_u = 0.0;
  s.sigma2_v = 0.0;
  auto rng = replication_stream(7, 0);
  const double sd = std::sqrt(s.sigma2_y);
  for (int i = 0; i < 100; ++i) {
    const Observation o = generate_observation(rng, s);
    // Standardized deviations agree up to the rounding of the mean shifts.
    CHECK(tt::close_rel((o.y - s.mu_y) / sd, (o.x - s.mu_x) / sd, 1e-12, 1e-12));
  }
}

TEST_CASE("a million draws reproduce the population correlation") {
  PopulationSummary s = tt::ref_pop();
  s.sigma2_u = 0.0;
  s.sigma2_v = 0.0;
  auto rng = replication_stream(99, 0);
  double sy = 0, sx = 0, syy = 0, sxx = 0, sxy = 0;
  const long n = 1000000;
  for (long i = 0; i < n; ++i) {
    const Observation o = generate_observation(rng, s);
    sy += o.y;
    sx += o.x;
    syy += o.y * o.y;
    sxx += o.x * o.x;
    sxy += o.y * o.x;
  }
  const double my = sy / n, mx = sx / n;
  const double vy = syy / n - my * my, vx = sxx / n - mx * mx;
  const double r = (sxy / n - my * mx) / std::sqrt(vy * vx);
  CHECK(std::fabs(r - 0.964) < 0.003);
}

TEST_CASE("one replication equals the hand computation") {
  const auto s = tt::ref_pop();
  SimulationConfig cfg;
  cfg.replications = 1;
  cfg.seed = 5;
  cfg.estimators = {"ybar"};
  const auto rep = run_simulation(cfg, s);

  auto rng = replication_stream(5, 0);
  double sum = 0;
  for (int i = 0; i < s.n; ++i) sum += generate_observation(rng, s).y;
  const double dev = sum / s.n - s.mu_y;

  REQUIRE(rep.estimators.size() == 1);
  CHECK(rep.estimators[0].empirical_bias == dev);
  CHECK(rep.estimators[0].empirical_mse == dev * dev);
  CHECK(rep.estimators[0].used == 1);
}

TEST_CASE("reports are identical across runs and worker counts") {
  const auto s = tt::ref_pop();
  SimulationConfig cfg;
  cfg.replications = 50000;
  cfg.seed = 123;

  auto base = run_simulation(cfg, s);
  auto again = run_simulation(cfg, s);
  cfg.workers = 3;
  auto threaded = run_simulation(cfg, s);

  REQUIRE(base.estimators.size() == 14);
  REQUIRE(threaded.estimators.size() == base.estimators.size());
  for (std::size_t i = 0; i < base.estimators.size(); ++i) {
    for (const auto* other : {&again.estimators[i], &threaded.estimators[i]}) {
      CHECK(base.estimators[i].name == other->name);
      CHECK(base.estimators[i].used == other->used);
      CHECK(base.estimators[i].failures == other->failures);
      CHECK(base.estimators[i].empirical_bias == other->empirical_bias);
      CHECK(base.estimators[i].empirical_mse == other->empirical_mse);
      CHECK(base.estimators[i].theoretical_mse == other->theoretical_mse);
      CHECK(base.estimators[i].mc_se == other->mc_se);
    }
  }
}

TEST_CASE("error-free usual mean lands on the textbook variance") {
  PopulationSummary s = tt::ref_pop();
  s.sigma2_u = 0.0;
  s.sigma2_v = 0.0;
  SimulationConfig cfg;
  cfg.replications = 200000;
  cfg.seed = 20250819;
  cfg.estimators = {"ybar"};
  const auto rep = run_simulation(cfg, s);
  const auto& e = rep.estimators[0];
  CHECK(tt::close_rel(e.theoretical_mse, 127.8, 1e-13));
  CHECK(e.relative_gap < 0.02);
}

TEST_CASE("usual mean at the worked example sits inside its error bars") {
  SimulationConfig cfg;
  cfg.replications = 200000;
  cfg.seed = 20250819;
  cfg.estimators = {"ybar"};
  const auto rep = run_simulation(cfg, tt::ref_pop());
  const auto& e = rep.estimators[0];
  CHECK(tt::close_rel(e.theoretical_mse, 131.4, 1e-13));
  CHECK(e.relative_gap < 0.02);
  CHECK(std::fabs(e.empirical_mse - e.theoretical_mse) < 3.0 * e.mc_se);
}

TEST_CASE("first-order theory holds to fifteen percent for the ratio types") {
  SimulationConfig cfg;
  cfg.replications = 200000;
  cfg.seed = 20250819;
  cfg.estimators = {"ybar_R", "ybar_s", "walsh"};
  const auto rep = run_simulation(cfg, tt::ref_pop());
  for (const auto& e : rep.estimators) {
    CHECK(e.failures == 0);
    CHECK(e.relative_gap < 0.15);
  }
}

TEST_CASE("undefined evaluations are counted, not propagated") {
  PopulationSummary s;
  s.mu_y = 10.0;
  s.mu_x = 5.0;
  s.sigma2_y = 100.0;
  s.sigma2_x = 400.0;
  s.rho = 0.5;
  s.n = 4;
  SimulationConfig cfg;
  cfg.replications = 2000;
  cfg.seed = 11;
  cfg.estimators = {"ybar_s"};  // non-integer power, often negative base
  const auto rep = run_simulation(cfg, s);
  const auto& e = rep.estimators[0];
  CHECK(e.failures > 100);
  CHECK(e.used + e.failures == 2000);
  CHECK(std::isfinite(e.empirical_mse));
  CHECK(std::isfinite(e.empirical_bias));
}

TEST_CASE("configuration errors") {
  const auto s = tt::ref_pop();
  SimulationConfig cfg;
  cfg.replications = 0;
  CHECK(tt::contains(tt::caught([&] { run_simulation(cfg, s); }),
                     "replications: must be positive"));
  cfg.replications = 10;
  cfg.workers = 0;
  CHECK(tt::contains(tt::caught([&] { run_simulation(cfg, s); }), "workers"));
  cfg.workers = 1;
  cfg.estimators = {"t99"};
  CHECK(tt::contains(tt::caught([&] { run_simulation(cfg, s); }), "unknown member: t99"));
  cfg.estimators = {};
  cfg.sample_size = 1;
  CHECK(tt::contains(tt::caught([&] { run_simulation(cfg, s); }),
                     "sample size must be at least 2"));
}

TEST_CASE("sample size override is recorded and applied") {
  const auto s = tt::ref_pop();
  SimulationConfig cfg;
  cfg.replications = 2000;
  cfg.seed = 17;
  cfg.sample_size = 40;
  cfg.estimators = {"ybar"};
  const auto rep = run_simulation(cfg, s);
  CHECK(rep.sample_size == 40);
  // Var(ybar) scales like 1/n: 1314/40.
  CHECK(tt::close_rel(rep.estimators[0].theoretical_mse, 1314.0 / 40.0, 1e-13));
}

TEST_CASE("default estimator sets") {
  const auto srs = default_estimator_names();
  REQUIRE(srs.size() == 14);
  CHECK(srs.front() == "ybar");
  CHECK(srs.back() == "t7");
  const auto strat = default_stratified_estimator_names();
  REQUIRE(strat.size() == 11);
  CHECK(strat.front() == "usual_mean");
  CHECK(strat.back() == "t7");
}

TEST_CASE("a single stratum simulates exactly like simple random sampling") {
  const auto s = tt::ref_pop();
  SimulationConfig cfg;
  cfg.replications = 5000;
  cfg.seed = 77;
  cfg.estimators = {"ybar"};
  const auto srs = run_simulation(cfg, s);

  cfg.estimators = {"usual_mean"};
  const auto strat = run_stratified_simulation(cfg, single_stratum(s));

  CHECK(srs.estimators[0].empirical_bias == strat.estimators[0].empirical_bias);
  CHECK(srs.estimators[0].empirical_mse == strat.estimators[0].empirical_mse);
  CHECK(tt::close_rel(srs.estimators[0].theoretical_mse, strat.estimators[0].theoretical_mse,
                      1e-13));
}

TEST_CASE("stratified simulation matches the linear theory") {
  StratumSummary h1;
  h1.w = 0.6;
  h1.n_h = 30;
  h1.mu_y = 120.0;
  h1.mu_x = 160.0;
  h1.sigma2_y = 900.0;
  h1.sigma2_x = 2500.0;
  h1.rho = 0.85;
  h1.sigma2_u = 25.0;
  h1.sigma2_v = 25.0;
  StratumSummary h2 = h1;
  h2.w = 0.4;
  h2.n_h = 20;
  h2.mu_y = 140.0;
  h2.mu_x = 185.0;
  h2.sigma2_y = 1600.0;
  h2.sigma2_x = 3600.0;
  h2.rho = 0.75;
  h2.sigma2_u = 16.0;
  h2.sigma2_v = 16.0;
  const StratifiedDesign d({h1, h2});

  SimulationConfig cfg;
  cfg.replications = 30000;
  cfg.seed = 3;
  cfg.estimators = {"usual_mean", "combined_difference"};
  const auto rep = run_stratified_simulation(cfg, d);
  CHECK(rep.sample_size == 0);  // stratum sizes differ
  for (const auto& e : rep.estimators) {
    CHECK(e.failures == 0);
    // Both estimators are linear in the sample means, so the first-order
    // value is exact and the gap is pure Monte Carlo noise.
    CHECK(e.relative_gap < 0.05);
  }
}
