#include "mee/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mee/classical.hpp"

namespace mee {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Precomputed draw constants for one population.
struct PopDraw {
  double mu_y, mu_x, sy, sx, rho, crho, su, sv;
  int n;
  double inv_n;
};

PopDraw make_pop_draw(const PopulationSummary& s) {
  PopDraw p;
  p.mu_y = s.mu_y;
  p.mu_x = s.mu_x;
  p.sy = std::sqrt(s.sigma2_y);
  p.sx = std::sqrt(s.sigma2_x);
  p.rho = s.rho;
  p.crho = std::sqrt(1.0 - s.rho * s.rho);
  p.su = std::sqrt(s.sigma2_u);
  p.sv = std::sqrt(s.sigma2_v);
  p.n = s.n;
  p.inv_n = 1.0 / static_cast<double>(s.n);
  return p;
}

Observation draw_one(SplitMix64& rng, const PopDraw& p) {
  double z1, z2, z3, z4;
  rng.gauss_pair(z1, z2);
  rng.gauss_pair(z3, z4);
  const double x_true = p.mu_x + p.sx * z1;
  const double y_true = p.mu_y + p.sy * (p.rho * z1 + p.crho * z2);
  return {y_true + p.su * z3, x_true + p.sv * z4};
}

void draw_means(SplitMix64& rng, const PopDraw& p, double& yb, double& xb) {
  double sum_y = 0, sum_x = 0;
  for (int i = 0; i < p.n; ++i) {
    const Observation o = draw_one(rng, p);
    sum_y += o.y;
    sum_x += o.x;
  }
  yb = sum_y * p.inv_n;
  xb = sum_x * p.inv_n;
}

// Flat evaluator record; evaluation returns NaN/Inf on domain faults, which
// the accumulation loop counts as failures.
struct Eval {
  enum Kind { k_mean, k_ratio, k_product, k_diff, k_pow, k_walsh, k_ray, k_member };
  std::string name;
  Kind kind = k_mean;
  double theory = 0;
  double c = 0;                // classical constant
  double a1 = 0, a2 = 0;       // member scalars
  double alpha = 0, eta = 0, lambda = 0, mt = 0;  // member shape
  double mu_y = 0, mu_x = 0;   // target/auxiliary means of the run
};

double power_factor(double base, double alpha) {
  if (alpha == 1.0) return base;
  if (alpha == -1.0) return 1.0 / base;
  return std::pow(base, alpha);
}

double evaluate(const Eval& e, double yb, double xb) {
  switch (e.kind) {
    case Eval::k_mean:
      return yb;
    case Eval::k_ratio:
      return yb * e.mu_x / xb;
    case Eval::k_product:
      return yb * xb / e.mu_x;
    case Eval::k_diff:
      return yb + e.c * (e.mu_x - xb);
    case Eval::k_pow:
      return yb * power_factor(e.mu_x / xb, e.c);
    case Eval::k_walsh:
      return yb * e.mu_x / (e.c * xb + (1.0 - e.c) * e.mu_x);
    case Eval::k_ray:
      return yb * ((1.0 - e.c) + e.c * xb / e.mu_x);
    case Eval::k_member: {
      const double xt = e.eta * xb + e.lambda;
      const double bracket = e.a1 * yb + e.a2 * xt + (1.0 - e.a1 - e.a2) * e.mt;
      if (e.alpha == 0.0) return bracket;
      return bracket * power_factor(e.mt / xt, e.alpha);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Eval member_eval(const std::string& name, const CatalogEntry& entry, const MemberAnalysis& a,
                 double mu_y, double mu_x) {
  Eval e;
  e.name = name;
  e.kind = Eval::k_member;
  e.theory = a.mse_series;
  e.a1 = a.scalars.alpha1;
  e.a2 = a.scalars.alpha2;
  e.alpha = entry.params.alpha;
  e.eta = entry.params.eta;
  e.lambda = entry.params.lambda;
  e.mt = entry.params.eta * mu_x + entry.params.lambda;
  e.mu_y = mu_y;
  e.mu_x = mu_x;
  return e;
}

std::vector<Eval> resolve_srs(const std::vector<std::string>& names, const PopulationSummary& s) {
  const auto catalog = member_catalog(s);
  std::vector<Eval> out;
  for (const auto& name : names) {
    Eval e;
    e.name = name;
    e.mu_y = s.mu_y;
    e.mu_x = s.mu_x;
    if (name == "ybar" || name == "usual_mean") {
      e.kind = Eval::k_mean;
      e.theory = classical_mse(ClassicalEstimatorId::usual_mean, s);
    } else if (name == "ybar_R" || name == "ratio") {
      e.kind = Eval::k_ratio;
      e.theory = classical_mse(ClassicalEstimatorId::ratio, s);
    } else if (name == "ybar_d" || name == "difference") {
      e.kind = Eval::k_diff;
      e.c = classical_optimum(ClassicalEstimatorId::difference, s);
      e.theory = classical_mse(ClassicalEstimatorId::difference, s);
    } else if (name == "ybar_s" || name == "srivastava") {
      e.kind = Eval::k_pow;
      e.c = classical_optimum(ClassicalEstimatorId::srivastava, s);
      e.theory = classical_mse(ClassicalEstimatorId::srivastava, s);
    } else if (name == "walsh") {
      e.kind = Eval::k_walsh;
      e.c = classical_optimum(ClassicalEstimatorId::walsh, s);
      e.theory = classical_mse(ClassicalEstimatorId::walsh, s);
    } else if (name == "ray_sahai") {
      e.kind = Eval::k_ray;
      e.c = classical_optimum(ClassicalEstimatorId::ray_sahai, s);
      e.theory = classical_mse(ClassicalEstimatorId::ray_sahai, s);
    } else if (name == "dubey_singh") {
      const auto& entry = find_member(catalog, "ybar_DS");
      e = member_eval(name, entry, analyze_member(entry, s), s.mu_y, s.mu_x);
    } else {
      const auto& entry = find_member(catalog, name);  // throws on unknown names
      e = member_eval(name, entry, analyze_member(entry, s), s.mu_y, s.mu_x);
    }
    out.push_back(e);
  }
  return out;
}

std::vector<Eval> resolve_stratified(const std::vector<std::string>& names,
                                     const StratifiedDesign& d) {
  const auto catalog = stratified_member_catalog(d);
  std::vector<Eval> out;
  for (const auto& name : names) {
    Eval e;
    e.name = name;
    e.mu_y = d.mu_y();
    e.mu_x = d.mu_x();
    if (name == "usual_mean" || name == "ybar_st") {
      e.kind = Eval::k_mean;
      e.theory = stratified_classical_mse(StratifiedEstimatorId::usual_mean, d);
    } else if (name == "combined_ratio") {
      e.kind = Eval::k_ratio;
      e.theory = stratified_classical_mse(StratifiedEstimatorId::combined_ratio, d);
    } else if (name == "combined_product") {
      e.kind = Eval::k_product;
      e.theory = stratified_classical_mse(StratifiedEstimatorId::combined_product, d);
    } else if (name == "combined_difference") {
      e.kind = Eval::k_diff;
      e.c = d_opt(d);
      e.theory = stratified_classical_mse(StratifiedEstimatorId::combined_difference, d);
    } else {
      const auto& entry = find_member(catalog, name);
      e = member_eval(name, entry, analyze_stratified_member(entry, d), d.mu_y(), d.mu_x());
    }
    out.push_back(e);
  }
  return out;
}

struct Acc {
  double s1 = 0, s2 = 0, s4 = 0;
  long used = 0, fail = 0;
};

// Runs `reps` replications over fixed-size blocks claimed by `workers`
// threads. Per-block partial sums are reduced in block order afterwards, so
// the result is identical for every worker count.
template <typename DrawMeans>
EmpiricalReport run_core(long reps, std::uint64_t seed, int workers, double mu_target,
                         const std::vector<Eval>& evals, DrawMeans draw) {
  if (reps <= 0) throw std::domain_error("replications: must be positive");
  if (workers < 1) throw std::domain_error("workers: must be at least 1");
  if (evals.empty()) throw std::domain_error("estimators: nothing to simulate");

  constexpr long kBlock = 8192;
  const long nblocks = (reps + kBlock - 1) / kBlock;
  std::vector<std::vector<Acc>> blocks(static_cast<std::size_t>(nblocks),
                                       std::vector<Acc>(evals.size()));
  std::atomic<long> next{0};

  auto work = [&]() {
    for (;;) {
      const long b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      auto& acc = blocks[static_cast<std::size_t>(b)];
      const long lo = b * kBlock;
      const long hi = std::min(reps, lo + kBlock);
      for (long r = lo; r < hi; ++r) {
        SplitMix64 rng = replication_stream(seed, static_cast<std::uint64_t>(r));
        double yb, xb;
        draw(rng, yb, xb);
        for (std::size_t i = 0; i < evals.size(); ++i) {
          const double v = evaluate(evals[i], yb, xb);
          if (std::isfinite(v)) {
            const double dev = v - mu_target;
            const double d2 = dev * dev;
            acc[i].s1 += dev;
            acc[i].s2 += d2;
            acc[i].s4 += d2 * d2;
            ++acc[i].used;
          } else {
            ++acc[i].fail;
          }
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  EmpiricalReport rep;
  rep.replications = reps;
  rep.seed = seed;
  rep.workers = workers;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    Acc total;
    for (long b = 0; b < nblocks; ++b) {
      const Acc& a = blocks[static_cast<std::size_t>(b)][i];
      total.s1 += a.s1;
      total.s2 += a.s2;
      total.s4 += a.s4;
      total.used += a.used;
      total.fail += a.fail;
    }
    EstimatorResult r;
    r.name = evals[i].name;
    r.used = total.used;
    r.failures = total.fail;
    r.theoretical_mse = evals[i].theory;
    if (total.used > 0) {
      const double inv = 1.0 / static_cast<double>(total.used);
      r.empirical_bias = total.s1 * inv;
      r.empirical_mse = total.s2 * inv;
      const double var_of_sq = std::max(0.0, total.s4 * inv - r.empirical_mse * r.empirical_mse);
      r.mc_se = std::sqrt(var_of_sq * inv);
    }
    if (r.theoretical_mse != 0.0)
      r.relative_gap = std::fabs(r.empirical_mse - r.theoretical_mse) / std::fabs(r.theoretical_mse);
    else
      r.relative_gap = r.empirical_mse == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    rep.estimators.push_back(std::move(r));
  }
  return rep;
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

double SplitMix64::u01() {
  return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

void SplitMix64::gauss_pair(double& z1, double& z2) {
  for (;;) {
    const double u = 2.0 * u01() - 1.0;
    const double v = 2.0 * u01() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      z1 = u * f;
      z2 = v * f;
      return;
    }
  }
}

SplitMix64 replication_stream(std::uint64_t seed, std::uint64_t replication) {
  return {mix64(seed + 0x9E3779B97F4A7C15ULL * (replication + 1))};
}

Observation generate_observation(SplitMix64& rng, const PopulationSummary& s) {
  return draw_one(rng, make_pop_draw(s));
}

std::vector<std::string> default_estimator_names() {
  return {"ybar", "ybar_R", "ybar_d", "ybar_s", "walsh", "ray_sahai", "ybar_DS",
          "t1", "t2", "t3", "t4", "t5", "t6", "t7"};
}

std::vector<std::string> default_stratified_estimator_names() {
  return {"usual_mean", "combined_ratio", "combined_product", "combined_difference",
          "t1", "t2", "t3", "t4", "t5", "t6", "t7"};
}

EmpiricalReport run_simulation(const SimulationConfig& cfg, const PopulationSummary& s_in) {
  PopulationSummary s = s_in;
  if (cfg.sample_size) s.n = *cfg.sample_size;
  validate_summary(s);
  const auto names = cfg.estimators.empty() ? default_estimator_names() : cfg.estimators;
  const auto evals = resolve_srs(names, s);
  const PopDraw pd = make_pop_draw(s);
  EmpiricalReport rep = run_core(cfg.replications, cfg.seed, cfg.workers, s.mu_y, evals,
                                 [&pd](SplitMix64& rng, double& yb, double& xb) {
                                   draw_means(rng, pd, yb, xb);
                                 });
  rep.sample_size = s.n;
  return rep;
}

EmpiricalReport run_stratified_simulation(const SimulationConfig& cfg,
                                          const StratifiedDesign& d_in) {
  std::vector<StratumSummary> strata = d_in.strata();
  if (cfg.sample_size)
    for (auto& h : strata) h.n_h = *cfg.sample_size;
  const StratifiedDesign d(strata);
  const auto names =
      cfg.estimators.empty() ? default_stratified_estimator_names() : cfg.estimators;
  const auto evals = resolve_stratified(names, d);

  std::vector<PopDraw> draws;
  std::vector<double> weights;
  for (const auto& h : d.strata()) {
    PopulationSummary s;
    s.mu_y = h.mu_y;
    s.mu_x = h.mu_x;
    s.sigma2_y = h.sigma2_y;
    s.sigma2_x = h.sigma2_x;
    s.rho = h.rho;
    s.sigma2_u = h.sigma2_u;
    s.sigma2_v = h.sigma2_v;
    s.n = h.n_h;
    draws.push_back(make_pop_draw(s));
    weights.push_back(h.w);
  }

  EmpiricalReport rep = run_core(cfg.replications, cfg.seed, cfg.workers, d.mu_y(), evals,
                                 [&draws, &weights](SplitMix64& rng, double& yb, double& xb) {
                                   double y = 0, x = 0;
                                   for (std::size_t h = 0; h < draws.size(); ++h) {
                                     double yh, xh;
                                     draw_means(rng, draws[h], yh, xh);
                                     y += weights[h] * yh;
                                     x += weights[h] * xh;
                                   }
                                   yb = y;
                                   xb = x;
                                 });
  int common = d.strata().front().n_h;
  for (const auto& h : d.strata())
    if (h.n_h != common) common = 0;
  rep.sample_size = common;
  return rep;
}

}  // namespace mee
