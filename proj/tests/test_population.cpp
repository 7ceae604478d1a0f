#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "mee/population.hpp"

using mee::derive_moments;
using mee::PopulationSummary;

TEST_CASE("worked example moments") {
  const auto m = derive_moments(tt::ref_pop());
  CHECK(tt::close_rel(m.theta, 0.1, 1e-15));
  CHECK(tt::close_rel(m.c_y, 0.28148918002707838, 1e-13));
  CHECK(tt::close_rel(m.c_x, 0.33791544979635463, 1e-13));
  CHECK(tt::close_rel(m.delta0, 0.0081468162936325873, 1e-13));
  CHECK(tt::close_rel(m.delta1, 0.011543252595155709, 1e-13));
  CHECK(tt::close_rel(m.delta01, 0.0091695239337917575, 1e-13));
}

TEST_CASE("validation names the violated field") {
  auto s = tt::ref_pop();

  SUBCASE("correlation") {
    s.rho = 1.2;
    CHECK_THROWS_AS(derive_moments(s), std::domain_error);
    CHECK(tt::contains(tt::caught([&] { derive_moments(s); }), "correlation out of range"));
  }
  SUBCASE("auxiliary mean") {
    s.mu_x = 0.0;
    CHECK(tt::contains(tt::caught([&] { derive_moments(s); }), "auxiliary mean must be finite and nonzero"));
  }
  SUBCASE("study variance") {
    s.sigma2_y = 0.0;
    CHECK(tt::contains(tt::caught([&] { derive_moments(s); }), "sigma2_y"));
  }
  SUBCASE("negative error variance") {
    s.sigma2_v = -1.0;
    CHECK(tt::contains(tt::caught([&] { derive_moments(s); }), "sigma2_v"));
  }
  SUBCASE("sample size") {
    s.n = 1;
    CHECK(tt::contains(tt::caught([&] { derive_moments(s); }), "sample size must be at least 2"));
  }
  SUBCASE("non-finite mean") {
    s.mu_y = std::nan("");
    CHECK_THROWS_AS(derive_moments(s), std::domain_error);
  }
}

TEST_CASE("error-free reduction strips the inflation factors") {
  auto s = tt::ref_pop();
  s.sigma2_u = 0.0;
  s.sigma2_v = 0.0;
  const auto m = derive_moments(s);
  CHECK(m.delta0 == m.theta * m.c_y * m.c_y);
  CHECK(m.delta1 == m.theta * m.c_x * m.c_x);
}

TEST_CASE("zero correlation kills the cross moment") {
  auto s = tt::ref_pop();
  s.rho = 0.0;
  CHECK(derive_moments(s).delta01 == 0.0);
}

TEST_CASE("negative means give signed coefficients of variation") {
  auto s = tt::ref_pop();
  s.mu_y = -127.0;
  const auto m = derive_moments(s);
  CHECK(m.c_y < 0.0);
  CHECK(m.delta0 > 0.0);  // squared, so the sign drops out
}

TEST_CASE("moment inequalities hold on random summaries") {
  tt::Gen gen(101);
  for (int i = 0; i < 500; ++i) {
    const auto s = gen.summary();
    const auto m = derive_moments(s);
    CHECK(m.delta0 > 0.0);
    CHECK(m.delta1 > 0.0);
    // Cauchy-Schwarz, with slack for the error-free boundary case.
    CHECK(m.delta01 * m.delta01 <= m.delta0 * m.delta1 * (1.0 + 1e-12));
    CHECK(m.delta0 >= m.theta * m.c_y * m.c_y * (1.0 - 1e-12));
    CHECK(m.delta1 >= m.theta * m.c_x * m.c_x * (1.0 - 1e-12));
  }
}
