#include <doctest.h>

#include <cmath>
#include <limits>

#include "hamcert/nonlinearity.hpp"

using namespace hamcert;

TEST_CASE("builtin nonlinearities evaluate the worked examples") {
  NonlinearitySpec f2 = builtin_nonlinearity("example2_f");
  CHECK(f2.state_arity == 4);
  std::vector<double> zero4 = {0.0, 0.0, 0.0, 0.0};
  CHECK(evaluate(f2, 1.0, zero4) == doctest::Approx(1.0));
  std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
  CHECK(evaluate(f2, 0.5, ones) == doctest::Approx(0.5 * (std::exp(1.0) + 3.0)));
  CHECK(f2.f0 == 0.0);
  CHECK(std::isinf(f2.finf));

  NonlinearitySpec f1 = builtin_nonlinearity("example1_f");
  CHECK(f1.state_arity == 3);
  std::vector<double> zero3 = {0.0, 0.0, 0.0};
  CHECK(evaluate(f1, 0.0, zero3) == doctest::Approx(0.0));
  CHECK(f1.f0 == 1.0);
  CHECK(f1.finf == 0.0);

  CHECK_THROWS_AS(builtin_nonlinearity("nope"), std::invalid_argument);
}

TEST_CASE("evaluate is deterministic and arity-checked") {
  NonlinearitySpec f = builtin_nonlinearity("example2_f");
  std::vector<double> x = {0.2, 0.4, 0.6, 0.8};
  double first = evaluate(f, 0.7, x);
  for (int i = 0; i < 5; ++i) CHECK(evaluate(f, 0.7, x) == first);
  std::vector<double> short_x = {0.2, 0.4};
  CHECK_THROWS_AS(evaluate(f, 0.7, short_x), std::invalid_argument);
}

TEST_CASE("limit probes corroborate the declared limits") {
  NonlinearitySpec f1 = builtin_nonlinearity("example1_f");
  // near zero the ratio tends to min_t e^t/(1+x0^2) = 1
  LimitBand zero = probe_limits(f1, LimitDirection::Zero, 16, {1e-3, 1e-5});
  CHECK(zero.lo == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(zero.hi == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(zero.lo <= 1.0 + 1e-12);

  // near infinity the x0^2 denominator kills the ratio
  LimitBand inf = probe_limits(f1, LimitDirection::Infinity, 16, {1e3, 1e4});
  CHECK(inf.hi < 1e-2);

  // example 2: the min over t hits t = 0, so the ratio vanishes identically
  NonlinearitySpec f2 = builtin_nonlinearity("example2_f");
  LimitBand z2 = probe_limits(f2, LimitDirection::Zero, 16, {1e-2, 1e-3});
  CHECK(z2.hi == doctest::Approx(0.0));

  CHECK_THROWS_AS(probe_limits(f1, LimitDirection::Zero, 4, {1e-3}), std::invalid_argument);
}

TEST_CASE("probe bands shrink toward the limit direction") {
  NonlinearitySpec f1 = builtin_nonlinearity("example1_f");
  LimitBand coarse = probe_limits(f1, LimitDirection::Zero, 16, {1e-1});
  LimitBand fine = probe_limits(f1, LimitDirection::Zero, 16, {1e-4});
  CHECK(fine.hi - fine.lo <= coarse.hi - coarse.lo + 1e-12);
  CHECK(std::abs(fine.hi - 1.0) <= std::abs(coarse.hi - 1.0) + 1e-12);
}

TEST_CASE("phi_r estimate dominates sampled values") {
  NonlinearitySpec f2 = builtin_nonlinearity("example2_f");
  double bound = phi_r_estimate(f2, 2.0, 1.0);
  // must dominate f at a few state points inside (-2,2)^4
  for (double a : {0.0, 0.5, 1.5}) {
    std::vector<double> x = {a, -a, a, -a};
    CHECK(evaluate(f2, 1.0, x) <= bound * 1.05);
  }
}

TEST_CASE("declared limits are sanity-checked against probes") {
  // the builtins declare the true limits: no complaints
  CHECK(limit_consistency_warnings(builtin_nonlinearity("example1_f")).empty());
  CHECK(limit_consistency_warnings(builtin_nonlinearity("example2_f")).empty());

  // a wildly wrong declaration produces a warning, never an error
  NonlinearitySpec wrong = builtin_nonlinearity("example1_f");
  wrong.f0 = 5000.0;  // true value is 1
  auto warnings = limit_consistency_warnings(wrong);
  REQUIRE_FALSE(warnings.empty());
  CHECK(warnings.front().find("f_0") != std::string::npos);
}

TEST_CASE("expression-backed spec carries declared limits") {
  NonlinearitySpec spec = nonlinearity_from_expr("t*x0", 0, 2.0, 3.0);
  CHECK(spec.state_arity == 1);
  CHECK(spec.f0 == 2.0);
  CHECK(spec.finf == 3.0);
  std::vector<double> x = {4.0};
  CHECK(evaluate(spec, 0.5, x) == doctest::Approx(2.0));
}
