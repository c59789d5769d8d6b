#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hamcert/quadrature.hpp"

using namespace hamcert;

TEST_CASE("gauss-legendre exactness") {
  // n-point rule integrates degree 2n-1 exactly.
  auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
  CHECK(integrate(cubic, 0.0, 2.0, 2) == doctest::Approx(12.0 - 2.0 + 4.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 16) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("split integration handles kinks") {
  // |x - 1/3| on [0,1]: exact value 1/9 + ... = (1/3)^2/2 + (2/3)^2/2
  auto f = [](double x) { return std::abs(x - 1.0 / 3.0); };
  double exact = (1.0 / 9.0 + 4.0 / 9.0) / 2.0;
  CHECK(integrate_split(f, 0.0, 1.0, {1.0 / 3.0}, 16) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(integrate_abs([](double x) { return x - 1.0 / 3.0; }, 0.0, 1.0, {}) ==
        doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("sign change detection") {
  auto roots = find_sign_changes([](double x) { return (x - 0.25) * (x - 0.75); }, 0.0, 1.0);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(roots[1] == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("golden section search") {
  auto g = golden_max([](double x) { return x * (1.0 - x); }, 0.0, 1.0);
  CHECK(g.arg == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(g.value == doctest::Approx(0.25).epsilon(1e-12));
  auto m = scan_min([](double x) { return std::cos(x); }, 0.0, 6.0, 61);
  CHECK(m.arg == doctest::Approx(M_PI).epsilon(1e-7));
}

TEST_CASE("grid invariants") {
  Grid g = make_grid(200, 50, 1.0);
  REQUIRE(g.size() == 200);
  double sum = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    CHECK(g.weights[i] > 0.0);
    if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
    sum += g.weights[i];
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
  CHECK(g.panel_of(0.0) == 0);
  CHECK(g.panel_of(0.999) == 49);
  CHECK_THROWS_AS(make_grid(10, 3, 1.0), std::invalid_argument);
}

TEST_CASE("halton points are deterministic and in range") {
  auto a = halton_points(64, 4);
  auto b = halton_points(64, 4);
  CHECK(a == b);
  for (const auto& p : a)
    for (double v : p) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
}
