#include <doctest.h>

#include <cmath>

#include "hamcert/errors.hpp"
#include "hamcert/kernel.hpp"

using namespace hamcert;

namespace {

KernelSurface zero_kernel(int m) {
  return KernelSurface::from_poly(1.0, BivariatePoly(), BivariatePoly(), m, Rational(1));
}

// Independent midpoint-Riemann quadrature for convolution spot checks.
double riemann_convolution(const KernelSurface& A, const KernelSurface& B, double t, double s,
                           int panels = 200000) {
  double acc = 0.0, h = 1.0 / panels;
  for (int i = 0; i < panels; ++i) {
    double r = (i + 0.5) * h;
    acc += A.eval_deriv(0, t, r) * B.eval_deriv(0, r, s);
  }
  return acc * h;
}

}  // namespace

TEST_CASE("eval_deriv on the example kernels") {
  KernelSurface ex1 = make_example1_kernel();
  CHECK(ex1.max_order() == 2);
  CHECK(ex1.domain_length() == 1.0);
  // (1/4)(1-0)(-3+0+0)
  CHECK(ex1.eval_deriv(0, 0.0, 0.0) == doctest::Approx(-0.75).epsilon(1e-15));
  // second derivative, region s < t
  CHECK(ex1.eval_deriv(2, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ex1.eval_deriv(3, 0.5, 0.5), std::out_of_range);

  KernelSurface zero = zero_kernel(2);
  for (int i = 0; i <= 2; ++i) CHECK(zero.eval_deriv(i, 0.3, 0.7) == 0.0);
}

TEST_CASE("example1 kernel matches its displayed derivative formulas") {
  KernelSurface K = make_example1_kernel();
  // dG/dt = 1 - s on t <= s, independent of t.
  BivariatePoly expected_up =
      BivariatePoly::from_triples({{0, 0, Rational(1)}, {0, 1, Rational(-1)}});
  CHECK(K.poly(1, Region::TLeqS) == expected_up);
  // dG/dt = 1 - 2s + t on s < t.
  BivariatePoly expected_low = BivariatePoly::from_triples(
      {{0, 0, Rational(1)}, {0, 1, Rational(-2)}, {1, 0, Rational(1)}});
  CHECK(K.poly(1, Region::SLtT) == expected_low);

  // boundary factor (1-s) kills both branches at s = 1
  CHECK(K.eval_deriv(0, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(K.poly(0, Region::SLtT).eval(1.0, 1.0) == doctest::Approx(0.0));

  // diagonal agreement of the first derivative at t = s = 0.3
  CHECK(K.poly(1, Region::TLeqS).eval(0.3, 0.3) == doctest::Approx(0.7));
  CHECK(K.poly(1, Region::SLtT).eval(0.3, 0.3) == doctest::Approx(0.7));

  CHECK(K.continuous_at(0));
  CHECK(K.continuous_at(1));
  CHECK_FALSE(K.continuous_at(2));
}

TEST_CASE("fourth-order beam kernel") {
  KernelSurface K = make_lidstone4_kernel();
  CHECK(K.max_order() == 3);
  CHECK(K.eval_deriv(0, 0.5, 0.5) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  // second derivative nonpositive on the square
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) CHECK(K.eval_deriv(2, i / 10.0, j / 10.0) <= 1e-15);
  // third derivative equals s on the region s < t
  CHECK(K.eval_deriv(3, 0.9, 0.1) == doctest::Approx(0.1));
  // symmetry G(t,s) = G(s,t): the upper piece is the transposed lower piece
  CHECK(K.poly(0, Region::TLeqS) == K.poly(0, Region::SLtT).transposed());
}

TEST_CASE("second-order Dirichlet kernel") {
  KernelSurface G1 = second_order_dirichlet_kernel();
  CHECK(G1.max_order() == 1);
  CHECK(G1.eval_deriv(0, 0.5, 0.5) == doctest::Approx(-0.25));
  for (int j = 0; j <= 10; ++j) {
    double s = j / 10.0;
    CHECK(G1.eval_deriv(0, 0.0, s) == doctest::Approx(0.0));
    CHECK(G1.eval_deriv(0, 1.0, s) == doctest::Approx(0.0));
    for (int i = 0; i <= 10; ++i) CHECK(G1.eval_deriv(0, i / 10.0, s) <= 0.0);
  }
  // independent quadrature oracle for (G1 * G1)(1/2, 1/2)
  CHECK(riemann_convolution(G1, G1, 0.5, 0.5) == doctest::Approx(1.0 / 48.0).epsilon(1e-9));
}

TEST_CASE("exact convolution reproduces the beam kernel") {
  KernelSurface G1 = second_order_dirichlet_kernel();
  KernelSurface C = convolve(G1, G1);
  KernelSurface L4 = make_lidstone4_kernel();
  REQUIRE(C.max_order() == 3);
  for (int i = 0; i <= 3; ++i) {
    CHECK(C.poly(i, Region::TLeqS) == L4.poly(i, Region::TLeqS));
    CHECK(C.poly(i, Region::SLtT) == L4.poly(i, Region::SLtT));
    CHECK(C.continuous_at(i) == L4.continuous_at(i));
  }
  // exact symmetry of the convolution square
  CHECK(C.poly(0, Region::TLeqS) == C.poly(0, Region::SLtT).transposed());
}

TEST_CASE("convolution linearity and domain checks") {
  KernelSurface G1 = second_order_dirichlet_kernel();
  KernelSurface zero = zero_kernel(1);
  KernelSurface C = convolve(zero, G1);
  CHECK(C.poly(0, Region::TLeqS).is_zero());
  CHECK(C.poly(0, Region::SLtT).is_zero());

  KernelSurface stretched = KernelSurface::from_poly(
      2.0, BivariatePoly::monomial(1, 0, Rational(1)), BivariatePoly::monomial(0, 1, Rational(1)),
      1, Rational(2));
  CHECK_THROWS_AS(convolve(G1, stretched), std::domain_error);
}

TEST_CASE("triple convolution is nonpositive (n = 3 is odd)") {
  KernelSurface G1 = second_order_dirichlet_kernel();
  KernelSurface G3 = convolve(G1, convolve(G1, G1));
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j <= 12; ++j) CHECK(G3.eval_deriv(0, i / 12.0, j / 12.0) <= 1e-15);
}

TEST_CASE("lidstone family construction") {
  CHECK_THROWS_AS(lidstone_kernel(0), std::invalid_argument);
  CHECK_THROWS_AS(lidstone_kernel(9), ResourceError);

  KernelSurface G1 = lidstone_kernel(1);
  CHECK(G1.poly(0, Region::TLeqS) == second_order_dirichlet_kernel().poly(0, Region::TLeqS));

  // n = 2 reduces to the beam kernel; the 2n-4 = 0 index is G itself.
  KernelSurface G2 = lidstone_kernel(2);
  KernelSurface L4 = make_lidstone4_kernel();
  CHECK(G2.max_order() == 3);
  CHECK(G2.poly(0, Region::TLeqS) == L4.poly(0, Region::TLeqS));

  // n = 3: the second t-derivative of G3 is G2 again (exact polynomials, and
  // pointwise on an 11x11 grid).
  KernelSurface G3 = lidstone_kernel(3);
  CHECK(G3.max_order() == 5);
  CHECK(G3.poly(2, Region::TLeqS) == G2.poly(0, Region::TLeqS));
  CHECK(G3.poly(2, Region::SLtT) == G2.poly(0, Region::SLtT));
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      double t = i / 10.0, s = j / 10.0;
      CHECK(G3.eval_deriv(2, t, s) == doctest::Approx(G2.eval_deriv(0, t, s)).epsilon(1e-12));
    }
}

TEST_CASE("lidstone boundary conditions") {
  // Even derivatives vanish at both endpoints, k = 0..n-1.
  const int n = 3;
  KernelSurface G = lidstone_kernel(n);
  for (int k = 0; k < n; ++k)
    for (int j = 1; j < 10; ++j) {
      double s = j / 10.0;
      CHECK(std::abs(G.eval_deriv(2 * k, 0.0, s)) < 1e-12);
      CHECK(std::abs(G.eval_deriv(2 * k, 1.0, s)) < 1e-12);
    }
}

TEST_CASE("finite differences corroborate the derivative stack") {
  for (const KernelSurface& K : {make_example1_kernel(), make_lidstone4_kernel()}) {
    const double h = 1e-4;
    for (int i = 0; i + 1 <= K.max_order(); ++i) {
      // interior points away from the diagonal
      for (auto [t, s] : {std::pair{0.2, 0.7}, {0.8, 0.3}, {0.45, 0.9}}) {
        double fd = (K.eval_deriv(i, t + h, s) - K.eval_deriv(i, t - h, s)) / (2.0 * h);
        CHECK(fd == doctest::Approx(K.eval_deriv(i + 1, t, s)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("sign pattern verdicts") {
  CHECK_THROWS_AS(verify_sign_pattern(1, 21), std::invalid_argument);
  CHECK_THROWS_AS(verify_sign_pattern(2, 5), std::invalid_argument);

  SignPatternReport r2 = verify_sign_pattern(2, 21);
  CHECK(r2.entries.size() == 4);
  CHECK(r2.all_pass());

  SignPatternReport r3 = verify_sign_pattern(3, 21);
  CHECK(r3.all_pass());
  CHECK(r3.overall_sign_pass);  // G_3 <= 0

  SignPatternReport r4 = verify_sign_pattern(4, 15);
  CHECK(r4.all_pass());  // G_4 >= 0
}

TEST_CASE("builtin kernel registry") {
  CHECK(is_builtin_kernel("example1"));
  CHECK(is_builtin_kernel("lidstone:3"));
  CHECK_FALSE(is_builtin_kernel("nope"));
  KernelSurface K = make_builtin_kernel("lidstone:2");
  CHECK(K.poly(0, Region::TLeqS) == make_lidstone4_kernel().poly(0, Region::TLeqS));
  CHECK_THROWS_AS(make_builtin_kernel("nope"), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin_kernel("lidstone:x"), std::invalid_argument);
}

TEST_CASE("numeric convolution fallback") {
  // Wrap G1 behind opaque evaluators; the fallback should agree with the
  // exact path pointwise.
  KernelSurface G1 = second_order_dirichlet_kernel();
  std::vector<KernelSurface::OrderPieces> orders;
  for (int i = 0; i <= 1; ++i) {
    SurfaceFn up = [G1, i](double t, double s) { return G1.poly(i, Region::TLeqS).eval(t, s); };
    SurfaceFn low = [G1, i](double t, double s) { return G1.poly(i, Region::SLtT).eval(t, s); };
    orders.push_back({Surface(up), Surface(low), G1.continuous_at(i)});
  }
  KernelSurface opaque(1.0, std::move(orders));
  KernelSurface C = convolve(opaque, opaque);
  CHECK(C.max_order() == 1);
  KernelSurface exact = convolve(G1, G1);
  for (auto [t, s] : {std::pair{0.25, 0.5}, {0.5, 0.5}, {0.9, 0.2}}) {
    CHECK(C.eval_deriv(0, t, s) == doctest::Approx(exact.eval_deriv(0, t, s)).epsilon(1e-12));
    CHECK(C.eval_deriv(1, t, s) == doctest::Approx(exact.eval_deriv(1, t, s)).epsilon(1e-12));
  }
}

TEST_CASE("kernel scaling") {
  KernelSurface K = make_example1_kernel().scaled(2.5);
  CHECK(K.eval_deriv(0, 0.0, 0.0) == doctest::Approx(-0.75 * 2.5));
  CHECK(K.eval_deriv(2, 1.0, 0.0) == doctest::Approx(2.5));
}
