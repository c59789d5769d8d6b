#include <doctest.h>

#include <cmath>
#include <random>

#include "hamcert/certificate.hpp"
#include "hamcert/solver.hpp"

using namespace hamcert;

namespace {

std::vector<ConeDecl> example2_cone() {
  ConeDecl c0;
  c0.order = 0;
  c0.ab = {0.1, 0.9};
  c0.cd = {0.0, 1.0};
  c0.xi_override = 0.25;
  ConeDecl c1;
  c1.order = 1;
  c1.ab = {0.0, 1.0 / 3.0};
  c1.cd = {0.0, 1.0};
  c1.xi_override = 1.0 / 6.0;
  return {c0, c1};
}

std::vector<std::vector<double>> zeros(int orders, int n) {
  return std::vector<std::vector<double>>(orders, std::vector<double>(n, 0.0));
}

Solution solve_example2(int nodes, int panels, double lambda, double tol = 1e-13) {
  KernelSurface K = make_lidstone4_kernel();
  Grid grid = make_grid(nodes, panels, 1.0);
  DiscreteOperator op(K, grid);
  NonlinearitySpec f = builtin_nonlinearity("example2_f");
  PicardOutcome out = picard_solve(op, f, lambda, zeros(4, nodes), 1.0, tol, 400);
  REQUIRE(std::holds_alternative<Solution>(out));
  return std::get<Solution>(out);
}

}  // namespace

TEST_CASE("discretized zero kernel gives zero tables") {
  BivariatePoly z;
  KernelSurface K = KernelSurface::from_poly(1.0, z, z, 1, Rational(1));
  Grid grid = make_grid(40, 10, 1.0);
  DiscreteOperator op(K, grid);
  std::vector<double> F(grid.size(), 1.0);
  std::vector<std::vector<double>> out;
  op.apply(F, 1.0, out);
  for (const auto& row : out)
    for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("row sums are bounded by the envelope integral") {
  KernelSurface K = make_example1_kernel();
  Grid grid = make_grid(120, 30, 1.0);
  DiscreteOperator op(K, grid);
  // sum_q |W[0][p][q]| <= integral of h_0 = 1/3, up to quadrature slack
  for (int p = 0; p < grid.size(); ++p)
    CHECK(op.row_abs_sum(0, p) <= (1.0 / 3.0) * (1.0 + 1e-3));
}

TEST_CASE("operator row at t = 1 integrates the jump derivative exactly") {
  KernelSurface K = make_example1_kernel();
  Grid grid = make_grid(80, 20, 1.0);
  DiscreteOperator op(K, grid);
  // f == 1, lambda = 1, order 2 at t = 1: integral of d2G/dt2(1, s) over s is 1
  std::vector<double> row = op.row_weights(2, 1.0);
  double acc = 0.0;
  for (double w : row) acc += w;
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("picard at lambda = 0 converges to zero immediately") {
  KernelSurface K = make_example1_kernel();
  Grid grid = make_grid(40, 10, 1.0);
  DiscreteOperator op(K, grid);
  NonlinearitySpec f = builtin_nonlinearity("example1_f");
  PicardOutcome out = picard_solve(op, f, 0.0, zeros(3, 40), 1.0, 1e-12, 10);
  REQUIRE(std::holds_alternative<Solution>(out));
  const Solution& sol = std::get<Solution>(out);
  CHECK(sol.iterations == 1);
  CHECK(sol.residual_norm == 0.0);
}

TEST_CASE("beam problem converges inside the certified window") {
  Solution sol = solve_example2(120, 30, 0.1);
  CHECK(sol.residual_norm < 1e-10);
  double max_u = 0.0;
  for (const auto& row : sol.U)
    for (double v : row) max_u = std::max(max_u, std::abs(v));
  CHECK(max_u > 1e-4);  // nontrivial: f(t, 0) = t > 0 forces a nonzero image

  // grid refinement consistency at order 0 (compare via interpolation)
  Solution fine = solve_example2(240, 60, 0.1);
  KernelSurface K = make_lidstone4_kernel();
  DiscreteOperator op_c(K, sol.grid), op_f(K, fine.grid);
  for (double t : {0.25, 0.5, 0.75})
    CHECK(sol.value_at(op_c, 0, t) ==
          doctest::Approx(fine.value_at(op_f, 0, t)).epsilon(1e-9));

  // the stored residual norm recomputes from the stored fields
  NonlinearitySpec f = builtin_nonlinearity("example2_f");
  CHECK(residual(op_c, f, sol.lambda, sol.U) == doctest::Approx(sol.residual_norm));

  // cone membership of the converged solution
  HypothesisReport rep = classify(K, example2_cone());
  ConeSpec cone = ConeSpec::from_report(rep);
  ConeCheckResult check = cone_check(op_c, sol, cone);
  CHECK(check.all_pass);
}

TEST_CASE("third-order problem converges to the trivial fixed point from zero") {
  KernelSurface K = make_example1_kernel();
  Grid grid = make_grid(80, 20, 1.0);
  DiscreteOperator op(K, grid);
  NonlinearitySpec f = builtin_nonlinearity("example1_f");
  PicardOutcome out = picard_solve(op, f, 5.0, zeros(3, 80), 1.0, 1e-12, 50);
  REQUIRE(std::holds_alternative<Solution>(out));
  const Solution& sol = std::get<Solution>(out);
  double max_u = 0.0;
  for (const auto& row : sol.U)
    for (double v : row) max_u = std::max(max_u, std::abs(v));
  CHECK(max_u == 0.0);  // f(t, 0, 0, 0) = 0 keeps zero a fixed point
}

TEST_CASE("residual of the zero matrix matches direct quadrature") {
  KernelSurface K = make_lidstone4_kernel();
  Grid grid = make_grid(80, 20, 1.0);
  DiscreteOperator op(K, grid);
  NonlinearitySpec f = builtin_nonlinearity("example2_f");
  const double lambda = 0.1;
  auto U = zeros(4, 80);
  double r = residual(op, f, lambda, U);
  // f(s, 0) = s, so the image is lambda * integral k_i(t,s) s ds
  double expected = 0.0;
  for (int i = 0; i <= 3; ++i)
    for (int p = 0; p < grid.size(); ++p) {
      double t = grid.nodes[p];
      double v = integrate_split([&](double s) { return K.eval_deriv(i, t, s) * s; }, 0.0, 1.0,
                                 {t}, 32);
      expected = std::max(expected, lambda * std::abs(v));
    }
  CHECK(r == doctest::Approx(expected).epsilon(1e-9));

  // for the third-order example f vanishes on the zero state
  KernelSurface K1 = make_example1_kernel();
  DiscreteOperator op1(K1, grid);
  NonlinearitySpec f1 = builtin_nonlinearity("example1_f");
  CHECK(residual(op1, f1, 0.1, zeros(3, 80)) == 0.0);
}

TEST_CASE("cone check verdicts") {
  KernelSurface K = make_lidstone4_kernel();
  Grid grid = make_grid(60, 15, 1.0);
  DiscreteOperator op(K, grid);
  HypothesisReport rep = classify(K, example2_cone());
  ConeSpec cone = ConeSpec::from_report(rep);

  Solution zero_sol;
  zero_sol.grid = grid;
  zero_sol.U = zeros(4, 60);
  zero_sol.F.assign(60, 0.0);
  zero_sol.lambda = 1.0;
  CHECK(cone_check(op, zero_sol, cone).all_pass);

  Solution bad = zero_sol;
  bad.U[0].assign(60, -1.0);
  ConeCheckResult r = cone_check(op, bad, cone);
  CHECK_FALSE(r.all_pass);
  CHECK_FALSE(r.items.front().pass);
}

TEST_CASE("operator images land in the cone") {
  // discrete analogue of the invariance step: any nonnegative integrand
  // produces an image satisfying every cone condition
  KernelSurface K = make_lidstone4_kernel();
  Grid grid = make_grid(80, 20, 1.0);
  DiscreteOperator op(K, grid);
  HypothesisReport rep = classify(K, example2_cone());
  ConeSpec cone = ConeSpec::from_report(rep);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> mag(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    Solution sol;
    sol.grid = grid;
    sol.lambda = 1.0;
    sol.F.resize(grid.size());
    for (double& v : sol.F) v = mag(rng);
    std::vector<std::vector<double>> image;
    op.apply(sol.F, sol.lambda, image);
    sol.U = image;
    CHECK(cone_check(op, sol, cone, 1e-8).all_pass);
  }
}

TEST_CASE("damped iteration keeps finite history") {
  KernelSurface K = make_lidstone4_kernel();
  Grid grid = make_grid(60, 15, 1.0);
  DiscreteOperator op(K, grid);
  NonlinearitySpec f = builtin_nonlinearity("example2_f");
  PicardOutcome out = picard_solve(op, f, 0.1, zeros(4, 60), 0.5, 1e-12, 400);
  REQUIRE(std::holds_alternative<Solution>(out));
  CHECK(std::get<Solution>(out).residual_norm < 1e-10);
}

TEST_CASE("divergence is reported, not thrown") {
  KernelSurface K = make_lidstone4_kernel();
  Grid grid = make_grid(40, 10, 1.0);
  DiscreteOperator op(K, grid);
  NonlinearitySpec f = builtin_nonlinearity("example2_f");
  // far outside the certified window the exponential blows up
  PicardOutcome out = picard_solve(op, f, 500.0, zeros(4, 40), 1.0, 1e-12, 200);
  REQUIRE(std::holds_alternative<DivergenceReport>(out));
  const auto& div = std::get<DivergenceReport>(out);
  CHECK_FALSE(div.reason.empty());
  CHECK_FALSE(div.history.empty());
}

TEST_CASE("derivative consistency of a converged solution") {
  Solution sol = solve_example2(160, 40, 0.1);
  KernelSurface K = make_lidstone4_kernel();
  DiscreteOperator op(K, sol.grid);
  const double h = 1e-3;
  for (double t : {0.3, 0.5, 0.7}) {
    double fd = (sol.value_at(op, 0, t + h) - sol.value_at(op, 0, t - h)) / (2.0 * h);
    CHECK(std::abs(fd - sol.value_at(op, 1, t)) < 1e-6);
  }
}
