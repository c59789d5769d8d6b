#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hamcert/poly.hpp"

namespace hamcert {

using SurfaceFn = std::function<double(double t, double s)>;

enum class Region { TLeqS, SLtT };

// One evaluable surface on a region of the square: either an exact bivariate
// polynomial or an opaque evaluator.
class Surface {
 public:
  Surface() : fn_([](double, double) { return 0.0; }) {}
  explicit Surface(BivariatePoly poly);
  explicit Surface(SurfaceFn fn) : fn_(std::move(fn)) {}

  bool is_polynomial() const { return poly_.has_value(); }
  const BivariatePoly& poly() const;
  double operator()(double t, double s) const { return fn_(t, s); }

 private:
  std::optional<BivariatePoly> poly_;
  SurfaceFn fn_;
};

// Kernel k(t,s) on [0,T]^2 with its t-derivative stack up to order m. Each
// order holds a piece valid on {t <= s} and one on {s < t}; the diagonal t = s
// always uses the {t <= s} piece.
class KernelSurface {
 public:
  struct OrderPieces {
    Surface upper;  // region t <= s
    Surface lower;  // region s < t
    bool continuous = true;
  };

  KernelSurface(double T, std::vector<OrderPieces> orders,
                std::optional<Rational> exact_T = std::nullopt);

  // Convenience: build orders 1..m from an order-0 polynomial pair by exact
  // differentiation; continuity flags from exact diagonal comparison.
  static KernelSurface from_poly(double T, const BivariatePoly& upper, const BivariatePoly& lower,
                                 int m, std::optional<Rational> exact_T = std::nullopt);

  int max_order() const { return static_cast<int>(orders_.size()) - 1; }
  double domain_length() const { return T_; }
  const std::optional<Rational>& exact_length() const { return exact_T_; }

  // d^i k / dt^i at (t, s). Throws std::out_of_range for i > max_order().
  double eval_deriv(int i, double t, double s) const;

  bool is_polynomial(int i) const;
  const BivariatePoly& poly(int i, Region region) const;
  bool continuous_at(int i) const;

  KernelSurface scaled(double alpha) const;

 private:
  double T_;
  std::optional<Rational> exact_T_;
  std::vector<OrderPieces> orders_;
};

// Built-in kernels.

// Third-order problem of Example 1: m = 2, T = 1; G and dG/dt continuous,
// d2G/dt2 jumps across the diagonal.
KernelSurface make_example1_kernel();

// Fourth-order beam kernel (simply supported): m = 3, T = 1, symmetric.
KernelSurface make_lidstone4_kernel();

// Classical u'' = h Green's function with u(0) = u(1) = 0: m = 1, T = 1,
// nonpositive on the square. Base case of the 2n-order family.
KernelSurface second_order_dirichlet_kernel();

// C(t,s) = integral over r of A(t,r) B(r,s). Both kernels must share T. When
// both order-0 pieces are polynomial the result is exact with the derivative
// stack up to m_A + m_B + 1; otherwise the pieces are opaque evaluators using
// split Gauss quadrature and the stack stops at A's order.
KernelSurface convolve(const KernelSurface& A, const KernelSurface& B);

// G_n for the 2n-th order problem with even-order derivatives vanishing at
// both endpoints: G_1 is the second-order Dirichlet kernel, G_n = G_1 * G_{n-1}
// by convolution; m = 2n - 1. Exact arithmetic caps at n = 8.
KernelSurface lidstone_kernel(int n);

struct SignPatternEntry {
  int k = 0;      // distance from the top derivative: order = 2n - k
  int order = 0;  // derivative order checked
  int criterion = 0;  // k mod 4
  bool pass = false;
  double worst = 0.0;  // most violating value seen (signed margin)
  std::string detail;
};

struct SignPatternReport {
  int n = 0;
  int grid_density = 0;
  std::vector<SignPatternEntry> entries;
  bool overall_sign_pass = false;  // G_n >= 0 for n even, <= 0 for n odd
  double overall_worst = 0.0;
  bool all_pass() const;
};

// Evaluates every derivative order of G_n on a grid and checks the mod-4 sign
// criteria: k=0 mod 4 nonnegative; k=1 increasing in t, negative at t=0 and
// positive at t=1; k=2 nonpositive; k=3 decreasing, positive at t=0 and
// negative at t=1. Violations are reported, not thrown.
SignPatternReport verify_sign_pattern(int n, int grid_density);

// Builtin lookup: "example1", "lidstone4", "dirichlet2", "lidstone:<n>".
KernelSurface make_builtin_kernel(const std::string& id);
bool is_builtin_kernel(const std::string& id);

}  // namespace hamcert
