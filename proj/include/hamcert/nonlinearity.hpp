#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamcert/expression.hpp"

namespace hamcert {

// Box over which an inf of f is taken: t in [t_lo, t_hi], state coordinate j
// in [0, x_hi[j]].
struct InfBox {
  double t_lo = 0.0, t_hi = 1.0;
  std::vector<double> x_hi;
};

// f(t, x_0, ..., x_m): evaluator plus declared asymptotic data. Declared
// limits are canonical; numeric probes only corroborate them.
struct NonlinearitySpec {
  int state_arity = 0;  // m + 1
  std::function<double(double t, std::span<const double> x)> eval_fn;
  std::optional<ExpressionTree> expr;  // set when parsed from text
  std::string name;                    // builtin id or printed expression

  double f0 = 0.0;    // liminf near zero (may be +inf)
  double finf = 0.0;  // limsup near infinity (may be +inf)

  std::optional<ExpressionTree> phi_r_rule;  // optional Caratheodory bound, vars (t, r)

  // Author-supplied closed forms; when absent the box searches are sampled.
  std::function<double(double rho)> frho_sup_closed;
  std::function<double(double rho, const InfBox&)> frho_inf_closed;
};

// Evaluates f; nonnegativity is asserted in debug builds. Domain errors from
// the expression surface with the inputs attached.
double evaluate(const NonlinearitySpec& spec, double t, std::span<const double> x);

// Builds a spec from expression text over variables t, x0..xm.
NonlinearitySpec nonlinearity_from_expr(const std::string& text, int m, double f0, double finf);

// Builtin nonlinearities: "example1_f" (m = 2), "example2_f" (m = 3).
NonlinearitySpec builtin_nonlinearity(const std::string& id);
bool is_builtin_nonlinearity(const std::string& id);

enum class LimitDirection { Zero, Infinity };

struct LimitBand {
  double lo = 0.0, hi = 0.0;
};

// Samples f(t,x) / (|x_0|+...+|x_m|) along random nonnegative rays at the
// given magnitudes (min over a t-grid for the zero direction, max for the
// infinity direction). Heuristic corroboration of the declared limits only.
LimitBand probe_limits(const NonlinearitySpec& spec, LimitDirection direction, int ray_count,
                       const std::vector<double>& magnitudes, double T = 1.0,
                       unsigned long long seed = 42);

// Default Caratheodory bound estimate at t: max of f over a low-discrepancy
// sample of (-r, r)^{m+1}, inflated 10%. Diagnostics only.
double phi_r_estimate(const NonlinearitySpec& spec, double r, double t, int samples = 512);

// Order-of-magnitude sanity check of the declared f_0 / f^inf against ray
// probes. Returns human-readable warnings; never overrides the declarations.
std::vector<std::string> limit_consistency_warnings(const NonlinearitySpec& spec, double T = 1.0,
                                                    unsigned long long seed = 42);

}  // namespace hamcert
