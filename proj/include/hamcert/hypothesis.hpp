#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hamcert/expression.hpp"
#include "hamcert/kernel.hpp"

namespace hamcert {

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool degenerate(double tol = 1e-9) const { return hi - lo <= tol; }
  bool covers(double T, double tol = 1e-12) const { return lo <= tol && hi >= T - tol; }
};

// Nonnegative function of s, tabulated at a node set but evaluable anywhere.
struct TabulatedFn {
  std::vector<double> nodes;
  std::vector<double> values;
  std::function<double(double)> eval;
};

struct HypothesisOptions {
  int grid_density = 401;      // sign-interval scan density (t and s)
  double refine_tol = 1e-9;    // endpoint bisection width
  int env_t_samples = 257;     // t-scan density for envelopes and ratios
  double safety = 1e-6;        // envelope inflation factor used in dominance checks
  int quad_panels = 64;        // panels for envelope/phi integrals
  int quad_nodes = 8;          // Gauss points per panel
};

// Largest interval of t over which the order-i derivative stays >= -refine_tol
// for every sampled s; endpoints refined by bisection. May be degenerate or
// absent.
std::optional<Interval> sign_interval(const KernelSurface& K, int order, int grid_density = 401,
                                      double refine_tol = 1e-9);

// h_i(s) = sup over t of |d^i k / dt^i (t, s)|, per grid node (dense t-scan
// plus golden-section refinement). Values are lower bounds of the true sup;
// consumers that need domination inflate by the safety factor.
TabulatedFn envelope(const KernelSurface& K, int order, const std::vector<double>& s_grid,
                     int t_samples = 257);

struct XiResult {
  double xi = 0.0;
  bool phi_dominates = true;  // |d^j k| <= phi on [c,d] x I held
  double ratio_arg_t = 0.0, ratio_arg_s = 0.0;
  std::string note;
};

// xi_j = min(1 - eps, inf over t in ab, phi(s) > 0 of d^j k / phi). Requires
// the derivative nonnegative on ab x I (HypothesisError otherwise); an inf
// <= 0 is a HypothesisError too. Domination failures on cd x I are reported
// in the result, not thrown.
XiResult xi_constant(const KernelSurface& K, int order, Interval ab, Interval cd,
                     const TabulatedFn& phi, const HypothesisOptions& opt = {});

// What the user declares per cone order: intervals, a phi choice, and an
// optional xi override (must stay admissible; checked).
struct ConeDecl {
  int order = 0;
  Interval ab, cd;
  bool phi_auto = true;                     // phi_j := h_j
  std::optional<ExpressionTree> phi_expr;   // expression in s
  std::optional<double> xi_override;
};

struct ConeEntry {
  int order = 0;
  Interval ab, cd;
  TabulatedFn phi;
  double xi = 0.0;
  double phi_integral_ab = 0.0;  // integral of phi over [a_j, b_j]
  bool valid = false;            // full (H4) data established
  std::string note;
};

struct HypothesisReport {
  int m = 0;
  double T = 1.0;
  std::vector<std::optional<Interval>> sign_intervals;  // per order 0..m
  std::vector<TabulatedFn> envelopes;                   // h_i per order
  std::vector<ConeEntry> cone;                          // per declared order
  std::set<int> J0, J1, J2;
  bool H2 = false, H4 = false, H5 = false, H5_tilde = false;
  double safety = 1e-6;
  std::vector<std::string> notes;

  const ConeEntry* entry(int order) const;
  std::string serialize() const;  // deterministic text form
};

// Runs the full (H2)-(H5) pipeline and assembles the report. Hypothesis
// failures become diagnostics in the report rather than exceptions.
HypothesisReport classify(const KernelSurface& K, const std::vector<ConeDecl>& cone,
                          const HypothesisOptions& opt = {});

}  // namespace hamcert
