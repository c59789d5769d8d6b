#pragma once

#include <functional>
#include <vector>

namespace hamcert {

using Fn1 = std::function<double(double)>;

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with n points, 1 <= n <= 64. Cached.
const QuadRule& gauss_legendre(int n);

// Single Gauss-Legendre panel on [a, b].
double integrate(const Fn1& f, double a, double b, int n = 32);

// Composite rule split at the interior breakpoints (points outside (a,b) are
// ignored). One n-point panel per smooth piece.
double integrate_split(const Fn1& f, double a, double b, std::vector<double> breaks, int n = 32);

// Sign-change abscissae of f on [a, b]: scan at `scan` points, bisect each
// bracketing pair down to `tol`.
std::vector<double> find_sign_changes(const Fn1& f, double a, double b, int scan = 256,
                                      double tol = 1e-13);

// Integral of |f| with panels split at known kinks and at detected sign
// changes of f.
double integrate_abs(const Fn1& f, double a, double b, std::vector<double> kinks, int n = 32);

struct GoldenResult {
  double arg;
  double value;
};

// Golden-section extremum search on [a, b] for a locally unimodal function.
GoldenResult golden_max(const Fn1& f, double a, double b, double tol = 1e-10);
GoldenResult golden_min(const Fn1& f, double a, double b, double tol = 1e-10);

// Maximum of f over [a, b]: dense scan (including endpoints and any listed
// special points) followed by golden-section refinement around the best node.
GoldenResult scan_max(const Fn1& f, double a, double b, int samples,
                      const std::vector<double>& special = {}, double tol = 1e-10);
GoldenResult scan_min(const Fn1& f, double a, double b, int samples,
                      const std::vector<double>& special = {}, double tol = 1e-10);

// Composite Gauss-Legendre solution grid on [0, T].
struct Grid {
  std::vector<double> nodes;    // strictly increasing, interior to [0, T]
  std::vector<double> weights;  // positive, sum to T
  double length = 0.0;          // T
  int panel_count = 0;
  int per_panel = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  // Panel index containing x (clamped to [0, panel_count-1]).
  int panel_of(double x) const;
  double panel_lo(int p) const;
  double panel_hi(int p) const;
};

Grid make_grid(int node_count, int panel_count, double T);

// Deterministic low-discrepancy point set in [0,1)^dim (Halton with the first
// `dim` primes), used to seed box sup/inf searches.
std::vector<std::vector<double>> halton_points(int count, int dim, int skip = 20);

}  // namespace hamcert
