#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hamcert/hypothesis.hpp"
#include "hamcert/kernel.hpp"
#include "hamcert/nonlinearity.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

// Nystrom tables W[i][p][q] ~ w_q d^i k/dt^i (t_p, s_q) with the panel that
// contains t_p replaced by product-integration weights (the integral of
// k_i(t_p, s) times the panel's Lagrange basis, split at s = t_p), so the
// jump of the top derivative never straddles a quadrature panel.
// Holds a reference to the kernel: it must outlive the operator.
class DiscreteOperator {
 public:
  DiscreteOperator(const KernelSurface& K, Grid grid);

  const Grid& grid() const { return grid_; }
  int order_count() const { return static_cast<int>(tables_.size()); }

  // out[i][p] = lambda * sum_q W[i][p][q] F[q]
  void apply(const std::vector<double>& F, double lambda,
             std::vector<std::vector<double>>& out) const;

  // Corrected weight row for an arbitrary t (Nystrom interpolation row).
  std::vector<double> row_weights(int order, double t) const;

  double row_abs_sum(int order, int p) const;
  const KernelSurface& kernel() const { return *K_; }

 private:
  const KernelSurface* K_;
  Grid grid_;
  std::vector<std::vector<std::vector<double>>> tables_;  // [order][row][col]
};

inline DiscreteOperator discretize(const KernelSurface& K, Grid grid) {
  return DiscreteOperator(K, std::move(grid));
}

struct Solution {
  Grid grid;
  std::vector<std::vector<double>> U;  // U[i][p] = u^(i)(t_p)
  std::vector<double> F;               // f at the nodes for the final iterate
  double lambda = 0.0;
  int iterations = 0;
  double residual_norm = 0.0;

  // Nystrom interpolation of u^(i) at arbitrary t.
  double value_at(const DiscreteOperator& op, int order, double t) const;
};

struct DivergenceReport {
  std::string reason;
  std::vector<double> history;  // successive-iterate max-norm per sweep
  int iterations = 0;
};

using PicardOutcome = std::variant<Solution, DivergenceReport>;

// Damped fixed-point iteration U <- (1-theta) U + theta Phi(U), stopping when
// the successive-iterate max-norm falls under tol.
PicardOutcome picard_solve(const DiscreteOperator& op, const NonlinearitySpec& f, double lambda,
                           const std::vector<std::vector<double>>& u0, double theta, double tol,
                           int max_iter = 500);

// max over orders and nodes of |U - Phi(U)|.
double residual(const DiscreteOperator& op, const NonlinearitySpec& f, double lambda,
                const std::vector<std::vector<double>>& U);

std::vector<double> evaluate_f_at_nodes(const NonlinearitySpec& f, const Grid& grid,
                                        const std::vector<std::vector<double>>& U);

// Cone membership data, mirroring the hypothesis report.
struct ConeSpec {
  struct SignCond {
    int order;
    Interval mn;
  };
  struct HarnackCond {
    int order;
    Interval ab, cd;
    double xi;
  };
  std::vector<SignCond> sign_conds;
  std::vector<HarnackCond> harnack_conds;

  static ConeSpec from_report(const HypothesisReport& report);
};

struct ConeCheckResult {
  struct Item {
    std::string label;
    bool pass = false;
    double margin = 0.0;  // >= -slack means pass
  };
  std::vector<Item> items;
  bool all_pass = true;
};

// Verifies the solution's grid values (Nystrom-interpolated at degenerate
// intervals that contain no node) against the cone conditions; failures are
// verdicts, not errors.
ConeCheckResult cone_check(const DiscreteOperator& op, const Solution& sol, const ConeSpec& cone,
                           double slack = 1e-8);

}  // namespace hamcert
