#include "hamcert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hamcert/errors.hpp"

namespace hamcert {

namespace {

// Product-integration weights over one panel: w_q = integral over the panel of
// k_i(t, s) ell_q(s) ds with the integral split at s = t. ell_q are the
// Lagrange polynomials through the panel's own nodes.
std::vector<double> panel_product_weights(const KernelSurface& K, int order, double t,
                                          const std::vector<double>& panel_nodes, double lo,
                                          double hi) {
  const int g = static_cast<int>(panel_nodes.size());
  std::vector<double> weights(g, 0.0);
  for (int q = 0; q < g; ++q) {
    auto integrand = [&](double s) {
      double ell = 1.0;
      for (int j = 0; j < g; ++j) {
        if (j == q) continue;
        ell *= (s - panel_nodes[j]) / (panel_nodes[q] - panel_nodes[j]);
      }
      return K.eval_deriv(order, t, s) * ell;
    };
    weights[q] = integrate_split(integrand, lo, hi, {t}, 24);
  }
  return weights;
}

}  // namespace

DiscreteOperator::DiscreteOperator(const KernelSurface& K, Grid grid)
    : K_(&K), grid_(std::move(grid)) {
  const int n = grid_.size();
  const int orders = K.max_order() + 1;
  tables_.assign(orders, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int i = 0; i < orders; ++i)
    for (int p = 0; p < n; ++p) {
      auto& row = tables_[i][p];
      const double t = grid_.nodes[p];
      for (int q = 0; q < n; ++q) row[q] = grid_.weights[q] * K.eval_deriv(i, t, grid_.nodes[q]);
      // Re-derive the panel containing t so the diagonal jump cannot straddle
      // a quadrature panel.
      int panel = grid_.panel_of(t);
      int q0 = panel * grid_.per_panel;
      std::vector<double> panel_nodes(grid_.nodes.begin() + q0,
                                      grid_.nodes.begin() + q0 + grid_.per_panel);
      std::vector<double> w = panel_product_weights(K, i, t, panel_nodes, grid_.panel_lo(panel),
                                                    grid_.panel_hi(panel));
      for (int q = 0; q < grid_.per_panel; ++q) row[q0 + q] = w[q];
    }
}

void DiscreteOperator::apply(const std::vector<double>& F, double lambda,
                             std::vector<std::vector<double>>& out) const {
  const int n = grid_.size();
  out.assign(tables_.size(), std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < tables_.size(); ++i)
    for (int p = 0; p < n; ++p) {
      const auto& row = tables_[i][p];
      double acc = 0.0;
      for (int q = 0; q < n; ++q) acc += row[q] * F[q];
      out[i][p] = lambda * acc;
    }
}

std::vector<double> DiscreteOperator::row_weights(int order, double t) const {
  const int n = grid_.size();
  std::vector<double> row(n);
  for (int q = 0; q < n; ++q) row[q] = grid_.weights[q] * K_->eval_deriv(order, t, grid_.nodes[q]);
  int panel = grid_.panel_of(t);
  double lo = grid_.panel_lo(panel), hi = grid_.panel_hi(panel);
  if (t > lo && t < hi) {  // interior jump: replace that panel's weights
    int q0 = panel * grid_.per_panel;
    std::vector<double> panel_nodes(grid_.nodes.begin() + q0,
                                    grid_.nodes.begin() + q0 + grid_.per_panel);
    std::vector<double> w = panel_product_weights(*K_, order, t, panel_nodes, lo, hi);
    for (int q = 0; q < grid_.per_panel; ++q) row[q0 + q] = w[q];
  }
  return row;
}

double DiscreteOperator::row_abs_sum(int order, int p) const {
  double acc = 0.0;
  for (double w : tables_[order][p]) acc += std::abs(w);
  return acc;
}

std::vector<double> evaluate_f_at_nodes(const NonlinearitySpec& f, const Grid& grid,
                                        const std::vector<std::vector<double>>& U) {
  const int n = grid.size();
  std::vector<double> F(n);
  std::vector<double> state(U.size());
  for (int q = 0; q < n; ++q) {
    for (std::size_t i = 0; i < U.size(); ++i) state[i] = U[i][q];
    try {
      F[q] = f.eval_fn(grid.nodes[q], state);
    } catch (const EvalError& err) {
      std::ostringstream os;
      os << err.what() << " [at node q=" << q << ", s=" << grid.nodes[q] << "]";
      throw EvalError(os.str());
    }
  }
  return F;
}

double Solution::value_at(const DiscreteOperator& op, int order, double t) const {
  std::vector<double> row = op.row_weights(order, t);
  double acc = 0.0;
  for (std::size_t q = 0; q < row.size(); ++q) acc += row[q] * F[q];
  return lambda * acc;
}

namespace {

double max_abs_diff(const std::vector<std::vector<double>>& A,
                    const std::vector<std::vector<double>>& B) {
  double worst = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t p = 0; p < A[i].size(); ++p)
      worst = std::max(worst, std::abs(A[i][p] - B[i][p]));
  return worst;
}

bool all_finite(const std::vector<std::vector<double>>& A) {
  for (const auto& row : A)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

PicardOutcome picard_solve(const DiscreteOperator& op, const NonlinearitySpec& f, double lambda,
                           const std::vector<std::vector<double>>& u0, double theta, double tol,
                           int max_iter) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("picard_solve: damping must lie in (0,1]");
  if (lambda < 0.0) throw std::invalid_argument("picard_solve: lambda must be >= 0");
  const int n = op.grid().size();
  const int orders = op.order_count();
  std::vector<std::vector<double>> U = u0;
  if (static_cast<int>(U.size()) != orders || static_cast<int>(U[0].size()) != n)
    throw std::invalid_argument("picard_solve: seed shape mismatch");

  DivergenceReport div;
  std::vector<std::vector<double>> phi;
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<double> F = evaluate_f_at_nodes(f, op.grid(), U);
    op.apply(F, lambda, phi);
    if (!all_finite(phi)) {
      div.reason = "non-finite operator image (overflow or NaN)";
      div.iterations = iter;
      return div;
    }
    double diff = max_abs_diff(U, phi);
    for (int i = 0; i < orders; ++i)
      for (int p = 0; p < n; ++p) U[i][p] = (1.0 - theta) * U[i][p] + theta * phi[i][p];
    div.history.push_back(diff);
    if (theta * diff < tol) {
      Solution sol;
      sol.grid = op.grid();
      sol.U = U;
      sol.lambda = lambda;
      sol.iterations = iter;
      sol.F = evaluate_f_at_nodes(f, op.grid(), U);
      op.apply(sol.F, lambda, phi);
      sol.residual_norm = max_abs_diff(U, phi);
      return sol;
    }
  }
  div.reason = "max iterations reached without meeting tol";
  div.iterations = max_iter;
  return div;
}

double residual(const DiscreteOperator& op, const NonlinearitySpec& f, double lambda,
                const std::vector<std::vector<double>>& U) {
  std::vector<double> F = evaluate_f_at_nodes(f, op.grid(), U);
  std::vector<std::vector<double>> phi;
  op.apply(F, lambda, phi);
  return max_abs_diff(U, phi);
}

ConeSpec ConeSpec::from_report(const HypothesisReport& report) {
  ConeSpec cone;
  for (int i = 0; i <= report.m; ++i)
    if (report.sign_intervals[i])
      cone.sign_conds.push_back({i, *report.sign_intervals[i]});
  for (const auto& entry : report.cone)
    if (entry.valid) cone.harnack_conds.push_back({entry.order, entry.ab, entry.cd, entry.xi});
  return cone;
}

namespace {

// Values of u^(order) over the nodes inside [lo, hi]; when the interval traps
// no node (degenerate intervals), fall back to Nystrom interpolation at the
// endpoints.
std::vector<double> values_in(const DiscreteOperator& op, const Solution& sol, int order,
                              const Interval& iv) {
  std::vector<double> out;
  for (int p = 0; p < sol.grid.size(); ++p) {
    double t = sol.grid.nodes[p];
    if (t >= iv.lo - 1e-14 && t <= iv.hi + 1e-14) out.push_back(sol.U[order][p]);
  }
  if (out.empty()) {
    out.push_back(sol.value_at(op, order, iv.lo));
    if (iv.hi > iv.lo) out.push_back(sol.value_at(op, order, iv.hi));
  }
  return out;
}

}  // namespace

ConeCheckResult cone_check(const DiscreteOperator& op, const Solution& sol, const ConeSpec& cone,
                           double slack) {
  ConeCheckResult result;
  for (const auto& cond : cone.sign_conds) {
    double worst = std::numeric_limits<double>::infinity();
    for (double v : values_in(op, sol, cond.order, cond.mn)) worst = std::min(worst, v);
    ConeCheckResult::Item item;
    std::ostringstream os;
    os << "u^(" << cond.order << ") >= 0 on [" << cond.mn.lo << ", " << cond.mn.hi << "]";
    item.label = os.str();
    item.margin = worst;
    item.pass = worst >= -slack;
    result.all_pass = result.all_pass && item.pass;
    result.items.push_back(std::move(item));
  }
  for (const auto& cond : cone.harnack_conds) {
    double min_ab = std::numeric_limits<double>::infinity();
    for (double v : values_in(op, sol, cond.order, cond.ab)) min_ab = std::min(min_ab, v);
    double max_cd = 0.0;
    for (double v : values_in(op, sol, cond.order, cond.cd)) max_cd = std::max(max_cd, std::abs(v));
    ConeCheckResult::Item item;
    std::ostringstream os;
    os << "min u^(" << cond.order << ") on [" << cond.ab.lo << ", " << cond.ab.hi << "] >= "
       << cond.xi << " * sup |u^(" << cond.order << ")| on [" << cond.cd.lo << ", " << cond.cd.hi
       << "]";
    item.label = os.str();
    item.margin = min_ab - cond.xi * max_cd;
    item.pass = item.margin >= -slack;
    result.all_pass = result.all_pass && item.pass;
    result.items.push_back(std::move(item));
  }
  return result;
}

}  // namespace hamcert
