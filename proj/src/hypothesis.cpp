#include "hamcert/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hamcert/errors.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

namespace {

// min over s (grid + golden refinement, diagonal-aware) of the order-i
// derivative at fixed t.
double min_over_s(const KernelSurface& K, int order, double t, int density) {
  const double T = K.domain_length();
  auto f = [&](double s) { return K.eval_deriv(order, t, s); };
  // The top derivative may jump at s = t; seed the scan with both sides.
  std::vector<double> special = {t, std::nextafter(t, 0.0), std::nextafter(t, T)};
  return scan_min(f, 0.0, T, density, special, 1e-12).value;
}

}  // namespace

std::optional<Interval> sign_interval(const KernelSurface& K, int order, int grid_density,
                                      double refine_tol) {
  if (grid_density < 101) grid_density = 101;
  const double T = K.domain_length();
  auto good = [&](double t) { return min_over_s(K, order, t, grid_density) >= -refine_tol; };

  std::vector<double> ts(grid_density);
  std::vector<char> ok(grid_density);
  for (int i = 0; i < grid_density; ++i) {
    ts[i] = T * i / (grid_density - 1);
    ok[i] = good(ts[i]) ? 1 : 0;
  }

  // Longest run of good nodes; ties resolved leftmost.
  int best_lo = -1, best_len = 0;
  for (int i = 0; i < grid_density;) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < grid_density && ok[j]) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_lo = i;
    }
    i = j;
  }
  if (best_len == 0) return std::nullopt;

  int lo_idx = best_lo, hi_idx = best_lo + best_len - 1;
  double lo = ts[lo_idx], hi = ts[hi_idx];

  // Refine endpoints into the neighbouring bad cells by predicate bisection.
  if (lo_idx > 0) {
    double bad = ts[lo_idx - 1], good_t = lo;
    while (good_t - bad > refine_tol) {
      double mid = 0.5 * (bad + good_t);
      (good(mid) ? good_t : bad) = mid;
    }
    lo = good_t;
  }
  if (hi_idx + 1 < grid_density) {
    double good_t = hi, bad = ts[hi_idx + 1];
    while (bad - good_t > refine_tol) {
      double mid = 0.5 * (good_t + bad);
      (good(mid) ? good_t : bad) = mid;
    }
    hi = good_t;
  }
  return Interval{lo, hi};
}

TabulatedFn envelope(const KernelSurface& K, int order, const std::vector<double>& s_grid,
                     int t_samples) {
  if (s_grid.empty()) throw std::invalid_argument("envelope: empty s grid");
  const double T = K.domain_length();
  // The evaluator outlives this call; it owns its kernel copy.
  auto sup_at = [kernel = K, order, T, t_samples](double s) {
    auto f = [&](double t) { return std::abs(kernel.eval_deriv(order, t, s)); };
    std::vector<double> special = {s, std::nextafter(s, 0.0), std::nextafter(s, T)};
    return scan_max(f, 0.0, T, t_samples, special, 1e-12).value;
  };
  TabulatedFn h;
  h.nodes = s_grid;
  h.values.reserve(s_grid.size());
  for (double s : s_grid) h.values.push_back(sup_at(s));
  h.eval = sup_at;
  return h;
}

XiResult xi_constant(const KernelSurface& K, int order, Interval ab, Interval cd,
                     const TabulatedFn& phi, const HypothesisOptions& opt) {
  const double T = K.domain_length();
  if (ab.lo < -1e-12 || ab.hi > T + 1e-12 || cd.lo < -1e-12 || cd.hi > T + 1e-12)
    throw std::invalid_argument("xi_constant: intervals must lie inside [0,T]");

  const int td = opt.env_t_samples;
  std::vector<double> ts(td);
  for (int i = 0; i < td; ++i) ts[i] = ab.lo + (ab.hi - ab.lo) * i / std::max(1, td - 1);

  // Nonnegativity of the derivative on ab x I comes first.
  for (double t : ts) {
    double mn = min_over_s(K, order, t, opt.grid_density);
    if (mn < -1e-9)
      throw HypothesisError("xi_constant: derivative of order " + std::to_string(order) +
                            " is negative on [a,b] x I (min " + std::to_string(mn) + " at t=" +
                            std::to_string(t) + ")");
  }

  XiResult result;

  // inf over t in ab and tabulated s with phi(s) > 0 of k_j / phi.
  double inf_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t is = 0; is < phi.nodes.size(); ++is) {
    double s = phi.nodes[is], ph = phi.values[is];
    if (!(ph > 1e-300)) continue;
    auto ratio_t = [&](double t) { return K.eval_deriv(order, t, s) / ph; };
    GoldenResult worst = scan_min(ratio_t, ab.lo, ab.hi, td, {s}, 1e-10);
    if (worst.value < inf_ratio) {
      inf_ratio = worst.value;
      result.ratio_arg_t = worst.arg;
      result.ratio_arg_s = s;
    }
  }
  if (!(inf_ratio > 0.0) || !std::isfinite(inf_ratio))
    throw HypothesisError("xi_constant: no valid xi (ratio inf <= 0 at order " +
                          std::to_string(order) + ")");
  if (inf_ratio >= 1.0) {
    inf_ratio = 1.0 - 1e-9;  // (H4) demands xi in (0,1)
    result.note = "ratio reached 1; clamped to 1-1e-9";
  }
  result.xi = inf_ratio;

  // Domination |k_j| <= phi on cd x I (within the safety band).
  const double slack = 1e-9;
  result.phi_dominates = true;
  int cd_samples = std::max(33, td / 4);
  for (int i = 0; i < cd_samples && result.phi_dominates; ++i) {
    double t = cd.lo + (cd.hi - cd.lo) * i / std::max(1, cd_samples - 1);
    for (std::size_t is = 0; is < phi.nodes.size(); ++is) {
      double s = phi.nodes[is];
      double bound = phi.values[is] * (1.0 + opt.safety) + slack;
      if (std::abs(K.eval_deriv(order, t, s)) > bound) {
        result.phi_dominates = false;
        std::ostringstream os;
        os << "phi fails to dominate |k_" << order << "| at (t,s)=(" << t << "," << s << ")";
        result.note = os.str();
        break;
      }
    }
  }
  return result;
}

const ConeEntry* HypothesisReport::entry(int order) const {
  for (const auto& e : cone)
    if (e.order == order) return &e;
  return nullptr;
}

namespace {

// Interior breakpoints of a uniform composite split of [a, b].
std::vector<double> composite_breaks(double a, double b, int panels) {
  std::vector<double> out;
  for (int i = 1; i < panels; ++i) out.push_back(a + (b - a) * i / panels);
  return out;
}

// Quadrature abscissae covering [a, b]: panel-wise Gauss nodes.
std::vector<double> quad_node_grid(double a, double b, int panels, int nodes) {
  Grid g = make_grid(panels * nodes, panels, b - a);
  std::vector<double> out = g.nodes;
  for (double& x : out) x += a;
  return out;
}

}  // namespace

HypothesisReport classify(const KernelSurface& K, const std::vector<ConeDecl>& cone,
                          const HypothesisOptions& opt) {
  HypothesisReport report;
  report.m = K.max_order();
  report.T = K.domain_length();
  report.safety = opt.safety;
  report.notes.push_back(
      "(H1) assumed structurally: kernel representation is piecewise smooth in t with a "
      "single diagonal kink; not verified numerically");

  // (H2): sign intervals per order.
  for (int i = 0; i <= report.m; ++i) {
    auto iv = sign_interval(K, i, opt.grid_density, opt.refine_tol);
    if (iv) report.J0.insert(i);
    report.sign_intervals.push_back(iv);
  }
  report.H2 = !report.J0.empty();
  if (!report.H2) report.notes.push_back("(H2) fails: no order has a nonnegativity interval");

  // (H3): envelopes on a quadrature-friendly s grid.
  std::vector<double> s_grid = quad_node_grid(0.0, report.T, opt.quad_panels, opt.quad_nodes);
  for (int i = 0; i <= report.m; ++i)
    report.envelopes.push_back(envelope(K, i, s_grid, opt.env_t_samples));

  // (H4) per declared cone order.
  for (const ConeDecl& decl : cone) {
    ConeEntry entry;
    entry.order = decl.order;
    entry.ab = decl.ab;
    entry.cd = decl.cd;
    if (decl.order < 0 || decl.order > report.m) {
      entry.note = "declared order outside 0..m";
      report.cone.push_back(entry);
      continue;
    }
    if (decl.phi_auto) {
      entry.phi = report.envelopes[decl.order];
    } else {
      ExpressionTree expr = *decl.phi_expr;
      entry.phi.nodes = s_grid;
      entry.phi.eval = [expr](double s) {
        std::vector<double> args = {s};
        return expr.evaluate(args);
      };
      for (double s : s_grid) entry.phi.values.push_back(entry.phi.eval(s));
    }
    try {
      XiResult xi = xi_constant(K, decl.order, decl.ab, decl.cd, entry.phi, opt);
      entry.note = xi.note;
      if (!xi.phi_dominates) {
        entry.valid = false;
        entry.note = xi.note;
        report.cone.push_back(entry);
        continue;
      }
      entry.xi = xi.xi;
      if (decl.xi_override) {
        double ov = *decl.xi_override;
        if (!(ov > 0.0 && ov < 1.0)) {
          entry.valid = false;
          entry.note = "xi override outside (0,1)";
          report.cone.push_back(entry);
          continue;
        }
        if (ov > xi.xi * (1.0 + 1e-9) + 1e-12) {
          entry.valid = false;
          entry.note = "xi override exceeds the admissible ratio " + std::to_string(xi.xi);
          report.cone.push_back(entry);
          continue;
        }
        entry.xi = ov;
      }
      entry.phi_integral_ab =
          integrate_split([&](double s) { return entry.phi.eval(s); }, decl.ab.lo, decl.ab.hi,
                          composite_breaks(decl.ab.lo, decl.ab.hi, 16), opt.quad_nodes * 2);
      if (!(entry.phi_integral_ab > 0.0)) {
        entry.valid = false;
        entry.note = "integral of phi over [a,b] is not positive";
        report.cone.push_back(entry);
        continue;
      }
      entry.valid = report.J0.count(decl.order) > 0;
      if (!entry.valid) entry.note = "order lacks an (H2) sign interval";
    } catch (const HypothesisError& err) {
      entry.valid = false;
      entry.note = err.what();
    }
    report.cone.push_back(entry);
  }

  for (const auto& e : report.cone) {
    if (!e.valid) continue;
    report.J1.insert(e.order);
    if (Interval{e.cd.lo, e.cd.hi}.covers(report.T)) report.J2.insert(e.order);
  }
  report.H4 = !report.J1.empty();

  // (H5): some i0 with [c,d] = I or [m,n] = I, and 0..i0 all in J0.
  auto prefix_in_J0 = [&](int i0) {
    for (int i = 0; i <= i0; ++i)
      if (!report.J0.count(i)) return false;
    return true;
  };
  for (int i0 = 0; i0 <= report.m && !report.H5; ++i0) {
    bool cd_full = report.J2.count(i0) > 0;
    bool mn_full = report.sign_intervals[i0] && report.sign_intervals[i0]->covers(report.T);
    if ((cd_full || mn_full) && report.J0.count(i0) && prefix_in_J0(i0)) report.H5 = true;
  }
  for (int i0 : report.J2)
    if (prefix_in_J0(i0)) report.H5_tilde = true;
  if (!report.H5_tilde && !report.J2.empty())
    report.notes.push_back("(H~5) fails: J2 nonempty but some lower order misses (H2)");

  return report;
}

std::string HypothesisReport::serialize() const {
  std::ostringstream os;
  os.precision(15);
  os << "m = " << m << "\nT = " << T << "\n";
  for (int i = 0; i <= m; ++i) {
    os << "sign_interval[" << i << "] = ";
    if (sign_intervals[i])
      os << "[" << sign_intervals[i]->lo << ", " << sign_intervals[i]->hi << "]";
    else
      os << "absent";
    os << "\n";
  }
  for (int i = 0; i <= m; ++i) {
    os << "envelope[" << i << "] =";
    for (std::size_t k = 0; k < envelopes[i].values.size(); k += 37)
      os << ' ' << envelopes[i].values[k];
    os << "\n";
  }
  for (const auto& e : cone) {
    os << "cone[" << e.order << "]: ab=[" << e.ab.lo << "," << e.ab.hi << "] cd=[" << e.cd.lo
       << "," << e.cd.hi << "] xi=" << e.xi << " int_phi=" << e.phi_integral_ab
       << " valid=" << e.valid;
    if (!e.note.empty()) os << " note=" << e.note;
    os << "\n";
  }
  auto set_line = [&](const char* name, const std::set<int>& s) {
    os << name << " = {";
    bool first = true;
    for (int v : s) {
      if (!first) os << ", ";
      os << v;
      first = false;
    }
    os << "}\n";
  };
  set_line("J0", J0);
  set_line("J1", J1);
  set_line("J2", J2);
  os << "H2 = " << H2 << "\nH4 = " << H4 << "\nH5 = " << H5 << "\nH5_tilde = " << H5_tilde
     << "\n";
  for (const auto& n : notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace hamcert
