#include "hamcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hamcert {

std::string fmt_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_const(double v) {
  if (!std::isfinite(v)) return fmt_num(v);
  // Only near-exact matches with small denominators qualify as fractions.
  if (auto frac = approx_fraction(v, 10000, 1e-12)) {
    auto [p, q] = *frac;
    if (q == 1) return fmt_num(v);
    std::ostringstream os;
    os << p << "/" << q << " (" << fmt_num(v) << ")";
    return os.str();
  }
  return fmt_num(v);
}

std::string fmt_window(const Window& w) {
  if (w.empty) return "empty" + (w.diagnostic.empty() ? "" : " [" + w.diagnostic + "]");
  std::ostringstream os;
  os << "(" << fmt_num(w.lo) << ", " << fmt_num(w.hi) << ")"
     << (w.certified ? " certified" : " heuristic");
  return os.str();
}

void write_certify_report(std::ostream& os, const std::string& problem_name,
                          const CertifyArtifacts& artifacts) {
  const HypothesisReport& rep = artifacts.report;
  const Certificate& cert = artifacts.certificate;
  os << "problem = " << problem_name << "\n";
  os << "m = " << rep.m << "\n";
  os << "T = " << fmt_num(rep.T) << "\n\n";

  os << "# hypotheses\n";
  for (int i = 0; i <= rep.m; ++i) {
    os << "sign_interval[" << i << "] = ";
    if (rep.sign_intervals[i])
      os << "[" << fmt_num(rep.sign_intervals[i]->lo) << ", "
         << fmt_num(rep.sign_intervals[i]->hi) << "]";
    else
      os << "absent";
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
  set_line("J0", rep.J0);
  set_line("J1", rep.J1);
  set_line("J2", rep.J2);
  os << "H2 = " << (rep.H2 ? "satisfied" : "failed") << "\n";
  os << "H4 = " << (rep.H4 ? "satisfied" : "failed") << "\n";
  os << "H5 = " << (rep.H5 ? "satisfied" : "failed") << "\n";
  os << "H5_tilde = " << (rep.H5_tilde ? "satisfied" : "failed") << "\n";
  for (const auto& e : rep.cone) {
    os << "cone[" << e.order << "] = ab=[" << fmt_num(e.ab.lo) << ", " << fmt_num(e.ab.hi)
       << "] cd=[" << fmt_num(e.cd.lo) << ", " << fmt_num(e.cd.hi) << "] xi=" << fmt_const(e.xi)
       << " int_phi_ab=" << fmt_const(e.phi_integral_ab)
       << (e.valid ? "" : " INVALID");
    if (!e.note.empty()) os << " # " << e.note;
    os << "\n";
  }
  for (const auto& note : rep.notes) os << "note = " << note << "\n";

  os << "\n# constants\n";
  for (std::size_t i = 0; i < cert.bars.up.size(); ++i)
    os << "Lambda_up[" << i << "] = " << fmt_const(cert.bars.up[i]) << "\n";
  for (const auto& [j, v] : cert.bars.low)
    os << "Lambda_low[" << j << "] = " << fmt_const(v) << "\n";
  os << "Lambda_bar = " << fmt_const(cert.bars.bar) << "\n";
  os << "Lambda_under = " << fmt_const(cert.bars.under) << "\n";
  for (std::size_t i = 0; i < cert.N_components.size(); ++i)
    os << "invN_component[" << i << "] = " << fmt_const(cert.N_components[i]) << "\n";
  os << "N = " << fmt_const(cert.N) << "\n";
  for (const auto& [j, v] : cert.inv_M) os << "invM[" << j << "] = " << fmt_const(v) << "\n";
  if (cert.c > 0.0) os << "c = " << fmt_const(cert.c) << "\n";

  os << "\n# windows\n";
  os << "existence_window = " << fmt_window(cert.existence) << "\n";
  os << "best_C1_window = " << fmt_window(artifacts.best_c1) << "\n";

  if (!artifacts.lambdas.empty()) {
    os << "\n# multiplicity per lambda\n";
    for (std::size_t k = 0; k < artifacts.lambdas.size(); ++k) {
      const MultiplicityResult& mr = artifacts.per_lambda[k];
      os << "lambda = " << fmt_num(artifacts.lambdas[k]) << "\n";
      if (!mr.available) {
        os << "  multiplicity = unavailable [" << mr.diagnostic << "]\n";
        continue;
      }
      if (mr.records.empty()) {
        os << "  conditions = none"
           << (mr.diagnostic.empty() ? "" : " [" + mr.diagnostic + "]") << "\n";
        continue;
      }
      for (const auto& rec : mr.records) {
        os << "  " << rec.condition << " rho = (";
        for (std::size_t j = 0; j < rec.rhos.size(); ++j)
          os << (j ? ", " : "") << fmt_num(rec.rhos[j]);
        os << ") solutions >= " << rec.solutions << " window = " << fmt_window(rec.window)
           << "\n";
      }
    }
  }
}

void write_condition_csv(std::ostream& os, const CertifyArtifacts& artifacts) {
  os << "lambda,condition,solutions,rho_witnesses,window_lo,window_hi,status\n";
  for (std::size_t k = 0; k < artifacts.lambdas.size(); ++k) {
    const MultiplicityResult& mr = artifacts.per_lambda[k];
    if (!mr.available || mr.records.empty()) {
      os << fmt_num(artifacts.lambdas[k]) << ",none,0,,,,"
         << (mr.available ? "no-condition" : "unavailable") << "\n";
      continue;
    }
    for (const auto& rec : mr.records) {
      os << fmt_num(artifacts.lambdas[k]) << "," << rec.condition << "," << rec.solutions << ",";
      for (std::size_t j = 0; j < rec.rhos.size(); ++j)
        os << (j ? ";" : "") << fmt_num(rec.rhos[j]);
      os << "," << fmt_num(rec.window.lo) << "," << fmt_num(rec.window.hi) << ","
         << (rec.window.certified ? "certified" : "heuristic") << "\n";
    }
  }
}

void write_solution_csv(std::ostream& os, const Solution& sol) {
  os << "t";
  for (std::size_t i = 0; i < sol.U.size(); ++i) os << ",u" << i;
  os << "\n";
  for (int p = 0; p < sol.grid.size(); ++p) {
    os << fmt_num(sol.grid.nodes[p]);
    for (std::size_t i = 0; i < sol.U.size(); ++i) os << "," << fmt_num(sol.U[i][p]);
    os << "\n";
  }
}

void write_solve_summary(std::ostream& os, const SolveSummary& summary) {
  os << "lambda = " << fmt_num(summary.lambda) << "\n";
  os << "converged = " << (summary.converged ? "true" : "false") << "\n";
  os << "iterations = " << summary.iterations << "\n";
  if (summary.converged) {
    os << "residual = " << fmt_num(summary.residual) << "\n";
    os << "max_abs_u = " << fmt_num(summary.max_abs_u) << "\n";
    os << "trivial_fixed_point = " << (summary.trivial ? "true" : "false") << "\n";
    if (summary.trivial)
      os << "note = converged to u == 0; f(t,0,...,0) = 0 makes the zero function a fixed "
            "point, so the theorem's nontrivial solution needs a nonzero u0 seed\n";
    for (const auto& item : summary.cone.items)
      os << "cone: " << item.label << " = " << (item.pass ? "pass" : "FAIL")
         << " (margin " << fmt_num(item.margin) << ")\n";
    os << "cone_member = " << (summary.cone.all_pass ? "true" : "false") << "\n";
  } else {
    os << "divergence = " << summary.divergence_reason << "\n";
    os << "history =";
    for (double h : summary.history) os << " " << fmt_num(h);
    os << "\n";
  }
}

void write_solution_svg(std::ostream& os, const Solution& sol) {
  const int width = 720, height = 420, margin = 45;
  double lo = 0.0, hi = 0.0;
  for (const auto& row : sol.U)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (hi - lo < 1e-12) {
    hi += 1.0;
    lo -= 1.0;
  }
  const double T = sol.grid.length;
  auto X = [&](double t) { return margin + t / T * (width - 2 * margin); };
  auto Y = [&](double v) { return height - margin - (v - lo) / (hi - lo) * (height - 2 * margin); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<line x1='" << X(0) << "' y1='" << Y(0) << "' x2='" << X(T) << "' y2='" << Y(0)
     << "' stroke='#999' stroke-dasharray='4 3'/>\n";
  for (std::size_t i = 0; i < sol.U.size(); ++i) {
    os << "<polyline fill='none' stroke='" << colors[i % 8] << "' stroke-width='1.5' points='";
    for (int p = 0; p < sol.grid.size(); ++p)
      os << fmt_num(X(sol.grid.nodes[p])) << "," << fmt_num(Y(sol.U[i][p])) << " ";
    os << "'/>\n";
    os << "<text x='" << width - margin + 4 << "' y='" << margin + 16 * i << "' fill='"
       << colors[i % 8] << "' font-size='12'>u" << i << "</text>\n";
  }
  os << "<text x='" << margin << "' y='" << height - 10 << "' font-size='11'>t in [0, "
     << fmt_num(T) << "], lambda = " << fmt_num(sol.lambda) << "</text>\n";
  os << "<text x='4' y='" << Y(hi) + 4 << "' font-size='11'>" << fmt_num(hi) << "</text>\n";
  os << "<text x='4' y='" << Y(lo) << "' font-size='11'>" << fmt_num(lo) << "</text>\n";
  os << "</svg>\n";
}

void write_sign_pattern_report(std::ostream& os, const SignPatternReport& report) {
  os << "n = " << report.n << "\n";
  os << "grid = " << report.grid_density << "x" << report.grid_density << "\n";
  for (const auto& e : report.entries) {
    os << "k=" << e.k << " order=" << e.order << " criterion=" << e.criterion << " ("
       << e.detail << ") verdict=" << (e.pass ? "pass" : "FAIL")
       << " worst_margin=" << fmt_num(e.worst) << "\n";
  }
  os << "overall_sign (" << (report.n % 2 == 0 ? "G >= 0" : "G <= 0")
     << ") verdict=" << (report.overall_sign_pass ? "pass" : "FAIL")
     << " worst_margin=" << fmt_num(report.overall_worst) << "\n";
  os << "all_pass = " << (report.all_pass() ? "true" : "false") << "\n";
}

}  // namespace hamcert
