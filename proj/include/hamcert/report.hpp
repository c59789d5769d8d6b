#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hamcert/certificate.hpp"
#include "hamcert/solver.hpp"

namespace hamcert {

// Fixed-precision number formatting shared by all report writers so identical
// runs emit byte-identical files.
std::string fmt_num(double v);
// "p/q (decimal)" when a simple fraction matches to 1e-9, else the decimal.
std::string fmt_const(double v);
std::string fmt_window(const Window& w);

struct CertifyArtifacts {
  HypothesisReport report;
  Certificate certificate;
  Window best_c1;
  std::vector<double> lambdas;
  std::vector<MultiplicityResult> per_lambda;
};

void write_certify_report(std::ostream& os, const std::string& problem_name,
                          const CertifyArtifacts& artifacts);

// CSV table of (condition, rho witnesses, lambda window) per lambda.
void write_condition_csv(std::ostream& os, const CertifyArtifacts& artifacts);

void write_solution_csv(std::ostream& os, const Solution& sol);

struct SolveSummary {
  bool converged = false;
  bool trivial = false;
  double lambda = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double max_abs_u = 0.0;
  ConeCheckResult cone;
  std::string divergence_reason;
  std::vector<double> history;
};

void write_solve_summary(std::ostream& os, const SolveSummary& summary);

// Simple polyline plot of u and its derivatives against t.
void write_solution_svg(std::ostream& os, const Solution& sol);

void write_sign_pattern_report(std::ostream& os, const SignPatternReport& report);

}  // namespace hamcert
