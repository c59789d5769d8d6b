#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamcert/hypothesis.hpp"
#include "hamcert/nonlinearity.hpp"

namespace hamcert {

// Open lambda interval; lo/hi may be 0 / +inf under the extended-real
// conventions 1/inf = 0 and 1/0 = inf.
struct Window {
  double lo = 0.0, hi = 0.0;
  bool empty = true;
  bool certified = false;  // endpoints from closed forms rather than sampling
  std::string diagnostic;
};

struct LambdaBars {
  std::vector<double> up;        // Lambda^i = integral of h_i, per order
  std::map<int, double> low;     // Lambda_j = integral over [a_j,b_j] of xi_j phi_j
  double bar = 0.0;              // (m+1) max_i Lambda^i
  double under = 0.0;            // max_{j in J1} xi_j Lambda_j
};

LambdaBars lambda_bars(const HypothesisReport& report);

// Theorem-side existence window (1/(under f0), 1/(bar finf)) when
// bar*finf < under*f0; empty with a diagnostic otherwise.
Window existence_window(double lambda_bar, double lambda_under, double f0, double finf);

struct NResult {
  double N = 0.0;
  std::vector<double> components;  // sup_t integral of |k_i| per order (their max is 1/N)
  std::vector<double> arg_t;       // maximizer per order
};

// 1/N = max_i sup_t integral |d^i k/dt^i (t, .)|, quadrature split at s = t
// and at sign changes of the integrand.
NResult compute_N(const KernelSurface& K, int t_density = 201);

struct MResult {
  double M = 0.0;
  double inv = 0.0;  // 1/M_i = inf_t over [a,b] of the [a,b] integral
  double arg_t = 0.0;
};

// Requires the derivative nonnegative on ab x I; a nonpositive inf is a
// HypothesisError (degenerate M).
MResult compute_M(const KernelSurface& K, int order, Interval ab, int t_density = 201);

struct SamplingOptions {
  int samples = 4096;
  int refine_sweeps = 3;
  unsigned long long seed = 42;
};

// f^rho = sup f(t,x)/rho over t in I and x in [-rho,rho]^{m+1}; closed form
// when the spec carries one, low-discrepancy sampling plus coordinate-wise
// refinement otherwise.
double f_rho_sup(const NonlinearitySpec& f, double rho, double T = 1.0,
                 const SamplingOptions& opt = {});

// f^i_rho = inf f(t,x)/rho over t in [a_i,b_i], x_j in [0, rho/xi_j] for j in
// J2 and [0, rho] otherwise. Box corners are always sampled, so nonlinearities
// vanishing at the origin yield an exact 0.
double f_rho_inf(const NonlinearitySpec& f, double rho, int order, const HypothesisReport& report,
                 const SamplingOptions& opt = {});

// The strict index inequalities, evaluated literally.
bool check_I1(double lambda, double N, double frho);
bool check_I0(double lambda, double Mi, double frho_i);

struct Certificate {
  LambdaBars bars;
  double N = 0.0;
  std::vector<double> N_components;
  std::map<int, double> M;        // per order in J1
  std::map<int, double> inv_M;
  double c = 0.0;                 // min xi over J2
  Window existence;
  bool frho_certified = false;    // closed-form f^rho available
};

struct CertificateOptions {
  int t_density = 201;
  SamplingOptions sampling;
};

Certificate build_certificate(const KernelSurface& K, const HypothesisReport& report,
                              const NonlinearitySpec& f, const CertificateOptions& opt = {});

struct MultiplicityRecord {
  std::string condition;       // C1..C6
  std::vector<double> rhos;    // witness tuple
  Window window;               // lambda range for which this witness works
  int solutions = 1;           // guaranteed nontrivial solutions
};

struct MultiplicityResult {
  bool available = false;      // (H~5) held
  std::string diagnostic;
  std::vector<MultiplicityRecord> records;
  bool i0_attainable = false;  // some rho on the grid had f^i_rho > 0
};

// Scans the rho grid for the alternating I0/I1 chains of conditions C1-C6 at
// a fixed lambda and records one witness per satisfied condition.
MultiplicityResult multiplicity_search(const Certificate& cert, const HypothesisReport& report,
                                       const NonlinearitySpec& f, double lambda,
                                       std::vector<double> rho_grid = {},
                                       const SamplingOptions& opt = {});

// Default log-spaced multiplicity grid.
std::vector<double> default_rho_grid(double lo = 1e-8, double hi = 1e2, int count = 96);

// Largest C1-style window: right endpoint max_rho N/f^rho (golden section);
// left endpoint is the rho_1 -> 0 limit of M_{i0}/f^{i0}_{rho_1} when
// rho*f^{i0}_rho stays bounded below, else the best concrete value.
Window best_lambda_window_C1(const Certificate& cert, const HypothesisReport& report,
                             const NonlinearitySpec& f, const SamplingOptions& opt = {});

}  // namespace hamcert
