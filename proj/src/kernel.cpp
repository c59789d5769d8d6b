#include "hamcert/kernel.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hamcert/errors.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

Surface::Surface(BivariatePoly poly) : poly_(std::move(poly)) {
  const BivariatePoly& p = *poly_;
  fn_ = [p](double t, double s) { return p.eval(t, s); };
}

const BivariatePoly& Surface::poly() const {
  if (!poly_) throw std::logic_error("Surface: not a polynomial piece");
  return *poly_;
}

KernelSurface::KernelSurface(double T, std::vector<OrderPieces> orders,
                             std::optional<Rational> exact_T)
    : T_(T), exact_T_(std::move(exact_T)), orders_(std::move(orders)) {
  if (T_ <= 0.0) throw std::invalid_argument("KernelSurface: T must be positive");
  if (orders_.empty()) throw std::invalid_argument("KernelSurface: needs at least order 0");
}

KernelSurface KernelSurface::from_poly(double T, const BivariatePoly& upper,
                                       const BivariatePoly& lower, int m,
                                       std::optional<Rational> exact_T) {
  if (m < 0) throw std::invalid_argument("KernelSurface::from_poly: m must be >= 0");
  std::vector<OrderPieces> orders;
  BivariatePoly up = upper, low = lower;
  for (int i = 0; i <= m; ++i) {
    OrderPieces pieces{Surface(up), Surface(low), up.diagonal() == low.diagonal()};
    orders.push_back(std::move(pieces));
    if (i < m) {
      up = up.deriv_t();
      low = low.deriv_t();
    }
  }
  return KernelSurface(T, std::move(orders), std::move(exact_T));
}

double KernelSurface::eval_deriv(int i, double t, double s) const {
  if (i < 0 || i > max_order())
    throw std::out_of_range("eval_deriv: derivative order " + std::to_string(i) +
                            " out of range [0," + std::to_string(max_order()) + "]");
  const OrderPieces& p = orders_[i];
  return t <= s ? p.upper(t, s) : p.lower(t, s);
}

bool KernelSurface::is_polynomial(int i) const {
  return orders_.at(i).upper.is_polynomial() && orders_.at(i).lower.is_polynomial();
}

const BivariatePoly& KernelSurface::poly(int i, Region region) const {
  const OrderPieces& p = orders_.at(i);
  return region == Region::TLeqS ? p.upper.poly() : p.lower.poly();
}

bool KernelSurface::continuous_at(int i) const { return orders_.at(i).continuous; }

KernelSurface KernelSurface::scaled(double alpha) const {
  const Rational ra(alpha);
  std::vector<OrderPieces> orders;
  orders.reserve(orders_.size());
  for (const auto& op : orders_) {
    OrderPieces scaled_op;
    auto scale_surface = [&](const Surface& s) {
      if (s.is_polynomial()) return Surface(s.poly().scaled(ra));
      SurfaceFn base = [s, alpha](double t, double u) { return alpha * s(t, u); };
      return Surface(base);
    };
    scaled_op.upper = scale_surface(op.upper);
    scaled_op.lower = scale_surface(op.lower);
    scaled_op.continuous = op.continuous;
    orders.push_back(std::move(scaled_op));
  }
  return KernelSurface(T_, std::move(orders), exact_T_);
}

KernelSurface make_example1_kernel() {
  // (1/4)(1-s)(-3+s+4t) on t <= s
  BivariatePoly upper = BivariatePoly::from_triples({
      {0, 0, Rational(-3, 4)},
      {0, 1, Rational(1)},
      {0, 2, Rational(-1, 4)},
      {1, 0, Rational(1)},
      {1, 1, Rational(-1)},
  });
  // (1/4)(-3+s(s+4)+2t(t+2)-8st) on s < t
  BivariatePoly lower = BivariatePoly::from_triples({
      {0, 0, Rational(-3, 4)},
      {0, 1, Rational(1)},
      {0, 2, Rational(1, 4)},
      {1, 0, Rational(1)},
      {2, 0, Rational(1, 2)},
      {1, 1, Rational(-2)},
  });
  return KernelSurface::from_poly(1.0, upper, lower, 2, Rational(1));
}

KernelSurface make_lidstone4_kernel() {
  // (1/6) t (1-s) (2s - s^2 - t^2) on t <= s; the s < t piece is its mirror.
  BivariatePoly upper = BivariatePoly::from_triples({
      {1, 1, Rational(1, 3)},
      {1, 2, Rational(-1, 2)},
      {3, 0, Rational(-1, 6)},
      {1, 3, Rational(1, 6)},
      {3, 1, Rational(1, 6)},
  });
  return KernelSurface::from_poly(1.0, upper, upper.transposed(), 3, Rational(1));
}

KernelSurface second_order_dirichlet_kernel() {
  // t(s-1) on t <= s, s(t-1) on s < t.
  BivariatePoly upper = BivariatePoly::from_triples({
      {1, 1, Rational(1)},
      {1, 0, Rational(-1)},
  });
  return KernelSurface::from_poly(1.0, upper, upper.transposed(), 1, Rational(1));
}

namespace {

// Trivariate scratch polynomials in (t, r, s) for the exact convolution path.
using TriKey = std::array<int, 3>;
using TriPoly = std::map<TriKey, Rational>;

TriPoly lift_tr(const BivariatePoly& p) {  // interpret variables as (t, r)
  TriPoly out;
  for (const auto& [k, c] : p.terms()) out[{k.first, k.second, 0}] = c;
  return out;
}

TriPoly lift_rs(const BivariatePoly& p) {  // interpret variables as (r, s)
  TriPoly out;
  for (const auto& [k, c] : p.terms()) out[{0, k.first, k.second}] = c;
  return out;
}

TriPoly tri_mul(const TriPoly& x, const TriPoly& y) {
  TriPoly out;
  for (const auto& [ka, ca] : x)
    for (const auto& [kb, cb] : y) out[{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}] += ca * cb;
  return out;
}

TriPoly antideriv_r(const TriPoly& p) {
  TriPoly out;
  for (const auto& [k, c] : p) out[{k[0], k[1] + 1, k[2]}] = c / (k[1] + 1);
  return out;
}

enum class RLimit { Zero, VarT, VarS, Cap };

BivariatePoly subst_r(const TriPoly& p, RLimit limit, const Rational& cap) {
  std::vector<std::tuple<int, int, Rational>> triples;
  for (const auto& [k, c] : p) {
    switch (limit) {
      case RLimit::Zero:
        if (k[1] == 0) triples.emplace_back(k[0], k[2], c);
        break;
      case RLimit::VarT:
        triples.emplace_back(k[0] + k[1], k[2], c);
        break;
      case RLimit::VarS:
        triples.emplace_back(k[0], k[1] + k[2], c);
        break;
      case RLimit::Cap: {
        Rational v = c;
        for (int i = 0; i < k[1]; ++i) v *= cap;
        triples.emplace_back(k[0], k[2], v);
        break;
      }
    }
  }
  return BivariatePoly::from_triples(triples);
}

BivariatePoly segment_integral(const TriPoly& integrand, RLimit lo, RLimit hi,
                               const Rational& cap) {
  TriPoly anti = antideriv_r(integrand);
  return subst_r(anti, hi, cap) - subst_r(anti, lo, cap);
}

KernelSurface convolve_exact(const KernelSurface& A, const KernelSurface& B) {
  const Rational cap = A.exact_length().value();
  TriPoly a_up = lift_tr(A.poly(0, Region::TLeqS));
  TriPoly a_low = lift_tr(A.poly(0, Region::SLtT));
  TriPoly b_up = lift_rs(B.poly(0, Region::TLeqS));
  TriPoly b_low = lift_rs(B.poly(0, Region::SLtT));

  // Region t <= s: the r-integral splits at r = t and r = s.
  BivariatePoly c_up = segment_integral(tri_mul(a_low, b_up), RLimit::Zero, RLimit::VarT, cap) +
                       segment_integral(tri_mul(a_up, b_up), RLimit::VarT, RLimit::VarS, cap) +
                       segment_integral(tri_mul(a_up, b_low), RLimit::VarS, RLimit::Cap, cap);
  // Region s < t: splits at r = s and r = t.
  BivariatePoly c_low = segment_integral(tri_mul(a_low, b_up), RLimit::Zero, RLimit::VarS, cap) +
                        segment_integral(tri_mul(a_low, b_low), RLimit::VarS, RLimit::VarT, cap) +
                        segment_integral(tri_mul(a_up, b_low), RLimit::VarT, RLimit::Cap, cap);

  int m = A.max_order() + B.max_order() + 1;
  return KernelSurface::from_poly(A.domain_length(), c_up, c_low, m, cap);
}

KernelSurface convolve_numeric(const KernelSurface& A, const KernelSurface& B) {
  auto pa = std::make_shared<KernelSurface>(A);
  auto pb = std::make_shared<KernelSurface>(B);
  const double T = A.domain_length();
  std::vector<KernelSurface::OrderPieces> orders;
  for (int i = 0; i <= A.max_order(); ++i) {
    SurfaceFn fn = [pa, pb, i, T](double t, double s) {
      return integrate_split(
          [&](double r) { return pa->eval_deriv(i, t, r) * pb->eval_deriv(0, r, s); }, 0.0, T,
          {t, s}, 32);
    };
    orders.push_back({Surface(fn), Surface(fn), true});
  }
  return KernelSurface(T, std::move(orders));
}

}  // namespace

KernelSurface convolve(const KernelSurface& A, const KernelSurface& B) {
  if (std::abs(A.domain_length() - B.domain_length()) > 1e-14)
    throw std::domain_error("convolve: kernels live on different domains");
  bool exact = A.is_polynomial(0) && B.is_polynomial(0) && A.exact_length().has_value() &&
               B.exact_length().has_value() && A.exact_length() == B.exact_length();
  return exact ? convolve_exact(A, B) : convolve_numeric(A, B);
}

KernelSurface lidstone_kernel(int n) {
  if (n < 1) throw std::invalid_argument("lidstone_kernel: n must be >= 1");
  if (n > 8)
    throw ResourceError(
        "lidstone_kernel: exact arithmetic is capped at n = 8; use convolve's numeric "
        "fallback for higher orders");
  KernelSurface g1 = second_order_dirichlet_kernel();
  KernelSurface g = g1;
  for (int i = 2; i <= n; ++i) g = convolve(g1, g);
  return g;
}

bool SignPatternReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return overall_sign_pass;
}

SignPatternReport verify_sign_pattern(int n, int grid_density) {
  if (n < 2) throw std::invalid_argument("verify_sign_pattern: defined for n >= 2");
  if (grid_density < 11) throw std::invalid_argument("verify_sign_pattern: grid_density >= 11");

  KernelSurface G = lidstone_kernel(n);
  const double T = G.domain_length();
  const double tol = 1e-10;

  std::vector<double> ts(grid_density);
  for (int i = 0; i < grid_density; ++i) ts[i] = T * i / (grid_density - 1);

  SignPatternReport report;
  report.n = n;
  report.grid_density = grid_density;

  for (int k = 1; k <= 2 * n; ++k) {
    int order = 2 * n - k;
    SignPatternEntry entry;
    entry.k = k;
    entry.order = order;
    entry.criterion = k % 4;
    double worst = std::numeric_limits<double>::infinity();
    auto note = [&](double slack) { worst = std::min(worst, slack); };

    switch (entry.criterion) {
      case 0:  // nonnegative everywhere
        for (double t : ts)
          for (double s : ts) note(G.eval_deriv(order, t, s));
        entry.detail = "nonnegative on the square";
        break;
      case 2:  // nonpositive everywhere
        for (double t : ts)
          for (double s : ts) note(-G.eval_deriv(order, t, s));
        entry.detail = "nonpositive on the square";
        break;
      case 1:  // increasing in t, negative at t=0, positive at t=T
      case 3:  // decreasing in t, positive at t=0, negative at t=T
      {
        const double dir = entry.criterion == 1 ? 1.0 : -1.0;
        for (int j = 1; j + 1 < grid_density; ++j) {
          double s = ts[j];  // interior s only: the corner values degenerate
          double prev = G.eval_deriv(order, ts[0], s);
          note(-dir * prev);  // sign at t = 0
          for (int i = 1; i < grid_density; ++i) {
            double cur = G.eval_deriv(order, ts[i], s);
            note(dir * (cur - prev));  // monotone in t
            prev = cur;
          }
          note(dir * prev);  // sign at t = T
        }
        entry.detail = entry.criterion == 1 ? "increasing in t, <0 at t=0, >0 at t=1"
                                            : "decreasing in t, >0 at t=0, <0 at t=1";
        break;
      }
    }
    entry.worst = worst;
    entry.pass = worst >= -tol;
    report.entries.push_back(entry);
  }

  double sign = n % 2 == 0 ? 1.0 : -1.0;  // G_n >= 0 for n even, <= 0 for n odd
  double worst = std::numeric_limits<double>::infinity();
  for (double t : ts)
    for (double s : ts) worst = std::min(worst, sign * G.eval_deriv(0, t, s));
  report.overall_worst = worst;
  report.overall_sign_pass = worst >= -tol;
  return report;
}

bool is_builtin_kernel(const std::string& id) {
  if (id == "example1" || id == "lidstone4" || id == "dirichlet2") return true;
  return id.rfind("lidstone:", 0) == 0;
}

KernelSurface make_builtin_kernel(const std::string& id) {
  if (id == "example1") return make_example1_kernel();
  if (id == "lidstone4") return make_lidstone4_kernel();
  if (id == "dirichlet2") return second_order_dirichlet_kernel();
  if (id.rfind("lidstone:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(id.substr(9));
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown kernel id: " + id);
    }
    return lidstone_kernel(n);
  }
  throw std::invalid_argument("unknown kernel id: " + id);
}

}  // namespace hamcert
