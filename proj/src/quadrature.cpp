#include "hamcert/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hamcert {

namespace {

QuadRule build_rule(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n with the three-term recurrence.
  for (int k = 0; k < n; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - k] = x;
    rule.weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: n out of [1,64]");
  static std::map<int, QuadRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate(const Fn1& f, double a, double b, int n) {
  if (a == b) return 0.0;
  const QuadRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

double integrate_split(const Fn1& f, double a, double b, std::vector<double> breaks, int n) {
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double x) { return !(x > a && x < b); }),
               breaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double acc = 0.0, lo = a;
  for (double x : breaks) {
    acc += integrate(f, lo, x, n);
    lo = x;
  }
  return acc + integrate(f, lo, b, n);
}

std::vector<double> find_sign_changes(const Fn1& f, double a, double b, int scan, double tol) {
  std::vector<double> out;
  if (!(b > a)) return out;
  double prev_x = a, prev_v = f(a);
  bool prev_zero = prev_v == 0.0;
  for (int i = 1; i <= scan; ++i) {
    double x = a + (b - a) * i / scan;
    double v = f(x);
    if (v == 0.0) {
      if (!prev_zero && x < b) out.push_back(x);  // root exactly on a scan node
      prev_zero = true;
    } else {
      if (!prev_zero && ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0))) {
        double lo = prev_x, hi = x, flo = prev_v;
        while (hi - lo > tol) {
          double mid = 0.5 * (lo + hi), fm = f(mid);
          if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
      prev_zero = false;
      prev_x = x;
      prev_v = v;
    }
  }
  return out;
}

double integrate_abs(const Fn1& f, double a, double b, std::vector<double> kinks, int n) {
  kinks.erase(std::remove_if(kinks.begin(), kinks.end(),
                             [&](double x) { return !(x > a && x < b); }),
              kinks.end());
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  auto absf = [&](double x) { return std::abs(f(x)); };
  double acc = 0.0, lo = a;
  auto piece = [&](double plo, double phi) {
    std::vector<double> roots = find_sign_changes(f, plo, phi);
    return integrate_split(absf, plo, phi, roots, n);
  };
  for (double x : kinks) {
    acc += piece(lo, x);
    lo = x;
  }
  return acc + piece(lo, b);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

GoldenResult golden_extremum(const Fn1& f, double a, double b, double tol, bool maximize) {
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    bool keep_left = maximize ? (f1 > f2) : (f1 < f2);
    if (keep_left) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace

GoldenResult golden_max(const Fn1& f, double a, double b, double tol) {
  return golden_extremum(f, a, b, tol, true);
}

GoldenResult golden_min(const Fn1& f, double a, double b, double tol) {
  return golden_extremum(f, a, b, tol, false);
}

namespace {

GoldenResult scan_extremum(const Fn1& f, double a, double b, int samples,
                           const std::vector<double>& special, double tol, bool maximize) {
  if (samples < 2) samples = 2;
  std::vector<double> xs;
  xs.reserve(samples + special.size());
  for (int i = 0; i < samples; ++i) xs.push_back(a + (b - a) * i / (samples - 1));
  for (double x : special)
    if (x >= a && x <= b) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::size_t best = 0;
  double best_v = f(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    double v = f(xs[i]);
    if (maximize ? (v > best_v) : (v < best_v)) {
      best_v = v;
      best = i;
    }
  }
  double lo = best == 0 ? xs[0] : xs[best - 1];
  double hi = best + 1 == xs.size() ? xs.back() : xs[best + 1];
  GoldenResult refined = golden_extremum(f, lo, hi, tol, maximize);
  if (maximize ? (refined.value >= best_v) : (refined.value <= best_v)) return refined;
  return {xs[best], best_v};
}

}  // namespace

GoldenResult scan_max(const Fn1& f, double a, double b, int samples,
                      const std::vector<double>& special, double tol) {
  return scan_extremum(f, a, b, samples, special, tol, true);
}

GoldenResult scan_min(const Fn1& f, double a, double b, int samples,
                      const std::vector<double>& special, double tol) {
  return scan_extremum(f, a, b, samples, special, tol, false);
}

int Grid::panel_of(double x) const {
  double width = length / panel_count;
  int p = static_cast<int>(std::floor(x / width));
  return std::clamp(p, 0, panel_count - 1);
}

double Grid::panel_lo(int p) const { return length * p / panel_count; }
double Grid::panel_hi(int p) const { return length * (p + 1) / panel_count; }

Grid make_grid(int node_count, int panel_count, double T) {
  if (node_count < 1 || panel_count < 1 || T <= 0.0)
    throw std::invalid_argument("make_grid: bad arguments");
  if (node_count % panel_count != 0)
    throw std::invalid_argument("make_grid: node count must be a multiple of panel count");
  int g = node_count / panel_count;
  const QuadRule& rule = gauss_legendre(g);
  Grid grid;
  grid.length = T;
  grid.panel_count = panel_count;
  grid.per_panel = g;
  grid.nodes.reserve(node_count);
  grid.weights.reserve(node_count);
  for (int p = 0; p < panel_count; ++p) {
    double lo = T * p / panel_count, hi = T * (p + 1) / panel_count;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < g; ++i) {
      grid.nodes.push_back(mid + half * rule.nodes[i]);
      grid.weights.push_back(half * rule.weights[i]);
    }
  }
  return grid;
}

std::vector<std::vector<double>> halton_points(int count, int dim, int skip) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                               31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (dim > static_cast<int>(sizeof(primes) / sizeof(primes[0])))
    throw std::invalid_argument("halton_points: dimension too large");
  auto radical_inverse = [](int idx, int base) {
    double inv = 1.0 / base, value = 0.0, f = inv;
    while (idx > 0) {
      value += (idx % base) * f;
      idx /= base;
      f *= inv;
    }
    return value;
  };
  std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
  for (int i = 0; i < count; ++i)
    for (int d = 0; d < dim; ++d) pts[i][d] = radical_inverse(i + skip, primes[d]);
  return pts;
}

}  // namespace hamcert
