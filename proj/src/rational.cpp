#include "hamcert/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hamcert {

namespace {

// Parses a decimal literal (no '/'), e.g. "-12", "0.25", "2.5e-3".
Rational parse_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt digits = 0;
  long frac_len = 0;
  bool any_digit = false;
  for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
    digits = digits * 10 + (text[pos] - '0');
    any_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
      digits = digits * 10 + (text[pos] - '0');
      ++frac_len;
      any_digit = true;
    }
  }
  if (!any_digit) throw std::invalid_argument("malformed number: " + text);
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_neg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) throw std::invalid_argument("malformed exponent: " + text);
    long e = 0;
    for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos)
      e = e * 10 + (text[pos] - '0');
    exponent = exp_neg ? -e : e;
  }
  if (pos != text.size()) throw std::invalid_argument("malformed number: " + text);

  long shift = exponent - frac_len;
  BigInt num = digits, den = 1;
  if (shift >= 0)
    for (long i = 0; i < shift; ++i) num *= 10;
  else
    for (long i = 0; i < -shift; ++i) den *= 10;
  Rational r(num, den);
  return negative ? -r : r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + text);
  return num / den;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::optional<std::pair<long long, long long>> approx_fraction(double x, long long max_den,
                                                               double rel_tol) {
  if (!std::isfinite(x)) return std::nullopt;
  const double target = std::abs(x);
  const double tol = rel_tol * std::max(1.0, target);
  // Continued-fraction convergents p/q of |x|.
  long long p_prev = 0, q_prev = 1, p = 1, q = 0;
  double frac = target;
  for (int step = 0; step < 64; ++step) {
    double a_f = std::floor(frac);
    if (a_f > 9e17) break;
    long long a = static_cast<long long>(a_f);
    long long p_next = a * p + p_prev;
    long long q_next = a * q + q_prev;
    if (q_next > max_den || p_next < 0 || q_next < 0) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    if (q > 0 &&
        std::abs(static_cast<double>(p) / static_cast<double>(q) - target) <= tol) {
      long long sp = x < 0 ? -p : p;
      return std::make_pair(sp, q);
    }
    double rem = frac - a_f;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  return std::nullopt;
}

}  // namespace hamcert
