#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "hamcert/rational.hpp"

namespace hamcert {

// Bivariate polynomial in (t, s) with exact rational coefficients. Immutable;
// all operations return new values. A dense double-coefficient table is kept
// for fast numeric evaluation, so concurrent reads are safe.
class BivariatePoly {
 public:
  using Key = std::pair<int, int>;  // (t-exponent, s-exponent)

  BivariatePoly() = default;
  static BivariatePoly constant(const Rational& c);
  static BivariatePoly monomial(int dt, int ds, const Rational& c);
  static BivariatePoly from_triples(const std::vector<std::tuple<int, int, Rational>>& triples);

  BivariatePoly operator+(const BivariatePoly& o) const;
  BivariatePoly operator-(const BivariatePoly& o) const;
  BivariatePoly operator*(const BivariatePoly& o) const;
  BivariatePoly scaled(const Rational& c) const;

  BivariatePoly deriv_t() const;
  BivariatePoly deriv_s() const;

  bool is_zero() const { return terms_.empty(); }
  bool operator==(const BivariatePoly& o) const { return terms_ == o.terms_; }

  double eval(double t, double s) const;
  Rational eval_exact(const Rational& t, const Rational& s) const;

  // Restriction to the diagonal s = t, as exponent -> coefficient.
  std::map<int, Rational> diagonal() const;
  // Swap the roles of t and s.
  BivariatePoly transposed() const;

  const std::map<Key, Rational>& terms() const { return terms_; }
  int degree_t() const;
  int degree_s() const;

 private:
  explicit BivariatePoly(std::map<Key, Rational> terms);
  void rebuild_cache();

  std::map<Key, Rational> terms_;
  std::vector<std::vector<double>> cache_;  // cache_[a][b] = coefficient of t^a s^b
};

}  // namespace hamcert
