#include "hamcert/poly.hpp"

#include <algorithm>

namespace hamcert {

BivariatePoly::BivariatePoly(std::map<Key, Rational> terms) : terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0)
      it = terms_.erase(it);
    else
      ++it;
  }
  rebuild_cache();
}

void BivariatePoly::rebuild_cache() {
  cache_.clear();
  if (terms_.empty()) return;
  int dt = 0, ds = 0;
  for (const auto& [key, c] : terms_) {
    dt = std::max(dt, key.first);
    ds = std::max(ds, key.second);
  }
  cache_.assign(dt + 1, std::vector<double>(ds + 1, 0.0));
  for (const auto& [key, c] : terms_) cache_[key.first][key.second] = to_double(c);
}

BivariatePoly BivariatePoly::constant(const Rational& c) { return monomial(0, 0, c); }

BivariatePoly BivariatePoly::monomial(int dt, int ds, const Rational& c) {
  std::map<Key, Rational> t;
  t[{dt, ds}] = c;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::from_triples(
    const std::vector<std::tuple<int, int, Rational>>& triples) {
  std::map<Key, Rational> t;
  for (const auto& [a, b, c] : triples) t[{a, b}] += c;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
  std::map<Key, Rational> t = terms_;
  for (const auto& [key, c] : o.terms_) t[key] += c;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::operator-(const BivariatePoly& o) const {
  std::map<Key, Rational> t = terms_;
  for (const auto& [key, c] : o.terms_) t[key] -= c;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
  std::map<Key, Rational> t;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      t[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::scaled(const Rational& c) const {
  std::map<Key, Rational> t;
  if (c != 0)
    for (const auto& [key, v] : terms_) t[key] = v * c;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::deriv_t() const {
  std::map<Key, Rational> t;
  for (const auto& [key, c] : terms_)
    if (key.first > 0) t[{key.first - 1, key.second}] = c * key.first;
  return BivariatePoly(std::move(t));
}

BivariatePoly BivariatePoly::deriv_s() const {
  std::map<Key, Rational> t;
  for (const auto& [key, c] : terms_)
    if (key.second > 0) t[{key.first, key.second - 1}] = c * key.second;
  return BivariatePoly(std::move(t));
}

double BivariatePoly::eval(double t, double s) const {
  // Horner in t over inner Horner in s.
  double acc = 0.0;
  for (auto row = cache_.rbegin(); row != cache_.rend(); ++row) {
    double inner = 0.0;
    for (auto c = row->rbegin(); c != row->rend(); ++c) inner = inner * s + *c;
    acc = acc * t + inner;
  }
  return acc;
}

Rational BivariatePoly::eval_exact(const Rational& t, const Rational& s) const {
  Rational acc = 0;
  for (const auto& [key, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < key.first; ++i) term *= t;
    for (int i = 0; i < key.second; ++i) term *= s;
    acc += term;
  }
  return acc;
}

std::map<int, Rational> BivariatePoly::diagonal() const {
  std::map<int, Rational> out;
  for (const auto& [key, c] : terms_) out[key.first + key.second] += c;
  for (auto it = out.begin(); it != out.end();) {
    if (it->second == 0)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

BivariatePoly BivariatePoly::transposed() const {
  std::map<Key, Rational> t;
  for (const auto& [key, c] : terms_) t[{key.second, key.first}] = c;
  return BivariatePoly(std::move(t));
}

int BivariatePoly::degree_t() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first);
  return d;
}

int BivariatePoly::degree_s() const {
  int d = -1;
  for (const auto& [key, c] : terms_) d = std::max(d, key.second);
  return d;
}

}  // namespace hamcert
