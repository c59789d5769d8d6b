#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <utility>

namespace hamcert {

// Exact rational scalar used for piecewise-polynomial kernel coefficients.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Accepts "p/q", plain integers, decimals ("0.25") and scientific notation
// ("2.5e-3"). Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

std::string rational_string(const Rational& r);

// Nearest simple fraction p/q with q <= max_den such that |p/q - x| is within
// rel_tol * max(1, |x|); nullopt when no convergent qualifies. Display helper.
std::optional<std::pair<long long, long long>> approx_fraction(double x, long long max_den,
                                                               double rel_tol = 1e-9);

}  // namespace hamcert
