#pragma once

#include <compare>
#include <optional>
#include <string>

#include "gouldrn/rational.hpp"

namespace gouldrn {

/// A nonnegative-or-signed real that stays an exact rational for as long as
/// every input was exact. Square roots of perfect-square rationals stay exact;
/// anything else falls back to double precision.
///
/// Ordering and equality are exact when both operands are exact and use the
/// double approximation otherwise.
class Real {
 public:
  Real() : exact_(Rational(0)), approx_(0.0) {}
  Real(const Rational& q) : exact_(q), approx_(to_double(q)) {}  // NOLINT(google-explicit-constructor)
  Real(long v) : Real(Rational(v)) {}                            // NOLINT(google-explicit-constructor)

  static Real approximate(double v);
  /// sqrt(square); exact when `square` is a perfect square rational.
  static Real sqrt_of(const Rational& square);

  bool is_exact() const { return exact_.has_value(); }
  const std::optional<Rational>& exact() const { return exact_; }
  /// Exact value; throws InternalError when only an approximation exists.
  const Rational& rational() const;
  double value() const { return approx_; }

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  /// "p/q" for exact values, 12 significant digits otherwise.
  std::string str() const;

 private:
  std::optional<Rational> exact_;
  double approx_;
};

Real abs(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

/// |a - b| <= tol, or exact equality when both are exact.
bool near(const Real& a, const Real& b, double tol);

/// Formats a double with 12 significant digits.
std::string format_double(double v);

}  // namespace gouldrn
