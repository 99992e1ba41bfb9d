#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gouldrn {

using Rational = mpq_class;

/// Parses "p/q", an integer, a decimal ("0.25") or scientific notation
/// ("1e-9") into an exact rational. Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact: every finite double is a dyadic rational.
Rational from_double(double v);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational pow2(int exponent) {
  Rational r(1);
  if (exponent >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  r.canonicalize();
  return r;
}

}  // namespace gouldrn
