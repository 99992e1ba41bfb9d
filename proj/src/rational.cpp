#include "gouldrn/rational.hpp"

#include <cctype>
#include <cmath>

#include "gouldrn/error.hpp"

namespace gouldrn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyBody: return "EmptyBody";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NegativeScale: return "NegativeScale";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::UnboundedSequence: return "UnboundedSequence";
    case ErrorKind::CarrierMismatch: return "CarrierMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NoWitnessNeeded: return "NoWitnessNeeded";
    case ErrorKind::NoExhaustion: return "NoExhaustion";
    case ErrorKind::NotExhaustion: return "NotExhaustion";
    case ErrorKind::NotStronglyAC: return "NotStronglyAC";
    case ErrorKind::NotMultisubmeasure: return "NotMultisubmeasure";
    case ErrorKind::NotAdditive: return "NotAdditive";
    case ErrorKind::NotTotallyMeasurable: return "NotTotallyMeasurable";
    case ErrorKind::NotAChain: return "NotAChain";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantError: return "InvariantError";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorKind::ParseError, "not a rational: '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  // decimal with optional exponent
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    mpz_class ez = parse_integer(text.substr(e + 1), text);
    if (!ez.fits_slong_p() || abs(ez) > 10000) {
      throw Error(ErrorKind::ParseError, "exponent out of range in '" + std::string(text) + "'");
    }
    exponent = ez.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mantissa.substr(0, dot);
    std::string_view fp = mantissa.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty())) {
      throw Error(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(mantissa)) throw Error(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  Rational q{mpz_class(digits, 10)};
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    q *= ten_pow;
  } else {
    q /= ten_pow;
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InternalError, "non-finite value cannot become a rational");
  return Rational(v);
}

}  // namespace gouldrn
