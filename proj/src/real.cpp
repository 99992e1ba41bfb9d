#include "gouldrn/real.hpp"

#include <cmath>
#include <cstdio>

#include "gouldrn/error.hpp"

namespace gouldrn {

Real Real::approximate(double v) {
  Real r;
  r.exact_.reset();
  r.approx_ = v;
  return r;
}

Real Real::sqrt_of(const Rational& square) {
  if (square < 0) throw Error(ErrorKind::InternalError, "square root of a negative rational");
  if (mpz_perfect_square_p(square.get_num_mpz_t()) && mpz_perfect_square_p(square.get_den_mpz_t())) {
    mpz_class num;
    mpz_class den;
    mpz_sqrt(num.get_mpz_t(), square.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), square.get_den_mpz_t());
    return Real(Rational(num, den));
  }
  return approximate(std::sqrt(to_double(square)));
}

const Rational& Real::rational() const {
  if (!exact_) throw Error(ErrorKind::InternalError, "exact value requested from an approximate real");
  return *exact_;
}

Real Real::operator-() const {
  if (exact_) return Real(Rational(-*exact_));
  return approximate(-approx_);
}

Real& Real::operator+=(const Real& rhs) {
  if (exact_ && rhs.exact_) {
    *exact_ += *rhs.exact_;
    approx_ = to_double(*exact_);
  } else {
    exact_.reset();
    approx_ += rhs.approx_;
  }
  return *this;
}

Real& Real::operator-=(const Real& rhs) { return *this += -rhs; }

Real& Real::operator*=(const Real& rhs) {
  if (exact_ && rhs.exact_) {
    *exact_ *= *rhs.exact_;
    approx_ = to_double(*exact_);
  } else {
    exact_.reset();
    approx_ *= rhs.approx_;
  }
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  if (rhs.exact_ ? *rhs.exact_ == 0 : rhs.approx_ == 0.0) {
    throw Error(ErrorKind::InternalError, "division by zero");
  }
  if (exact_ && rhs.exact_) {
    *exact_ /= *rhs.exact_;
    approx_ = to_double(*exact_);
  } else {
    exact_.reset();
    approx_ /= rhs.approx_;
  }
  return *this;
}

bool operator==(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.approx_ == b.approx_;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) {
    int c = cmp(*a.exact_, *b.exact_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.approx_ <=> b.approx_;
}

std::string Real::str() const {
  if (exact_) return to_string(*exact_);
  return format_double(approx_);
}

Real abs(const Real& x) { return x < Real(0) ? -x : x; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

bool near(const Real& a, const Real& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return std::fabs(a.value() - b.value()) <= tol;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace gouldrn
