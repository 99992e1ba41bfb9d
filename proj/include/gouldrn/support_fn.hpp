#pragma once

#include <vector>

#include "gouldrn/convex.hpp"

namespace gouldrn {

/// Element of the embedded space: the function u ↦ h_P(u) - h_N(u) on the
/// unit sphere (the two points ±1 for d=1). Every finite signed combination
/// of support functions has this form, so sums, signed scalings and
/// differences of embedded bodies stay inside the type. The image of a body
/// A under the embedding is h_A - h_{0}.
///
/// The representation is not unique (P+K, N+K give the same function);
/// compare functions with `equal_on_fan` or through `sup_norm` of the
/// difference.
class SupportFn {
 public:
  explicit SupportFn(ConvexBody body);
  SupportFn(ConvexBody plus, ConvexBody minus);

  static SupportFn zero(int dim);
  /// The unit element u ≡ 1 (support function of the unit ball). Only
  /// representable for d=1, where it is h_{[-1,1]}.
  static SupportFn unit(int dim);

  int dim() const { return plus_.dim(); }
  const ConvexBody& plus() const { return plus_; }
  const ConvexBody& minus() const { return minus_; }

  /// Exact value at an unnormalised direction (d=2): h_P(dir) - h_N(dir),
  /// which is |dir| times the value at dir/|dir|.
  Rational at(const Point2& dir) const;
  /// Exact value at +1 or -1 (d=1).
  Rational at(int sign) const;
  /// Value at the unit direction (cos θ, sin θ) (d=2) or at sign(θ) (d=1).
  double eval(double theta) const;

  /// True when the function is the support function of a body.
  bool is_body() const;
  /// The body whose support function this is; requires is_body().
  ConvexBody body() const;

  SupportFn& operator+=(const SupportFn& rhs);
  SupportFn& operator-=(const SupportFn& rhs);
  friend SupportFn operator+(SupportFn a, const SupportFn& b) { return a += b; }
  friend SupportFn operator-(SupportFn a, const SupportFn& b) { return a -= b; }
  /// Signed scaling; negative factors swap the two parts.
  friend SupportFn operator*(const Rational& r, const SupportFn& f);

 private:
  ConvexBody plus_;
  ConvexBody minus_;
};

SupportFn embed(const ConvexBody& body);

/// ‖f‖_∞, exact up to a final square root (it equals h(P, N)).
Real sup_norm(const SupportFn& f);
/// ‖f‖_∞ by per-arc maximisation over the merged normal fan, double.
double sup_norm_arcs(const SupportFn& f);

/// Merged normal fan of all the given functions plus the four axis
/// directions; consecutive directions are less than a half turn apart, so
/// two functions agree everywhere iff they agree on this set.
std::vector<Point2> canonical_directions(std::initializer_list<const SupportFn*> fns);
std::vector<Point2> canonical_directions(const std::vector<const ConvexBody*>& bodies);

/// Pointwise equality, decided exactly on the canonical direction set.
bool equal_on_fan(const SupportFn& a, const SupportFn& b);
/// Pointwise a <= b, decided exactly on the canonical direction set.
bool leq_on_fan(const SupportFn& a, const SupportFn& b);

/// Pointwise maximum of two embedded bodies: the embedding of their hull
/// union.
SupportFn pointwise_max(const SupportFn& a, const SupportFn& b);

}  // namespace gouldrn
