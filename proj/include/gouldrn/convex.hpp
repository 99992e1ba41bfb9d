#pragma once

#include <span>
#include <vector>

#include "gouldrn/rational.hpp"
#include "gouldrn/real.hpp"

namespace gouldrn {

struct Point2 {
  Rational x;
  Rational y;

  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
};

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(const Rational& r, const Point2& p) { return {r * p.x, r * p.y}; }
inline Rational dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline Rational norm2(const Point2& p) { return dot(p, p); }
/// Counter-clockwise quarter turn.
inline Point2 rot90(const Point2& p) { return {-p.y, p.x}; }

/// Nonempty compact convex subset of R^1 (closed interval) or R^2 (convex
/// polygon, possibly a segment or a point), with exact rational data.
///
/// Polygons are stored as their strictly convex hull in counter-clockwise
/// order starting at the lexicographically smallest vertex, so structural
/// equality is set equality.
class ConvexBody {
 public:
  /// [lo, hi]; throws EmptyBody when lo > hi.
  static ConvexBody interval(Rational lo, Rational hi);
  /// Convex hull of a nonempty point set; throws EmptyBody on empty input.
  static ConvexBody hull(std::span<const Point2> points);
  static ConvexBody hull(std::span<const Rational> points);
  static ConvexBody zero(int dim);

  int dim() const { return dim_; }
  const Rational& lo() const;
  const Rational& hi() const;
  const std::vector<Point2>& vertices() const;

  bool is_zero() const;
  /// Set inclusion this ⊆ other.
  bool subset_of(const ConvexBody& other) const;
  bool contains(const Point2& p) const;

  friend bool operator==(const ConvexBody& a, const ConvexBody& b);

 private:
  ConvexBody() = default;

  int dim_ = 1;
  Rational lo_;
  Rational hi_;
  std::vector<Point2> vertices_;
};

void require_same_dim(const ConvexBody& a, const ConvexBody& b);

ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b);
inline ConvexBody operator+(const ConvexBody& a, const ConvexBody& b) { return minkowski_sum(a, b); }

/// {r·a : a ∈ A}; throws NegativeScale for r < 0.
ConvexBody scale(const Rational& r, const ConvexBody& a);
ConvexBody translate(const ConvexBody& a, const Point2& offset);
ConvexBody translate(const ConvexBody& a, const Rational& offset);

/// Squared Euclidean distance from a point to a body, exact.
Rational distance2(const Point2& p, const ConvexBody& body);

/// e(A,B) = sup_{a∈A} d(a,B). Exact up to the final square root.
Real excess(const ConvexBody& a, const ConvexBody& b);

/// max(e(A,B), e(B,A)), cross-checked against the support-function form;
/// disagreement beyond 1e-9 (relative to scale) is an InternalError.
Real hausdorff(const ConvexBody& a, const ConvexBody& b);

/// sup over unit directions of |h_A - h_B|, maximised arc by arc over the
/// merged normal fan. Double precision.
double hausdorff_support_form(const ConvexBody& a, const ConvexBody& b);

/// |A|_h = h(A,{0}) = max vertex norm.
Real norm_h(const ConvexBody& a);

/// Convex hull of A ∪ B.
ConvexBody hull_union(const ConvexBody& a, const ConvexBody& b);

struct IncreasingLimit {
  ConvexBody limit;
  std::vector<Real> distances;  ///< h(A_n, J), n = 0..N-1
};

/// Limit J of an increasing sequence bounded by K. Throws NotIncreasing or
/// UnboundedSequence when the preconditions fail.
IncreasingLimit increasing_limit(std::span<const ConvexBody> sequence, const ConvexBody& bound);

// Support values and normal fans shared with the embedding.

/// max over A of <x, dir>, exact, for an unnormalised direction (d=2).
Rational support_value(const ConvexBody& a, const Point2& dir);
/// Support at +1 (s>0) or -1 (s<0) for d=1: hi or -lo.
Rational support_value(const ConvexBody& a, int sign);
/// The vertex attaining the support value on the open arc just
/// counter-clockwise of `dir`.
const Point2& support_vertex(const ConvexBody& a, const Point2& dir);
/// Outward edge normals (unnormalised), sorted by angle, deduplicated.
std::vector<Point2> edge_normals(const ConvexBody& a);
/// Sorts exact directions counter-clockwise starting at angle 0 and removes
/// positive multiples of each other.
void sort_directions(std::vector<Point2>& dirs);

}  // namespace gouldrn
