#include "gouldrn/convex.hpp"

#include <algorithm>
#include <cmath>

#include "gouldrn/error.hpp"

namespace gouldrn {

namespace {

// Angular half-plane relative to the ray at angle `start`: 0 for the half
// turn beginning at the reference ray, 1 for the other half.
int half_from_east(const Point2& d) { return (d.y > 0 || (d.y == 0 && d.x > 0)) ? 0 : 1; }
// Reference ray pointing down; half 0 covers angles (-pi/2, pi/2].
int half_from_south(const Point2& d) { return (d.x > 0 || (d.x == 0 && d.y > 0)) ? 0 : 1; }

bool angle_less_from_south(const Point2& a, const Point2& b) {
  int ha = half_from_south(a);
  int hb = half_from_south(b);
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0;
}

bool same_direction(const Point2& a, const Point2& b) { return cross(a, b) == 0 && dot(a, b) > 0; }

Rational segment_distance2(const Point2& p, const Point2& a, const Point2& b) {
  Point2 ab = b - a;
  Rational len2 = norm2(ab);
  if (len2 == 0) return norm2(p - a);
  Rational t = dot(p - a, ab) / len2;
  if (t <= 0) return norm2(p - a);
  if (t >= 1) return norm2(p - b);
  Point2 foot = a + t * ab;
  return norm2(p - foot);
}

std::vector<Point2> edges_of(const std::vector<Point2>& v) {
  std::vector<Point2> e;
  if (v.size() < 2) return e;
  e.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e.push_back(v[(i + 1) % v.size()] - v[i]);
  return e;
}

// Whether direction d lies on the closed counter-clockwise arc from p to q.
bool in_arc(const Point2& d, const Point2& p, const Point2& q) {
  Rational pq = cross(p, q);
  if (pq > 0) return cross(p, d) >= 0 && cross(d, q) >= 0;
  if (pq == 0 && dot(p, q) < 0) return cross(p, d) > 0 || same_direction(d, p) || same_direction(d, q);
  if (pq == 0) return true;  // full turn
  // reflex arc: complement of the open arc from q to p
  return !(cross(q, d) > 0 && cross(d, p) > 0);
}

double dnorm(const Point2& p) { return std::hypot(to_double(p.x), to_double(p.y)); }

double ddot(const Point2& w, const Point2& u) {
  return to_double(w.x) * to_double(u.x) + to_double(w.y) * to_double(u.y);
}

}  // namespace

ConvexBody ConvexBody::interval(Rational lo, Rational hi) {
  if (lo > hi) {
    throw Error(ErrorKind::EmptyBody, "interval with lo=" + to_string(lo) + " > hi=" + to_string(hi));
  }
  ConvexBody b;
  b.dim_ = 1;
  b.lo_ = std::move(lo);
  b.hi_ = std::move(hi);
  return b;
}

ConvexBody ConvexBody::hull(std::span<const Rational> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyBody, "hull of an empty point set");
  auto [lo, hi] = std::minmax_element(points.begin(), points.end());
  return interval(*lo, *hi);
}

ConvexBody ConvexBody::hull(std::span<const Point2> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyBody, "hull of an empty point set");
  std::vector<Point2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());

  ConvexBody b;
  b.dim_ = 2;
  if (p.size() == 1) {
    b.vertices_ = std::move(p);
    return b;
  }
  // Andrew's monotone chain; "<= 0" drops collinear points.
  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (const auto& pt : p) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pt - h[k - 2]) <= 0) --k;
    h[k++] = pt;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  b.vertices_ = std::move(h);
  return b;
}

ConvexBody ConvexBody::zero(int dim) {
  if (dim == 1) return interval(0, 0);
  if (dim != 2) throw Error(ErrorKind::DimMismatch, "only dimensions 1 and 2 are supported");
  ConvexBody b;
  b.dim_ = 2;
  b.vertices_ = {Point2{0, 0}};
  return b;
}

const Rational& ConvexBody::lo() const {
  if (dim_ != 1) throw Error(ErrorKind::DimMismatch, "lo() on a planar body");
  return lo_;
}

const Rational& ConvexBody::hi() const {
  if (dim_ != 1) throw Error(ErrorKind::DimMismatch, "hi() on a planar body");
  return hi_;
}

const std::vector<Point2>& ConvexBody::vertices() const {
  if (dim_ != 2) throw Error(ErrorKind::DimMismatch, "vertices() on an interval");
  return vertices_;
}

bool ConvexBody::is_zero() const {
  if (dim_ == 1) return lo_ == 0 && hi_ == 0;
  return vertices_.size() == 1 && vertices_[0].x == 0 && vertices_[0].y == 0;
}

bool ConvexBody::contains(const Point2& p) const {
  const auto& v = vertices();
  if (v.size() == 1) return v[0] == p;
  if (v.size() == 2) {
    Point2 ab = v[1] - v[0];
    Point2 ap = p - v[0];
    if (cross(ab, ap) != 0) return false;
    Rational t = dot(ap, ab);
    return t >= 0 && t <= norm2(ab);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[(i + 1) % v.size()] - v[i], p - v[i]) < 0) return false;
  }
  return true;
}

bool ConvexBody::subset_of(const ConvexBody& other) const {
  require_same_dim(*this, other);
  if (dim_ == 1) return other.lo_ <= lo_ && hi_ <= other.hi_;
  return std::all_of(vertices_.begin(), vertices_.end(), [&](const Point2& p) { return other.contains(p); });
}

bool operator==(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim_ != b.dim_) return false;
  if (a.dim_ == 1) return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  return a.vertices_ == b.vertices_;
}

void require_same_dim(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimMismatch,
                "bodies of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b) {
  require_same_dim(a, b);
  if (a.dim() == 1) return ConvexBody::interval(a.lo() + b.lo(), a.hi() + b.hi());

  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  // Both vertex lists start at their lexicographic minimum, so edges are
  // already in angular order measured from the downward ray.
  std::vector<Point2> ea = edges_of(va);
  std::vector<Point2> eb = edges_of(vb);

  std::vector<Point2> out;
  out.reserve(va.size() + vb.size());
  Point2 cur = va[0] + vb[0];
  out.push_back(cur);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ea.size() || j < eb.size()) {
    Point2 step;
    if (j == eb.size()) {
      step = ea[i++];
    } else if (i == ea.size()) {
      step = eb[j++];
    } else if (same_direction(ea[i], eb[j])) {
      step = ea[i++] + eb[j++];
    } else if (angle_less_from_south(ea[i], eb[j])) {
      step = ea[i++];
    } else {
      step = eb[j++];
    }
    cur = cur + step;
    out.push_back(cur);
  }
  if (out.size() > 1) out.pop_back();  // closed the loop back at the start
  // Hull pass canonicalises and doubles as a safety net on the merge.
  return ConvexBody::hull(out);
}

ConvexBody scale(const Rational& r, const ConvexBody& a) {
  if (r < 0) throw Error(ErrorKind::NegativeScale, "scale factor " + to_string(r) + " < 0");
  if (r == 0) return ConvexBody::zero(a.dim());
  if (a.dim() == 1) return ConvexBody::interval(r * a.lo(), r * a.hi());
  std::vector<Point2> v;
  v.reserve(a.vertices().size());
  for (const auto& p : a.vertices()) v.push_back(r * p);
  return ConvexBody::hull(v);
}

ConvexBody translate(const ConvexBody& a, const Point2& offset) {
  std::vector<Point2> v;
  for (const auto& p : a.vertices()) v.push_back(p + offset);
  return ConvexBody::hull(v);
}

ConvexBody translate(const ConvexBody& a, const Rational& offset) {
  return ConvexBody::interval(a.lo() + offset, a.hi() + offset);
}

Rational distance2(const Point2& p, const ConvexBody& body) {
  const auto& v = body.vertices();
  if (v.size() == 1) return norm2(p - v[0]);
  if (v.size() == 2) return segment_distance2(p, v[0], v[1]);
  if (body.contains(p)) return 0;
  Rational best = segment_distance2(p, v.back(), v.front());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    Rational d = segment_distance2(p, v[i], v[i + 1]);
    if (d < best) best = d;
  }
  return best;
}

Real excess(const ConvexBody& a, const ConvexBody& b) {
  require_same_dim(a, b);
  if (a.dim() == 1) {
    Rational e = 0;
    if (b.lo() - a.lo() > e) e = b.lo() - a.lo();
    if (a.hi() - b.hi() > e) e = a.hi() - b.hi();
    return Real(e);
  }
  Rational worst = 0;
  for (const auto& p : a.vertices()) {
    Rational d = distance2(p, b);
    if (d > worst) worst = d;
  }
  return Real::sqrt_of(worst);
}

Real hausdorff(const ConvexBody& a, const ConvexBody& b) {
  require_same_dim(a, b);
  if (a.dim() == 1) {
    Rational dl = abs(Rational(a.lo() - b.lo()));
    Rational dh = abs(Rational(a.hi() - b.hi()));
    return Real(dl > dh ? dl : dh);
  }
  Real by_excess = max(excess(a, b), excess(b, a));
  double by_support = hausdorff_support_form(a, b);
  double scale = std::max({1.0, norm_h(a).value(), norm_h(b).value()});
  if (std::fabs(by_excess.value() - by_support) > 1e-9 * scale) {
    throw Error(ErrorKind::InternalError, "Hausdorff excess form " + by_excess.str() +
                                              " disagrees with support form " + format_double(by_support));
  }
  return by_excess;
}

Rational support_value(const ConvexBody& a, const Point2& dir) {
  const auto& v = a.vertices();
  Rational best = dot(v[0], dir);
  for (std::size_t i = 1; i < v.size(); ++i) {
    Rational s = dot(v[i], dir);
    if (s > best) best = s;
  }
  return best;
}

Rational support_value(const ConvexBody& a, int sign) { return sign > 0 ? a.hi() : Rational(-a.lo()); }

const Point2& support_vertex(const ConvexBody& a, const Point2& dir) {
  const auto& v = a.vertices();
  Point2 side = rot90(dir);
  std::size_t best = 0;
  Rational best_main = dot(v[0], dir);
  Rational best_side = dot(v[0], side);
  for (std::size_t i = 1; i < v.size(); ++i) {
    Rational m = dot(v[i], dir);
    if (m > best_main) {
      best = i;
      best_main = m;
      best_side = dot(v[i], side);
    } else if (m == best_main) {
      Rational s = dot(v[i], side);
      if (s > best_side) {
        best = i;
        best_side = s;
      }
    }
  }
  return v[best];
}

void sort_directions(std::vector<Point2>& dirs) {
  std::sort(dirs.begin(), dirs.end(), [](const Point2& a, const Point2& b) {
    int ha = half_from_east(a);
    int hb = half_from_east(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
  });
  dirs.erase(std::unique(dirs.begin(), dirs.end(), same_direction), dirs.end());
}

std::vector<Point2> edge_normals(const ConvexBody& a) {
  std::vector<Point2> n;
  for (const auto& e : edges_of(a.vertices())) n.push_back({e.y, -e.x});
  sort_directions(n);
  return n;
}

double hausdorff_support_form(const ConvexBody& a, const ConvexBody& b) {
  require_same_dim(a, b);
  if (a.dim() == 1) {
    return std::max(std::fabs(to_double(Rational(a.hi() - b.hi()))), std::fabs(to_double(Rational(a.lo() - b.lo()))));
  }
  std::vector<Point2> dirs = edge_normals(a);
  auto nb = edge_normals(b);
  dirs.insert(dirs.end(), nb.begin(), nb.end());
  if (dirs.empty()) return dnorm(a.vertices()[0] - b.vertices()[0]);
  sort_directions(dirs);
  if (dirs.size() == 1) dirs.push_back({-dirs[0].x, -dirs[0].y});

  double best = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Point2& p = dirs[i];
    const Point2& q = dirs[(i + 1) % dirs.size()];
    // On this arc both bodies keep one maximising vertex, so h_A - h_B is
    // the single sinusoid <w, u>.
    Point2 w = support_vertex(a, p) - support_vertex(b, p);
    best = std::max(best, std::fabs(ddot(w, p)) / dnorm(p));
    best = std::max(best, std::fabs(ddot(w, q)) / dnorm(q));
    if (w.x != 0 || w.y != 0) {
      Point2 neg{-w.x, -w.y};
      if (in_arc(w, p, q) || in_arc(neg, p, q)) best = std::max(best, dnorm(w));
    }
  }
  return best;
}

Real norm_h(const ConvexBody& a) {
  if (a.dim() == 1) {
    Rational l = abs(a.lo());
    Rational h = abs(a.hi());
    return Real(l > h ? l : h);
  }
  Rational best = 0;
  for (const auto& p : a.vertices()) {
    Rational n = norm2(p);
    if (n > best) best = n;
  }
  return Real::sqrt_of(best);
}

ConvexBody hull_union(const ConvexBody& a, const ConvexBody& b) {
  require_same_dim(a, b);
  if (a.dim() == 1) {
    return ConvexBody::interval(a.lo() < b.lo() ? a.lo() : b.lo(), a.hi() > b.hi() ? a.hi() : b.hi());
  }
  std::vector<Point2> pts = a.vertices();
  pts.insert(pts.end(), b.vertices().begin(), b.vertices().end());
  return ConvexBody::hull(pts);
}

IncreasingLimit increasing_limit(std::span<const ConvexBody> sequence, const ConvexBody& bound) {
  if (sequence.empty()) throw Error(ErrorKind::EmptyBody, "empty sequence");
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (!sequence[i].subset_of(bound)) {
      throw Error(ErrorKind::UnboundedSequence, "element " + std::to_string(i) + " is not inside the bound");
    }
    if (i + 1 < sequence.size() && !sequence[i].subset_of(sequence[i + 1])) {
      throw Error(ErrorKind::NotIncreasing, "element " + std::to_string(i) + " is not inside its successor");
    }
  }
  ConvexBody limit = sequence[0];
  for (std::size_t i = 1; i < sequence.size(); ++i) limit = hull_union(limit, sequence[i]);
  IncreasingLimit out{limit, {}};
  out.distances.reserve(sequence.size());
  for (const auto& body : sequence) out.distances.push_back(hausdorff(body, limit));
  return out;
}

}  // namespace gouldrn
