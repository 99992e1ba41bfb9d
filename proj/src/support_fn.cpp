#include "gouldrn/support_fn.hpp"

#include <cmath>

#include "gouldrn/error.hpp"

namespace gouldrn {

SupportFn::SupportFn(ConvexBody body) : plus_(std::move(body)), minus_(ConvexBody::zero(plus_.dim())) {}

SupportFn::SupportFn(ConvexBody plus, ConvexBody minus) : plus_(std::move(plus)), minus_(std::move(minus)) {
  require_same_dim(plus_, minus_);
}

SupportFn SupportFn::zero(int dim) { return SupportFn(ConvexBody::zero(dim)); }

SupportFn SupportFn::unit(int dim) {
  if (dim != 1) {
    throw Error(ErrorKind::InvariantError, "the constant function 1 is the support of the unit disk, not a polygon");
  }
  return SupportFn(ConvexBody::interval(-1, 1));
}

Rational SupportFn::at(const Point2& dir) const { return support_value(plus_, dir) - support_value(minus_, dir); }

Rational SupportFn::at(int sign) const { return support_value(plus_, sign) - support_value(minus_, sign); }

double SupportFn::eval(double theta) const {
  if (dim() == 1) return to_double(at(theta >= 0 ? 1 : -1));
  double c = std::cos(theta);
  double s = std::sin(theta);
  auto h = [&](const ConvexBody& b) {
    double best = -HUGE_VAL;
    for (const auto& v : b.vertices()) best = std::max(best, to_double(v.x) * c + to_double(v.y) * s);
    return best;
  };
  return h(plus_) - h(minus_);
}

bool SupportFn::is_body() const {
  if (dim() == 1) return minus_.lo() == minus_.hi();
  return minus_.vertices().size() == 1;
}

ConvexBody SupportFn::body() const {
  if (!is_body()) throw Error(ErrorKind::InvariantError, "function is not represented as a single body");
  if (dim() == 1) return translate(plus_, Rational(-minus_.lo()));
  const Point2& c = minus_.vertices()[0];
  return translate(plus_, Point2{-c.x, -c.y});
}

SupportFn& SupportFn::operator+=(const SupportFn& rhs) {
  plus_ = plus_ + rhs.plus_;
  minus_ = minus_ + rhs.minus_;
  return *this;
}

SupportFn& SupportFn::operator-=(const SupportFn& rhs) {
  plus_ = plus_ + rhs.minus_;
  minus_ = minus_ + rhs.plus_;
  return *this;
}

SupportFn operator*(const Rational& r, const SupportFn& f) {
  if (r >= 0) return SupportFn(scale(r, f.plus_), scale(r, f.minus_));
  Rational m = -r;
  return SupportFn(scale(m, f.minus_), scale(m, f.plus_));
}

SupportFn embed(const ConvexBody& body) { return SupportFn(body); }

Real sup_norm(const SupportFn& f) { return max(excess(f.plus(), f.minus()), excess(f.minus(), f.plus())); }

double sup_norm_arcs(const SupportFn& f) { return hausdorff_support_form(f.plus(), f.minus()); }

std::vector<Point2> canonical_directions(const std::vector<const ConvexBody*>& bodies) {
  std::vector<Point2> dirs{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const ConvexBody* b : bodies) {
    auto n = edge_normals(*b);
    dirs.insert(dirs.end(), n.begin(), n.end());
  }
  sort_directions(dirs);
  return dirs;
}

std::vector<Point2> canonical_directions(std::initializer_list<const SupportFn*> fns) {
  std::vector<const ConvexBody*> bodies;
  for (const SupportFn* f : fns) {
    bodies.push_back(&f->plus());
    bodies.push_back(&f->minus());
  }
  return canonical_directions(bodies);
}

bool equal_on_fan(const SupportFn& a, const SupportFn& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "embedded functions of different dimension");
  if (a.dim() == 1) return a.at(1) == b.at(1) && a.at(-1) == b.at(-1);
  for (const auto& d : canonical_directions({&a, &b})) {
    if (a.at(d) != b.at(d)) return false;
  }
  return true;
}

bool leq_on_fan(const SupportFn& a, const SupportFn& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimMismatch, "embedded functions of different dimension");
  if (a.dim() == 1) return a.at(1) <= b.at(1) && a.at(-1) <= b.at(-1);
  for (const auto& d : canonical_directions({&a, &b})) {
    if (a.at(d) > b.at(d)) return false;
  }
  return true;
}

SupportFn pointwise_max(const SupportFn& a, const SupportFn& b) { return embed(hull_union(a.body(), b.body())); }

}  // namespace gouldrn
