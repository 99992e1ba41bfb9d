#include <doctest.h>

#include "gouldrn/error.hpp"
#include "gouldrn/random.hpp"
#include "gouldrn/support_fn.hpp"
#include "oracles.hpp"

using namespace gouldrn;

namespace {

ConvexBody poly(std::initializer_list<std::pair<Rational, Rational>> pts) {
  std::vector<Point2> v;
  for (const auto& [x, y] : pts) v.push_back({x, y});
  return ConvexBody::hull(v);
}

ConvexBody iv(Rational lo, Rational hi) { return ConvexBody::interval(lo, hi); }

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("hull of a single point and of a triangle with an interior point") {
  ConvexBody p = poly({{0, 0}});
  CHECK(p.vertices().size() == 1);
  CHECK(p.is_zero());

  std::vector<Point2> raw{{0, 0}, {1, 0}, {0, 1}, {Rational(1, 4), Rational(1, 4)}};
  ConvexBody t = ConvexBody::hull(raw);
  CHECK(oracle::same_points(t.vertices(), oracle::hull_vertices(raw)));
  CHECK(t.vertices().size() == 3);
}

TEST_CASE("hull drops collinear points and matches the extreme-point oracle") {
  Random rnd(11);
  for (int i = 0; i < 200; ++i) {
    auto pts = rnd.points(2, 1 + rnd.below(8));
    ConvexBody h = ConvexBody::hull(pts);
    CHECK(oracle::same_points(h.vertices(), oracle::hull_vertices(pts)));
  }
  ConvexBody seg = poly({{0, 0}, {1, 1}, {2, 2}, {Rational(1, 2), Rational(1, 2)}});
  CHECK(seg.vertices().size() == 2);
}

TEST_CASE("canonical form makes equal bodies compare equal") {
  CHECK(poly({{1, 0}, {0, 1}, {0, 0}}) == poly({{0, 0}, {0, 1}, {1, 0}, {Rational(1, 3), Rational(1, 3)}}));
  CHECK_FALSE(poly({{1, 0}, {0, 1}, {0, 0}}) == poly({{1, 0}, {0, 1}, {1, 1}}));
}

TEST_CASE("empty inputs and reversed intervals are rejected") {
  CHECK(throws_kind(ErrorKind::EmptyBody, [] { ConvexBody::interval(2, 1); }));
  CHECK(throws_kind(ErrorKind::EmptyBody, [] { ConvexBody::hull(std::vector<Point2>{}); }));
}

TEST_CASE("minkowski sums") {
  CHECK(iv(0, 1) + iv(2, 3) == iv(2, 4));
  ConvexBody tri = poly({{0, 0}, {2, 0}, {0, 1}});
  CHECK(tri + ConvexBody::zero(2) == tri);
  ConvexBody sq = poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq + sq == poly({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
  CHECK(throws_kind(ErrorKind::DimMismatch, [&] { (void)(sq + iv(0, 1)); }));

  Random rnd(12);
  for (int i = 0; i < 100; ++i) {
    ConvexBody a = rnd.body(2);
    ConvexBody b = rnd.body(2);
    std::vector<Point2> sums;
    for (const auto& p : a.vertices()) {
      for (const auto& q : b.vertices()) sums.push_back(p + q);
    }
    CHECK(oracle::same_points((a + b).vertices(), oracle::hull_vertices(sums)));
  }
}

TEST_CASE("scaling") {
  ConvexBody tri = poly({{0, 0}, {2, 0}, {0, 1}});
  CHECK(scale(0, tri).is_zero());
  CHECK(scale(2, iv(1, 3)) == iv(2, 6));
  CHECK(scale(Rational(1, 2), tri) == poly({{0, 0}, {1, 0}, {0, Rational(1, 2)}}));
  CHECK(throws_kind(ErrorKind::NegativeScale, [&] { scale(-1, tri); }));
}

TEST_CASE("excess") {
  ConvexBody small = poly({{0, 0}, {1, 0}, {0, 1}});
  ConvexBody big = poly({{-1, -1}, {3, -1}, {-1, 3}});
  CHECK(excess(small, big) == Real(0));
  CHECK(excess(iv(0, 3), iv(0, 1)) == Real(2));
  CHECK(excess(iv(0, 1), iv(0, 3)) == Real(0));

  Random rnd(13);
  for (int i = 0; i < 40; ++i) {
    ConvexBody a = rnd.body(2);
    ConvexBody b = rnd.body(2);
    CHECK(std::abs(excess(a, b).value() - oracle::excess_sampled(a, b)) <= 1e-6);
  }
}

TEST_CASE("hausdorff distance") {
  ConvexBody tri = poly({{0, 0}, {2, 0}, {0, 1}});
  CHECK(hausdorff(tri, tri) == Real(0));
  CHECK(hausdorff(iv(0, 1), iv(0, 2)) == Real(1));
  // a right-angle corner against its hypotenuse: the corner sits 2/sqrt(5) away
  ConvexBody hyp = poly({{2, 0}, {0, 1}});
  CHECK(hausdorff(tri, hyp).value() == doctest::Approx(2 / std::sqrt(5.0)).epsilon(1e-12));

  Random rnd(14);
  for (int i = 0; i < 100; ++i) {
    ConvexBody a = rnd.body(2);
    ConvexBody b = rnd.body(2);
    double h = hausdorff(a, b).value();
    CHECK(std::abs(h - max(excess(a, b), excess(b, a)).value()) <= 1e-9);
    CHECK(std::abs(h - hausdorff_support_form(a, b)) <= 1e-9 * std::max(1.0, h));
    // sampling approaches from below, within (|A|+|B|) times the angular step
    double sampled = oracle::hausdorff_sampled(a, b);
    double slack = (norm_h(a) + norm_h(b)).value() * 2 * std::numbers::pi / 20000;
    CHECK(sampled <= h + 1e-9);
    CHECK(h - sampled <= slack + 1e-12);
  }
}

TEST_CASE("norm and hull union") {
  CHECK(norm_h(ConvexBody::zero(2)) == Real(0));
  CHECK(norm_h(iv(-2, 3)) == Real(3));
  CHECK(norm_h(poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}})).value() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(norm_h(poly({{3, 4}, {0, 0}})) == Real(5));

  ConvexBody tri = poly({{0, 0}, {2, 0}, {0, 1}});
  CHECK(hull_union(tri, tri) == tri);
  CHECK(hull_union(iv(0, 1), iv(2, 3)) == iv(0, 3));

  Random rnd(15);
  for (int i = 0; i < 100; ++i) {
    ConvexBody a = rnd.body(2);
    ConvexBody b = rnd.body(2);
    ConvexBody u = hull_union(a, b);
    for (const auto& d : canonical_directions(std::vector<const ConvexBody*>{&a, &b, &u})) {
      CHECK(support_value(u, d) == std::max(support_value(a, d), support_value(b, d)));
    }
  }
}

TEST_CASE("embedding of intervals and sums") {
  SupportFn u = embed(iv(-1, 4));
  CHECK(u.at(1) == 4);
  CHECK(u.at(-1) == 1);
  CHECK(u.eval(0.0) == 4.0);

  Random rnd(16);
  for (int i = 0; i < 100; ++i) {
    int dim = 1 + i % 2;
    ConvexBody a = rnd.body(dim);
    ConvexBody b = rnd.body(dim);
    CHECK(equal_on_fan(embed(a + b), embed(a) + embed(b)));
    Real h = hausdorff(a, b);
    Real n = sup_norm(embed(a) - embed(b));
    if (dim == 1) {
      CHECK(h == n);
    } else {
      CHECK(std::abs(h.value() - n.value()) <= 1e-9);
      CHECK(std::abs(h.value() - sup_norm_arcs(embed(a) - embed(b))) <= 1e-9 * std::max(1.0, h.value()));
    }
    if (dim == 1) continue;
    // values at sampled directions agree with the vertex formula
    SupportFn ua = embed(a);
    for (double t : {0.1, 1.3, 2.9, 4.4, 5.7}) CHECK(ua.eval(t) == doctest::Approx(oracle::support(a, t)).epsilon(1e-12));
  }
}

TEST_CASE("support functions are sublinear on sampled direction triples") {
  Random rnd(17);
  for (int i = 0; i < 50; ++i) {
    ConvexBody a = rnd.body(2);
    for (int k = 0; k < 10; ++k) {
      Point2 u{rnd.rational(-4, 4), rnd.rational(-4, 4)};
      Point2 v{rnd.rational(-4, 4), rnd.rational(-4, 4)};
      CHECK(support_value(a, u + v) <= support_value(a, u) + support_value(a, v));
      CHECK(support_value(a, Rational(3) * u) == 3 * support_value(a, u));
    }
  }
}

TEST_CASE("signed combinations stay inside the embedded space") {
  ConvexBody a = iv(0, 2);
  ConvexBody b = iv(-1, 1);
  SupportFn d = embed(a) - embed(b);
  CHECK(d.at(1) == 1);
  CHECK(d.at(-1) == -1);
  CHECK_FALSE(d.is_body());
  CHECK((Rational(-2) * d).at(1) == -2);
  CHECK(sup_norm(d) == Real(1));
  CHECK(SupportFn::unit(1).at(1) == 1);
  CHECK(SupportFn::unit(1).at(-1) == 1);
}

TEST_CASE("increasing limits") {
  ConvexBody a = iv(0, 1);
  std::vector<ConvexBody> same{a, a, a};
  CHECK(increasing_limit(same, a).limit == a);

  std::vector<ConvexBody> seq;
  for (int n = 1; n <= 8; ++n) seq.push_back(iv(0, 1 - Rational(1, n)));
  IncreasingLimit lim = increasing_limit(seq, iv(0, 1));
  CHECK(lim.limit == iv(0, Rational(7, 8)));
  for (std::size_t i = 1; i < lim.distances.size(); ++i) CHECK(lim.distances[i] <= lim.distances[i - 1]);
  CHECK(lim.distances.back() == Real(0));

  // regular-ish polygons growing inside the square [-2,2]^2
  std::vector<ConvexBody> polys;
  for (int n = 1; n <= 5; ++n) {
    Rational r(n, 5);
    polys.push_back(poly({{r, 0}, {0, r}, {-r, 0}, {0, -r}}));
  }
  ConvexBody box = poly({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}});
  IncreasingLimit pl = increasing_limit(polys, box);
  CHECK(pl.limit == polys.back());
  for (std::size_t i = 1; i < pl.distances.size(); ++i) CHECK(pl.distances[i] <= pl.distances[i - 1]);

  std::vector<ConvexBody> shrinking{iv(0, 2), iv(0, 1)};
  CHECK(throws_kind(ErrorKind::NotIncreasing, [&] { increasing_limit(shrinking, iv(0, 3)); }));
  CHECK(throws_kind(ErrorKind::UnboundedSequence, [&] { increasing_limit(seq, iv(0, Rational(1, 2))); }));
}
