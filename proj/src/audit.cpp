#include "gouldrn/audit.hpp"

#include <fstream>
#include <functional>

#include "gouldrn/random.hpp"
#include "gouldrn/rn.hpp"

namespace gouldrn {

namespace {

using Failure = std::optional<std::string>;
using Shape = Random::Shape;

constexpr double kTol = 1e-9;

struct Property {
  std::string name;
  std::string tag;
  std::size_t cap;   ///< largest atom count worth running
  bool shrinkable;   ///< the check quantifies over the whole algebra, so atoms can be dropped
  std::function<Scenario(Random&, std::size_t atoms, std::size_t index, const AuditOptions&)> generate;
  std::function<Failure(const Scenario&)> check;
};

Scenario make_scenario(FiniteSpace space) { return Scenario{std::move(space), {}, {}, {}, Config{}}; }

template <class F>
void add_measure(Scenario& sc, const std::string& name, F fn, std::map<std::string, bool> claims = {}) {
  Flags flags = classify(fn);
  sc.measures.insert_or_assign(name, NamedMeasure{"tabulated", std::move(fn), flags, std::move(claims)});
}

void add_task(Scenario& sc, Json params) {
  std::string op = params.at("op").get<std::string>();
  sc.tasks.push_back(Task{op, std::move(params)});
}

Shape any_shape(Random& rnd) { return static_cast<Shape>(rnd.below(4)); }
Shape submeasure_shape(Random& rnd) { return rnd.coin() ? Shape::Additive : Shape::Submeasure; }
int any_dim(Random& rnd) { return 1 + static_cast<int>(rnd.below(2)); }

bool same(const Real& a, const Real& b) { return near(a, b, kTol * std::max({1.0, std::abs(a.value()), std::abs(b.value())})); }
bool at_most(const Real& a, const Real& b) { return a <= b || same(a, b); }

std::string fail_at(AtomSet e, const std::string& what) { return what + " at " + e.str(); }

// Body lists live in task params so a failing case can be replayed.

Json bodies_json(const std::vector<ConvexBody>& bodies) {
  Json arr = Json::array();
  for (const auto& b : bodies) arr.push_back(body_to_json(b));
  return arr;
}

std::vector<ConvexBody> bodies_of(const Scenario& sc) {
  std::vector<ConvexBody> out;
  for (const Json& b : sc.tasks.at(0).params.at("bodies")) out.push_back(body_from_json(b, "bodies"));
  return out;
}

Json point_json(const Point2& p) { return Json::array({to_string(p.x), to_string(p.y)}); }
Point2 point_of(const Json& j) { return {rational_from_json(j.at(0), "point"), rational_from_json(j.at(1), "point")}; }

std::vector<Point2> points_param(const Scenario& sc, const char* key) {
  std::vector<Point2> out;
  for (const Json& p : sc.tasks.at(0).params.at(key)) out.push_back(point_of(p));
  return out;
}

Scenario body_scenario(Random& rnd, int dim, std::size_t count) {
  Scenario sc = make_scenario(FiniteSpace::singletons(1));
  std::vector<ConvexBody> bodies;
  for (std::size_t i = 0; i < count; ++i) bodies.push_back(rnd.body(dim));
  add_task(sc, Json{{"op", "hausdorff"}, {"a", body_to_json(bodies[0])}, {"b", body_to_json(bodies[1])},
                    {"bodies", bodies_json(bodies)}});
  return sc;
}

Point2 random_offset(Random& rnd, int dim) { return {rnd.rational(-8, 8, 4), dim == 2 ? rnd.rational(-8, 8, 4) : Rational(0)}; }

ConvexBody shift(const ConvexBody& b, const Point2& c) { return b.dim() == 1 ? translate(b, c.x) : translate(b, c); }

/// Distance from a point to a body without going through the polygon code for d=1.
Real point_distance(const Point2& p, const ConvexBody& a) {
  if (a.dim() == 1) {
    Rational d = p.x < a.lo() ? Rational(a.lo() - p.x) : p.x > a.hi() ? Rational(p.x - a.hi()) : Rational(0);
    return Real(d);
  }
  return Real::sqrt_of(distance2(p, a));
}

ConvexBody hull_of(const std::vector<Point2>& pts, int dim) {
  if (dim == 2) return ConvexBody::hull(pts);
  std::vector<Rational> xs;
  for (const auto& p : pts) xs.push_back(p.x);
  return ConvexBody::hull(xs);
}

// Partitions stored as arrays of atom sets.

Json partition_json(const Partition& p) {
  Json arr = Json::array();
  for (AtomSet b : p.blocks) arr.push_back(set_to_json(b));
  return arr;
}

std::vector<Partition> partitions_of(const Scenario& sc) {
  std::vector<Partition> out;
  for (const Json& p : sc.tasks.at(0).params.at("partitions")) {
    std::vector<AtomSet> blocks;
    for (const Json& b : p) blocks.push_back(set_from_json(b, "partitions"));
    out.push_back(Partition::of(sc.space.all(), std::move(blocks)));
  }
  return out;
}

Scenario partition_scenario(Random& rnd, std::size_t atoms) {
  Scenario sc = make_scenario(FiniteSpace::singletons(atoms));
  Partition p = rnd.partition(sc.space.all());
  Partition q = rnd.refinement(p);
  Partition r = rnd.refinement(q);
  Partition s = rnd.partition(sc.space.all());
  Json parts = Json::array({partition_json(p), partition_json(q), partition_json(r), partition_json(s)});
  add_task(sc, Json{{"op", "partitions"}, {"partitions", parts}});
  return sc;
}

// Generic set-function scenarios.

Scenario measure_scenario(Random& rnd, std::size_t atoms, bool scalar, Shape shape, int dim = 1) {
  Scenario sc = make_scenario(rnd.space(atoms));
  if (scalar) {
    add_measure(sc, "m", rnd.scalar(atoms, shape));
  } else {
    add_measure(sc, "M", rnd.multi(atoms, dim, shape));
  }
  return sc;
}

const NamedMeasure& the_measure(const Scenario& sc) { return sc.measures.begin()->second; }

template <class Fn>
auto on_measure(const Scenario& sc, Fn&& fn) {
  const NamedMeasure& nm = the_measure(sc);
  if (nm.is_scalar()) return fn(nm.scalar());
  return fn(nm.multi());
}

/// Γ additive with Γ({a}) = {0} on v_M-null atoms.
MultiSetFn dominated_gamma(Random& rnd, const MultiSetFn& m, const AdditiveMeasure& v) {
  std::vector<ConvexBody> bodies;
  const int dim = value_dim(m);
  for (std::size_t a = 0; a < m.atom_count(); ++a) {
    if (v.is_null(AtomSet::single(a))) {
      bodies.push_back(ConvexBody::zero(dim));
    } else if (rnd.coin()) {
      bodies.push_back(scale(rnd.rational(0, 12, 4), m(AtomSet::single(a))));
    } else {
      bodies.push_back(rnd.body(dim));
    }
  }
  return MultiSetFn::additive_from_atoms(bodies, ConvexBody::zero(dim));
}

Scenario range_scenario(Random& rnd, std::size_t atoms) {
  Scenario sc = make_scenario(rnd.space(atoms, 1));
  int dim = any_dim(rnd);
  MultiSetFn m = rnd.multi(atoms, dim, submeasure_shape(rnd));
  AdditiveMeasure v = variation_measure(m);
  add_measure(sc, "Gamma", dominated_gamma(rnd, m, v));
  add_measure(sc, "M", m);
  return sc;
}

bool range_inside(const ApproxRange& inner, const ApproxRange& outer) {
  if (inner.empty) return true;
  if (outer.empty) return false;
  if (!at_most(outer.lo, inner.lo)) return false;
  if (!outer.hi) return true;
  if (!inner.hi) return false;
  return at_most(*inner.hi, *outer.hi);
}

const Rational kAlphas[] = {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1)};

std::vector<Property> properties() {
  std::vector<Property> ps;

  // convex

  ps.push_back({"hausdorff-metric", "hausdorff-metric-axioms", 1, false,
                [](Random& rnd, std::size_t, std::size_t i, const AuditOptions&) {
                  return body_scenario(rnd, 1 + static_cast<int>(i % 2), 3);
                },
                [](const Scenario& sc) -> Failure {
                  auto b = bodies_of(sc);
                  const auto& a = b[0];
                  const auto& c = b[1];
                  const auto& d = b[2];
                  if (hausdorff(a, a) != Real(0)) return "h(A,A) != 0";
                  if (!same(hausdorff(a, c), hausdorff(c, a))) return "not symmetric";
                  if (!at_most(hausdorff(a, d), hausdorff(a, c) + hausdorff(c, d))) return "triangle inequality";
                  if ((a == c) != (hausdorff(a, c).value() == 0.0)) return "h(A,C)=0 without A=C";
                  return std::nullopt;
                }});

  ps.push_back({"translation-invariance", "hausdorff-translation-invariance", 1, false,
                [](Random& rnd, std::size_t, std::size_t i, const AuditOptions&) {
                  int dim = 1 + static_cast<int>(i % 2);
                  Scenario sc = body_scenario(rnd, dim, 2);
                  sc.tasks[0].params["offsets"] = Json::array({point_json(random_offset(rnd, dim))});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  auto b = bodies_of(sc);
                  Point2 c = points_param(sc, "offsets")[0];
                  Real moved = hausdorff(shift(b[0], c), shift(b[1], c));
                  Real base = hausdorff(b[0], b[1]);
                  bool ok = b[0].dim() == 1 ? moved == base : same(moved, base);
                  return ok ? Failure{} : Failure{"h changed under translation"};
                }});

  ps.push_back({"distance-lipschitz", "distance-lipschitz", 1, false,
                [](Random& rnd, std::size_t, std::size_t i, const AuditOptions&) {
                  int dim = 1 + static_cast<int>(i % 2);
                  Scenario sc = body_scenario(rnd, dim, 2);
                  sc.tasks[0].params["points"] =
                      Json::array({point_json(random_offset(rnd, dim)), point_json(random_offset(rnd, dim))});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  auto b = bodies_of(sc);
                  auto pts = points_param(sc, "points");
                  Real lhs = abs(point_distance(pts[0], b[0]) - point_distance(pts[1], b[0]));
                  Real rhs = Real::sqrt_of(norm2(pts[0] - pts[1]));
                  return at_most(lhs, rhs) ? Failure{} : Failure{"|d(h,A) - d(b,A)| > |b - h|"};
                }});

  ps.push_back({"excess-of-hull", "excess-closure", 1, false,
                [](Random& rnd, std::size_t, std::size_t i, const AuditOptions&) {
                  int dim = 1 + static_cast<int>(i % 2);
                  Scenario sc = body_scenario(rnd, dim, 2);
                  Json pts = Json::array();
                  for (const auto& p : rnd.points(dim, 1 + rnd.below(6))) pts.push_back(point_json(p));
                  sc.tasks[0].params["points"] = pts;
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  auto b = bodies_of(sc);
                  auto pts = points_param(sc, "points");
                  Real worst;
                  for (const auto& p : pts) worst = max(worst, point_distance(p, b[0]));
                  Real e = excess(hull_of(pts, b[0].dim()), b[0]);
                  return same(worst, e) ? Failure{} : Failure{"e(B,A) != e(hull B, A)"};
                }});

  ps.push_back({"embedding-identities", "embedding-identities", 1, false,
                [](Random& rnd, std::size_t, std::size_t i, const AuditOptions&) {
                  int dim = 1 + static_cast<int>(i % 2);
                  Scenario sc = body_scenario(rnd, dim, 2);
                  sc.tasks[0].params["scalars"] =
                      Json::array({to_string(rnd.rational(0, 12, 4)), to_string(rnd.rational(0, 12, 4))});
                  sc.tasks[0].params["limit"] = body_to_json(rnd.body_with_origin(dim));
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  auto b = bodies_of(sc);
                  const Json& p = sc.tasks[0].params;
                  Rational alpha = rational_from_json(p.at("scalars").at(0), "scalars");
                  Rational beta = rational_from_json(p.at("scalars").at(1), "scalars");
                  SupportFn ua = embed(b[0]);
                  SupportFn uc = embed(b[1]);
                  if (!equal_on_fan(embed(scale(alpha, b[0]) + scale(beta, b[1])), alpha * ua + beta * uc)) {
                    return "U(aA+bC) != aU(A)+bU(C)";
                  }
                  Real h = hausdorff(b[0], b[1]);
                  Real iso = sup_norm(ua - uc);
                  if (b[0].dim() == 1 ? h != iso : !same(h, iso)) return "h(A,C) != |U(A)-U(C)|";
                  if (b[0].dim() == 2 && std::abs(h.value() - sup_norm_arcs(ua - uc)) > kTol * std::max(1.0, h.value())) {
                    return "h(A,C) != per-arc sup of |U(A)-U(C)|";
                  }
                  SupportFn hull = embed(hull_union(b[0], b[1]));
                  if (b[0].dim() == 1) {
                    for (int s : {1, -1}) {
                      if (hull.at(s) != std::max(ua.at(s), uc.at(s))) return "U(co(A u C)) != max";
                    }
                  } else {
                    for (const auto& u : canonical_directions({&ua, &uc, &hull})) {
                      if (hull.at(u) != std::max(ua.at(u), uc.at(u))) return "U(co(A u C)) != max";
                    }
                  }
                  // closedness: the image of an increasing limit is the image of a body
                  ConvexBody k = body_from_json(p.at("limit"), "limit");
                  std::vector<ConvexBody> seq;
                  for (int n = 1; n <= 6; ++n) seq.push_back(scale(1 - pow2(-n), k));
                  IncreasingLimit lim = increasing_limit(seq, k);
                  if (!(lim.limit == seq.back()) || !embed(lim.limit).is_body()) return "increasing limit left the image";
                  for (std::size_t n = 0; n < seq.size(); ++n) {
                    if (!same(lim.distances[n], sup_norm(embed(seq[n]) - embed(lim.limit)))) return "limit distances";
                  }
                  return std::nullopt;
                }});

  ps.push_back({"minkowski-algebra", "minkowski-sum-algebra", 1, false,
                [](Random& rnd, std::size_t, std::size_t i, const AuditOptions&) {
                  return body_scenario(rnd, 1 + static_cast<int>(i % 2), 3);
                },
                [](const Scenario& sc) -> Failure {
                  auto b = bodies_of(sc);
                  if (!((b[0] + b[1]) + b[2] == b[0] + (b[1] + b[2]))) return "not associative";
                  if (!(b[0] + b[1] == b[1] + b[0])) return "not commutative";
                  return std::nullopt;
                }});

  // space

  ps.push_back({"refinement-order", "refinement-partial-order", 10, false,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return partition_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  auto p = partitions_of(sc);
                  for (const auto& x : p) {
                    if (!is_refinement(x, x)) return "not reflexive";
                  }
                  if (!is_refinement(p[0], p[1]) || !is_refinement(p[1], p[2])) return "refinement not recognised";
                  if (!is_refinement(p[0], p[2])) return "not transitive";
                  if (is_refinement(p[0], p[3]) && is_refinement(p[3], p[0]) && !(p[0] == p[3])) return "not antisymmetric";
                  return std::nullopt;
                }});

  ps.push_back({"common-refinement-join", "common-refinement-join", 10, false,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return partition_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  auto p = partitions_of(sc);
                  Partition j = common_refinement(p[0], p[3]);
                  if (!is_refinement(p[0], j) || !is_refinement(p[3], j)) return "join does not refine both";
                  auto upper_bound_refines_join = [&](const Partition& r) {
                    return !(is_refinement(p[0], r) && is_refinement(p[3], r)) || is_refinement(j, r);
                  };
                  if (sc.space.atom_count() <= 6) {
                    for (const auto& r : enumerate_partitions(sc.space.all())) {
                      if (!upper_bound_refines_join(r)) return "a common refinement does not refine the join";
                    }
                  } else if (!upper_bound_refines_join(p[2]) || !upper_bound_refines_join(Partition::atoms(sc.space.all()))) {
                    return "a common refinement does not refine the join";
                  }
                  return std::nullopt;
                }});

  ps.push_back({"atoms-maximum", "atoms-partition-maximum", 6, false,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return partition_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  auto all = enumerate_partitions(sc.space.all());
                  Partition atoms = Partition::atoms(sc.space.all());
                  std::size_t maxima = 0;
                  for (const auto& q : all) {
                    bool above_all = std::all_of(all.begin(), all.end(), [&](const Partition& r) { return is_refinement(r, q); });
                    if (above_all) {
                      ++maxima;
                      if (!(q == atoms)) return "a maximum other than the atoms partition";
                    }
                  }
                  return maxima == 1 ? Failure{} : Failure{"no unique maximum"};
                }});

  // setfn

  ps.push_back({"classification", "set-function-classification", 10, true,
                [](Random& rnd, std::size_t k, std::size_t i, const AuditOptions& opt) {
                  Scenario sc = make_scenario(rnd.space(k, 1));
                  if (opt.inject_mislabel && i == 0 && k >= 2) {
                    // μ(E) = |E|² scaled into a body: monotone but never subadditive
                    ConvexBody unit = ConvexBody::interval(0, 1);
                    add_measure(sc, "M", MultiSetFn::from_fn(k, [&](AtomSet s) {
                                  return scale(Rational(static_cast<long>(s.size() * s.size())), unit);
                                }),
                                {{"monotone", true}, {"subadditive", true}});
                  } else {
                    bool scalar = rnd.coin();
                    Shape shape = any_shape(rnd);
                    std::map<std::string, bool> claims;
                    if (shape != Shape::Arbitrary) claims["monotone"] = true;
                    if (shape == Shape::Additive || shape == Shape::Submeasure) claims["subadditive"] = true;
                    if (shape == Shape::Additive) claims["additive"] = true;
                    if (scalar) {
                      add_measure(sc, "M", rnd.scalar(k, shape), claims);
                    } else {
                      add_measure(sc, "M", rnd.multi(k, any_dim(rnd), shape), claims);
                    }
                  }
                  add_task(sc, Json{{"op", "classify"}, {"measure", "M"}});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  const NamedMeasure& m = the_measure(sc);
                  const std::pair<const char*, bool> flags[] = {
                      {"monotone", m.flags.monotone}, {"subadditive", m.flags.subadditive}, {"additive", m.flags.additive}};
                  for (const auto& [name, value] : flags) {
                    auto c = m.claims.find(name);
                    if (c != m.claims.end() && c->second != value) return std::string("claimed ") + name + " but it is not";
                  }
                  return std::nullopt;
                }});

  ps.push_back({"variation-dominates", "variation-properties", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  return measure_scenario(rnd, k, rnd.coin(), any_shape(rnd), any_dim(rnd));
                },
                [](const Scenario& sc) {
                  return on_measure(sc, [&](const auto& m) -> Failure {
                    for (std::size_t s = 0; s < m.table().size(); ++s) {
                      AtomSet e{static_cast<std::uint32_t>(s)};
                      if (!at_most(magnitude(m(e)), variation_by_enumeration(m, e))) return fail_at(e, "|m| > v");
                    }
                    return std::nullopt;
                  });
                }});

  ps.push_back({"variation-null-sets", "variation-properties", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  return measure_scenario(rnd, k, true, static_cast<Shape>(rnd.below(3)));
                },
                [](const Scenario& sc) -> Failure {
                  const ScalarSetFn& m = the_measure(sc).scalar();
                  for (std::size_t s = 0; s < m.table().size(); ++s) {
                    AtomSet e{static_cast<std::uint32_t>(s)};
                    if ((variation_by_enumeration(m, e) == Real(0)) != (m(e) == 0)) return fail_at(e, "v=0 and m=0 disagree");
                  }
                  return std::nullopt;
                }});

  ps.push_back({"variation-additive", "variation-additivity", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  return measure_scenario(rnd, k, rnd.coin(), submeasure_shape(rnd), any_dim(rnd));
                },
                [](const Scenario& sc) {
                  return on_measure(sc, [&](const auto& m) -> Failure {
                    std::vector<Real> brute;
                    for (std::size_t s = 0; s < m.table().size(); ++s) {
                      AtomSet e{static_cast<std::uint32_t>(s)};
                      brute.push_back(variation_by_enumeration(m, e));
                      if (!same(brute.back(), variation(m, e, true))) return fail_at(e, "fast path != enumeration");
                    }
                    for (std::uint32_t a = 0; a < brute.size(); ++a) {
                      for (std::uint32_t b = a; b < brute.size(); b = (b + 1) | a) {
                        if ((a & b) != 0) continue;
                        if (!same(brute[a | b], brute[a] + brute[b])) return fail_at(AtomSet{a | b}, "v not additive");
                      }
                    }
                    return std::nullopt;
                  });
                }});

  ps.push_back({"variation-of-additive", "variation-properties", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  return measure_scenario(rnd, k, true, Shape::Additive);
                },
                [](const Scenario& sc) -> Failure {
                  const ScalarSetFn& m = the_measure(sc).scalar();
                  for (std::size_t s = 0; s < m.table().size(); ++s) {
                    AtomSet e{static_cast<std::uint32_t>(s)};
                    Real v = variation_by_enumeration(m, e);
                    if (v != Real(m(e))) return fail_at(e, "v != m");
                    Rational sup = 0;
                    for_each_subset(e, [&](AtomSet b) { sup = std::max(sup, m(b)); });
                    if (v != Real(sup)) return fail_at(e, "v != sup of m over subsets");
                  }
                  return std::nullopt;
                }});

  ps.push_back({"variation-monotone", "variation-properties", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  return measure_scenario(rnd, k, true, any_shape(rnd));
                },
                [](const Scenario& sc) -> Failure {
                  const ScalarSetFn& m = the_measure(sc).scalar();
                  std::vector<Real> v;
                  for (std::size_t s = 0; s < m.table().size(); ++s) v.push_back(variation_by_enumeration(m, AtomSet{static_cast<std::uint32_t>(s)}));
                  for (std::uint32_t s = 0; s < v.size(); ++s) {
                    for (std::size_t a = 0; a < m.atom_count(); ++a) {
                      if (!(v[s] <= v[s | (1U << a)])) return fail_at(AtomSet{s}, "v not monotone");
                    }
                  }
                  // μ̃ on point sets: adding a point never decreases it
                  const std::size_t n = sc.space.point_count();
                  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << std::min<std::size_t>(n, 10)); ++bits) {
                    PointSet p{bits};
                    Real base = mu_tilde(m, sc.space, p);
                    for (std::size_t q = 0; q < n; ++q) {
                      PointSet bigger{bits | (std::uint64_t{1} << q)};
                      if (!(base <= mu_tilde(m, sc.space, bigger))) return "outer variation not monotone";
                    }
                  }
                  return std::nullopt;
                }});

  ps.push_back({"null-difference", "null-difference-lemma", 5, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = range_scenario(rnd, k);
                  add_task(sc, Json{{"op", "approximate_range"}, {"gamma", "Gamma"}, {"M", "M"},
                                    {"alpha", to_string(kAlphas[rnd.below(3)])}});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& g = sc.measure("Gamma").multi();
                  const MultiSetFn& m = sc.measure("M").multi();
                  AdditiveMeasure v = variation_measure(m);
                  Rational alpha = rational_from_json(sc.tasks[0].params.at("alpha"), "alpha");
                  auto nonempty = [&](AtomSet e) { return !approximate_range(g, m, v, e, alpha).empty; };
                  auto bad = check_null_difference(v, sc.space.all(), nonempty);
                  if (bad) return "range emptiness differs on " + bad->first.str() + " and " + bad->second.str();
                  return std::nullopt;
                }});

  // gould

  ps.push_back({"integrability-criterion", "finite-integrability-criterion", 6, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  bool scalar = rnd.coin();
                  Scenario sc = make_scenario(rnd.space(k, 2));
                  if (scalar) {
                    add_measure(sc, "m", rnd.scalar(k, any_shape(rnd)));
                  } else {
                    add_measure(sc, "M", rnd.multi(k, any_dim(rnd), any_shape(rnd)));
                  }
                  sc.integrands.emplace("f", rnd.integrand(sc.space, !scalar, 50));
                  return sc;
                },
                [](const Scenario& sc) {
                  const Integrand& f = sc.integrand("f");
                  return on_measure(sc, [&](const auto& m) -> Failure {
                    Partition atoms = Partition::atoms(sc.space.all());
                    using V = std::decay_t<decltype(m.zero())>;
                    std::vector<V> sums;
                    for_each_tag_choice(sc.space, atoms, Guards{}, [&](const TaggedPartition& tp) { sums.push_back(riemann_sum(f, tp, m)); });
                    bool constant = std::all_of(sums.begin(), sums.end(), [&](const V& s) { return value_equal(s, sums[0]); });
                    Real spread;
                    for (const auto& a : sums) {
                      for (const auto& b : sums) spread = max(spread, distance(a, b));
                    }
                    auto r = integrate(sc.space, f, m, sc.space.all());
                    if (r.integrable != constant) return "integrable flag disagrees with tag enumeration";
                    if (constant && !value_equal(r.value, sums[0])) return "integral differs from the common sum";
                    if (!same(r.tag_spread, spread)) return "tag spread " + r.tag_spread.str() + " vs " + spread.str();
                    bool criterion = true;
                    for (std::size_t a = 0; a < sc.space.atom_count(); ++a) {
                      if (oscillation(sc.space, f, a) != 0 && !is_zero_value(m(AtomSet::single(a)))) criterion = false;
                    }
                    if (criterion != r.integrable) return "oscillation criterion disagrees";
                    return std::nullopt;
                  });
                }});

  ps.push_back({"integral-function-additive", "integral-function-additivity", 10, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  return measure_scenario(rnd, k, rnd.coin(), any_shape(rnd), any_dim(rnd));
                },
                [](const Scenario& sc) {
                  return on_measure(sc, [&](const auto& m) -> Failure {
                    Flags f = classify(integral_function(m));
                    if (!f.additive) return fail_at(f.additive_violation->first | f.additive_violation->second, "not additive");
                    return std::nullopt;
                  });
                }});

  ps.push_back({"abs-integrable", "absolute-integrability", 10, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = make_scenario(rnd.space(k));
                  add_measure(sc, "m", rnd.scalar(k, Shape::Additive));
                  sc.integrands.emplace("f", rnd.integrand(sc.space, false, 50));
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  const ScalarSetFn& m = the_measure(sc).scalar();
                  Integrand f = sc.integrand("f");
                  bool fi = integrate(sc.space, f, m, sc.space.all()).integrable;
                  for (auto& v : f.values) v = abs(v);
                  if (fi && !integrate(sc.space, f, m, sc.space.all()).integrable) return "|f| not integrable";
                  return std::nullopt;
                }});

  ps.push_back({"sums-increase-with-refinement", "multisubmeasure-sum-monotone", 10, false,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = partition_scenario(rnd, k);
                  add_measure(sc, "M", rnd.multi(k, any_dim(rnd), submeasure_shape(rnd)));
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& m = sc.measure("M").multi();
                  auto p = partitions_of(sc);
                  auto sigma = [&](const Partition& q) {
                    ConvexBody s = m.zero();
                    for (AtomSet b : q.blocks) s = s + m(b);
                    return s;
                  };
                  for (std::size_t i = 0; i + 1 < 3; ++i) {
                    if (!sigma(p[i]).subset_of(sigma(p[i + 1]))) return "sum shrank under refinement";
                  }
                  return std::nullopt;
                }});

  ps.push_back({"total-measurability", "integrable-iff-totally-measurable", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = make_scenario(rnd.space(k));
                  add_measure(sc, "m", rnd.scalar(k, submeasure_shape(rnd)));
                  sc.integrands.emplace("f", rnd.integrand(sc.space, false, 40));
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  const ScalarSetFn& m = the_measure(sc).scalar();
                  const Integrand& f = sc.integrand("f");
                  bool integrable = integrate(sc.space, f, m, sc.space.all()).integrable;
                  bool all_eps = true;
                  for (int n = 1; n <= 12; ++n) all_eps = all_eps && totally_measurable(sc.space, f, m, pow2(-n)).holds;
                  return integrable == all_eps ? Failure{} : Failure{"integrability and total measurability disagree"};
                }});

  ps.push_back({"equivalence-suite", "integral-function-equivalence", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  bool scalar = rnd.coin();
                  Scenario sc = measure_scenario(rnd, k, scalar, any_shape(rnd), any_dim(rnd));
                  sc.integrands.emplace("f", rnd.integrand(sc.space, !scalar, 40));
                  add_task(sc, Json{{"op", "equivalence_suite"}, {"measure", scalar ? "m" : "M"}, {"integrand", "f"}});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  Report r = run_tasks(sc);
                  for (const auto& row : r.rows) {
                    if (!row.passed) return row.id + ": " + row.value;
                  }
                  return std::nullopt;
                }});

  ps.push_back({"multisubmeasure-integral", "multisubmeasure-integral", 6, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = measure_scenario(rnd, k, false, submeasure_shape(rnd), any_dim(rnd));
                  add_task(sc, Json{{"op", "integrate_multimeasure"}, {"measure", "M"}});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  MultimeasureIntegral r = integrate_multimeasure(the_measure(sc).multi());
                  if (!r.sums_bounded) return "a partition sum escapes the bound";
                  bool ok = r.value.dim() == 1 ? r.gap == Real(0) : r.gap.value() <= kTol;
                  return ok ? Failure{} : Failure{"hull of sums differs from M0(T) by " + r.gap.str()};
                }});

  ps.push_back({"variation-of-integral", "integral-preserves-variation", 6, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = measure_scenario(rnd, k, false, submeasure_shape(rnd), any_dim(rnd));
                  add_task(sc, Json{{"op", "variation_of_integral"}, {"measure", "M"}});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  VariationOfIntegral r = variation_of_integral(the_measure(sc).multi(), kTol);
                  if (!r.variation_equal) return fail_at(*r.first_variation_failure, "v_M0 != v_M");
                  if (!r.inclusion) return fail_at(*r.first_inclusion_failure, "M not inside M0");
                  return std::nullopt;
                }});

  ps.push_back({"oscillation-bounds", "oscillation-bound", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  bool scalar = rnd.coin();
                  Scenario sc = measure_scenario(rnd, k, scalar, Shape::Additive, any_dim(rnd));
                  Integrand f = rnd.integrand(sc.space, true, 40);
                  // flatten f on atoms where it would break integrability
                  for (std::size_t a = 0; a < k; ++a) {
                    bool null = on_measure(sc, [&](const auto& m) { return is_zero_value(m(AtomSet::single(a))); });
                    if (!null) {
                      for (std::size_t p : sc.space.atom_points(a)) f.values[p] = f.values[sc.space.atom_points(a)[0]];
                    }
                  }
                  sc.integrands.emplace("f", f);
                  return sc;
                },
                [](const Scenario& sc) {
                  const Integrand& f = sc.integrand("f");
                  return on_measure(sc, [&](const auto& m) -> Failure {
                    Partition atoms = Partition::atoms(sc.space.all());
                    if (!integrate(sc.space, f, m, sc.space.all()).integrable) return "generator produced a non-integrable f";
                    if (ob_sum(sc.space, f, m, atoms) != Real(0)) return "oscillation sum at the atoms partition is not 0";
                    // merge blocks pairwise up to the trivial partition, then read coarse to fine
                    std::vector<Partition> rev{atoms};
                    while (rev.back().blocks.size() > 1) {
                      std::vector<AtomSet> merged;
                      const auto& bl = rev.back().blocks;
                      for (std::size_t i = 0; i < bl.size(); i += 2) merged.push_back(i + 1 < bl.size() ? bl[i] | bl[i + 1] : bl[i]);
                      rev.push_back(Partition::of(sc.space.all(), merged));
                    }
                    std::vector<Partition> chain(rev.rbegin(), rev.rend());
                    ChainEnvelopes env = chain_estimator(sc.space, f, m, chain);
                    if (!env.nested) return "envelopes not nested";
                    if (!env.widths_non_increasing) return "envelope widths increase";
                    if (env.levels.back().max_width != 0) return "final envelope width " + to_string(env.levels.back().max_width);
                    return std::nullopt;
                  });
                }});

  // rn

  ps.push_back({"range-monotone-in-alpha", "approximate-range-monotone", 5, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return range_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& g = sc.measure("Gamma").multi();
                  const MultiSetFn& m = sc.measure("M").multi();
                  AdditiveMeasure v = variation_measure(m);
                  for (std::uint32_t s = 1; s < m.table().size(); ++s) {
                    AtomSet e{s};
                    for (std::size_t i = 0; i + 1 < std::size(kAlphas); ++i) {
                      if (!range_inside(approximate_range(g, m, v, e, kAlphas[i]), approximate_range(g, m, v, e, kAlphas[i + 1]))) {
                        return fail_at(e, "range shrank as alpha grew");
                      }
                    }
                  }
                  return std::nullopt;
                }});

  ps.push_back({"range-monotone-in-set", "approximate-range-monotone", 5, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return range_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& g = sc.measure("Gamma").multi();
                  const MultiSetFn& m = sc.measure("M").multi();
                  AdditiveMeasure v = variation_measure(m);
                  const Rational alpha(1, 4);
                  std::vector<ApproxRange> ranges;
                  for (std::uint32_t s = 0; s < m.table().size(); ++s) ranges.push_back(approximate_range(g, m, v, AtomSet{s}, alpha));
                  for (std::uint32_t s = 1; s < ranges.size(); ++s) {
                    for (std::size_t a : AtomSet{s}.atoms()) {
                      if (!range_inside(ranges[s], ranges[s & ~(1U << a)])) return fail_at(AtomSet{s}, "range of a subset is smaller");
                    }
                  }
                  return std::nullopt;
                }});

  ps.push_back({"range-transfer", "approximate-range-transfer", 5, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return range_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& g = sc.measure("Gamma").multi();
                  const MultiSetFn& m = sc.measure("M").multi();
                  MultiSetFn m0 = integral_function(m);
                  AdditiveMeasure v = variation_measure(m);
                  for (std::uint32_t s = 1; s < m.table().size(); ++s) {
                    for (const Rational& alpha : kAlphas) {
                      ApproxRange r = approximate_range(g, m, v, AtomSet{s}, alpha);
                      if (!r.empty && !in_range(g, m0, v, AtomSet{s}, alpha, r.pick())) return fail_at(AtomSet{s}, "r left the range against M0");
                    }
                  }
                  return std::nullopt;
                }});

  ps.push_back({"rn-stage-bounds", "radon-nikodym-stages", 4, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) {
                  Scenario sc = make_scenario(rnd.space(k, 2));
                  int dim = any_dim(rnd);
                  std::vector<ConvexBody> atoms;
                  std::vector<Rational> s;
                  for (std::size_t a = 0; a < k; ++a) {
                    atoms.push_back(rnd.body_with_origin(dim));
                    s.push_back(rnd.rational(0, 12, 4));
                  }
                  MultiSetFn m = MultiSetFn::additive_from_atoms(atoms, ConvexBody::zero(dim));
                  add_measure(sc, "Gamma", rnd.scaled(m, s));
                  add_measure(sc, "M", m);
                  add_task(sc, Json{{"op", "rn"}, {"gamma", "Gamma"}, {"M", "M"}, {"tol", "1/256"}});
                  return sc;
                },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& g = sc.measure("Gamma").multi();
                  const MultiSetFn& m = sc.measure("M").multi();
                  RnResult r = rn_derive(sc.space, g, m, Rational(1, 256));
                  if (!r.r_bound_ok) return "|r| exceeded 1+2b";
                  if (!r.cauchy_ok) return "stage values not Cauchy at the stated rate";
                  if (!r.transfer_ok) return "stage value outside the range against M0";
                  if (!r.verification.passed) return "derivative does not reproduce Gamma, residual " + r.verification.max_residual.str();
                  return std::nullopt;
                }});

  ps.push_back({"strong-ac-transfer", "strong-absolute-continuity", 7, true,
                [](Random& rnd, std::size_t k, std::size_t, const AuditOptions&) { return range_scenario(rnd, k); },
                [](const Scenario& sc) -> Failure {
                  const MultiSetFn& g = sc.measure("Gamma").multi();
                  const MultiSetFn& m = sc.measure("M").multi();
                  Real b = strong_ac_constant(g, variation_measure(m));
                  Real b0 = strong_ac_constant(g, variation_measure(integral_function(m)));
                  return same(b, b0) ? Failure{} : Failure{"constants differ: " + b.str() + " vs " + b0.str()};
                }});

  return ps;
}

Failure checked(const Property& p, const Scenario& sc) {
  try {
    return p.check(sc);
  } catch (const std::exception& e) {
    return std::string("threw ") + e.what();
  }
}

/// Drops atoms one at a time while the property keeps failing.
Scenario shrink(const Property& p, Scenario sc) {
  if (!p.shrinkable) return sc;
  bool progress = true;
  while (progress && sc.space.atom_count() > 1) {
    progress = false;
    for (std::size_t a = 0; a < sc.space.atom_count(); ++a) {
      std::optional<Scenario> smaller;
      try {
        smaller = restrict_atoms(sc, sc.space.all() - AtomSet::single(a));
      } catch (const Error&) {
        continue;
      }
      if (checked(p, *smaller)) {
        sc = std::move(*smaller);
        progress = true;
        break;
      }
    }
  }
  return sc;
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t property, std::size_t atoms) {
  return seed * 1'000'003ULL + property * 1'009ULL + atoms;
}

}  // namespace

Scenario restrict_atoms(const Scenario& sc, AtomSet keep) {
  std::vector<std::size_t> kept = keep.atoms();
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> atoms;
  std::vector<std::size_t> old_points;
  for (std::size_t a : kept) {
    std::vector<std::size_t> block;
    for (std::size_t p : sc.space.atom_points(a)) {
      block.push_back(names.size());
      names.push_back(sc.space.point_names()[p]);
      old_points.push_back(p);
    }
    atoms.push_back(block);
  }
  Scenario out{FiniteSpace(names, atoms), {}, {}, sc.tasks, sc.config};
  auto expand = [&](AtomSet s) {
    AtomSet old;
    for (std::size_t i : s.atoms()) old = old | AtomSet::single(kept[i]);
    return old;
  };
  for (const auto& [name, m] : sc.measures) {
    NamedMeasure nm{m.generator, ScalarSetFn(0, {Rational(0)}), {}, m.claims};
    if (m.is_scalar()) {
      nm.fn = ScalarSetFn::from_fn(kept.size(), [&](AtomSet s) { return m.scalar()(expand(s)); });
      nm.flags = classify(std::get<ScalarSetFn>(nm.fn));
    } else {
      nm.fn = MultiSetFn::from_fn(kept.size(), [&](AtomSet s) { return m.multi()(expand(s)); });
      nm.flags = classify(std::get<MultiSetFn>(nm.fn));
    }
    out.measures.emplace(name, std::move(nm));
  }
  for (const auto& [name, f] : sc.integrands) {
    Integrand g;
    for (std::size_t p : old_points) g.values.push_back(f.values[p]);
    out.integrands.emplace(name, std::move(g));
  }
  return out;
}

AuditResult audit(const AuditOptions& options) {
  if (options.max_atoms == 0 || options.max_atoms > 10) {
    throw Error(ErrorKind::InvariantError, "audit needs 1 <= max_atoms <= 10");
  }
  AuditResult result;
  result.report.source = "audit seed=" + std::to_string(options.seed) + " max_atoms=" + std::to_string(options.max_atoms);
  const auto props = properties();
  for (std::size_t pi = 0; pi < props.size(); ++pi) {
    const Property& p = props[pi];
    for (std::size_t k = 1; k <= std::min(p.cap, options.max_atoms); ++k) {
      Random rnd(stream_seed(options.seed, pi, k));
      std::size_t passed = 0;
      Failure failure;
      std::optional<Scenario> witness;
      for (std::size_t i = 0; i < options.cases; ++i) {
        Scenario sc = p.generate(rnd, k, i, options);
        sc.config.seed = options.seed;
        failure = checked(p, sc);
        if (failure) {
          witness = std::move(sc);
          break;
        }
        ++passed;
      }
      std::string id = p.name + "/k=" + std::to_string(k);
      if (!failure) {
        result.report.rows.push_back(Check{id, p.tag, true, std::to_string(passed) + " cases", 0.0, kTol});
        continue;
      }
      Scenario small = shrink(p, std::move(*witness));
      Failure why = checked(p, small);
      result.report.rows.push_back(Check{id, p.tag, false,
                                         "case " + std::to_string(passed + 1) + ": " + why.value_or(*failure) + " (" +
                                             std::to_string(small.space.atom_count()) + " atoms after shrinking)",
                                         0.0, kTol});
      if (!result.counterexamples.count(p.name)) result.counterexamples.emplace(p.name, std::move(small));
    }
  }
  return result;
}

int run_audit(const AuditOptions& options, const std::filesystem::path& out_dir) {
  AuditResult r = audit(options);
  r.report.write(out_dir);
  for (const auto& [name, sc] : r.counterexamples) {
    std::ofstream out(out_dir / ("counterexample-" + name + ".json"));
    out << scenario_to_json(sc).dump(2) << "\n";
  }
  return r.report.passed() ? 0 : 1;
}

}  // namespace gouldrn
