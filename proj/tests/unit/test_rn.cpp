#include <doctest.h>

#include <cmath>

#include "gouldrn/random.hpp"
#include "gouldrn/rn.hpp"
#include "gouldrn/scenario.hpp"
#include "oracles.hpp"

using namespace gouldrn;

namespace {

ConvexBody iv(Rational lo, Rational hi) { return ConvexBody::interval(lo, hi); }

MultiSetFn additive1(std::initializer_list<std::pair<long, long>> atoms) {
  std::vector<ConvexBody> bodies;
  for (const auto& [lo, hi] : atoms) bodies.push_back(iv(lo, hi));
  return MultiSetFn::additive_from_atoms(bodies, ConvexBody::zero(1));
}

std::string hypothesis_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HypothesisFailed) return e.what();
    return "other: " + std::string(e.what());
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind("HypothesisFailed: " + prefix, 0) == 0;
}

double h1(const ConvexBody& a, double r, const ConvexBody& m) {
  double lo = to_double(a.lo()) - r * to_double(m.lo());
  double hi = to_double(a.hi()) - r * to_double(m.hi());
  return std::max(std::abs(lo), std::abs(hi));
}

/// Feasible r on a grid of step `step` over [0, top], d=1 only.
struct GridScan {
  std::optional<double> lo, hi;
  double min_violation = 1e300;
};

GridScan grid_scan(const MultiSetFn& g, const MultiSetFn& m, const AdditiveMeasure& v, AtomSet e, double alpha,
                   double top, double step) {
  GridScan out;
  for (double r = 0; r <= top + 1e-12; r += step) {
    double worst = -1e300;
    for_each_subset(e, [&](AtomSet h) { worst = std::max(worst, h1(g(h), r, m(h)) - alpha * v(h).value()); });
    out.min_violation = std::min(out.min_violation, worst);
    if (worst <= 1e-12) {
      if (!out.lo) out.lo = r;
      out.hi = r;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("range of a scalar multiple contains the multiple") {
  MultiSetFn m = additive1({{0, 1}, {-1, 2}, {0, 3}});
  AdditiveMeasure v = variation_measure(m);
  for (Rational c : {Rational(0), Rational(1, 3), Rational(2)}) {
    MultiSetFn g = MultiSetFn::from_fn(3, [&](AtomSet s) { return scale(c, m(s)); });
    for (Rational alpha : {Rational(0), Rational(1, 8), Rational(1)}) {
      for_each_subset(m.all(), [&](AtomSet e) {
        ApproxRange r = approximate_range(g, m, v, e, alpha);
        CHECK_FALSE(r.empty);
        CHECK(in_range(g, m, v, e, alpha, c));
      });
    }
  }
}

TEST_CASE("exact ranges vanish when no scalar relation exists") {
  // hull-union M is strictly subadditive; Γ = M₀ is not a multiple of M on T
  MultiSetFn m = MultiSetFn::from_fn(2, [](AtomSet s) {
    ConvexBody out = ConvexBody::zero(1);
    if (s.contains(0)) out = hull_union(out, iv(0, 1));
    if (s.contains(1)) out = hull_union(out, iv(0, 2));
    return out;
  });
  MultiSetFn m0 = integral_function(m);
  AdditiveMeasure v = variation_measure(m);
  Real b = strong_ac_constant(m0, v);
  ApproxRange r = approximate_range(m0, m, v, m.all(), 0);
  CHECK(r.empty);
  REQUIRE(r.binding.has_value());
  // g_H is Lipschitz in r with constant |M(H)|_h ≤ 2, so a grid margin
  // larger than 2·step rules out every r in between
  double step = 1e-4;
  GridScan scan = grid_scan(m0, m, v, m.all(), 0.0, 1 + 2 * b.value(), step);
  CHECK_FALSE(scan.lo.has_value());
  CHECK(scan.min_violation > 2 * step);
}

TEST_CASE("d=1 ranges match a dense grid scan") {
  Random rnd(51);
  int nonempty = 0;
  for (int i = 0; i < 40; ++i) {
    MultiSetFn m = rnd.multi(3, 1, Random::Shape::Additive);
    MultiSetFn g = rnd.multi(3, 1, Random::Shape::Additive);
    if (i % 2 == 0) {
      // near-multiples of M, so that many ranges are nonempty
      std::vector<Rational> s;
      for (int a = 0; a < 3; ++a) s.push_back(rnd.rational(0, 8, 4));
      g = rnd.scaled(m, s);
      if (rnd.coin()) {
        std::vector<ConvexBody> atoms;
        for (std::size_t a = 0; a < 3; ++a) atoms.push_back(g(AtomSet::single(a)));
        atoms[rnd.below(3)] = atoms[0] + iv(0, Rational(1, 8));
        g = MultiSetFn::additive_from_atoms(atoms, ConvexBody::zero(1));
      }
    }
    AdditiveMeasure v = variation_measure(m);
    AtomSet e = rnd.subset(m.all());
    if (v(e) == Real(0)) continue;  // unbounded above
    ApproxRange r = approximate_range(g, m, v, e, Rational(1, 4));
    GridScan scan = grid_scan(g, m, v, e, 0.25, 40, 1e-4);
    CHECK(r.empty == !scan.lo.has_value());
    if (r.empty || !scan.lo) continue;
    REQUIRE(r.hi.has_value());
    CHECK(std::abs(r.lo.value() - *scan.lo) <= 1e-4);
    CHECK(std::abs(r.hi->value() - *scan.hi) <= 1e-4);
    ++nonempty;
  }
  CHECK(nonempty > 10);
}

TEST_CASE("ranges shrink with smaller alpha and larger sets") {
  Random rnd(52);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = 1 + rnd.below(4);
    int dim = 1 + static_cast<int>(rnd.below(2));
    MultiSetFn m = rnd.multi(n, dim, Random::Shape::Additive);
    MultiSetFn g = rnd.multi(n, dim, Random::Shape::Additive);
    AdditiveMeasure v = variation_measure(m);
    AtomSet e = rnd.subset(m.all());
    AtomSet sub = rnd.subset(e);
    Rational a1 = rnd.rational(0, 8, 8);
    Rational a2 = a1 + rnd.rational(0, 8, 8);
    ApproxRange small = approximate_range(g, m, v, e, a1);
    if (small.empty) continue;
    Rational r = small.pick();
    CHECK(in_range(g, m, v, e, a1, r));
    CHECK(in_range(g, m, v, e, a2, r));
    CHECK(in_range(g, m, v, sub, a1, r));
    // and against the integral function of M
    CHECK(in_range(g, integral_function(m), variation_measure(integral_function(m)), e, a1, r));
  }
}

TEST_CASE("exhaustive hypothesis") {
  MultiSetFn m = additive1({{0, 1}, {-1, 2}, {0, 3}});
  AdditiveMeasure v = variation_measure(m);
  MultiSetFn g = MultiSetFn::from_fn(3, [&](AtomSet s) { return scale(2, integral_function(m, s)); });
  auto ex = check_exhaustive_hypothesis(g, m, v, Rational(1, 16), m.all());
  CHECK(is_exhaustion(ex, m.all(), v));

  Random rnd(53);
  MultiSetFn scaled = rnd.scaled(m, {Rational(1), Rational(5, 2), Rational(1, 4)});
  for (int k = 1; k <= 12; ++k) {
    auto atoms = check_exhaustive_hypothesis(scaled, m, v, pow2(-k), m.all());
    CHECK(atoms.size() == 3);
  }

  Scenario adv = load_scenario("docs/examples/adversarial-rn.json");
  const MultiSetFn& am = adv.measure("M").multi();
  const MultiSetFn& ag = adv.measure("Gamma").multi();
  AdditiveMeasure av = variation_measure(am);
  CHECK_THROWS_AS(check_exhaustive_hypothesis(ag, am, av, Rational(1, 2), am.all()), Error);
}

TEST_CASE("derivative of a scalar multiple is the constant") {
  MultiSetFn m = additive1({{0, 1}, {-1, 2}, {0, 3}});
  FiniteSpace s = FiniteSpace::singletons(3);
  MultiSetFn g = MultiSetFn::from_fn(3, [&](AtomSet e) { return scale(Rational(3, 2), m(e)); });
  RnResult r = rn_derive(s, g, m, Rational(1, 1000));
  for (const auto& x : r.derivative.values) CHECK(x == Rational(3, 2));
  for (const auto& x : r.stages.front().f_atoms) CHECK(x == Rational(3, 2));
  CHECK(r.verification.max_residual == Real(0));
}

TEST_CASE("known densities are recovered") {
  MultiSetFn m = additive1({{0, 1}, {-1, 2}, {0, 3}});
  FiniteSpace s = FiniteSpace::singletons(3);
  Random rnd(54);
  std::vector<Rational> dens{1, 2, 3};
  MultiSetFn g = rnd.scaled(m, dens);
  RnResult r = rn_derive(s, g, m, Rational(1, 1000000));
  CHECK(r.atom_values == dens);
  CHECK(static_cast<int>(r.stages.size()) == rn_stage_count(Rational(1, 1000000)));
  CHECK(r.stop_bound <= Rational(1, 1000000));
  CHECK(r.verification.passed);

  // stage bounds, recomputed from the transcript
  double bound = 1 + 2 * r.b.value();
  for (const auto& st : r.stages) {
    for (const auto& x : st.r) CHECK(to_double(x) <= bound + 1e-12);
    CHECK(st.alpha == pow2(-st.n));
  }
  for (std::size_t k = 0; k < r.stages.size(); ++k) {
    for (std::size_t n = k; n < r.stages.size(); ++n) {
      for (std::size_t a = 0; a < 3; ++a) {
        Rational gap = abs(Rational(r.stages[k].f_atoms[a] - r.stages[n].f_atoms[a]));
        CHECK(gap <= pow2(2 - r.stages[k].n));
      }
    }
  }
  CHECK(r.r_bound_ok);
  CHECK(r.cauchy_ok);
  CHECK(r.transfer_ok);
}

TEST_CASE("planar densities are recovered within the stage bound") {
  Random rnd(55);
  for (int i = 0; i < 6; ++i) {
    std::size_t n = 2 + rnd.below(3);
    FiniteSpace s = FiniteSpace::singletons(n);
    MultiSetFn m = rnd.multi(n, 2, Random::Shape::Additive);
    std::vector<Rational> dens;
    for (std::size_t a = 0; a < n; ++a) dens.push_back(rnd.rational(0, 12, 4));
    MultiSetFn g = rnd.scaled(m, dens);
    RnResult r = rn_derive(s, g, m, Rational(1, 1000));
    AdditiveMeasure v = variation_measure(m);
    for (std::size_t a = 0; a < n; ++a) {
      if (v(AtomSet::single(a)) == Real(0)) continue;
      CHECK(abs(Rational(r.atom_values[a] - dens[a])) <= r.stop_bound);
    }
    CHECK(r.verification.max_residual.value() <= 1e-3);
  }
}

TEST_CASE("verification reports perturbations") {
  MultiSetFn m = additive1({{0, 1}, {-1, 2}, {0, 3}});
  FiniteSpace s = FiniteSpace::singletons(3);
  Random rnd(56);
  MultiSetFn g = rnd.scaled(m, {Rational(1), Rational(2), Rational(3)});
  Integrand good{{Rational(1), Rational(2), Rational(3)}};
  CHECK(verify_rn(s, g, m, good, 1e-9).passed);

  Integrand bumped = good;
  bumped.values[2] += 1;
  RnVerification bad = verify_rn(s, g, m, bumped, 1e-9);
  CHECK_FALSE(bad.passed);
  CHECK(std::find(bad.violations.begin(), bad.violations.end(), AtomSet::single(2)) != bad.violations.end());
  for (AtomSet e : bad.violations) CHECK(e.contains(2));
  CHECK(bad.residuals[AtomSet::single(2).bits] == Real(3));

  MultiSetFn zero = MultiSetFn::from_fn(3, [](AtomSet) { return ConvexBody::zero(2); });
  Integrand any{{Rational(5), Rational(0), Rational(7, 3)}};
  RnVerification z = verify_rn(s, zero, zero, any, 0.0);
  CHECK(z.passed);
  CHECK(z.max_residual == Real(0));
}

TEST_CASE("broken hypotheses are named") {
  FiniteSpace s = FiniteSpace::singletons(2);
  MultiSetFn m = additive1({{0, 1}, {0, 2}});

  MultiSetFn hull = MultiSetFn::from_fn(2, [](AtomSet e) {
    return e.empty() ? ConvexBody::zero(1) : (e.size() == 1 ? iv(0, 1) : iv(0, 1));
  });
  CHECK(starts_with(hypothesis_message([&] { rn_derive(s, hull, m, Rational(1, 100)); }), "additive"));

  MultiSetFn shifted = additive1({{1, 2}, {0, 1}});
  CHECK(starts_with(hypothesis_message([&] { rn_derive(s, shifted, m, Rational(1, 100)); }), "multisubmeasure"));

  MultiSetFn half = additive1({{0, 1}, {0, 0}});
  MultiSetFn other = additive1({{0, 0}, {0, 1}});
  CHECK(starts_with(hypothesis_message([&] { rn_derive(s, other, half, Rational(1, 100)); }), "strong-ac"));

  Scenario adv = load_scenario("docs/examples/adversarial-rn.json");
  std::string msg = hypothesis_message([&] {
    rn_derive(adv.space, adv.measure("Gamma").multi(), adv.measure("M").multi(), Rational(1, 1000));
  });
  CHECK(starts_with(msg, "range-empty"));
}

TEST_CASE("stage count") {
  CHECK(rn_stage_count(Rational(1)) == 3);
  CHECK(rn_stage_count(Rational(1, 1000000)) == 23);
  CHECK(rn_stage_count(Rational(8)) == 1);
}
