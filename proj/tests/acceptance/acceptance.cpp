// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Sizes, tolerances and time limits are the contractual ones.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "gouldrn/random.hpp"
#include "gouldrn/rn.hpp"
#include "gouldrn/scenario.hpp"

using namespace gouldrn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body, double limit_s = 0) {
  Clock::time_point start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.fail(std::string("threw ") + e.what());
  }
  double elapsed = seconds_since(start);
  if (limit_s > 0 && elapsed >= limit_s) out.fail("took " + format_double(elapsed) + " s, limit " + format_double(limit_s) + " s");
  if (!out.passed) ++failures;
  std::printf("%s %2d %s (%.2f s)%s%s\n", out.passed ? "PASS" : "FAIL", id, name.c_str(), elapsed,
              out.detail.empty() ? "" : ": ", out.detail.c_str());
  std::fflush(stdout);
}

Random::Shape any_shape(Random& rnd) { return static_cast<Random::Shape>(rnd.below(4)); }

/// Body with |K|_h > 0 and 0 ∈ K.
ConvexBody heavy_body(Random& rnd, int dim) {
  while (true) {
    ConvexBody k = rnd.body_with_origin(dim);
    if (!k.is_zero()) return k;
  }
}

Outcome embedding_isometry() {
  Outcome out;
  Random rnd(101);
  double worst = 0;
  for (int dim = 1; dim <= 2; ++dim) {
    for (int i = 0; i < 1000; ++i) {
      ConvexBody a = rnd.body(dim);
      ConvexBody c = rnd.body(dim);
      Real h = hausdorff(a, c);
      SupportFn diff = embed(a) - embed(c);
      if (dim == 1) {
        Real n = sup_norm(diff);
        if (!(h.is_exact() && n.is_exact() && h == n)) out.fail("d=1 pair " + std::to_string(i) + ": " + h.str() + " vs " + n.str());
      } else {
        double gap = std::abs(h.value() - sup_norm_arcs(diff));
        worst = std::max(worst, gap);
        if (gap > 1e-9) out.fail("d=2 pair " + std::to_string(i) + " gap " + format_double(gap));
      }
    }
  }
  if (out.passed) out.detail = "2000 pairs, d=1 exact, d=2 max gap " + format_double(worst);
  return out;
}

Outcome variation_identities() {
  Outcome out;
  Random rnd(102);
  int additive = 0;
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 1 + rnd.below(8);
    ScalarSetFn f = rnd.scalar(n, any_shape(rnd));
    Flags fl = classify(f);
    for (std::size_t s = 0; s < f.table().size(); ++s) {
      AtomSet e{static_cast<std::uint32_t>(s)};
      Real fast = variation(f, e, fl.subadditive);
      Real brute = variation_by_enumeration(f, e);
      if (!(fast.is_exact() && fast == brute)) out.fail("scenario " + std::to_string(i) + " set " + e.str());
      if (fl.additive && !(brute == Real(f(e)))) out.fail("additive scenario " + std::to_string(i) + " set " + e.str());
    }
    additive += fl.additive ? 1 : 0;
  }
  if (out.passed) out.detail = "500 scenarios, " + std::to_string(additive) + " additive";
  return out;
}

Outcome finite_sums() {
  Outcome out;
  Random rnd(103);
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 1 + rnd.below(8);
    FiniteSpace space = FiniteSpace::singletons(n);
    if (i % 2 == 0) {
      ScalarSetFn m = rnd.scalar(n, any_shape(rnd));
      Integrand f = rnd.integrand(space, false);
      Rational expect = 0;
      for (std::size_t t = 0; t < n; ++t) expect += f(t) * m(AtomSet::single(t));
      auto r = integrate(space, f, m, space.all());
      if (!r.integrable || r.value != expect) out.fail("scalar scenario " + std::to_string(i));
    } else {
      int dim = 1 + static_cast<int>(rnd.below(2));
      MultiSetFn m = rnd.multi(n, dim, any_shape(rnd));
      Integrand f = rnd.integrand(space, true);
      ConvexBody expect = ConvexBody::zero(dim);
      for (std::size_t t = 0; t < n; ++t) expect = expect + scale(f(t), m(AtomSet::single(t)));
      auto r = integrate(space, f, m, space.all());
      if (!r.integrable || !(r.value == expect)) out.fail("set-valued scenario " + std::to_string(i));
    }
  }
  if (out.passed) out.detail = "500 scenarios, exact";
  return out;
}

template <class V>
bool additive_everywhere(const SetFunction<V>& lambda) {
  const AtomSet all = lambda.all();
  for (std::uint32_t s = 0; s <= all.bits; ++s) {
    AtomSet e{s};
    bool ok = true;
    for_each_subset(all - e, [&](AtomSet g) {
      if (ok && !value_equal(lambda(e | g), add_values(lambda(e), lambda(g)))) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

Outcome integral_function_additivity() {
  Outcome out;
  Random rnd(104);
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 1 + rnd.below(8);
    bool ok = false;
    switch (i % 3) {
      case 0:
        ok = additive_everywhere(integral_function(rnd.scalar(n, any_shape(rnd))));
        break;
      default:
        ok = additive_everywhere(integral_function(rnd.multi(n, i % 3, any_shape(rnd))));
        break;
    }
    if (!ok) out.fail("scenario " + std::to_string(i));
  }
  if (out.passed) out.detail = "500 scenarios, every disjoint pair, exact";
  return out;
}

Outcome equivalence() {
  Outcome out;
  Random rnd(105);
  int non_additive = 0, not_integrable = 0, checks = 0;
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 1 + rnd.below(6);
    FiniteSpace space = rnd.space(n);
    AtomSet e = rnd.subset(space.all());
    std::vector<Check> rows;
    if (i % 3 == 0) {
      ScalarSetFn m = rnd.scalar(n, any_shape(rnd));
      Integrand f = rnd.integrand(space, false);
      non_additive += classify(m).additive ? 0 : 1;
      not_integrable += integrate(space, f, m, e).integrable ? 0 : 1;
      rows = equivalence_suite(space, f, m, e, 1e-9);
    } else {
      int dim = i % 3;
      MultiSetFn m = rnd.multi(n, dim, any_shape(rnd));
      Integrand f = rnd.integrand(space, true);
      non_additive += classify(m).additive ? 0 : 1;
      not_integrable += integrate(space, f, m, e).integrable ? 0 : 1;
      // d=1 is held to exact agreement, d=2 to 1e-9
      rows = equivalence_suite(space, f, m, e, dim == 1 ? 0.0 : 1e-9);
    }
    for (const auto& c : rows) {
      ++checks;
      if (!c.passed) out.fail("scenario " + std::to_string(i) + " row " + c.id + " residual " + format_double(c.residual));
    }
  }
  if (non_additive == 0 || not_integrable == 0) out.fail("generator produced no non-additive or non-integrable cases");
  if (out.passed) {
    out.detail = "500 scenarios, " + std::to_string(checks) + " checks, " + std::to_string(non_additive) +
                 " non-additive, " + std::to_string(not_integrable) + " non-integrable";
  }
  return out;
}

Outcome multisubmeasure_integral() {
  Outcome out;
  Random rnd(106);
  double slowest = 0;
  double widest = 0;
  for (int i = 0; i < 40; ++i) {
    std::size_t n = 6 - (i % 3 == 2 ? rnd.below(3) : 0);
    int dim = 1 + i % 2;
    auto shape = i % 4 == 0 ? Random::Shape::Additive : Random::Shape::Submeasure;
    MultiSetFn m = rnd.multi(n, dim, shape);
    Clock::time_point start = Clock::now();
    MultimeasureIntegral r = integrate_multimeasure(m);
    double t = seconds_since(start);
    slowest = std::max(slowest, t);
    widest = std::max(widest, r.gap.value());
    if (r.gap.value() > 1e-9 || !r.sums_bounded) out.fail("scenario " + std::to_string(i) + " gap " + r.gap.str());
    if (n == 6 && r.partitions != 203) out.fail("scenario " + std::to_string(i) + " enumerated " + std::to_string(r.partitions));
    if (t >= 10) out.fail("scenario " + std::to_string(i) + " took " + format_double(t) + " s");
  }
  if (out.passed) {
    out.detail = "40 scenarios, max gap " + format_double(widest) + ", slowest " + format_double(slowest) + " s";
  }
  return out;
}

Outcome integral_variation() {
  Outcome out;
  Random rnd(107);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rnd.below(6);
    int dim = 1 + i % 2;
    auto shape = i % 3 == 0 ? Random::Shape::Additive : (i % 3 == 1 ? Random::Shape::Submeasure : Random::Shape::Monotone);
    MultiSetFn m = rnd.multi(n, dim, shape);
    if (!classify(m).submeasure()) continue;
    VariationOfIntegral r = variation_of_integral(m, dim == 1 ? 0.0 : 1e-9);
    if (dim == 1 && !r.max_gap.is_exact()) out.fail("scenario " + std::to_string(i) + " lost exactness");
    worst = std::max(worst, r.max_gap.value());
    if (!r.variation_equal) out.fail("scenario " + std::to_string(i) + " at " + r.first_variation_failure->str());
    if (!r.inclusion) out.fail("scenario " + std::to_string(i) + " inclusion at " + r.first_inclusion_failure->str());
  }
  if (out.passed) out.detail = "200 scenarios, max gap " + format_double(worst);
  return out;
}

Outcome rn_round_trip() {
  Outcome out;
  Random rnd(108);
  const Rational tol(1, 1000000);
  double worst_residual = 0;
  Rational worst_error = 0;
  int scenarios = 0;
  for (int i = 0; i < 12; ++i) {
    std::size_t n = i < 8 ? 6 : 3 + rnd.below(3);
    int dim = 1 + i % 2;
    FiniteSpace space = FiniteSpace::singletons(n);
    std::vector<ConvexBody> atoms;
    std::vector<Rational> s;
    for (std::size_t a = 0; a < n; ++a) {
      atoms.push_back(heavy_body(rnd, dim));
      s.push_back(rnd.rational(0, 12, 4));
    }
    MultiSetFn m = MultiSetFn::additive_from_atoms(atoms, ConvexBody::zero(dim));
    MultiSetFn gamma = rnd.scaled(m, s);
    RnResult r = rn_derive(space, gamma, m, tol);
    ++scenarios;
    const std::string tag = "scenario " + std::to_string(i);
    int final_n = r.stages.back().n;
    Rational bound = pow2(3 - final_n);
    for (std::size_t a = 0; a < n; ++a) {
      Rational err = abs(Rational(r.atom_values[a] - s[a]));
      worst_error = std::max(worst_error, err);
      if (err > bound) out.fail(tag + " atom " + std::to_string(a) + " off by " + to_string(err));
    }
    RnVerification v = verify_rn(space, gamma, m, r.derivative, 1e-6);
    if (v.residuals.size() != (std::size_t{1} << n)) out.fail(tag + " did not check every set");
    for (const Real& res : v.residuals) {
      worst_residual = std::max(worst_residual, res.value());
      if (res.value() > 1e-6) out.fail(tag + " residual " + res.str());
    }
    if (!v.passed) out.fail(tag + " verification failed");
    // stage bounds straight from the transcript
    double r_cap = 1 + 2 * r.b.value();
    for (const auto& st : r.stages) {
      for (const auto& x : st.r) {
        if (to_double(abs(x)) > r_cap + 1e-12) out.fail(tag + " stage " + std::to_string(st.n) + " |r| > 1+2b");
      }
    }
    for (std::size_t k = 0; k < r.stages.size(); ++k) {
      for (std::size_t j = k; j < r.stages.size(); ++j) {
        for (std::size_t a = 0; a < n; ++a) {
          Rational gap = abs(Rational(r.stages[k].f_atoms[a] - r.stages[j].f_atoms[a]));
          if (gap > pow2(2 - r.stages[k].n)) {
            out.fail(tag + " stages " + std::to_string(r.stages[k].n) + "," + std::to_string(r.stages[j].n) +
                     " differ by " + to_string(gap));
          }
        }
      }
    }
  }
  if (out.passed) {
    out.detail = std::to_string(scenarios) + " scenarios up to 6 atoms, max |f-s| " + format_double(to_double(worst_error)) +
                 ", max residual " + format_double(worst_residual);
  }
  return out;
}

Outcome adversarial() {
  Outcome out;
  Scenario sc = load_scenario("docs/examples/adversarial-rn.json");
  try {
    RnResult r = rn_derive(sc.space, sc.measure("Gamma").multi(), sc.measure("M").multi(), Rational(1, 1000));
    out.fail("returned a derivative with max residual " + r.verification.max_residual.str());
  } catch (const Error& e) {
    std::string msg = e.what();
    if (e.kind() != ErrorKind::HypothesisFailed) {
      out.fail("wrong error: " + msg);
    } else if (msg.find("HypothesisFailed: range-empty") != 0) {
      out.fail("names another hypothesis: " + msg);
    } else {
      out.detail = msg;
    }
  }
  return out;
}

Outcome oscillation_and_chains() {
  Outcome out;
  Random rnd(110);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rnd.below(6);
    FiniteSpace space = rnd.space(n, 3);
    const std::string tag = "scenario " + std::to_string(i);
    // chain from the trivial partition down to the atoms
    std::vector<Partition> chain{Partition::trivial(space.all())};
    while (!(chain.back() == Partition::atoms(space.all()))) {
      Partition next = rnd.refinement(chain.back());
      if (!(next == chain.back())) chain.push_back(next);
    }
    auto check = [&](const auto& m, const Integrand& f) {
      auto r = integrate(space, f, m, space.all());
      if (!r.integrable) out.fail(tag + " generated a non-integrable f");
      Partition atoms = Partition::atoms(space.all());
      Real ob = ob_sum(space, f, m, atoms);
      if (!(ob == Real(0))) out.fail(tag + " Ob sum " + ob.str());
      for (const auto& tp : enumerate_tag_choices(space, atoms)) {
        Real dev = block_deviation_sum(space, f, m, tp);
        if (!(dev == Real(0))) out.fail(tag + " block deviation " + dev.str());
      }
      ChainEnvelopes env = chain_estimator(space, f, m, chain);
      if (!env.nested) out.fail(tag + " envelopes not nested");
      if (env.levels.back().max_width != 0) out.fail(tag + " final width " + to_string(env.levels.back().max_width));
    };
    // integrable: constant on every atom the measure can see
    auto flatten = [&](Integrand f, const auto& m) {
      for (std::size_t a = 0; a < n; ++a) {
        if (is_zero_value(m(AtomSet::single(a)))) continue;
        for (std::size_t p : space.atom_points(a)) f.values[p] = f(space.atom_points(a).front());
      }
      return f;
    };
    if (i % 3 == 0) {
      ScalarSetFn m = rnd.scalar(n, Random::Shape::Additive);
      check(m, flatten(rnd.integrand(space, false, 60), m));
    } else {
      MultiSetFn m = rnd.multi(n, i % 3, Random::Shape::Additive);
      check(m, flatten(rnd.integrand(space, true, 60), m));
    }
  }
  if (out.passed) out.detail = "200 scenarios";
  return out;
}

}  // namespace

int main() {
  report(1, "embedding isometry", embedding_isometry, 5);
  report(2, "variation fast path and additive variation", variation_identities, 30);
  report(3, "finite integral as a pointwise sum", finite_sums);
  report(4, "additivity of integral functions", integral_function_additivity);
  report(5, "integral-function equivalence", equivalence);
  report(6, "set-valued integral as the hull of partition sums", multisubmeasure_integral);
  report(7, "variation of the integral function", integral_variation);
  report(8, "derivative round trip", rn_round_trip, 60);
  report(9, "adversarial derivative request fails loudly", adversarial);
  report(10, "oscillation sums and nested chain envelopes", oscillation_and_chains);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
