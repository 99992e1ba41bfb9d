#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <optional>
#include <string>
#include <vector>

#include "gouldrn/set_function.hpp"

namespace gouldrn {

/// Real function on the points of a finite space.
struct Integrand {
  std::vector<Rational> values;  ///< indexed by point

  static Integrand constant(std::size_t points, const Rational& c) { return {std::vector<Rational>(points, c)}; }
  /// 1_E for a measurable E.
  static Integrand indicator(const FiniteSpace& space, AtomSet set);
  /// Constant a_i on atom i.
  static Integrand simple(const FiniteSpace& space, const std::vector<Rational>& atom_values);

  const Rational& operator()(std::size_t point) const { return values.at(point); }
  bool nonnegative() const;
  friend bool operator==(const Integrand&, const Integrand&) = default;
};

void require_integrand(const FiniteSpace& space, const Integrand& f);

Rational atom_min(const FiniteSpace& space, const Integrand& f, std::size_t atom);
Rational atom_max(const FiniteSpace& space, const Integrand& f, std::size_t atom);
/// sup - inf of f over the atom.
Rational oscillation(const FiniteSpace& space, const Integrand& f, std::size_t atom);
/// sup and inf of f over the points of a measurable set.
Rational block_sup(const FiniteSpace& space, const Integrand& f, AtomSet block);
Rational block_inf(const FiniteSpace& space, const Integrand& f, AtomSet block);

namespace detail {

inline void require_tag_sign(const ConvexBody&, const Rational& c) {
  if (c < 0) throw Error(ErrorKind::NegativeScale, "negative integrand value against a set-valued measure");
}
inline void require_tag_sign(const Rational&, const Rational&) {}
inline void require_tag_sign(const SupportFn&, const Rational&) {}

}  // namespace detail

/// Σ f(t_i)·m(A_i), Minkowski-summed for bodies (f(t_i) ≥ 0 required there).
template <class V>
V riemann_sum(const Integrand& f, const TaggedPartition& tp, const SetFunction<V>& m) {
  V total = m.zero();
  for (std::size_t i = 0; i < tp.partition.blocks.size(); ++i) {
    const Rational& c = f(tp.tags[i]);
    detail::require_tag_sign(m.zero(), c);
    total = add_values(total, scale_value(c, m(tp.partition.blocks[i])));
  }
  return total;
}

template <class V>
struct IntegrationReport {
  V value;                 ///< the common sum when integrable; first-point tags otherwise
  bool integrable = false;
  Partition certificate;   ///< atoms partition of E
  Real tag_spread;         ///< max distance between tag-choice sums at the certificate
  std::vector<std::size_t> offending_atoms;  ///< f oscillates and m(atom) ≠ 0
};

/// Largest distance between σ(c) and σ(¬c) over choices c of the extreme
/// integrand value (sup or inf) on each offending atom. This is the
/// diameter of the set of tag-choice sums at the atoms partition.
template <class V>
Real atoms_tag_spread(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m, AtomSet set,
                      const std::vector<std::size_t>& offending, const Guards& guards) {
  if (offending.empty()) return Real(0);
  if constexpr (std::is_same_v<V, Rational>) {
    Rational total;
    for (std::size_t a : offending) total += oscillation(space, f, a) * abs(m(AtomSet::single(a)));
    return Real(total);
  } else {
    if (offending.size() > guards.max_atoms) {
      throw Error(ErrorKind::TooLarge, std::to_string(offending.size()) + " oscillating atoms exceed the guard");
    }
    V base = m.zero();
    for (std::size_t a : (set).atoms()) {
      if (std::find(offending.begin(), offending.end(), a) != offending.end()) continue;
      base = add_values(base, scale_value(f(space.atom_points(a).front()), m(AtomSet::single(a))));
    }
    Real best;
    const std::size_t k = offending.size();
    // c and ¬c give the same pair, so the first offending atom is pinned
    for (std::uint32_t c = 0; c < (std::uint32_t{1} << (k - 1)); ++c) {
      V hi_side = base;
      V lo_side = base;
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t a = offending[j];
        const V& ma = m(AtomSet::single(a));
        bool up = j > 0 && ((c >> (j - 1)) & 1U);
        Rational x = up ? atom_min(space, f, a) : atom_max(space, f, a);
        Rational y = up ? atom_max(space, f, a) : atom_min(space, f, a);
        hi_side = add_values(hi_side, scale_value(x, ma));
        lo_side = add_values(lo_side, scale_value(y, ma));
      }
      Real d = distance(hi_side, lo_side);
      if (best < d) best = d;
    }
    return best;
  }
}

/// Gould integral of f over E. On a finite algebra the refinement net has a
/// maximum (the atoms partition of E), so f is integrable iff every tag
/// choice there gives the same sum, i.e. (f(t) - f(s))·m(A) = 0 for every
/// atom A ⊆ E and t, s ∈ A.
template <class V>
IntegrationReport<V> integrate(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m, AtomSet set,
                               const Guards& guards = {}) {
  space.require_set(set);
  require_integrand(space, f);
  IntegrationReport<V> report{m.zero(), true, Partition::atoms(set), Real(0), {}};
  for (std::size_t a : set.atoms()) {
    const V& ma = m(AtomSet::single(a));
    const Rational& c = f(space.atom_points(a).front());
    detail::require_tag_sign(ma, atom_min(space, f, a));
    report.value = add_values(report.value, scale_value(c, ma));
    if (oscillation(space, f, a) != 0 && !is_zero_value(ma)) report.offending_atoms.push_back(a);
  }
  report.integrable = report.offending_atoms.empty();
  report.tag_spread = atoms_tag_spread(space, f, m, set, report.offending_atoms, guards);
  return report;
}

/// λ_m(E) (scalar/embedded) or M₀(E) (bodies): the integral of 1 over E,
/// which is the sum of m over the atoms of E.
template <class V>
V integral_function(const SetFunction<V>& m, AtomSet set) {
  V total = m.zero();
  for (std::size_t a : set.atoms()) total = add_values(total, m(AtomSet::single(a)));
  return total;
}

/// λ_m or M₀ tabulated on the whole algebra.
template <class V>
SetFunction<V> integral_function(const SetFunction<V>& m) {
  std::vector<V> atoms;
  for (std::size_t a = 0; a < m.atom_count(); ++a) atoms.push_back(m(AtomSet::single(a)));
  return SetFunction<V>::additive_from_atoms(atoms, m.zero());
}

struct MultimeasureIntegral {
  ConvexBody value;           ///< M₀(T)
  ConvexBody bound;           ///< compact convex K containing every σ(1,P)
  ConvexBody hull_of_sums;    ///< hull of ∪_P σ(1,P) over all partitions
  Real gap;                   ///< h(hull_of_sums, value)
  bool sums_bounded = true;   ///< every σ(1,P) ⊆ bound
  std::size_t partitions = 0;
};

/// ∫_T M for a multisubmeasure: M₀(T), with the closure-of-union formula
/// checked by enumerating every partition of T.
MultimeasureIntegral integrate_multimeasure(const MultiSetFn& m, const Guards& guards = {});

struct TotalMeasurability {
  bool holds = false;
  AtomSet bad;           ///< atoms with osc(f, atom) ≥ ε
  Real bad_variation;    ///< v̄(bad)
  Partition witness;     ///< {bad} ∪ remaining atoms (bad omitted when empty)
};

/// Decides whether some partition {A₀,…,A_n} has v̄(A₀) < ε and osc(f, A_i)
/// < ε for i ≥ 1. The atom-level Bad set is optimal: any such partition
/// must put every atom of oscillation ≥ ε into A₀.
template <class V>
TotalMeasurability totally_measurable(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& mu,
                                      const Rational& eps, const Guards& guards = {}) {
  if (eps <= 0) throw Error(ErrorKind::InvariantError, "ε must be positive");
  TotalMeasurability out;
  std::vector<AtomSet> blocks;
  for (std::size_t a = 0; a < space.atom_count(); ++a) {
    if (oscillation(space, f, a) >= eps) {
      out.bad = out.bad | AtomSet::single(a);
    } else {
      blocks.push_back(AtomSet::single(a));
    }
  }
  out.bad_variation = variation(mu, out.bad, guards);
  out.holds = out.bad_variation < Real(eps);
  if (!out.bad.empty()) blocks.push_back(out.bad);
  out.witness = Partition::of(space.all(), std::move(blocks));
  return out;
}

struct SimpleApproximation {
  std::vector<Rational> epsilons;
  std::vector<Integrand> approximants;
  std::vector<Real> exceptional_mu_tilde;  ///< μ̃({|f_n - f| > ε_n})
};

/// Simple functions f_n, constant on the total-measurability witness blocks
/// for ε_n = 2^{-n}, n = 1..steps. Throws NotTotallyMeasurable at the first
/// failing ε.
template <class V>
SimpleApproximation simple_approx(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& mu,
                                  int steps = 20, const Guards& guards = {}) {
  SimpleApproximation out;
  for (int n = 1; n <= steps; ++n) {
    Rational eps = pow2(-n);
    TotalMeasurability tm = totally_measurable(space, f, mu, eps, guards);
    if (!tm.holds) {
      throw Error(ErrorKind::NotTotallyMeasurable, "fails at ε = " + to_string(eps));
    }
    Integrand fn = f;
    for (AtomSet block : tm.witness.blocks) {
      PointSet pts = space.points_of(block);
      std::size_t rep = space.atom_points(block.lowest()).front();
      for (std::size_t p = 0; p < space.point_count(); ++p) {
        if (pts.contains(p)) fn.values[p] = f(rep);
      }
    }
    PointSet exceptional;
    for (std::size_t p = 0; p < space.point_count(); ++p) {
      if (abs(Rational(fn(p) - f(p))) > eps) exceptional.insert(p);
    }
    out.epsilons.push_back(eps);
    out.exceptional_mu_tilde.push_back(mu_tilde(mu, space, exceptional, guards));
    out.approximants.push_back(std::move(fn));
  }
  return out;
}

/// Largest pairwise distance within a set of values.
template <class V>
Real diameter(const std::vector<V>& values) {
  if (values.empty()) return Real(0);
  if constexpr (std::is_same_v<V, Rational>) {
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return Real(Rational(*hi - *lo));
  } else {
    std::vector<const V*> distinct;
    for (const V& v : values) {
      if (std::none_of(distinct.begin(), distinct.end(), [&](const V* d) { return value_equal(*d, v); })) {
        distinct.push_back(&v);
      }
    }
    Real best;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        Real d = distance(*distinct[i], *distinct[j]);
        if (best < d) best = d;
      }
    }
    return best;
  }
}

/// Ob(f,E): the sup of ‖σ'' − σ'‖ over pairs of tagged partitions of E.
template <class V>
Real ob_bound(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m, AtomSet set,
              const Guards& guards = {}) {
  std::vector<V> sums;
  std::uint64_t total = 0;
  for_each_partition(set, guards, [&](const Partition& p) {
    total += tag_choice_count(space, p);
    if (total > guards.max_tag_choices) {
      throw Error(ErrorKind::TooLarge, "tagged partitions of " + set.str() + " exceed the guard");
    }
    for_each_tag_choice(space, p, guards, [&](const TaggedPartition& tp) { sums.push_back(riemann_sum(f, tp, m)); });
  });
  return diameter(sums);
}

/// Σ_{E ∈ Π} Ob(f, E).
template <class V>
Real ob_sum(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m, const Partition& partition,
            const Guards& guards = {}) {
  Real total;
  for (AtomSet b : partition.blocks) total += ob_bound(space, f, m, b, guards);
  return total;
}

/// Σ_{E ∈ Π} ‖f(τ_E)·m(E) − ∫_E f dm‖ for tags τ.
template <class V>
Real block_deviation_sum(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m,
                         const TaggedPartition& tp, const Guards& guards = {}) {
  Real total;
  for (std::size_t i = 0; i < tp.partition.blocks.size(); ++i) {
    AtomSet e = tp.partition.blocks[i];
    V local = scale_value(f(tp.tags[i]), m(e));
    total += distance(local, integrate(space, f, m, e, guards).value);
  }
  return total;
}

/// Lower and upper σ over all tag choices, per probe direction.
struct Envelope {
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  Rational max_width;
};

struct ChainEnvelopes {
  std::vector<Point2> directions;  ///< d=2 probes (unnormalised); empty otherwise
  std::vector<int> signs;          ///< d=1 probes (+1, -1); {+1} for scalar
  std::vector<Envelope> levels;
  bool widths_non_increasing = true;
  bool nested = true;
};

namespace detail {

inline std::vector<Rational> probe(const Rational& v, const ChainEnvelopes&) { return {v}; }
inline std::vector<Rational> probe(const ConvexBody& b, const ChainEnvelopes& e) {
  std::vector<Rational> out;
  if (b.dim() == 1) {
    for (int s : e.signs) out.push_back(support_value(b, s));
  } else {
    for (const auto& d : e.directions) out.push_back(support_value(b, d));
  }
  return out;
}
inline std::vector<Rational> probe(const SupportFn& f, const ChainEnvelopes& e) {
  std::vector<Rational> out;
  if (f.dim() == 1) {
    for (int s : e.signs) out.push_back(f.at(s));
  } else {
    for (const auto& d : e.directions) out.push_back(f.at(d));
  }
  return out;
}

inline void collect_bodies(const ConvexBody& b, std::vector<const ConvexBody*>& out) { out.push_back(&b); }
inline void collect_bodies(const SupportFn& f, std::vector<const ConvexBody*>& out) {
  out.push_back(&f.plus());
  out.push_back(&f.minus());
}
inline void collect_bodies(const Rational&, std::vector<const ConvexBody*>&) {}

inline int value_dim(const Rational&) { return 0; }
inline int value_dim(const ConvexBody& b) { return b.dim(); }
inline int value_dim(const SupportFn& f) { return f.dim(); }

}  // namespace detail

/// Per-direction envelopes of σ over tag choices along an increasing chain
/// of partitions. Support values are linear in the tags, so each bound is a
/// sum of per-block extremes and is exact. Throws NotAChain.
template <class V>
ChainEnvelopes chain_estimator(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m,
                               const std::vector<Partition>& chain) {
  require_integrand(space, f);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    bool ok = false;
    try {
      ok = is_refinement(chain[i - 1], chain[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CarrierMismatch) throw;
    }
    if (!ok) throw Error(ErrorKind::NotAChain, "partition " + std::to_string(i) + " does not refine its predecessor");
  }
  ChainEnvelopes env;
  const int dim = detail::value_dim(m.zero());
  if (dim == 0) {
    env.signs = {1};
  } else if (dim == 1) {
    env.signs = {1, -1};
  } else {
    std::vector<const ConvexBody*> bodies;
    for (const auto& p : chain) {
      for (AtomSet b : p.blocks) detail::collect_bodies(m(b), bodies);
    }
    env.directions = canonical_directions(bodies);
  }
  for (const auto& p : chain) {
    Envelope level;
    const std::size_t probes = dim == 2 ? env.directions.size() : env.signs.size();
    level.lower.assign(probes, Rational(0));
    level.upper.assign(probes, Rational(0));
    for (AtomSet b : p.blocks) {
      detail::require_tag_sign(m.zero(), block_inf(space, f, b));
      std::vector<Rational> h = detail::probe(m(b), env);
      Rational lo = block_inf(space, f, b);
      Rational hi = block_sup(space, f, b);
      for (std::size_t k = 0; k < probes; ++k) {
        Rational x = lo * h[k];
        Rational y = hi * h[k];
        level.lower[k] += std::min(x, y);
        level.upper[k] += std::max(x, y);
      }
    }
    for (std::size_t k = 0; k < probes; ++k) {
      Rational w = level.upper[k] - level.lower[k];
      if (dim == 2) w /= from_double(std::sqrt(to_double(norm2(env.directions[k]))));
      level.max_width = std::max(level.max_width, w);
    }
    if (!env.levels.empty()) {
      const Envelope& prev = env.levels.back();
      for (std::size_t k = 0; k < probes; ++k) {
        if (level.lower[k] < prev.lower[k] || level.upper[k] > prev.upper[k]) env.nested = false;
        if (level.upper[k] - level.lower[k] > prev.upper[k] - prev.lower[k]) env.widths_non_increasing = false;
      }
    }
    env.levels.push_back(std::move(level));
  }
  return env;
}

template <class V>
struct SeriesIntegral {
  V value;            ///< Σ c_n·m(A_n)
  V via_integrate;    ///< ∫_T Σ c_n 1_{A_n} dm
  bool agree = false;
};

/// Σ c_n·m(A_n) for pairwise disjoint A_n and additive m, checked against
/// the integral of the step function. Throws NotDisjoint or NotAdditive.
template <class V>
SeriesIntegral<V> series_integral(const FiniteSpace& space, const std::vector<Rational>& coeffs,
                                  const std::vector<AtomSet>& sets, const SetFunction<V>& m, const Flags& flags,
                                  const Guards& guards = {}) {
  if (coeffs.size() != sets.size()) throw Error(ErrorKind::InvariantError, "one coefficient per set is required");
  if (!flags.additive) throw Error(ErrorKind::NotAdditive, "series integrals need an additive set function");
  AtomSet seen;
  Integrand f = Integrand::constant(space.point_count(), 0);
  SeriesIntegral<V> out{m.zero(), m.zero(), false};
  for (std::size_t n = 0; n < sets.size(); ++n) {
    space.require_set(sets[n]);
    if (!sets[n].disjoint(seen)) throw Error(ErrorKind::NotDisjoint, "set " + sets[n].str() + " overlaps an earlier set");
    seen = seen | sets[n];
    detail::require_tag_sign(m.zero(), coeffs[n]);
    out.value = add_values(out.value, scale_value(coeffs[n], m(sets[n])));
    PointSet pts = space.points_of(sets[n]);
    for (std::size_t p = 0; p < space.point_count(); ++p) {
      if (pts.contains(p)) f.values[p] = coeffs[n];
    }
  }
  out.via_integrate = integrate(space, f, m, space.all(), guards).value;
  out.agree = value_equal(out.value, out.via_integrate);
  return out;
}

/// One row of a self-checking report.
struct Check {
  std::string id;
  std::string ref;   ///< property tag
  bool passed = false;
  std::string value;
  double residual = 0.0;
  double tolerance = 0.0;
};

/// f vs λ_m: same integrability verdict and equal integrals on E.
/// `reduced` replaces λ_m when given, which lets callers test a wrong reduction.
std::vector<Check> equivalence_suite(const FiniteSpace& space, const Integrand& f, const ScalarSetFn& m, AtomSet set,
                                     double tol, const Guards& guards = {}, const ScalarSetFn* reduced = nullptr);
std::vector<Check> equivalence_suite(const FiniteSpace& space, const Integrand& f, const EmbeddedSetFn& m,
                                     AtomSet set, double tol, const Guards& guards = {},
                                     const EmbeddedSetFn* reduced = nullptr);
/// f vs M₀ (same verdict, equal integrals) and U(∫f dM) = ∫f dU_M. f ≥ 0.
std::vector<Check> equivalence_suite(const FiniteSpace& space, const Integrand& f, const MultiSetFn& m, AtomSet set,
                                     double tol, const Guards& guards = {}, const MultiSetFn* reduced = nullptr);

struct VariationOfIntegral {
  bool variation_equal = true;
  bool inclusion = true;        ///< M(E) ⊆ M₀(E) for all E
  Real max_gap;                 ///< max_E |v_{M₀}(E) − v_M(E)|
  std::optional<AtomSet> first_variation_failure;
  std::optional<AtomSet> first_inclusion_failure;
};

/// Compares v_{M₀} and v_M on every measurable set, both by partition
/// enumeration when the guard allows. Throws NotMultisubmeasure.
VariationOfIntegral variation_of_integral(const MultiSetFn& m, double tol, const Guards& guards = {});

}  // namespace gouldrn
