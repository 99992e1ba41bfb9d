#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gouldrn/convex.hpp"
#include "gouldrn/error.hpp"
#include "gouldrn/real.hpp"
#include "gouldrn/space.hpp"
#include "gouldrn/support_fn.hpp"

namespace gouldrn {

// Value operations shared by scalar, convex-body and embedded set functions.

inline Real magnitude(const Rational& q) { return Real(abs(q)); }
inline Real magnitude(const ConvexBody& b) { return norm_h(b); }
inline Real magnitude(const SupportFn& f) { return sup_norm(f); }

inline Real distance(const Rational& a, const Rational& b) { return Real(abs(Rational(a - b))); }
inline Real distance(const ConvexBody& a, const ConvexBody& b) { return hausdorff(a, b); }
inline Real distance(const SupportFn& a, const SupportFn& b) { return sup_norm(a - b); }

/// The order used by monotonicity and subadditivity: ≤, ⊆, pointwise ≤.
inline bool value_leq(const Rational& a, const Rational& b) { return a <= b; }
inline bool value_leq(const ConvexBody& a, const ConvexBody& b) { return a.subset_of(b); }
inline bool value_leq(const SupportFn& a, const SupportFn& b) { return leq_on_fan(a, b); }

inline bool value_equal(const Rational& a, const Rational& b) { return a == b; }
inline bool value_equal(const ConvexBody& a, const ConvexBody& b) { return a == b; }
inline bool value_equal(const SupportFn& a, const SupportFn& b) { return equal_on_fan(a, b); }

inline Rational scale_value(const Rational& r, const Rational& v) { return r * v; }
inline ConvexBody scale_value(const Rational& r, const ConvexBody& v) { return scale(r, v); }
inline SupportFn scale_value(const Rational& r, const SupportFn& v) { return r * v; }

inline Rational add_values(const Rational& a, const Rational& b) { return a + b; }
inline ConvexBody add_values(const ConvexBody& a, const ConvexBody& b) { return a + b; }
inline SupportFn add_values(const SupportFn& a, const SupportFn& b) { return a + b; }

inline bool is_zero_value(const Rational& q) { return q == 0; }
inline bool is_zero_value(const ConvexBody& b) { return b.is_zero(); }
inline bool is_zero_value(const SupportFn& f) { return equal_on_fan(f, SupportFn::zero(f.dim())); }

/// Set function tabulated on the whole finite algebra, indexed by atom mask.
///
/// The empty set must map to zero (0, {0}, or the zero function); scalar
/// tables must be nonnegative; body tables must share one dimension.
template <class V>
class SetFunction {
 public:
  SetFunction(std::size_t atom_count, std::vector<V> table) : atom_count_(atom_count), table_(std::move(table)) {
    if (atom_count_ > FiniteSpace::kMaxAtoms) throw Error(ErrorKind::TooLarge, "too many atoms for a tabulated set function");
    if (table_.size() != (std::size_t{1} << atom_count_)) {
      throw Error(ErrorKind::InvariantError, "table must hold one value per measurable set");
    }
    validate();
  }

  /// Fills the table by summing atom values (Minkowski sums for bodies).
  static SetFunction additive_from_atoms(const std::vector<V>& atom_values, const V& zero) {
    std::vector<V> table(std::size_t{1} << atom_values.size(), zero);
    for (std::size_t s = 1; s < table.size(); ++s) {
      std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
      table[s] = add_values(table[s & (s - 1)], atom_values[low]);
    }
    return SetFunction(atom_values.size(), std::move(table));
  }

  template <class Fn>
  static SetFunction from_fn(std::size_t atom_count, Fn&& fn) {
    std::vector<V> table;
    table.reserve(std::size_t{1} << atom_count);
    for (std::size_t s = 0; s < (std::size_t{1} << atom_count); ++s) table.push_back(fn(AtomSet{static_cast<std::uint32_t>(s)}));
    return SetFunction(atom_count, std::move(table));
  }

  std::size_t atom_count() const { return atom_count_; }
  AtomSet all() const { return AtomSet::first_n(atom_count_); }
  const V& operator()(AtomSet s) const { return table_.at(s.bits); }
  const std::vector<V>& table() const { return table_; }
  const V& zero() const { return table_[0]; }

 private:
  void validate() const;

  std::size_t atom_count_;
  std::vector<V> table_;
};

template <>
inline void SetFunction<Rational>::validate() const {
  if (table_[0] != 0) throw Error(ErrorKind::InvariantError, "μ(∅) must be 0");
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (table_[s] < 0) {
      throw Error(ErrorKind::InvariantError, "μ" + AtomSet{static_cast<std::uint32_t>(s)}.str() + " is negative");
    }
  }
}

template <>
inline void SetFunction<ConvexBody>::validate() const {
  if (!table_[0].is_zero()) throw Error(ErrorKind::InvariantError, "M(∅) must be {0}");
  for (const auto& b : table_) require_same_dim(table_[0], b);
}

template <>
inline void SetFunction<SupportFn>::validate() const {
  if (!is_zero_value(table_[0])) throw Error(ErrorKind::InvariantError, "m(∅) must be the zero function");
  for (const auto& f : table_) {
    if (f.dim() != table_[0].dim()) throw Error(ErrorKind::DimMismatch, "embedded values of mixed dimension");
  }
}

using ScalarSetFn = SetFunction<Rational>;
using MultiSetFn = SetFunction<ConvexBody>;
using EmbeddedSetFn = SetFunction<SupportFn>;

inline int value_dim(const MultiSetFn& m) { return m.zero().dim(); }

/// U_M: the embedded mapping E ↦ U(M(E)).
EmbeddedSetFn embed(const MultiSetFn& m);

struct SetPair {
  AtomSet first;
  AtomSet second;
};

struct Flags {
  bool monotone = true;
  bool subadditive = true;
  bool additive = true;
  std::optional<SetPair> monotone_violation;     ///< A ⊆ B with F(A) ≰ F(B)
  std::optional<SetPair> subadditive_violation;  ///< disjoint A, B
  std::optional<SetPair> additive_violation;     ///< disjoint A, B

  /// Monotone and subadditive (a submeasure / multisubmeasure).
  bool submeasure() const { return monotone && subadditive; }
};

/// Exhaustive check of monotonicity over adjacent comparable pairs and of
/// subadditivity/additivity over all disjoint pairs.
template <class V>
Flags classify(const SetFunction<V>& f) {
  Flags flags;
  const AtomSet all = f.all();
  for (std::uint32_t s = 0; s <= all.bits; ++s) {
    AtomSet a{s};
    for (std::size_t atom : (all - a).atoms()) {
      AtomSet b = a | AtomSet::single(atom);
      if (flags.monotone && !value_leq(f(a), f(b))) {
        flags.monotone = false;
        flags.monotone_violation = SetPair{a, b};
      }
    }
    if (s == 0) continue;
    // disjoint partners b of a with lowest(a) < lowest(b) cover each
    // unordered pair once
    AtomSet rest = all - a;
    for_each_subset(rest, [&](AtomSet b) {
      if (b.empty() || b.lowest() < a.lowest()) return;
      if (!flags.subadditive && !flags.additive) return;
      auto sum = add_values(f(a), f(b));
      const auto& joined = f(a | b);
      if (flags.subadditive && !value_leq(joined, sum)) {
        flags.subadditive = false;
        flags.subadditive_violation = SetPair{a, b};
      }
      if (flags.additive && !value_equal(joined, sum)) {
        flags.additive = false;
        flags.additive_violation = SetPair{a, b};
      }
    });
  }
  return flags;
}

/// Brute-force variation: sup over partitions of E of Σ |F(E_i)|.
template <class V>
Real variation_by_enumeration(const SetFunction<V>& f, AtomSet set, const Guards& guards = {}) {
  require_enumerable(set, guards);
  std::map<std::uint32_t, Real> mags;
  for_each_subset(set, [&](AtomSet b) { mags.emplace(b.bits, magnitude(f(b))); });
  Real best;
  for_each_partition(set, guards, [&](const Partition& p) {
    Real total;
    for (AtomSet b : p.blocks) total += mags.at(b.bits);
    if (best < total) best = total;
  });
  return best;
}

/// Variation of F on E. For subadditive F the supremum is attained at the
/// atoms partition; otherwise every partition of E is enumerated (TooLarge
/// above the guard).
template <class V>
Real variation(const SetFunction<V>& f, AtomSet set, bool subadditive, const Guards& guards = {}) {
  if (subadditive) {
    Real total;
    for (std::size_t a : set.atoms()) total += magnitude(f(AtomSet::single(a)));
    return total;
  }
  return variation_by_enumeration(f, set, guards);
}

template <class V>
Real variation(const SetFunction<V>& f, AtomSet set, const Guards& guards = {}) {
  return variation(f, set, classify(f).subadditive, guards);
}

/// Variation on every measurable set, indexed by mask.
template <class V>
std::vector<Real> variation_table(const SetFunction<V>& f, const Guards& guards = {}) {
  const bool fast = classify(f).subadditive;
  std::vector<Real> out;
  out.reserve(f.table().size());
  for (std::size_t s = 0; s < f.table().size(); ++s) {
    out.push_back(variation(f, AtomSet{static_cast<std::uint32_t>(s)}, fast, guards));
  }
  return out;
}

/// Finitely additive nonnegative measure on a finite algebra, stored by its
/// atom weights. Variation measures of (multi)submeasures have this form.
class AdditiveMeasure {
 public:
  explicit AdditiveMeasure(std::vector<Real> atom_weights);
  /// Throws NotAdditive unless the table is additive over disjoint pairs.
  static AdditiveMeasure from_table(const std::vector<Real>& table, std::size_t atom_count, double tol = 0.0);

  Real operator()(AtomSet set) const;
  bool is_null(AtomSet set) const;
  std::size_t atom_count() const { return weights_.size(); }
  /// Atoms of weight zero.
  AtomSet null_atoms() const;
  const std::vector<Real>& weights() const { return weights_; }

 private:
  std::vector<Real> weights_;
};

/// v̄ (or v_M) as an additive measure; throws NotAdditive when F is not
/// subadditive and its brute-force variation fails to be additive.
template <class V>
AdditiveMeasure variation_measure(const SetFunction<V>& f, const Guards& guards = {}) {
  Flags flags = classify(f);
  if (flags.subadditive) {
    std::vector<Real> w;
    for (std::size_t a = 0; a < f.atom_count(); ++a) w.push_back(magnitude(f(AtomSet::single(a))));
    return AdditiveMeasure(std::move(w));
  }
  std::vector<Real> table;
  for (std::size_t s = 0; s < f.table().size(); ++s) {
    table.push_back(variation_by_enumeration(f, AtomSet{static_cast<std::uint32_t>(s)}, guards));
  }
  return AdditiveMeasure::from_table(table, f.atom_count(), 1e-9);
}

/// m*(E) = sup{|m(A)| : A measurable, A ⊆ E} for an arbitrary point set E.
template <class V>
Real semivariation(const SetFunction<V>& f, const FiniteSpace& space, PointSet points) {
  Real best;
  for_each_subset(space.interior(points), [&](AtomSet a) {
    Real m = magnitude(f(a));
    if (best < m) best = m;
  });
  return best;
}

/// μ̃(E) = inf{v̄(A) : E ⊆ A measurable} = v̄ of the atoms meeting E.
template <class V>
Real mu_tilde(const SetFunction<V>& f, const FiniteSpace& space, PointSet points, const Guards& guards = {}) {
  return variation(f, space.cover(points), guards);
}

/// A measurable B ⊆ E with 0 < v(B) < 2|F(B)|, searching atoms of E first
/// and then larger subsets. Throws NoWitnessNeeded when v(E) = 0.
template <class V>
AtomSet small_variation_witness(const SetFunction<V>& f, const AdditiveMeasure& v, AtomSet set) {
  if (v(set) == Real(0)) throw Error(ErrorKind::NoWitnessNeeded, "variation of " + set.str() + " is zero");
  std::vector<AtomSet> candidates;
  for_each_subset(set, [&](AtomSet b) {
    if (!b.empty()) candidates.push_back(b);
  });
  std::stable_sort(candidates.begin(), candidates.end(), [](AtomSet a, AtomSet b) { return a.size() < b.size(); });
  for (AtomSet b : candidates) {
    Real vb = v(b);
    if (Real(0) < vb && vb < Real(2) * magnitude(f(b))) return b;
  }
  throw Error(ErrorKind::InternalError, "no small-variation witness inside " + set.str());
}

enum class BlockOrder { SmallestFirst, LargestFirst };

using SetProperty = std::function<bool(AtomSet)>;

/// A μ-exhaustion of E by sets with the property: pairwise disjoint blocks
/// of positive measure whose uncovered residual is μ-null. On a finite
/// algebra the "residual smaller than every ε" clause is exactly this.
/// Blocks are searched exhaustively; throws NoExhaustion when none exists.
std::vector<AtomSet> build_exhaustion(const AdditiveMeasure& mu, AtomSet set, const SetProperty& has_property,
                                      BlockOrder order = BlockOrder::SmallestFirst);

/// Folds the null residual E₀ into the first block: B₁ = E₀ ∪ E₁, B_i = E_i.
/// Throws NotExhaustion when the input is not a μ-exhaustion of E. A null E
/// yields the empty family.
std::vector<AtomSet> complete_exhaustion(const std::vector<AtomSet>& exhaustion, AtomSet set,
                                         const AdditiveMeasure& mu);

/// Whether the family is a μ-exhaustion of E (disjoint, positive, null
/// residual, inside E).
bool is_exhaustion(const std::vector<AtomSet>& family, AtomSet set, const AdditiveMeasure& mu);

/// First pair (A, B) with μ(A), μ(B) > 0, μ(AΔB) = 0 and differing property,
/// or nullopt when the property is μ-null-difference on `universe`.
std::optional<SetPair> check_null_difference(const AdditiveMeasure& mu, AtomSet universe,
                                             const SetProperty& has_property);

/// Least b with |Γ(E)| <= b·v(E) for all E. Throws NotStronglyAC when some
/// |Γ(E)| > 0 sits on a v-null set.
template <class V>
Real strong_ac_constant(const SetFunction<V>& gamma, const AdditiveMeasure& v) {
  Real best;
  for (std::size_t s = 0; s < gamma.table().size(); ++s) {
    AtomSet e{static_cast<std::uint32_t>(s)};
    Real g = magnitude(gamma(e));
    Real ve = v(e);
    if (ve == Real(0)) {
      if (Real(0) < g) throw Error(ErrorKind::NotStronglyAC, "|Γ" + e.str() + "| > 0 on a null set");
      continue;
    }
    Real ratio = g / ve;
    if (best < ratio) best = ratio;
  }
  return best;
}

}  // namespace gouldrn
