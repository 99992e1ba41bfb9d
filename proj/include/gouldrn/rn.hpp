#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gouldrn/integral.hpp"
#include "gouldrn/set_function.hpp"

namespace gouldrn {

/// The α-approximate range of Γ against M on E: all r ≥ 0 with
/// h(Γ(H), r·M(H)) ≤ α·v_M(H) for every measurable H ⊆ E.
///
/// Exact rational endpoints for d=1; double endpoints (bisection to 1e-12)
/// for d=2.
struct ApproxRange {
  bool empty = true;
  Real lo;
  std::optional<Real> hi;                  ///< nullopt: unbounded above
  std::map<std::uint32_t, double> slack;   ///< H ↦ α·v_M(H) − h(Γ(H), r·M(H)) at r = pick()
  std::optional<AtomSet> binding;          ///< a constraint that empties the range

  /// Midpoint of [lo, hi] (lo when unbounded); exact whenever both ends are.
  Rational pick() const;
};

/// sup over unit directions of |h_G(u) − r·h_M(u)|, i.e. h(G, r·M), for a
/// fixed pair of polygons and any r ≥ 0. Each arc of the merged normal fan
/// contributes one sinusoid, maximised in closed form.
class ArcProfile {
 public:
  ArcProfile(const ConvexBody& g, const ConvexBody& m);
  double operator()(double r) const;

 private:
  struct Arc {
    double start;
    double width;
    double gx, gy, mx, my;
  };
  std::vector<Arc> arcs_;
};

ApproxRange approximate_range(const MultiSetFn& gamma, const MultiSetFn& m, const AdditiveMeasure& v, AtomSet set,
                              const Rational& alpha);

/// Whether r lies in the α-approximate range of E (d=2 allows 1e-9 relative
/// slack).
bool in_range(const MultiSetFn& gamma, const MultiSetFn& m, const AdditiveMeasure& v, AtomSet set,
              const Rational& alpha, const Rational& r);

/// A v_M-exhaustion of E by sets with nonempty α-approximate range.
/// Requires v_M(E) > 0; throws NoExhaustion when none exists.
std::vector<AtomSet> check_exhaustive_hypothesis(const MultiSetFn& gamma, const MultiSetFn& m,
                                                 const AdditiveMeasure& v, const Rational& alpha, AtomSet set,
                                                 BlockOrder order = BlockOrder::SmallestFirst);

struct RnStage {
  int n = 0;
  Rational alpha;                    ///< 2^{-n}
  std::vector<AtomSet> blocks;       ///< the stage's exhaustion of T
  std::vector<std::size_t> parents;  ///< index of the enclosing previous-stage block
  std::vector<Rational> r;           ///< chosen value on each block
  std::vector<ApproxRange> ranges;
  std::vector<Rational> f_atoms;     ///< f_n on each atom
};

struct RnVerification {
  bool passed = true;
  Real max_residual;                  ///< max_E h(Γ(E), ∫_E f dM)
  Real max_embedded_residual;         ///< max_E ‖U_Γ(E) − ∫_E f dU_{M₀}‖
  std::vector<Real> residuals;        ///< indexed by set mask
  std::vector<AtomSet> violations;
  std::vector<AtomSet> not_integrable;
};

struct RnResult {
  Integrand derivative;
  std::vector<Rational> atom_values;
  std::vector<RnStage> stages;
  Real b;
  Real r_bound;                 ///< 1 + 2b
  Real max_abs_r;
  bool r_bound_ok = true;
  Real max_cauchy_gap;          ///< max over k ≤ n of |f_k − f_n| · 2^{k−2}; ≤ 1 when the bound holds
  bool cauchy_ok = true;
  bool transfer_ok = true;      ///< each chosen r also lies in the range against M₀
  Rational stop_bound;          ///< 2^{3−N}
  std::vector<std::string> diagnostics;
  RnVerification verification;
};

/// Builds f with Γ(E) = ∫_E f dM by the staged exhaustion construction:
/// stage n refines every stage-(n−1) block by a v_M-exhaustion whose blocks
/// have nonempty 2^{-n}-approximate range, takes r at each range midpoint
/// (clipped to [0, 1+2b]), and stops at the first N with 2^{3−N} ≤ tol.
///
/// Throws HypothesisFailed whose message starts with the broken
/// precondition: "additive", "multisubmeasure", "strong-ac", "exhaustion" or
/// "range-empty".
RnResult rn_derive(const FiniteSpace& space, const MultiSetFn& gamma, const MultiSetFn& m, const Rational& tol,
                   const Guards& guards = {});

/// h(Γ(E), ∫_E f dM) ≤ tol on every measurable E, plus the embedded
/// identity against M₀. Requires f ≥ 0.
RnVerification verify_rn(const FiniteSpace& space, const MultiSetFn& gamma, const MultiSetFn& m, const Integrand& f,
                         double tol, const Guards& guards = {});

/// First stage index whose uniform bound 2^{3−n} is within tol.
int rn_stage_count(const Rational& tol);

}  // namespace gouldrn
