#include "gouldrn/rn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gouldrn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBisectTol = 1e-12;
constexpr double kRouteTol = 1e-9;

double angle_of(const Point2& d) { return std::atan2(to_double(d.y), to_double(d.x)); }

double wrap(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

/// Feasible r for one constraint H.
struct Constraint {
  bool empty = false;
  Real lo;
  std::optional<Real> hi;
};

// {r ≥ 0 : |a − r·b| ≤ c}, exact
Constraint abs_constraint(const Rational& a, const Rational& b, const Rational& c) {
  Constraint out;
  if (b == 0) {
    out.empty = abs(a) > c;
    return out;
  }
  Rational x = (a - c) / b;
  Rational y = (a + c) / b;
  if (b < 0) std::swap(x, y);
  Rational lo = x > 0 ? x : Rational(0);
  out.lo = Real(lo);
  out.hi = Real(y);
  out.empty = y < lo;
  return out;
}

void intersect_into(Constraint& acc, const Constraint& c) {
  if (c.empty) acc.empty = true;
  if (acc.empty) return;
  if (acc.lo < c.lo) acc.lo = c.lo;
  if (c.hi && (!acc.hi || *c.hi < *acc.hi)) acc.hi = c.hi;
}

bool exact_interval(const Constraint& c) { return c.lo.is_exact() && (!c.hi || c.hi->is_exact()); }

// Closes an intersection: exact intervals are strict, double ones absorb
// bisection-level crossings by collapsing to the midpoint.
void settle(Constraint& acc) {
  if (acc.empty || !acc.hi || !(*acc.hi < acc.lo)) return;
  if (exact_interval(acc)) {
    acc.empty = true;
    return;
  }
  double lo = acc.lo.value();
  double hi = acc.hi->value();
  if (lo - hi <= 1e-9 * std::max(1.0, std::abs(hi))) {
    acc.lo = Real::approximate((lo + hi) / 2);
    acc.hi = acc.lo;
  } else {
    acc.empty = true;
  }
}

Constraint polygon_constraint(const ConvexBody& g, const ConvexBody& m, const ArcProfile& prof, double c) {
  Constraint out;
  const double mg = norm_h(g).value();
  if (m.is_zero()) {
    out.empty = mg > c + kBisectTol * std::max({1.0, mg, c});
    return out;
  }
  const double mm = norm_h(m).value();
  const double big = (c + mg) / mm + 1.0;
  const double feas = kBisectTol * std::max({1.0, mg, c, mm * big});
  auto ok = [&](double r) { return prof(r) <= c + feas; };

  double a = 0.0;
  double b = big;
  for (int i = 0; i < 200 && b - a > kBisectTol * big * 1e-3; ++i) {
    double m1 = a + (b - a) / 3;
    double m2 = b - (b - a) / 3;
    if (prof(m1) <= prof(m2)) {
      b = m2;
    } else {
      a = m1;
    }
  }
  const double best = (a + b) / 2;
  if (!ok(best)) {
    out.empty = true;
    return out;
  }
  auto bisect = [&](double in, double outside) {
    // `in` feasible, `outside` not; returns the feasible end
    for (int i = 0; i < 200 && std::abs(outside - in) > kBisectTol * std::max(1.0, big); ++i) {
      double mid = (in + outside) / 2;
      (ok(mid) ? in : outside) = mid;
    }
    return in;
  };
  const double lo = ok(0.0) ? 0.0 : bisect(best, 0.0);
  const double hi = bisect(best, big);
  out.lo = lo == 0.0 ? Real(0) : Real::approximate(lo);
  out.hi = Real::approximate(hi);
  return out;
}

/// Caches per-(H, α) constraints and per-H arc profiles so that ranges of
/// many candidate blocks are cheap intersections.
class RangeEngine {
 public:
  RangeEngine(const MultiSetFn& gamma, const MultiSetFn& m, const AdditiveMeasure& v)
      : gamma_(gamma), m_(m), v_(v), dim_(value_dim(m)) {
    if (gamma.atom_count() != m.atom_count() || v.atom_count() != m.atom_count()) {
      throw Error(ErrorKind::InvariantError, "Γ, M and v_M live on different algebras");
    }
    require_same_dim(gamma.zero(), m.zero());
  }

  ApproxRange range(AtomSet set, const Rational& alpha, bool with_slack) {
    if (alpha < 0) throw Error(ErrorKind::InvariantError, "α must be nonnegative");
    Constraint acc;
    std::optional<AtomSet> binding;
    for_each_subset(set, [&](AtomSet h) {
      if (h.empty() || acc.empty) return;
      intersect_into(acc, constraint(h, alpha));
      settle(acc);
      if (acc.empty) binding = h;
    });
    ApproxRange out;
    out.empty = acc.empty;
    out.binding = binding;
    if (acc.empty) return out;
    out.lo = acc.lo;
    out.hi = acc.hi;
    if (with_slack) fill_slack(out, set, alpha);
    return out;
  }

  bool contains(AtomSet set, const Rational& alpha, const Rational& r) const {
    bool ok = true;
    for_each_subset(set, [&](AtomSet h) {
      if (!ok || h.empty()) return;
      Real c = Real(alpha) * v_(h);
      Real d = hausdorff(gamma_(h), scale(r, m_(h)));
      // d=2 ranges come from bisection, so their points get the same slack
      if (dim_ == 1) {
        ok = d <= c;
      } else {
        ok = d.value() <= c.value() + kRouteTol * std::max({1.0, c.value(), norm_h(gamma_(h)).value()});
      }
    });
    return ok;
  }

 private:
  const Constraint& constraint(AtomSet h, const Rational& alpha) {
    auto key = std::make_pair(h.bits, alpha);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const ConvexBody& g = gamma_(h);
    const ConvexBody& m = m_(h);
    Real c = Real(alpha) * v_(h);
    Constraint out;
    if (dim_ == 1) {
      intersect_into(out, abs_constraint(g.lo(), m.lo(), c.rational()));
      intersect_into(out, abs_constraint(g.hi(), m.hi(), c.rational()));
      settle(out);
    } else {
      out = polygon_constraint(g, m, profile(h), c.value());
    }
    return cache_.emplace(key, out).first->second;
  }

  // Both formulations at the picked r: the Hausdorff distance and the
  // sup-norm of the embedded difference.
  void fill_slack(ApproxRange& out, AtomSet set, const Rational& alpha) {
    const Rational r = out.pick();
    for_each_subset(set, [&](AtomSet h) {
      if (h.empty()) return;
      const ConvexBody& g = gamma_(h);
      const ConvexBody& m = m_(h);
      Real direct = hausdorff(g, scale(r, m));
      double embedded;
      if (dim_ == 1) {
        Real e = sup_norm(embed(g) - r * embed(m));
        if (e != direct) throw Error(ErrorKind::InternalError, "range routes disagree on " + h.str());
        embedded = e.value();
      } else {
        embedded = profile(h)(to_double(r));
        double scale_h = std::max({1.0, direct.value(), norm_h(g).value()});
        if (std::abs(embedded - direct.value()) > kRouteTol * scale_h) {
          throw Error(ErrorKind::InternalError, "range routes disagree on " + h.str() + ": " + direct.str() + " vs " +
                                                    format_double(embedded));
        }
      }
      out.slack[h.bits] = (Real(alpha) * v_(h)).value() - direct.value();
    });
  }

  const ArcProfile& profile(AtomSet h) {
    auto it = profiles_.find(h.bits);
    if (it == profiles_.end()) it = profiles_.emplace(h.bits, ArcProfile(gamma_(h), m_(h))).first;
    return it->second;
  }

  const MultiSetFn& gamma_;
  const MultiSetFn& m_;
  const AdditiveMeasure& v_;
  int dim_;
  std::map<std::pair<std::uint32_t, Rational>, Constraint> cache_;
  std::map<std::uint32_t, ArcProfile> profiles_;
};

}  // namespace

Rational ApproxRange::pick() const {
  if (empty) throw Error(ErrorKind::InternalError, "picking from an empty range");
  if (!hi) return lo.is_exact() ? lo.rational() : from_double(lo.value());
  if (lo.is_exact() && hi->is_exact()) return (lo.rational() + hi->rational()) / 2;
  return from_double((lo.value() + hi->value()) / 2);
}

ArcProfile::ArcProfile(const ConvexBody& g, const ConvexBody& m) {
  require_same_dim(g, m);
  if (g.dim() == 1) {
    // directions +1 and −1 as two degenerate arcs
    arcs_.push_back({0.0, 0.0, to_double(g.hi()), 0.0, to_double(m.hi()), 0.0});
    arcs_.push_back({std::numbers::pi, 0.0, -to_double(g.lo()), 0.0, -to_double(m.lo()), 0.0});
    return;
  }
  std::vector<Point2> dirs = canonical_directions(std::vector<const ConvexBody*>{&g, &m});
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Point2& d = dirs[k];
    const Point2& next = dirs[(k + 1) % dirs.size()];
    double start = wrap(angle_of(d));
    double width = wrap(angle_of(next) - angle_of(d));
    if (dirs.size() == 1) width = kTwoPi;
    const Point2& gv = support_vertex(g, d);
    const Point2& mv = support_vertex(m, d);
    arcs_.push_back({start, width, to_double(gv.x), to_double(gv.y), to_double(mv.x), to_double(mv.y)});
  }
}

double ArcProfile::operator()(double r) const {
  double best = 0.0;
  for (const Arc& a : arcs_) {
    double wx = a.gx - r * a.mx;
    double wy = a.gy - r * a.my;
    if (a.width == 0.0) {
      // d=1: wx is the signed support difference at this direction
      best = std::max(best, std::abs(wx));
      continue;
    }
    auto at = [&](double t) { return std::abs(wx * std::cos(t) + wy * std::sin(t)); };
    best = std::max({best, at(a.start), at(a.start + a.width)});
    double norm = std::hypot(wx, wy);
    if (norm > 0) {
      double phi = std::atan2(wy, wx);
      if (wrap(phi - a.start) <= a.width || wrap(phi + std::numbers::pi - a.start) <= a.width) {
        best = std::max(best, norm);
      }
    }
  }
  return best;
}

ApproxRange approximate_range(const MultiSetFn& gamma, const MultiSetFn& m, const AdditiveMeasure& v, AtomSet set,
                              const Rational& alpha) {
  RangeEngine engine(gamma, m, v);
  return engine.range(set, alpha, true);
}

bool in_range(const MultiSetFn& gamma, const MultiSetFn& m, const AdditiveMeasure& v, AtomSet set,
              const Rational& alpha, const Rational& r) {
  if (r < 0) return false;
  RangeEngine engine(gamma, m, v);
  return engine.contains(set, alpha, r);
}

std::vector<AtomSet> check_exhaustive_hypothesis(const MultiSetFn& gamma, const MultiSetFn& m,
                                                 const AdditiveMeasure& v, const Rational& alpha, AtomSet set,
                                                 BlockOrder order) {
  if (v(set) == Real(0)) throw Error(ErrorKind::InvariantError, "v_M" + set.str() + " is zero");
  RangeEngine engine(gamma, m, v);
  return build_exhaustion(
      v, set, [&](AtomSet f) { return !engine.range(f, alpha, false).empty; }, order);
}

int rn_stage_count(const Rational& tol) {
  if (tol <= 0) throw Error(ErrorKind::InvariantError, "tolerance must be positive");
  int n = 1;
  while (pow2(3 - n) > tol) ++n;
  return n;
}

namespace {

[[noreturn]] void hypothesis_failed(const std::string& reason, const std::string& detail) {
  throw Error(ErrorKind::HypothesisFailed, reason + ": " + detail);
}

std::string pair_str(const std::optional<SetPair>& p) {
  return p ? p->first.str() + " and " + p->second.str() : std::string("?");
}

}  // namespace

RnResult rn_derive(const FiniteSpace& space, const MultiSetFn& gamma, const MultiSetFn& m, const Rational& tol,
                   const Guards& guards) {
  if (gamma.atom_count() != space.atom_count() || m.atom_count() != space.atom_count()) {
    throw Error(ErrorKind::InvariantError, "Γ and M must be tabulated on the scenario's algebra");
  }
  require_same_dim(gamma.zero(), m.zero());
  const int stages = rn_stage_count(tol);

  Flags fg = classify(gamma);
  if (!fg.additive) hypothesis_failed("additive", "Γ is not additive on " + pair_str(fg.additive_violation));
  if (!fg.monotone) hypothesis_failed("multisubmeasure", "Γ is not monotone on " + pair_str(fg.monotone_violation));
  Flags fm = classify(m);
  if (!fm.monotone) hypothesis_failed("multisubmeasure", "M is not monotone on " + pair_str(fm.monotone_violation));
  if (!fm.subadditive) {
    hypothesis_failed("multisubmeasure", "M is not subadditive on " + pair_str(fm.subadditive_violation));
  }

  AdditiveMeasure v = variation_measure(m, guards);
  RnResult out;
  try {
    out.b = strong_ac_constant(gamma, v);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotStronglyAC) throw;
    hypothesis_failed("strong-ac", e.what());
  }
  out.r_bound = Real(1) + Real(2) * out.b;
  out.stop_bound = pow2(3 - stages);

  MultiSetFn m0 = integral_function(m);
  RangeEngine engine(gamma, m, v);
  RangeEngine engine0(gamma, m0, v);

  std::vector<AtomSet> previous{m.all()};
  for (int n = 1; n <= stages; ++n) {
    RnStage stage;
    stage.n = n;
    stage.alpha = pow2(-n);
    const Rational& alpha = stage.alpha;
    for (std::size_t pi = 0; pi < previous.size(); ++pi) {
      AtomSet parent = previous[pi];
      std::vector<AtomSet> children;
      if (v(parent) == Real(0)) {
        children = {parent};
      } else {
        try {
          children = complete_exhaustion(
              build_exhaustion(
                  v, parent, [&](AtomSet f) { return !engine.range(f, alpha, false).empty; }, BlockOrder::LargestFirst),
              parent, v);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoExhaustion) throw;
          for (std::size_t a : parent.atoms()) {
            AtomSet atom = AtomSet::single(a);
            if (v(atom) == Real(0)) continue;
            ApproxRange r = engine.range(atom, alpha, false);
            if (r.empty) {
              hypothesis_failed("range-empty", "the approximate range of " + atom.str() + " at α = " +
                                                   to_string(alpha) + " is empty (binding set " +
                                                   (r.binding ? r.binding->str() : atom.str()) + ")");
            }
          }
          hypothesis_failed("exhaustion", "no exhaustion of " + parent.str() + " at α = " + to_string(alpha));
        }
      }
      for (AtomSet child : children) {
        ApproxRange range = engine.range(child, alpha, true);
        if (range.empty) {
          hypothesis_failed("range-empty", "the approximate range of " + child.str() + " at α = " + to_string(alpha) +
                                               " is empty");
        }
        Rational r = range.pick();
        if (r < 0) r = 0;
        if (Real(r) > out.r_bound) {
          out.diagnostics.push_back("stage " + std::to_string(n) + ": r on " + child.str() + " clipped to 1+2b");
          r = out.r_bound.is_exact() ? out.r_bound.rational() : from_double(out.r_bound.value());
        }
        if (!engine0.contains(child, alpha, r)) {
          out.transfer_ok = false;
          out.diagnostics.push_back("stage " + std::to_string(n) + ": r = " + to_string(r) + " on " + child.str() +
                                    " is outside the range against M₀");
        }
        stage.blocks.push_back(child);
        stage.parents.push_back(pi);
        stage.r.push_back(r);
        stage.ranges.push_back(std::move(range));
      }
    }
    stage.f_atoms.assign(space.atom_count(), Rational(0));
    for (std::size_t i = 0; i < stage.blocks.size(); ++i) {
      for (std::size_t a : stage.blocks[i].atoms()) stage.f_atoms[a] = stage.r[i];
    }
    previous = stage.blocks;
    out.stages.push_back(std::move(stage));
  }

  for (const auto& st : out.stages) {
    for (const Rational& r : st.r) {
      if (out.max_abs_r < Real(abs(r))) out.max_abs_r = Real(abs(r));
    }
  }
  out.r_bound_ok = out.max_abs_r <= out.r_bound ||
                   (!out.r_bound.is_exact() && out.max_abs_r.value() <= out.r_bound.value() * (1 + kRouteTol));

  for (std::size_t k = 0; k < out.stages.size(); ++k) {
    for (std::size_t n = k + 1; n < out.stages.size(); ++n) {
      for (std::size_t a = 0; a < space.atom_count(); ++a) {
        // stage numbers are k+1 and n+1: |f_k − f_n|·2^{(k+1)−2}
        Rational ratio = abs(Rational(out.stages[k].f_atoms[a] - out.stages[n].f_atoms[a])) * pow2(static_cast<int>(k) - 1);
        if (out.max_cauchy_gap < Real(ratio)) out.max_cauchy_gap = Real(ratio);
      }
    }
  }
  out.cauchy_ok = out.max_cauchy_gap.value() <= 1.0 + kRouteTol;

  out.atom_values = out.stages.back().f_atoms;
  out.derivative = Integrand::simple(space, out.atom_values);
  out.verification = verify_rn(space, gamma, m, out.derivative, to_double(tol), guards);
  return out;
}

RnVerification verify_rn(const FiniteSpace& space, const MultiSetFn& gamma, const MultiSetFn& m, const Integrand& f,
                         double tol, const Guards& guards) {
  require_integrand(space, f);
  if (!f.nonnegative()) throw Error(ErrorKind::NegativeScale, "a derivative against M must be nonnegative");
  require_same_dim(gamma.zero(), m.zero());
  EmbeddedSetFn um0 = embed(integral_function(m));
  RnVerification out;
  for (std::size_t s = 0; s < gamma.table().size(); ++s) {
    AtomSet e{static_cast<std::uint32_t>(s)};
    auto direct = integrate(space, f, m, e, guards);
    if (!direct.integrable) out.not_integrable.push_back(e);
    Real res = hausdorff(gamma(e), direct.value);
    Real emb = sup_norm(embed(gamma(e)) - integrate(space, f, um0, e, guards).value);
    out.residuals.push_back(res);
    if (out.max_residual < res) out.max_residual = res;
    if (out.max_embedded_residual < emb) out.max_embedded_residual = emb;
    if (res.value() > tol || emb.value() > tol) out.violations.push_back(e);
  }
  out.passed = out.violations.empty() && out.not_integrable.empty();
  return out;
}

}  // namespace gouldrn
