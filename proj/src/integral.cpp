#include "gouldrn/integral.hpp"

namespace gouldrn {

Integrand Integrand::indicator(const FiniteSpace& space, AtomSet set) {
  space.require_set(set);
  Integrand f = constant(space.point_count(), 0);
  PointSet pts = space.points_of(set);
  for (std::size_t p = 0; p < space.point_count(); ++p) {
    if (pts.contains(p)) f.values[p] = 1;
  }
  return f;
}

Integrand Integrand::simple(const FiniteSpace& space, const std::vector<Rational>& atom_values) {
  if (atom_values.size() != space.atom_count()) {
    throw Error(ErrorKind::InvariantError, "one value per atom is required");
  }
  Integrand f = constant(space.point_count(), 0);
  for (std::size_t p = 0; p < space.point_count(); ++p) f.values[p] = atom_values[space.atom_of(p)];
  return f;
}

bool Integrand::nonnegative() const {
  return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v >= 0; });
}

void require_integrand(const FiniteSpace& space, const Integrand& f) {
  if (f.values.size() != space.point_count()) {
    throw Error(ErrorKind::InvariantError, "integrand has " + std::to_string(f.values.size()) + " values for " +
                                               std::to_string(space.point_count()) + " points");
  }
}

Rational atom_min(const FiniteSpace& space, const Integrand& f, std::size_t atom) {
  const auto& pts = space.atom_points(atom);
  Rational best = f(pts.front());
  for (std::size_t p : pts) best = std::min(best, f(p));
  return best;
}

Rational atom_max(const FiniteSpace& space, const Integrand& f, std::size_t atom) {
  const auto& pts = space.atom_points(atom);
  Rational best = f(pts.front());
  for (std::size_t p : pts) best = std::max(best, f(p));
  return best;
}

Rational oscillation(const FiniteSpace& space, const Integrand& f, std::size_t atom) {
  return atom_max(space, f, atom) - atom_min(space, f, atom);
}

Rational block_sup(const FiniteSpace& space, const Integrand& f, AtomSet block) {
  auto atoms = block.atoms();
  Rational best = atom_max(space, f, atoms.at(0));
  for (std::size_t a : atoms) best = std::max(best, atom_max(space, f, a));
  return best;
}

Rational block_inf(const FiniteSpace& space, const Integrand& f, AtomSet block) {
  auto atoms = block.atoms();
  Rational best = atom_min(space, f, atoms.at(0));
  for (std::size_t a : atoms) best = std::min(best, atom_min(space, f, a));
  return best;
}

MultimeasureIntegral integrate_multimeasure(const MultiSetFn& m, const Guards& guards) {
  Flags flags = classify(m);
  if (!flags.submeasure()) {
    throw Error(ErrorKind::NotMultisubmeasure, flags.monotone ? "M is not subadditive" : "M is not monotone");
  }
  ConvexBody value = integral_function(m, m.all());
  MultimeasureIntegral out{value, value, m.zero(), Real(0), true, 0};
  bool first = true;
  for_each_partition(m.all(), guards, [&](const Partition& p) {
    ConvexBody sum = m.zero();
    for (AtomSet b : p.blocks) sum = sum + m(b);
    if (!sum.subset_of(out.bound)) out.sums_bounded = false;
    out.hull_of_sums = first ? sum : hull_union(out.hull_of_sums, sum);
    first = false;
    ++out.partitions;
  });
  out.gap = hausdorff(out.hull_of_sums, out.value);
  return out;
}

namespace {

Check make_check(std::string id, std::string ref, bool passed, std::string value, double residual, double tol) {
  return Check{std::move(id), std::move(ref), passed, std::move(value), residual, tol};
}

std::string describe(const Rational& q) { return to_string(q); }

std::string describe(const ConvexBody& b) {
  if (b.dim() == 1) return "[" + to_string(b.lo()) + "," + to_string(b.hi()) + "]";
  std::string s = "{";
  for (std::size_t i = 0; i < b.vertices().size(); ++i) {
    if (i) s += ",";
    s += "(" + to_string(b.vertices()[i].x) + "," + to_string(b.vertices()[i].y) + ")";
  }
  return s + "}";
}

std::string describe(const SupportFn& f) {
  if (f.is_body()) return "U" + describe(f.body());
  return "U" + describe(f.plus()) + "-U" + describe(f.minus());
}

template <class V>
std::vector<Check> integral_function_equivalence(const FiniteSpace& space, const Integrand& f, const SetFunction<V>& m,
                                                 AtomSet set, double tol, const Guards& guards, const std::string& tag,
                                                 const SetFunction<V>* replacement) {
  SetFunction<V> lambda = replacement ? *replacement : integral_function(m);
  auto direct = integrate(space, f, m, set, guards);
  auto reduced = integrate(space, f, lambda, set, guards);
  std::vector<Check> out;
  out.push_back(make_check("integrability-agrees" + set.str(), tag, direct.integrable == reduced.integrable,
                           direct.integrable ? "integrable" : "not integrable", 0.0, 0.0));
  Real gap = distance(direct.value, reduced.value);
  bool same = direct.integrable ? (gap.is_exact() ? gap == Real(0) : gap.value() <= tol) : true;
  out.push_back(make_check("integral-agrees" + set.str(), tag, same, describe(direct.value), gap.value(), tol));
  return out;
}

}  // namespace

std::vector<Check> equivalence_suite(const FiniteSpace& space, const Integrand& f, const ScalarSetFn& m, AtomSet set,
                                     double tol, const Guards& guards, const ScalarSetFn* reduced) {
  return integral_function_equivalence(space, f, m, set, tol, guards, "integral-function-equivalence", reduced);
}

std::vector<Check> equivalence_suite(const FiniteSpace& space, const Integrand& f, const EmbeddedSetFn& m,
                                     AtomSet set, double tol, const Guards& guards,
                                     const EmbeddedSetFn* reduced) {
  return integral_function_equivalence(space, f, m, set, tol, guards, "integral-function-equivalence", reduced);
}

std::vector<Check> equivalence_suite(const FiniteSpace& space, const Integrand& f, const MultiSetFn& m, AtomSet set,
                                     double tol, const Guards& guards, const MultiSetFn* reduced) {
  if (!f.nonnegative()) throw Error(ErrorKind::NegativeScale, "set-valued integration needs f ≥ 0");
  std::vector<Check> out =
      integral_function_equivalence(space, f, m, set, tol, guards, "multivalued-integral-replacement", reduced);

  // U(∫ f dM) against ∫ f dU_M
  EmbeddedSetFn um = embed(m);
  auto bodies = integrate(space, f, m, set, guards);
  auto embedded = integrate(space, f, um, set, guards);
  out.push_back(make_check("embedded-integrability-agrees" + set.str(), "single-valued-reduction",
                           bodies.integrable == embedded.integrable, bodies.integrable ? "integrable" : "not integrable",
                           0.0, 0.0));
  if (bodies.integrable) {
    SupportFn lhs = embed(bodies.value);
    bool equal = equal_on_fan(lhs, embedded.value);
    Real gap = sup_norm(lhs - embedded.value);
    out.push_back(make_check("embedded-integral-agrees" + set.str(), "single-valued-reduction",
                             equal || gap.value() <= tol, describe(bodies.value), gap.value(), tol));
  }
  return out;
}

VariationOfIntegral variation_of_integral(const MultiSetFn& m, double tol, const Guards& guards) {
  Flags flags = classify(m);
  if (!flags.submeasure()) {
    throw Error(ErrorKind::NotMultisubmeasure, flags.monotone ? "M is not subadditive" : "M is not monotone");
  }
  MultiSetFn m0 = integral_function(m);
  VariationOfIntegral out;
  const bool enumerate = m.atom_count() <= guards.max_atoms;
  for (std::size_t s = 0; s < m.table().size(); ++s) {
    AtomSet e{static_cast<std::uint32_t>(s)};
    Real vm = enumerate ? variation_by_enumeration(m, e, guards) : variation(m, e, true, guards);
    Real vm0 = enumerate ? variation_by_enumeration(m0, e, guards) : variation(m0, e, true, guards);
    Real gap = abs(vm - vm0);
    if (out.max_gap < gap) out.max_gap = gap;
    bool ok = (gap.is_exact() && gap == Real(0)) || (!gap.is_exact() && gap.value() <= tol);
    if (!ok && out.variation_equal) {
      out.variation_equal = false;
      out.first_variation_failure = e;
    }
    if (!m(e).subset_of(m0(e)) && out.inclusion) {
      out.inclusion = false;
      out.first_inclusion_failure = e;
    }
  }
  return out;
}

}  // namespace gouldrn
