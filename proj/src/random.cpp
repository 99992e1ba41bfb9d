#include "gouldrn/random.hpp"

namespace gouldrn {

Rational Random::rational(std::int64_t lo, std::int64_t hi, std::int64_t den) {
  Rational q(static_cast<long>(between(lo, hi)), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

std::vector<Point2> Random::points(int dim, std::size_t count) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rational x = rational(-8, 8, 2);
    Rational y = dim == 2 ? rational(-8, 8, 2) : Rational(0);
    out.push_back({x, y});
  }
  return out;
}

ConvexBody Random::body(int dim) {
  if (dim == 1) {
    Rational a = rational(-8, 8, 4);
    Rational b = a + rational(0, 8, 4);
    return ConvexBody::interval(a, b);
  }
  return ConvexBody::hull(points(2, 1 + below(5)));
}

ConvexBody Random::body_with_origin(int dim) {
  if (dim == 1) return ConvexBody::interval(rational(-8, 0, 4), rational(0, 8, 4));
  std::vector<Point2> pts = points(2, below(4));
  pts.push_back({0, 0});
  return ConvexBody::hull(pts);
}

FiniteSpace Random::space(std::size_t atoms, std::size_t max_points_per_atom) {
  std::vector<std::size_t> sizes;
  for (std::size_t a = 0; a < atoms; ++a) sizes.push_back(1 + below(max_points_per_atom));
  return FiniteSpace::with_atom_sizes(sizes);
}

AtomSet Random::subset(AtomSet set) {
  AtomSet out;
  for (std::size_t a : set.atoms()) {
    if (coin()) out = out | AtomSet::single(a);
  }
  return out;
}

Partition Random::partition(AtomSet set) {
  std::vector<AtomSet> blocks;
  for (std::size_t a : set.atoms()) {
    std::size_t label = below(blocks.size() + 1);
    if (label == blocks.size()) blocks.emplace_back();
    blocks[label] = blocks[label] | AtomSet::single(a);
  }
  return Partition::of(set, std::move(blocks));
}

Partition Random::refinement(const Partition& p) {
  std::vector<AtomSet> blocks;
  for (AtomSet b : p.blocks) {
    Partition split = partition(b);
    blocks.insert(blocks.end(), split.blocks.begin(), split.blocks.end());
  }
  return Partition::of(p.carrier, std::move(blocks));
}

namespace {

std::vector<Rational> atom_weights(Random& rnd, std::size_t atoms) {
  std::vector<Rational> w;
  for (std::size_t a = 0; a < atoms; ++a) w.push_back(rnd.below(5) == 0 ? Rational(0) : rnd.rational(1, 8, 4));
  return w;
}

Rational weight_of(const std::vector<Rational>& w, AtomSet s) {
  Rational total = 0;
  for (std::size_t a : s.atoms()) total += w[a];
  return total;
}

}  // namespace

ScalarSetFn Random::scalar(std::size_t atoms, Shape shape) {
  switch (shape) {
    case Shape::Additive:
      return ScalarSetFn::additive_from_atoms(atom_weights(*this, atoms), Rational(0));
    case Shape::Submeasure: {
      auto w1 = atom_weights(*this, atoms);
      if (coin()) {
        auto w2 = atom_weights(*this, atoms);
        return ScalarSetFn::from_fn(atoms, [&](AtomSet s) { return std::max(weight_of(w1, s), weight_of(w2, s)); });
      }
      Rational cap = rational(1, 12, 4);
      return ScalarSetFn::from_fn(atoms, [&](AtomSet s) { return std::min(cap, weight_of(w1, s)); });
    }
    case Shape::Monotone: {
      auto w = atom_weights(*this, atoms);
      return ScalarSetFn::from_fn(atoms, [&](AtomSet s) {
        Rational x = weight_of(w, s);
        return Rational(x * x);
      });
    }
    case Shape::Arbitrary:
      break;
  }
  return ScalarSetFn::from_fn(atoms, [&](AtomSet s) { return s.empty() ? Rational(0) : rational(0, 12, 4); });
}

MultiSetFn Random::multi(std::size_t atoms, int dim, Shape shape) {
  const ConvexBody zero = ConvexBody::zero(dim);
  switch (shape) {
    case Shape::Additive: {
      std::vector<ConvexBody> bodies;
      for (std::size_t a = 0; a < atoms; ++a) bodies.push_back(below(6) == 0 ? zero : body_with_origin(dim));
      return MultiSetFn::additive_from_atoms(bodies, zero);
    }
    case Shape::Submeasure: {
      if (coin()) {
        std::vector<ConvexBody> bodies;
        for (std::size_t a = 0; a < atoms; ++a) bodies.push_back(body_with_origin(dim));
        return MultiSetFn::from_fn(atoms, [&](AtomSet s) {
          ConvexBody out = zero;
          for (std::size_t a : s.atoms()) out = hull_union(out, bodies[a]);
          return out;
        });
      }
      ScalarSetFn c = scalar(atoms, Shape::Submeasure);
      ConvexBody k = body_with_origin(dim);
      return MultiSetFn::from_fn(atoms, [&](AtomSet s) { return scale(c(s), k); });
    }
    case Shape::Monotone: {
      ScalarSetFn c = scalar(atoms, Shape::Monotone);
      ConvexBody k = body_with_origin(dim);
      return MultiSetFn::from_fn(atoms, [&](AtomSet s) { return scale(c(s), k); });
    }
    case Shape::Arbitrary:
      break;
  }
  return MultiSetFn::from_fn(atoms, [&](AtomSet s) { return s.empty() ? zero : body(dim); });
}

MultiSetFn Random::scaled(const MultiSetFn& m, const std::vector<Rational>& s) {
  std::vector<ConvexBody> bodies;
  for (std::size_t a = 0; a < m.atom_count(); ++a) bodies.push_back(scale(s[a], m(AtomSet::single(a))));
  return MultiSetFn::additive_from_atoms(bodies, m.zero());
}

Integrand Random::integrand(const FiniteSpace& space, bool nonnegative, int vary_percent) {
  Integrand f;
  f.values.resize(space.point_count());
  const std::int64_t lo = nonnegative ? 0 : -8;
  for (std::size_t a = 0; a < space.atom_count(); ++a) {
    Rational base = rational(lo, 8, 4);
    bool vary = static_cast<int>(below(100)) < vary_percent;
    for (std::size_t p : space.atom_points(a)) f.values[p] = vary ? rational(lo, 8, 4) : base;
  }
  return f;
}

}  // namespace gouldrn
