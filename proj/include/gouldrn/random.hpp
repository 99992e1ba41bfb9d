#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gouldrn/integral.hpp"
#include "gouldrn/set_function.hpp"

namespace gouldrn {

/// Seeded generators for property suites. Every draw goes through
/// engine() % n so sequences are identical across standard libraries.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool coin() { return below(2) == 1; }
  /// k/den with k uniform in [lo, hi].
  Rational rational(std::int64_t lo, std::int64_t hi, std::int64_t den = 4);

  /// Interval or polygon with small rational coordinates.
  ConvexBody body(int dim);
  /// A body that contains the origin.
  ConvexBody body_with_origin(int dim);
  /// Finite point set in the plane (dim 2) or on the line (dim 1), as 2D points.
  std::vector<Point2> points(int dim, std::size_t count);

  FiniteSpace space(std::size_t atoms, std::size_t max_points_per_atom = 3);
  AtomSet subset(AtomSet set);
  Partition partition(AtomSet set);
  /// A partition that refines p.
  Partition refinement(const Partition& p);

  /// Additive and Submeasure shapes take values that contain the origin,
  /// so they are monotone under inclusion.
  enum class Shape { Additive, Submeasure, Monotone, Arbitrary };

  ScalarSetFn scalar(std::size_t atoms, Shape shape);
  MultiSetFn multi(std::size_t atoms, int dim, Shape shape);
  /// Γ(E) = Σ_{a∈E} s_a·M({a}) for an additive M.
  MultiSetFn scaled(const MultiSetFn& m, const std::vector<Rational>& s);

  /// Integrand whose values vary inside an atom only with probability
  /// `vary_percent`/100.
  Integrand integrand(const FiniteSpace& space, bool nonnegative, int vary_percent = 30);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gouldrn
