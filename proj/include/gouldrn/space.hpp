#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "gouldrn/error.hpp"

namespace gouldrn {

/// Measurable set of a finite space: a set of atom indices.
struct AtomSet {
  std::uint32_t bits = 0;

  static AtomSet single(std::size_t atom) { return AtomSet{std::uint32_t{1} << atom}; }
  static AtomSet first_n(std::size_t n) { return AtomSet{n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1}; }

  bool empty() const { return bits == 0; }
  bool contains(std::size_t atom) const { return (bits >> atom) & 1U; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits)); }
  std::size_t lowest() const { return static_cast<std::size_t>(std::countr_zero(bits)); }
  bool subset_of(AtomSet other) const { return (bits & ~other.bits) == 0; }
  bool disjoint(AtomSet other) const { return (bits & other.bits) == 0; }
  std::vector<std::size_t> atoms() const;
  std::string str() const;

  friend AtomSet operator|(AtomSet a, AtomSet b) { return {a.bits | b.bits}; }
  friend AtomSet operator&(AtomSet a, AtomSet b) { return {a.bits & b.bits}; }
  friend AtomSet operator-(AtomSet a, AtomSet b) { return {a.bits & ~b.bits}; }
  friend AtomSet operator^(AtomSet a, AtomSet b) { return {a.bits ^ b.bits}; }
  friend auto operator<=>(AtomSet a, AtomSet b) = default;
};

/// Calls visit(S) for every subset S of `set`, in increasing bit order,
/// including the empty set.
template <class Visit>
void for_each_subset(AtomSet set, Visit&& visit) {
  std::uint32_t s = 0;
  while (true) {
    visit(AtomSet{s});
    if (s == set.bits) break;
    s = (s - set.bits) & set.bits;
  }
}

/// Arbitrary subset of points (not necessarily measurable).
struct PointSet {
  std::uint64_t bits = 0;

  bool empty() const { return bits == 0; }
  bool contains(std::size_t p) const { return (bits >> p) & 1U; }
  void insert(std::size_t p) { bits |= std::uint64_t{1} << p; }
};

/// Finite set T of named points, partitioned into atoms; the algebra is all
/// unions of atoms.
class FiniteSpace {
 public:
  static constexpr std::size_t kMaxAtoms = 20;
  static constexpr std::size_t kMaxPoints = 64;

  /// Validates disjointness, coverage and nonempty atoms (InvariantError).
  FiniteSpace(std::vector<std::string> points, std::vector<std::vector<std::size_t>> atoms);

  /// Atom i holds sizes[i] points named "t<i>_<j>".
  static FiniteSpace with_atom_sizes(const std::vector<std::size_t>& sizes);
  /// n singleton atoms.
  static FiniteSpace singletons(std::size_t n);

  std::size_t point_count() const { return points_.size(); }
  std::size_t atom_count() const { return atoms_.size(); }
  const std::vector<std::string>& point_names() const { return points_; }
  const std::vector<std::size_t>& atom_points(std::size_t atom) const { return atoms_.at(atom); }
  const std::vector<std::vector<std::size_t>>& atoms() const { return atoms_; }
  std::size_t atom_of(std::size_t point) const { return atom_of_.at(point); }
  AtomSet all() const { return AtomSet::first_n(atoms_.size()); }
  std::size_t set_count() const { return std::size_t{1} << atoms_.size(); }

  PointSet points_of(AtomSet set) const;
  /// Smallest measurable set containing the points (atoms that meet them).
  AtomSet cover(PointSet points) const;
  /// Largest measurable set inside the points (atoms fully contained).
  AtomSet interior(PointSet points) const;

  void require_set(AtomSet set) const;

 private:
  std::vector<std::string> points_;
  std::vector<std::vector<std::size_t>> atoms_;
  std::vector<std::size_t> atom_of_;
};

/// Finite family of nonempty disjoint measurable sets whose union is the
/// carrier. Blocks are kept sorted by least atom index.
struct Partition {
  AtomSet carrier;
  std::vector<AtomSet> blocks;

  /// Validates and sorts; throws InvariantError on overlap, gaps or empty
  /// blocks.
  static Partition of(AtomSet carrier, std::vector<AtomSet> blocks);
  /// Finest partition: one block per atom.
  static Partition atoms(AtomSet carrier);
  /// Coarsest partition: the carrier itself (empty family for the empty set).
  static Partition trivial(AtomSet carrier);

  friend bool operator==(const Partition&, const Partition&) = default;
};

struct TaggedPartition {
  Partition partition;
  std::vector<std::size_t> tags;  ///< one point per block, inside the block
};

struct Guards {
  std::size_t max_atoms = 10;
  std::uint64_t max_tag_choices = 1'000'000;
};

/// Whether `finer` refines `coarser`: every block of `finer` lies inside a
/// block of `coarser`. Throws CarrierMismatch.
bool is_refinement(const Partition& coarser, const Partition& finer);

/// {A_i ∩ B_j} without empties. Throws CarrierMismatch.
Partition common_refinement(const Partition& p, const Partition& q);

void require_enumerable(AtomSet set, const Guards& guards);

/// Visits every partition of `set` exactly once (restricted growth strings
/// over its atoms). Throws TooLarge above guards.max_atoms.
template <class Visit>
void for_each_partition(AtomSet set, const Guards& guards, Visit&& visit) {
  require_enumerable(set, guards);
  std::vector<std::size_t> atoms = set.atoms();
  const std::size_t n = atoms.size();
  if (n == 0) {
    visit(Partition{set, {}});
    return;
  }
  std::vector<std::size_t> label(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);  // max label over positions < i, plus one
  Partition p{set, {}};
  while (true) {
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < n; ++i) blocks = std::max(blocks, label[i] + 1);
    p.blocks.assign(blocks, AtomSet{});
    for (std::size_t i = 0; i < n; ++i) p.blocks[label[i]].bits |= std::uint32_t{1} << atoms[i];
    visit(static_cast<const Partition&>(p));

    // next restricted growth string
    std::size_t i = n;
    while (i-- > 1) {
      std::size_t limit = 0;
      for (std::size_t j = 0; j < i; ++j) limit = std::max(limit, label[j] + 1);
      if (label[i] < limit) {
        ++label[i];
        for (std::size_t j = i + 1; j < n; ++j) label[j] = 0;
        break;
      }
    }
    if (i == 0) return;
  }
}

std::vector<Partition> enumerate_partitions(AtomSet set, const Guards& guards = {});

std::uint64_t tag_choice_count(const FiniteSpace& space, const Partition& partition);

/// Visits every assignment of one point per block. Throws TooLarge above
/// guards.max_tag_choices.
template <class Visit>
void for_each_tag_choice(const FiniteSpace& space, const Partition& partition, const Guards& guards,
                         Visit&& visit) {
  if (tag_choice_count(space, partition) > guards.max_tag_choices) {
    throw Error(ErrorKind::TooLarge, "tag choices exceed the guard of " + std::to_string(guards.max_tag_choices));
  }
  const std::size_t k = partition.blocks.size();
  std::vector<std::vector<std::size_t>> candidates(k);
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t a : partition.blocks[b].atoms()) {
      const auto& pts = space.atom_points(a);
      candidates[b].insert(candidates[b].end(), pts.begin(), pts.end());
    }
  }
  std::vector<std::size_t> index(k, 0);
  TaggedPartition tp{partition, std::vector<std::size_t>(k)};
  while (true) {
    for (std::size_t b = 0; b < k; ++b) tp.tags[b] = candidates[b][index[b]];
    visit(static_cast<const TaggedPartition&>(tp));
    std::size_t b = 0;
    for (; b < k; ++b) {
      if (++index[b] < candidates[b].size()) break;
      index[b] = 0;
    }
    if (b == k) return;
  }
}

std::vector<TaggedPartition> enumerate_tag_choices(const FiniteSpace& space, const Partition& partition,
                                                   const Guards& guards = {});

}  // namespace gouldrn
