#include "gouldrn/space.hpp"

#include <algorithm>

namespace gouldrn {

std::vector<std::size_t> AtomSet::atoms() const {
  std::vector<std::size_t> out;
  for (std::uint32_t b = bits; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

std::string AtomSet::str() const {
  std::string s = "{";
  bool first = true;
  for (std::size_t a : atoms()) {
    if (!first) s += ",";
    s += std::to_string(a);
    first = false;
  }
  return s + "}";
}

FiniteSpace::FiniteSpace(std::vector<std::string> points, std::vector<std::vector<std::size_t>> atoms)
    : points_(std::move(points)), atoms_(std::move(atoms)), atom_of_(points_.size(), atoms_.size()) {
  if (points_.empty()) throw Error(ErrorKind::InvariantError, "space has no points");
  if (points_.size() > kMaxPoints) {
    throw Error(ErrorKind::TooLarge, "at most " + std::to_string(kMaxPoints) + " points are supported");
  }
  if (atoms_.size() > kMaxAtoms) {
    throw Error(ErrorKind::TooLarge, "at most " + std::to_string(kMaxAtoms) + " atoms are supported");
  }
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (atoms_[a].empty()) throw Error(ErrorKind::InvariantError, "atom " + std::to_string(a) + " is empty");
    std::sort(atoms_[a].begin(), atoms_[a].end());
    for (std::size_t p : atoms_[a]) {
      if (p >= points_.size()) {
        throw Error(ErrorKind::InvariantError, "atom " + std::to_string(a) + " names unknown point " + std::to_string(p));
      }
      if (atom_of_[p] != atoms_.size()) {
        throw Error(ErrorKind::InvariantError, "point " + std::to_string(p) + " lies in two atoms");
      }
      atom_of_[p] = a;
    }
  }
  for (std::size_t p = 0; p < points_.size(); ++p) {
    if (atom_of_[p] == atoms_.size()) {
      throw Error(ErrorKind::InvariantError, "point " + points_[p] + " is not covered by any atom");
    }
  }
}

FiniteSpace FiniteSpace::with_atom_sizes(const std::vector<std::size_t>& sizes) {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> atoms;
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    atoms.emplace_back();
    for (std::size_t j = 0; j < sizes[a]; ++j) {
      atoms.back().push_back(names.size());
      names.push_back("t" + std::to_string(a) + "_" + std::to_string(j));
    }
  }
  return FiniteSpace(std::move(names), std::move(atoms));
}

FiniteSpace FiniteSpace::singletons(std::size_t n) { return with_atom_sizes(std::vector<std::size_t>(n, 1)); }

PointSet FiniteSpace::points_of(AtomSet set) const {
  PointSet s;
  for (std::size_t a : set.atoms()) {
    for (std::size_t p : atoms_[a]) s.insert(p);
  }
  return s;
}

AtomSet FiniteSpace::cover(PointSet points) const {
  AtomSet s;
  for (std::size_t p = 0; p < points_.size(); ++p) {
    if (points.contains(p)) s = s | AtomSet::single(atom_of_[p]);
  }
  return s;
}

AtomSet FiniteSpace::interior(PointSet points) const {
  AtomSet s;
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (std::all_of(atoms_[a].begin(), atoms_[a].end(), [&](std::size_t p) { return points.contains(p); })) {
      s = s | AtomSet::single(a);
    }
  }
  return s;
}

void FiniteSpace::require_set(AtomSet set) const {
  if (!set.subset_of(all())) {
    throw Error(ErrorKind::InvariantError, "set " + set.str() + " names atoms outside the space");
  }
}

Partition Partition::of(AtomSet carrier, std::vector<AtomSet> blocks) {
  AtomSet seen;
  for (AtomSet b : blocks) {
    if (b.empty()) throw Error(ErrorKind::InvariantError, "partition block is empty");
    if (!b.disjoint(seen)) throw Error(ErrorKind::InvariantError, "partition blocks overlap at " + (b & seen).str());
    seen = seen | b;
  }
  if (seen != carrier) {
    throw Error(ErrorKind::InvariantError, "partition covers " + seen.str() + " instead of " + carrier.str());
  }
  std::sort(blocks.begin(), blocks.end(), [](AtomSet a, AtomSet b) { return a.lowest() < b.lowest(); });
  return Partition{carrier, std::move(blocks)};
}

Partition Partition::atoms(AtomSet carrier) {
  Partition p{carrier, {}};
  for (std::size_t a : carrier.atoms()) p.blocks.push_back(AtomSet::single(a));
  return p;
}

Partition Partition::trivial(AtomSet carrier) {
  if (carrier.empty()) return Partition{carrier, {}};
  return Partition{carrier, {carrier}};
}

namespace {

void require_same_carrier(const Partition& p, const Partition& q) {
  if (p.carrier != q.carrier) {
    throw Error(ErrorKind::CarrierMismatch, "partitions of " + p.carrier.str() + " and " + q.carrier.str());
  }
}

}  // namespace

bool is_refinement(const Partition& coarser, const Partition& finer) {
  require_same_carrier(coarser, finer);
  return std::all_of(finer.blocks.begin(), finer.blocks.end(), [&](AtomSet b) {
    return std::any_of(coarser.blocks.begin(), coarser.blocks.end(), [&](AtomSet a) { return b.subset_of(a); });
  });
}

Partition common_refinement(const Partition& p, const Partition& q) {
  require_same_carrier(p, q);
  std::vector<AtomSet> blocks;
  for (AtomSet a : p.blocks) {
    for (AtomSet b : q.blocks) {
      if (AtomSet c = a & b; !c.empty()) blocks.push_back(c);
    }
  }
  return Partition::of(p.carrier, std::move(blocks));
}

void require_enumerable(AtomSet set, const Guards& guards) {
  if (set.size() > guards.max_atoms) {
    throw Error(ErrorKind::TooLarge, "set with " + std::to_string(set.size()) + " atoms exceeds the enumeration guard of " +
                                         std::to_string(guards.max_atoms));
  }
}

std::vector<Partition> enumerate_partitions(AtomSet set, const Guards& guards) {
  std::vector<Partition> out;
  for_each_partition(set, guards, [&](const Partition& p) { out.push_back(p); });
  return out;
}

std::uint64_t tag_choice_count(const FiniteSpace& space, const Partition& partition) {
  std::uint64_t count = 1;
  for (AtomSet b : partition.blocks) {
    std::uint64_t pts = 0;
    for (std::size_t a : b.atoms()) pts += space.atom_points(a).size();
    if (pts != 0 && count > (std::uint64_t{1} << 62) / pts) return std::uint64_t{1} << 62;
    count *= pts;
  }
  return count;
}

std::vector<TaggedPartition> enumerate_tag_choices(const FiniteSpace& space, const Partition& partition,
                                                   const Guards& guards) {
  std::vector<TaggedPartition> out;
  for_each_tag_choice(space, partition, guards, [&](const TaggedPartition& tp) { out.push_back(tp); });
  return out;
}

}  // namespace gouldrn
