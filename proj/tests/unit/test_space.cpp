#include <doctest.h>

#include "gouldrn/random.hpp"
#include "oracles.hpp"

using namespace gouldrn;

namespace {

AtomSet set_of(std::initializer_list<std::size_t> atoms) {
  AtomSet s;
  for (std::size_t a : atoms) s = s | AtomSet::single(a);
  return s;
}

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("space construction validates atoms") {
  FiniteSpace s({"a", "b", "c"}, {{0, 1}, {2}});
  CHECK(s.atom_count() == 2);
  CHECK(s.atom_of(1) == 0);
  CHECK(throws_kind(ErrorKind::InvariantError, [] { FiniteSpace({"a", "b"}, {{0}}); }));
  CHECK(throws_kind(ErrorKind::InvariantError, [] { FiniteSpace({"a", "b"}, {{0, 1}, {1}}); }));
  CHECK(throws_kind(ErrorKind::InvariantError, [] { FiniteSpace({"a"}, {{0}, {}}); }));
}

TEST_CASE("cover and interior of point sets") {
  FiniteSpace s = FiniteSpace::with_atom_sizes({2, 1, 3});
  PointSet half;
  half.insert(0);
  CHECK(s.cover(half) == AtomSet::single(0));
  CHECK(s.interior(half).empty());
  PointSet straddle;
  straddle.insert(1);
  straddle.insert(3);
  CHECK(s.cover(straddle) == set_of({0, 2}));
  straddle.insert(2);
  CHECK(s.interior(straddle) == AtomSet::single(1));
}

TEST_CASE("refinement order") {
  AtomSet all = AtomSet::first_n(3);
  Partition p = Partition::of(all, {set_of({0, 1}), set_of({2})});
  Partition q = Partition::of(all, {set_of({0}), set_of({1, 2})});
  CHECK(is_refinement(p, p));
  CHECK(is_refinement(p, Partition::atoms(all)));
  CHECK(is_refinement(q, Partition::atoms(all)));
  CHECK_FALSE(is_refinement(p, q));
  CHECK_FALSE(is_refinement(q, p));
  CHECK(is_refinement(Partition::trivial(all), p));

  Partition other = Partition::atoms(AtomSet::first_n(2));
  CHECK(throws_kind(ErrorKind::CarrierMismatch, [&] { is_refinement(p, other); }));
  CHECK(throws_kind(ErrorKind::CarrierMismatch, [&] { common_refinement(p, other); }));
}

TEST_CASE("partition validation") {
  AtomSet all = AtomSet::first_n(3);
  CHECK(throws_kind(ErrorKind::InvariantError, [&] { Partition::of(all, {set_of({0, 1}), set_of({1, 2})}); }));
  CHECK(throws_kind(ErrorKind::InvariantError, [&] { Partition::of(all, {set_of({0, 1})}); }));
  CHECK(throws_kind(ErrorKind::InvariantError, [&] { Partition::of(all, {set_of({0, 1, 2}), AtomSet{}}); }));
  // blocks are sorted by least atom, so order of input does not matter
  CHECK(Partition::of(all, {set_of({2}), set_of({0, 1})}) == Partition::of(all, {set_of({0, 1}), set_of({2})}));
}

TEST_CASE("common refinement") {
  AtomSet all = AtomSet::first_n(4);
  Partition p = Partition::of(all, {set_of({0, 1}), set_of({2, 3})});
  Partition q = Partition::of(all, {set_of({0, 2}), set_of({1, 3})});
  CHECK(common_refinement(p, p) == p);
  CHECK(common_refinement(Partition::trivial(all), q) == q);
  CHECK(common_refinement(p, q) == Partition::atoms(all));
}

TEST_CASE("join property on random partitions") {
  Random rnd(21);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rnd.below(6);
    AtomSet all = AtomSet::first_n(n);
    Partition p = rnd.partition(all);
    Partition q = rnd.partition(all);
    Partition j = common_refinement(p, q);
    CHECK(is_refinement(p, j));
    CHECK(is_refinement(q, j));
    CHECK(common_refinement(p, q) == common_refinement(q, p));
    // any common refinement of p and q refines the join
    Partition r = rnd.refinement(j);
    CHECK(is_refinement(j, r));
    for_each_partition(all, Guards{}, [&](const Partition& s) {
      if (is_refinement(p, s) && is_refinement(q, s)) CHECK(is_refinement(j, s));
    });
  }
}

TEST_CASE("refinement is a partial order with the atoms partition on top") {
  AtomSet all = AtomSet::first_n(4);
  auto parts = enumerate_partitions(all);
  for (const auto& a : parts) {
    CHECK(is_refinement(a, Partition::atoms(all)));
    CHECK(is_refinement(Partition::trivial(all), a));
    for (const auto& b : parts) {
      if (is_refinement(a, b) && is_refinement(b, a)) CHECK(a == b);
      for (const auto& c : parts) {
        if (is_refinement(a, b) && is_refinement(b, c)) CHECK(is_refinement(a, c));
      }
    }
  }
}

TEST_CASE("partition counts match the Bell numbers") {
  auto bell = oracle::bell_numbers(10);
  CHECK(bell[1] == 1);
  CHECK(bell[3] == 5);
  CHECK(bell[6] == 203);
  for (std::size_t n = 0; n <= 8; ++n) {
    std::uint64_t count = 0;
    std::set<std::vector<std::uint32_t>> seen;
    for_each_partition(AtomSet::first_n(n), Guards{}, [&](const Partition& p) {
      ++count;
      std::vector<std::uint32_t> key;
      AtomSet covered;
      for (AtomSet b : p.blocks) {
        CHECK_FALSE(b.empty());
        CHECK(b.disjoint(covered));
        covered = covered | b;
        key.push_back(b.bits);
      }
      CHECK(covered == AtomSet::first_n(n));
      seen.insert(key);
    });
    CHECK(count == bell[n]);
    CHECK(seen.size() == bell[n]);
  }
  // partitions of a non-contiguous set
  CHECK(enumerate_partitions(set_of({1, 3, 4})).size() == 5);
}

TEST_CASE("enumeration guards") {
  Guards g;
  g.max_atoms = 3;
  CHECK(throws_kind(ErrorKind::TooLarge, [&] { enumerate_partitions(AtomSet::first_n(4), g); }));
  CHECK(enumerate_partitions(AtomSet::first_n(3), g).size() == 5);

  FiniteSpace s = FiniteSpace::with_atom_sizes({3, 2, 1});
  Guards tight;
  tight.max_tag_choices = 5;
  Partition atoms = Partition::atoms(s.all());
  CHECK(throws_kind(ErrorKind::TooLarge, [&] { enumerate_tag_choices(s, atoms, tight); }));
}

TEST_CASE("tag choices") {
  FiniteSpace singles = FiniteSpace::singletons(3);
  CHECK(enumerate_tag_choices(singles, Partition::atoms(singles.all())).size() == 1);

  FiniteSpace pairs = FiniteSpace::with_atom_sizes({2, 2});
  CHECK(enumerate_tag_choices(pairs, Partition::atoms(pairs.all())).size() == 4);
  // one block spanning both atoms has four candidate points
  CHECK(enumerate_tag_choices(pairs, Partition::trivial(pairs.all())).size() == 4);

  FiniteSpace mixed = FiniteSpace::with_atom_sizes({3, 2, 1});
  auto choices = enumerate_tag_choices(mixed, Partition::atoms(mixed.all()));
  CHECK(choices.size() == 3 * 2 * 1);
  std::set<std::vector<std::size_t>> distinct;
  for (const auto& tp : choices) {
    for (std::size_t b = 0; b < tp.tags.size(); ++b) CHECK(tp.partition.blocks[b].contains(mixed.atom_of(tp.tags[b])));
    distinct.insert(tp.tags);
  }
  CHECK(distinct.size() == 6);
}
