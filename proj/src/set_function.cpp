#include "gouldrn/set_function.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace gouldrn {

EmbeddedSetFn embed(const MultiSetFn& m) {
  std::vector<SupportFn> table;
  table.reserve(m.table().size());
  for (const auto& b : m.table()) table.push_back(embed(b));
  return EmbeddedSetFn(m.atom_count(), std::move(table));
}

AdditiveMeasure::AdditiveMeasure(std::vector<Real> atom_weights) : weights_(std::move(atom_weights)) {
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    if (weights_[a] < Real(0)) throw Error(ErrorKind::InvariantError, "negative weight on atom " + std::to_string(a));
  }
}

AdditiveMeasure AdditiveMeasure::from_table(const std::vector<Real>& table, std::size_t atom_count, double tol) {
  if (table.size() != (std::size_t{1} << atom_count)) {
    throw Error(ErrorKind::InvariantError, "table must hold one value per measurable set");
  }
  std::vector<Real> w;
  for (std::size_t a = 0; a < atom_count; ++a) w.push_back(table[std::size_t{1} << a]);
  AdditiveMeasure mu(std::move(w));
  for (std::size_t s = 0; s < table.size(); ++s) {
    AtomSet e{static_cast<std::uint32_t>(s)};
    if (!near(table[s], mu(e), tol * std::max(1.0, std::abs(table[s].value())))) {
      throw Error(ErrorKind::NotAdditive, "value on " + e.str() + " is not the sum of its atoms");
    }
  }
  return mu;
}

Real AdditiveMeasure::operator()(AtomSet set) const {
  Real total;
  for (std::size_t a : set.atoms()) total += weights_.at(a);
  return total;
}

bool AdditiveMeasure::is_null(AtomSet set) const {
  for (std::size_t a : set.atoms()) {
    if (weights_.at(a) != Real(0)) return false;
  }
  return true;
}

AtomSet AdditiveMeasure::null_atoms() const {
  AtomSet out;
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    if (weights_[a] == Real(0)) out = out | AtomSet::single(a);
  }
  return out;
}

namespace {

class ExhaustionSearch {
 public:
  ExhaustionSearch(const AdditiveMeasure& mu, const SetProperty& has_property, BlockOrder order)
      : mu_(mu), has_property_(has_property), order_(order), nulls_(mu.null_atoms()) {}

  bool run(AtomSet rest) {
    AtomSet live = rest - nulls_;
    if (live.empty()) return true;
    if (failed_.contains(rest.bits)) return false;
    std::size_t anchor = live.lowest();
    AtomSet others = rest - AtomSet::single(anchor);
    std::vector<AtomSet> candidates;
    for_each_subset(others, [&](AtomSet s) { candidates.push_back(s | AtomSet::single(anchor)); });
    std::stable_sort(candidates.begin(), candidates.end(), [&](AtomSet a, AtomSet b) {
      return order_ == BlockOrder::SmallestFirst ? a.size() < b.size() : a.size() > b.size();
    });
    for (AtomSet block : candidates) {
      if (!property(block)) continue;
      blocks_.push_back(block);
      if (run(rest - block)) return true;
      blocks_.pop_back();
    }
    failed_.insert(rest.bits);
    return false;
  }

  std::vector<AtomSet>& blocks() { return blocks_; }

 private:
  bool property(AtomSet block) {
    auto it = cache_.find(block.bits);
    if (it != cache_.end()) return it->second;
    bool v = has_property_(block);
    cache_.emplace(block.bits, v);
    return v;
  }

  const AdditiveMeasure& mu_;
  const SetProperty& has_property_;
  BlockOrder order_;
  AtomSet nulls_;
  std::vector<AtomSet> blocks_;
  std::unordered_map<std::uint32_t, bool> cache_;
  std::unordered_set<std::uint32_t> failed_;
};

}  // namespace

std::vector<AtomSet> build_exhaustion(const AdditiveMeasure& mu, AtomSet set, const SetProperty& has_property,
                                      BlockOrder order) {
  ExhaustionSearch search(mu, has_property, order);
  if (!search.run(set)) {
    AtomSet live = set - mu.null_atoms();
    throw Error(ErrorKind::NoExhaustion,
                "no exhaustion of " + set.str() + "; atom " + std::to_string(live.lowest()) + " cannot be covered");
  }
  return std::move(search.blocks());
}

bool is_exhaustion(const std::vector<AtomSet>& family, AtomSet set, const AdditiveMeasure& mu) {
  AtomSet seen;
  for (AtomSet b : family) {
    if (!b.subset_of(set) || !b.disjoint(seen) || mu(b) == Real(0)) return false;
    seen = seen | b;
  }
  return mu.is_null(set - seen);
}

std::vector<AtomSet> complete_exhaustion(const std::vector<AtomSet>& exhaustion, AtomSet set,
                                         const AdditiveMeasure& mu) {
  if (!is_exhaustion(exhaustion, set, mu)) {
    throw Error(ErrorKind::NotExhaustion, "family is not an exhaustion of " + set.str());
  }
  if (exhaustion.empty()) return {};
  AtomSet covered;
  for (AtomSet b : exhaustion) covered = covered | b;
  std::vector<AtomSet> out = exhaustion;
  out.front() = out.front() | (set - covered);
  return out;
}

std::optional<SetPair> check_null_difference(const AdditiveMeasure& mu, AtomSet universe,
                                             const SetProperty& has_property) {
  AtomSet nulls = mu.null_atoms() & universe;
  if (nulls.empty()) return std::nullopt;
  std::optional<SetPair> found;
  for_each_subset(universe - nulls, [&](AtomSet core) {
    if (found || mu(core) == Real(0)) return;
    const bool base = has_property(core);
    for_each_subset(nulls, [&](AtomSet extra) {
      if (found || extra.empty()) return;
      if (has_property(core | extra) != base) found = SetPair{core, core | extra};
    });
  });
  return found;
}

}  // namespace gouldrn
