#include "relcomp/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace relcomp {

namespace {

// Union-find with path halving and union by rank.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0U);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

  // Canonical labelling: every element maps to the least member of its set.
  std::vector<std::uint32_t> min_labels() {
    std::vector<std::uint32_t> least(parent_.size(), UINT32_MAX);
    std::vector<std::uint32_t> out(parent_.size());
    for (std::uint32_t i = 0; i < parent_.size(); ++i) {
      auto r = find(i);
      if (least[r] == UINT32_MAX) least[r] = i;
      out[i] = least[r];
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace

void Partition::normalize() {
  while (!rep_.empty() && rep_.back() == rep_.size() - 1) rep_.pop_back();
}

Partition Partition::closure(const std::vector<std::pair<Var, Var>>& pairs) {
  std::uint32_t n = 0;
  for (auto [a, b] : pairs) n = std::max({n, a.ord + 1, b.ord + 1});
  DisjointSets ds(n);
  for (auto [a, b] : pairs) ds.unite(a.ord, b.ord);
  Partition p;
  p.rep_ = ds.min_labels();
  p.normalize();
  return p;
}

Var Partition::rep(Var x) const {
  return x.ord < rep_.size() ? Var{rep_[x.ord]} : x;
}

bool Partition::is_identity() const { return rep_.empty(); }

Partition Partition::join(const Partition& o) const {
  auto ps = pairs();
  auto qs = o.pairs();
  ps.insert(ps.end(), qs.begin(), qs.end());
  return closure(ps);
}

Partition Partition::meet(const Partition& o) const {
  std::size_t n = std::min(rep_.size(), o.rep_.size());
  // Two variables share a class of the meet iff they share both classes, so
  // the pair of representatives identifies the class.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> least;
  Partition p;
  p.rep_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto key = std::make_pair(rep_[i], o.rep_[i]);
    p.rep_[i] = least.emplace(key, i).first->second;
  }
  p.normalize();
  return p;
}

Partition Partition::isolate(Var x) const {
  std::vector<std::pair<Var, Var>> kept;
  for (auto [a, b] : pairs())
    if (a != x && b != x) kept.emplace_back(a, b);
  return closure(kept);
}

std::vector<std::vector<Var>> Partition::classes() const {
  std::map<std::uint32_t, std::vector<Var>> by_rep;
  for (std::uint32_t i = 0; i < rep_.size(); ++i) by_rep[rep_[i]].push_back(Var{i});
  std::vector<std::vector<Var>> out;
  for (auto& [r, members] : by_rep)
    if (members.size() > 1) out.push_back(std::move(members));
  return out;
}

std::vector<std::pair<Var, Var>> Partition::pairs() const {
  std::vector<std::pair<Var, Var>> out;
  for (const auto& c : classes())
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) out.emplace_back(c[i], c[j]);
  return out;
}

bool Partition::refines(const Partition& o) const {
  for (std::uint32_t i = 0; i < rep_.size(); ++i)
    if (!o.same(Var{i}, Var{rep_[i]})) return false;
  return true;
}

VarSet cl(const Partition& e, const VarSet& xs) {
  VarSet reps;
  for (Var x : xs) reps.insert(e.rep(x));
  VarSet out = xs;
  for (const auto& c : e.classes())
    if (reps.count(c.front()))
      out.insert(c.begin(), c.end());
  return out;
}

}  // namespace relcomp
