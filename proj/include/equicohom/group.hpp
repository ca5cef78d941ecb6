#pragma once

// Finite groups by multiplication table, their subgroup lattices, and the
// orbit category whose objects are the coset spaces G/H.

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "equicohom/errors.hpp"

namespace equicohom {

class FinGroup {
 public:
  FinGroup() : FinGroup(std::vector<std::vector<int>>{{0}}) {}

  /// table[a][b] = a*b. Group axioms are checked.
  explicit FinGroup(std::vector<std::vector<int>> table, std::vector<std::string> names = {})
      : table_(std::move(table)), names_(std::move(names)) {
    const int n = order();
    if (n == 0) throw ValidationError("a group needs at least one element");
    for (const auto& row : table_) {
      if (static_cast<int>(row.size()) != n) throw ValidationError("multiplication table is not square");
      for (int v : row)
        if (v < 0 || v >= n) throw ValidationError("multiplication table entry out of range");
    }
    if (names_.empty())
      for (int a = 0; a < n; ++a) names_.push_back(std::to_string(a));
    if (static_cast<int>(names_.size()) != n) throw ValidationError("one name per group element required");

    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int a = 0; a < n && ok; ++a) ok = table_[e][a] == a && table_[a][e] == a;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw ValidationError("multiplication table has no identity");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (table_[a][b] == identity_ && table_[b][a] == identity_) inverse_[a] = b;
    for (int a = 0; a < n; ++a)
      if (inverse_[a] < 0) throw ValidationError("element '" + names_[a] + "' has no inverse");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw ValidationError("multiplication is not associative at (" + names_[a] + "," + names_[b] + "," +
                                  names_[c] + ")");
  }

  static FinGroup cyclic(int n, const std::string& prefix = "g") {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a) {
      names.push_back(a == 0 ? "e" : prefix + (a == 1 ? "" : "^" + std::to_string(a)));
      for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    }
    return FinGroup(std::move(t), std::move(names));
  }

  /// Symmetric group on {0..n-1}; elements are permutations in lexicographic order,
  /// (p*q)(i) = p(q(i)).
  static FinGroup symmetric(int n) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (std::size_t k = 0; k < perms.size(); ++k) index[perms[k]] = static_cast<int>(k);
    std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
    std::vector<std::string> names;
    for (std::size_t a = 0; a < perms.size(); ++a) {
      std::string s;
      for (int v : perms[a]) s += std::to_string(v);
      names.push_back(s);
      for (std::size_t b = 0; b < perms.size(); ++b) {
        std::vector<int> c(n);
        for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
        t[a][b] = index[c];
      }
    }
    return FinGroup(std::move(t), std::move(names));
  }

  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  // g^{-1} a g
  int conj(int g, int a) const { return mul(mul(inv(g), a), g); }
  const std::string& name(int a) const { return names_.at(a); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  int element(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw ValidationError("unknown group element '" + name + "'");
    return static_cast<int>(it - names_.begin());
  }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<std::string> names_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

/// Sorted element list.
using Subgroup = std::vector<int>;

inline Subgroup generated_subgroup(const FinGroup& g, const std::vector<int>& gens) {
  std::set<int> elems{g.identity()};
  std::vector<int> frontier{g.identity()};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int a : frontier)
      for (int s : gens) {
        int b = g.mul(a, s);
        if (elems.insert(b).second) next.push_back(b);
      }
    frontier = std::move(next);
  }
  return {elems.begin(), elems.end()};
}

inline bool is_subgroup(const FinGroup& g, const Subgroup& h) {
  if (h.empty() || !std::binary_search(h.begin(), h.end(), g.identity())) return false;
  for (int a : h)
    for (int b : h)
      if (!std::binary_search(h.begin(), h.end(), g.mul(a, g.inv(b)))) return false;
  return true;
}

/// Every subgroup, sorted by (order, elements).
inline std::vector<Subgroup> subgroups(const FinGroup& g) {
  std::set<Subgroup> found;
  for (int a = 0; a < g.order(); ++a) found.insert(generated_subgroup(g, {a}));
  // Close under joins.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Subgroup> current(found.begin(), found.end());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        std::vector<int> gens = current[i];
        gens.insert(gens.end(), current[j].begin(), current[j].end());
        if (found.insert(generated_subgroup(g, gens)).second) grew = true;
      }
  }
  std::vector<Subgroup> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

/// A morphism G/H -> G/K, eH |-> gK, stored by the coset's least element.
struct OrbitMorphism {
  int from = 0;  // subgroup index of H
  int to = 0;    // subgroup index of K
  int rep = 0;   // min of gK
  auto operator<=>(const OrbitMorphism&) const = default;
};

class OrbitCategory {
 public:
  OrbitCategory() = default;
  explicit OrbitCategory(FinGroup g) : group_(std::move(g)), subgroups_(equicohom::subgroups(group_)) {
    const int n = static_cast<int>(subgroups_.size());
    homs_.assign(n, std::vector<std::vector<OrbitMorphism>>(n));
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        std::set<int> reps;
        for (int a = 0; a < group_.order(); ++a) {
          bool sub = true;
          for (int x : subgroups_[h])
            if (!contains(k, group_.conj(a, x))) sub = false;
          if (sub) reps.insert(coset_rep(a, k));
        }
        for (int r : reps) homs_[h][k].push_back({h, k, r});
      }
  }

  const FinGroup& group() const { return group_; }
  int size() const { return static_cast<int>(subgroups_.size()); }
  const std::vector<Subgroup>& subgroups() const { return subgroups_; }
  const Subgroup& subgroup(int h) const { return subgroups_.at(h); }
  bool contains(int h, int a) const {
    return std::binary_search(subgroups_[h].begin(), subgroups_[h].end(), a);
  }

  int trivial() const { return 0; }
  int whole() const { return size() - 1; }

  int index_of(const Subgroup& s) const {
    auto it = std::find(subgroups_.begin(), subgroups_.end(), s);
    if (it == subgroups_.end()) throw ValidationError("not a subgroup");
    return static_cast<int>(it - subgroups_.begin());
  }

  /// Least element of aK.
  int coset_rep(int a, int k) const {
    int best = group_.order();
    for (int x : subgroups_[k]) best = std::min(best, group_.mul(a, x));
    return best;
  }

  /// Cosets of K in G, each named by its least element, ascending.
  std::vector<int> cosets(int k) const {
    std::set<int> reps;
    for (int a = 0; a < group_.order(); ++a) reps.insert(coset_rep(a, k));
    return {reps.begin(), reps.end()};
  }

  /// g^{-1} H g within K.
  bool subconjugate(int h, int g, int k) const {
    for (int x : subgroups_[h])
      if (!contains(k, group_.conj(g, x))) return false;
    return true;
  }

  /// Index of gHg^{-1}.
  int conjugate(int g, int h) const {
    Subgroup s;
    for (int x : subgroups_[h]) s.push_back(group_.mul(group_.mul(g, x), group_.inv(g)));
    std::sort(s.begin(), s.end());
    return index_of(s);
  }

  const std::vector<OrbitMorphism>& hom(int h, int k) const { return homs_.at(h).at(k); }

  OrbitMorphism morphism(int h, int k, int g) const {
    if (!subconjugate(h, g, k)) throw ValidationError("no morphism G/H -> G/K through this element");
    return {h, k, coset_rep(g, k)};
  }

  OrbitMorphism identity(int h) const { return {h, h, coset_rep(group_.identity(), h)}; }

  /// first : G/H -> G/K, then second : G/K -> G/L.
  OrbitMorphism compose(const OrbitMorphism& first, const OrbitMorphism& second) const {
    if (first.to != second.from) throw DimensionMismatch("morphisms are not composable");
    return {first.from, second.to, coset_rep(group_.mul(first.rep, second.rep), second.to)};
  }

  std::vector<OrbitMorphism> all_morphisms() const {
    std::vector<OrbitMorphism> out;
    for (const auto& row : homs_)
      for (const auto& cell : row) out.insert(out.end(), cell.begin(), cell.end());
    return out;
  }

  std::string describe(const OrbitMorphism& m) const {
    return "G/" + std::to_string(m.from) + "->G/" + std::to_string(m.to) + " via " + group_.name(m.rep);
  }

 private:
  FinGroup group_;
  std::vector<Subgroup> subgroups_;
  std::vector<std::vector<std::vector<OrbitMorphism>>> homs_;
};

}  // namespace equicohom
