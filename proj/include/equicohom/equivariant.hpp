#pragma once

// G-simplicial sets: a finite simplicial set with a group acting on its
// nondegenerate simplices, together with fixed-point complexes, orbits,
// stabilizers, the translation maps of the diagram Phi X, and the G-objects
// G/H x Delta[q].

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equicohom/group.hpp"
#include "equicohom/simplicial.hpp"

namespace equicohom {

struct Orbit {
  SimplexRef rep;
  int stabilizer = 0;  // subgroup index
  std::vector<SimplexRef> members;
};

/// X^H as a standalone simplicial set plus the inclusion into X.
struct FixedComplex {
  SimplicialSet set;
  std::vector<std::vector<int>> to_parent;                // to_parent[q][k] = index in X
  std::vector<std::map<int, int>> from_parent;           // from_parent[q][index in X] = k
};

class GSimplicialSet {
 public:
  using Action = std::vector<std::vector<std::vector<int>>>;  // action[g][q][k]

  GSimplicialSet() = default;

  GSimplicialSet(std::shared_ptr<const OrbitCategory> category, SimplicialSet base, Action action)
      : category_(std::move(category)), base_(std::move(base)), action_(std::move(action)) {
    const int n = group().order();
    if (action_.empty()) action_.resize(n);
    if (static_cast<int>(action_.size()) != n) throw ValidationError("action needs one permutation per group element");
    for (auto& per_dim : action_) {
      per_dim.resize(base_.truncation() + 1);
      for (int q = 0; q <= base_.truncation(); ++q)
        if (per_dim[q].empty()) {
          per_dim[q].resize(base_.count(q));
          std::iota(per_dim[q].begin(), per_dim[q].end(), 0);
        }
    }
    auto report = validate_action();
    report.throw_if_failed("group action");
    build_orbits();
  }

  static GSimplicialSet trivial(std::shared_ptr<const OrbitCategory> category, SimplicialSet base) {
    return GSimplicialSet(std::move(category), std::move(base), {});
  }

  const OrbitCategory& category() const { return *category_; }
  std::shared_ptr<const OrbitCategory> category_ptr() const { return category_; }
  const FinGroup& group() const { return category_->group(); }
  const SimplicialSet& base() const { return base_; }
  int truncation() const { return base_.truncation(); }

  SimplexRef act(int g, SimplexRef r) const { return {r.dim, action_[g][r.dim][r.index]}; }
  FormalSimplex act(int g, const FormalSimplex& x) const { return {act(g, x.base), x.word}; }

  /// Phi X applied to a morphism G/H -> G/K: X^K -> X^H, x |-> g x.
  FormalSimplex translate(const OrbitMorphism& m, const FormalSimplex& x) const { return act(m.rep, x); }

  bool fixed(int h, SimplexRef r) const {
    for (int a : category_->subgroup(h))
      if (act(a, r) != r) return false;
    return true;
  }
  bool fixed(int h, const FormalSimplex& x) const { return fixed(h, x.base); }

  const std::vector<Orbit>& orbits(int q) const { return orbits_.at(q); }
  int orbit_of(SimplexRef r) const { return orbit_index_.at(r.dim).at(r.index); }
  /// Least g with g * rep = r.
  int translator(SimplexRef r) const { return translator_.at(r.dim).at(r.index); }
  int stabilizer(SimplexRef r) const { return stabilizer_.at(r.dim).at(r.index); }

  /// Nondegenerate simplices of X^H in dimension q, in declaration order.
  std::vector<SimplexRef> fixed_simplices(int h, int q) const {
    std::vector<SimplexRef> out;
    for (int k = 0; k < base_.count(q); ++k)
      if (fixed(h, SimplexRef{q, k})) out.push_back({q, k});
    return out;
  }

  FixedComplex fixed_points(int h) const {
    FixedComplex fc{SimplicialSet(truncation()), {}, {}};
    for (int q = 0; q <= truncation(); ++q) {
      fc.to_parent.emplace_back();
      fc.from_parent.emplace_back();
      for (const auto& r : fixed_simplices(h, q)) {
        std::vector<FormalSimplex> faces;
        for (int i = 0; q > 0 && i <= q; ++i) {
          FormalSimplex f = base_.base_face(r, i);
          f.base.index = fc.from_parent[f.base.dim].at(f.base.index);
          faces.push_back(f);
        }
        const auto local = fc.set.add(q, base_.name(r), std::move(faces));
        fc.to_parent[q].push_back(r.index);
        fc.from_parent[q][r.index] = local.index;
      }
    }
    return fc;
  }

  /// Edge-path components of the vertices of X^H.
  std::vector<std::vector<int>> components(int h) const {
    std::vector<int> parent(base_.count(0));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (const auto& e : fixed_simplices(h, 1)) {
      int a = find(base_.base_face(e, 0).base.index), b = find(base_.base_face(e, 1).base.index);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<int, std::vector<int>> groups;
    for (const auto& v : fixed_simplices(h, 0)) groups[find(v.index)].push_back(v.index);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
  }

  /// Every X^H is nonempty and edge-path connected.
  bool is_G_connected() const {
    for (int h = 0; h < category_->size(); ++h)
      if (components(h).size() != 1) return false;
    return true;
  }

  /// First subgroup whose fixed complex is empty or disconnected.
  std::optional<int> disconnected_subgroup() const {
    for (int h = 0; h < category_->size(); ++h)
      if (components(h).size() != 1) return h;
    return std::nullopt;
  }

  std::vector<int> fixed_vertices() const {
    std::vector<int> out;
    for (const auto& v : fixed_simplices(category_->whole(), 0)) out.push_back(v.index);
    return out;
  }

  ValidationReport validate_action() const {
    ValidationReport report;
    const FinGroup& g = group();
    for (int q = 0; q <= truncation(); ++q) {
      for (int a = 0; a < g.order(); ++a) {
        auto perm = action_[a][q];
        if (static_cast<int>(perm.size()) != base_.count(q)) {
          report.fail("action of '" + g.name(a) + "' has wrong size in dimension " + std::to_string(q));
          return report;
        }
        auto sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < base_.count(q); ++k)
          if (sorted[k] != k) {
            report.fail("action of '" + g.name(a) + "' is not a permutation in dimension " + std::to_string(q));
            return report;
          }
      }
      for (int k = 0; k < base_.count(q); ++k) {
        const SimplexRef r{q, k};
        if (act(g.identity(), r) != r) report.fail("identity moves '" + base_.name(r) + "'");
        for (int a = 0; a < g.order(); ++a)
          for (int b = 0; b < g.order(); ++b)
            if (act(a, act(b, r)) != act(g.mul(a, b), r))
              report.fail("action is not a homomorphism at '" + base_.name(r) + "'");
        for (int a = 0; q > 0 && a < g.order(); ++a)
          for (int i = 0; i <= q; ++i) {
            const FormalSimplex x{r};
            if (base_.face(act(a, x), i) != act(a, base_.face(x, i)))
              report.fail("action of '" + g.name(a) + "' does not commute with d" + std::to_string(i) + " on '" +
                          base_.name(r) + "'");
          }
      }
    }
    return report;
  }

 private:
  void build_orbits() {
    const FinGroup& g = group();
    orbits_.assign(truncation() + 1, {});
    orbit_index_.assign(truncation() + 1, {});
    translator_.assign(truncation() + 1, {});
    stabilizer_.assign(truncation() + 1, {});
    for (int q = 0; q <= truncation(); ++q) {
      const int n = base_.count(q);
      orbit_index_[q].assign(n, -1);
      translator_[q].assign(n, -1);
      stabilizer_[q].assign(n, -1);
      for (int k = 0; k < n; ++k) {
        if (orbit_index_[q][k] >= 0) continue;
        const SimplexRef rep{q, k};
        Subgroup stab;
        for (int a = 0; a < g.order(); ++a)
          if (act(a, rep) == rep) stab.push_back(a);
        Orbit o{rep, category_->index_of(stab), {}};
        const int idx = static_cast<int>(orbits_[q].size());
        for (int a = 0; a < g.order(); ++a) {
          const SimplexRef x = act(a, rep);
          if (orbit_index_[q][x.index] < 0) {
            orbit_index_[q][x.index] = idx;
            translator_[q][x.index] = a;
            o.members.push_back(x);
          }
        }
        std::sort(o.members.begin(), o.members.end());
        orbits_[q].push_back(std::move(o));
      }
      for (int k = 0; k < n; ++k) {
        const int a = translator_[q][k];
        stabilizer_[q][k] = category_->conjugate(a, orbits_[q][orbit_index_[q][k]].stabilizer);
      }
    }
  }

  std::shared_ptr<const OrbitCategory> category_;
  SimplicialSet base_;
  Action action_;
  std::vector<std::vector<Orbit>> orbits_;
  std::vector<std::vector<int>> orbit_index_, translator_, stabilizer_;
};

/// Partition of the nondegenerate q-simplices into orbits.
inline const std::vector<Orbit>& orbits_stabilizers(const GSimplicialSet& x, int q) { return x.orbits(q); }

/// The diagram G/H |-> X^H with translation maps X^K -> X^H.
struct OGDiagram {
  std::vector<FixedComplex> fixed;
  std::map<OrbitMorphism, SimplicialMap> maps;

  OGDiagram() = default;
  OGDiagram(const OGDiagram&) = delete;  // maps point into `fixed`
  OGDiagram& operator=(const OGDiagram&) = delete;
  OGDiagram(OGDiagram&&) = default;
};

inline OGDiagram phi(const GSimplicialSet& x) {
  OGDiagram d;
  const auto& oc = x.category();
  for (int h = 0; h < oc.size(); ++h) d.fixed.push_back(x.fixed_points(h));
  for (const auto& m : oc.all_morphisms()) {
    const FixedComplex& src = d.fixed[m.to];
    const FixedComplex& dst = d.fixed[m.from];
    SimplicialMap f{&src.set, &dst.set, {}};
    for (int q = 0; q <= x.truncation(); ++q) {
      f.images.emplace_back();
      for (int k : src.to_parent[q]) {
        const SimplexRef image = x.act(m.rep, SimplexRef{q, k});
        f.images.back().emplace_back(SimplexRef{q, dst.from_parent[q].at(image.index)});
      }
    }
    d.maps.emplace(m, std::move(f));
  }
  return d;
}

// ---------------------------------------------------------------------------
// G/H x Delta[q]

struct OrbitSimplex {
  GSimplicialSet set;
  int subgroup = 0;
  int q = 0;
  std::vector<int> cosets;  // least representatives, ascending

  int coset_position(int rep) const {
    return static_cast<int>(std::lower_bound(cosets.begin(), cosets.end(), rep) - cosets.begin());
  }
  /// The simplex (aH, alpha) for a strictly increasing alpha.
  SimplexRef at(int coset_rep, const std::vector<int>& alpha) const {
    const int p = static_cast<int>(alpha.size()) - 1;
    const int per = static_cast<int>(increasing_tuples(q, p).size());
    return {p, coset_position(coset_rep) * per + tuple_index(q, alpha)};
  }
  /// (coset rep, tuple) of a nondegenerate simplex.
  std::pair<int, std::vector<int>> component(SimplexRef r) const {
    const auto tuples = increasing_tuples(q, r.dim);
    const int per = static_cast<int>(tuples.size());
    return {cosets[r.index / per], tuples[r.index % per]};
  }
};

inline OrbitSimplex orbit_times_simplex(std::shared_ptr<const OrbitCategory> category, int h, int q) {
  const OrbitCategory& oc = *category;
  const FinGroup& g = oc.group();
  const auto cosets = oc.cosets(h);
  SimplicialSet s(q);
  for (int p = 0; p <= q; ++p) {
    const auto tuples = increasing_tuples(q, p);
    for (int c = 0; c < static_cast<int>(cosets.size()); ++c)
      for (const auto& t : tuples) {
        std::vector<FormalSimplex> faces;
        for (int i = 0; p > 0 && i <= p; ++i) {
          auto f = t;
          f.erase(f.begin() + i);
          faces.emplace_back(SimplexRef{p - 1, c * static_cast<int>(increasing_tuples(q, p - 1).size()) + tuple_index(q, f)});
        }
        s.add(p, g.name(cosets[c]) + "H" + detail::tuple_name(t), std::move(faces));
      }
  }
  GSimplicialSet::Action action(g.order());
  for (int a = 0; a < g.order(); ++a) {
    action[a].resize(q + 1);
    for (int p = 0; p <= q; ++p) {
      const int per = static_cast<int>(increasing_tuples(q, p).size());
      for (int c = 0; c < static_cast<int>(cosets.size()); ++c) {
        const int target = oc.coset_rep(g.mul(a, cosets[c]), h);
        const int tc = static_cast<int>(std::lower_bound(cosets.begin(), cosets.end(), target) - cosets.begin());
        for (int k = 0; k < per; ++k) action[a][p].push_back(tc * per + k);
      }
    }
  }
  return {GSimplicialSet(std::move(category), std::move(s), std::move(action)), h, q, cosets};
}

// ---------------------------------------------------------------------------
// X x Y with G acting on the first factor only

struct GProduct {
  ProductSet product;
  GSimplicialSet set;
};

inline GProduct gproduct(const GSimplicialSet& x, const SimplicialSet& y, int truncation) {
  ProductSet p = product(x.base(), y, truncation);
  const FinGroup& g = x.group();
  GSimplicialSet::Action action(g.order());
  for (int a = 0; a < g.order(); ++a) {
    action[a].resize(truncation + 1);
    for (int q = 0; q <= truncation; ++q)
      for (const auto& [first, second] : p.components[q])
        action[a][q].push_back(p.lookup.at({x.act(a, first), second}).index);
  }
  SimplicialSet copy = p.set;
  return {std::move(p), GSimplicialSet(x.category_ptr(), std::move(copy), std::move(action))};
}

}  // namespace equicohom
