#pragma once

// Coefficient data over the orbit category: the abelian O_G-group M0, the
// O_G-group pi acting on it through phi, group-valued twisting cocycles on
// edges, path systems, and the local-coefficient morphisms they induce.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "equicohom/equivariant.hpp"
#include "equicohom/zmodule.hpp"

namespace equicohom {

namespace detail {

// Fills in identity morphisms and composites of a contravariant functor given on
// some morphisms. compose(first_value, second_value) must return the value of
// second o first. Conflicting composites are reported.
template <class Value, class Compose, class Equal>
void complete_functor(const OrbitCategory& oc, std::map<OrbitMorphism, Value>& values,
                      const std::function<Value(int)>& identity, Compose compose, Equal equal,
                      ValidationReport& report, const std::string& what) {
  for (int h = 0; h < oc.size(); ++h) {
    const auto id = oc.identity(h);
    if (!values.count(id)) values.emplace(id, identity(h));
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<OrbitMorphism, Value>> known(values.begin(), values.end());
    for (const auto& [first, fv] : known)
      for (const auto& [second, sv] : known) {
        if (first.to != second.from) continue;
        const OrbitMorphism c = oc.compose(first, second);
        Value cv = compose(fv, sv);
        auto it = values.find(c);
        if (it == values.end()) {
          values.emplace(c, std::move(cv));
          grew = true;
        } else if (!equal(c, it->second, cv)) {
          report.fail(what + " is not functorial at " + oc.describe(c));
          return;
        }
      }
  }
  for (const auto& m : oc.all_morphisms())
    if (!values.count(m)) report.fail(what + " has no value on " + oc.describe(m));
}

}  // namespace detail

/// Contravariant functor O_G -> Ab.
struct OGAbelianGroup {
  std::vector<FGAbelianGroup> at;            // per subgroup
  std::map<OrbitMorphism, IntMatrix> maps;   // M0(G/K) -> M0(G/H) for G/H -> G/K

  AbHom hom(const OrbitMorphism& m) const { return {at.at(m.to), at.at(m.from), maps.at(m)}; }
  Vector apply(const OrbitMorphism& m, const Vector& v) const { return maps.at(m).apply(v); }
};

/// Contravariant functor O_G -> Grp.
struct OGGroup {
  std::vector<FinGroup> at;
  std::map<OrbitMorphism, std::vector<int>> maps;  // element map pi(G/K) -> pi(G/H)

  int apply(const OrbitMorphism& m, int a) const { return maps.at(m).at(a); }
};

/// phi(G/H)(a) as an automorphism matrix of M0(G/H); phi(ab) = phi(a) phi(b).
struct OGAction {
  std::vector<std::vector<IntMatrix>> at;  // [subgroup][element]
};

struct CoefficientSystem {
  std::shared_ptr<const OrbitCategory> category;
  OGAbelianGroup m0;
  OGGroup pi;
  OGAction phi;

  const FGAbelianGroup& module(int h) const { return m0.at.at(h); }
  const FinGroup& group(int h) const { return pi.at.at(h); }
  Vector act(int h, int a, const Vector& v) const { return phi.at.at(h).at(a).apply(v); }
  Vector act_inverse(int h, int a, const Vector& v) const { return act(h, group(h).inv(a), v); }
  Vector restrict(const OrbitMorphism& m, const Vector& v) const { return m0.apply(m, v); }

  /// Same M0 and pi at every orbit, identities on morphisms.
  static CoefficientSystem constant(std::shared_ptr<const OrbitCategory> oc, const FGAbelianGroup& module,
                                    const FinGroup& pi, const std::vector<IntMatrix>& action) {
    CoefficientSystem c;
    c.category = oc;
    for (int h = 0; h < oc->size(); ++h) {
      c.m0.at.push_back(module);
      c.pi.at.push_back(pi);
      c.phi.at.push_back(action);
    }
    std::vector<int> id(pi.order());
    for (int a = 0; a < pi.order(); ++a) id[a] = a;
    for (const auto& m : oc->all_morphisms()) {
      c.m0.maps.emplace(m, IntMatrix::identity(module.generators()));
      c.pi.maps.emplace(m, id);
    }
    return c;
  }

  /// Extends partially specified morphism data by identities and composition.
  void complete(ValidationReport& report) {
    const auto& oc = *category;
    detail::complete_functor<IntMatrix>(
        oc, m0.maps, [&](int h) { return IntMatrix::identity(m0.at.at(h).generators()); },
        [](const IntMatrix& first, const IntMatrix& second) { return first * second; },
        [&](const OrbitMorphism& m, const IntMatrix& a, const IntMatrix& b) {
          if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
          return hom_equal({m0.at.at(m.to), m0.at.at(m.from), a}, {m0.at.at(m.to), m0.at.at(m.from), b});
        },
        report, "M0");
    detail::complete_functor<std::vector<int>>(
        oc, pi.maps,
        [&](int h) {
          std::vector<int> id(pi.at.at(h).order());
          for (int a = 0; a < static_cast<int>(id.size()); ++a) id[a] = a;
          return id;
        },
        [](const std::vector<int>& first, const std::vector<int>& second) {
          std::vector<int> out(second.size());
          for (std::size_t a = 0; a < second.size(); ++a) out[a] = first.at(second[a]);
          return out;
        },
        [](const OrbitMorphism&, const std::vector<int>& a, const std::vector<int>& b) { return a == b; }, report,
        "pi");
  }

  ValidationReport validate() const {
    ValidationReport report;
    const auto& oc = *category;
    const int n = oc.size();
    if (static_cast<int>(m0.at.size()) != n || static_cast<int>(pi.at.size()) != n ||
        static_cast<int>(phi.at.size()) != n) {
      report.fail("coefficient data must cover every subgroup");
      return report;
    }
    for (const auto& m : oc.all_morphisms()) {
      if (!m0.maps.count(m)) {
        report.fail("M0 has no value on " + oc.describe(m));
        continue;
      }
      const AbHom h = m0.hom(m);
      if (h.matrix.rows() != h.codomain.generators() || h.matrix.cols() != h.domain.generators())
        report.fail("M0 matrix has the wrong shape on " + oc.describe(m));
      else if (!hom_is_well_defined(h))
        report.fail("M0 is not well defined on " + oc.describe(m));
      if (!pi.maps.count(m)) {
        report.fail("pi has no value on " + oc.describe(m));
        continue;
      }
      const auto& f = pi.maps.at(m);
      const FinGroup& src = pi.at[m.to];
      const FinGroup& dst = pi.at[m.from];
      if (static_cast<int>(f.size()) != src.order()) {
        report.fail("pi map has the wrong size on " + oc.describe(m));
        continue;
      }
      for (int a = 0; a < src.order(); ++a)
        for (int b = 0; b < src.order(); ++b)
          if (f[src.mul(a, b)] != dst.mul(f[a], f[b])) {
            report.fail("pi is not a homomorphism on " + oc.describe(m));
            a = b = src.order();
          }
    }
    if (!report.ok()) return report;
    for (int h = 0; h < n; ++h) {
      const auto id = oc.identity(h);
      if (!hom_equal(m0.hom(id), AbHom::identity(m0.at[h]))) report.fail("M0 of an identity is not the identity");
      for (int a = 0; a < pi.at[h].order(); ++a)
        if (pi.maps.at(id)[a] != a) report.fail("pi of an identity is not the identity");
    }
    for (const auto& first : oc.all_morphisms())
      for (const auto& second : oc.all_morphisms()) {
        if (first.to != second.from) continue;
        const auto c = oc.compose(first, second);
        if (!hom_equal(m0.hom(c), compose(m0.hom(first), m0.hom(second))))
          report.fail("M0 is not functorial at " + oc.describe(first) + " then " + oc.describe(second));
        for (int a = 0; a < pi.at[second.to].order(); ++a)
          if (pi.maps.at(c)[a] != pi.maps.at(first)[pi.maps.at(second)[a]]) {
            report.fail("pi is not functorial at " + oc.describe(first) + " then " + oc.describe(second));
            break;
          }
      }
    for (int h = 0; h < n; ++h) {
      const FinGroup& p = pi.at[h];
      const FGAbelianGroup& mod = m0.at[h];
      if (static_cast<int>(phi.at[h].size()) != p.order()) {
        report.fail("phi needs one matrix per element of pi at subgroup " + std::to_string(h));
        continue;
      }
      for (int a = 0; a < p.order(); ++a) {
        const AbHom act{mod, mod, phi.at[h][a]};
        if (act.matrix.rows() != mod.generators() || act.matrix.cols() != mod.generators() ||
            !hom_is_well_defined(act)) {
          report.fail("phi(" + p.name(a) + ") is not an endomorphism at subgroup " + std::to_string(h));
          return report;
        }
      }
      if (!hom_equal({mod, mod, phi.at[h][p.identity()]}, AbHom::identity(mod)))
        report.fail("phi(e) is not the identity at subgroup " + std::to_string(h));
      for (int a = 0; a < p.order(); ++a)
        for (int b = 0; b < p.order(); ++b)
          if (!hom_equal({mod, mod, phi.at[h][p.mul(a, b)]}, {mod, mod, phi.at[h][a] * phi.at[h][b]}))
            report.fail("phi is not a homomorphism at (" + p.name(a) + "," + p.name(b) + ")");
    }
    for (const auto& m : oc.all_morphisms()) {
      const FinGroup& src = pi.at[m.to];
      for (int a = 0; a < src.order(); ++a) {
        const AbHom lhs{m0.at[m.to], m0.at[m.from], m0.maps.at(m) * phi.at[m.to][a]};
        const AbHom rhs{m0.at[m.to], m0.at[m.from], phi.at[m.from][pi.maps.at(m)[a]] * m0.maps.at(m)};
        if (!hom_equal(lhs, rhs)) report.fail("phi is not natural on " + oc.describe(m) + " at " + src.name(a));
      }
    }
    return report;
  }
};

// ---------------------------------------------------------------------------
// Twisting cocycles

/// kappa(G/H)_1 on nondegenerate edges of X^H; -1 marks edges outside X^H.
struct Twisting {
  std::vector<std::vector<int>> labels;  // [subgroup][edge index]

  int edge(int h, int e) const { return labels.at(h).at(e); }
};

/// kappa(G/H)_q(y): the label of the 01-edge, identity when that edge is degenerate.
inline int derive_kappa_q(const GSimplicialSet& x, const CoefficientSystem& c, const Twisting& k, int h,
                          const FormalSimplex& y) {
  if (y.dim() < 1) throw DimensionMismatch("twisting is defined from dimension 1");
  const FormalSimplex e = x.base().restrict(y, {0, 1});
  if (e.degenerate()) return c.group(h).identity();
  const int label = k.edge(h, e.base.index);
  if (label < 0) throw ValidationError("edge '" + x.base().name(e.base) + "' is not in the fixed complex");
  return label;
}

/// Generic audit of the four twisting-function identities for a constant group
/// complex. `simplices[q]` lists the simplices to check in dimension q.
template <class Simplex, class Face, class Degeneracy, class Kappa, class Group>
ValidationReport audit_twisting(const std::vector<std::vector<Simplex>>& simplices, Face face, Degeneracy degeneracy,
                                Kappa kappa, const Group& group, const std::function<std::string(const Simplex&)>& show) {
  ValidationReport report;
  const int top = static_cast<int>(simplices.size()) - 1;
  for (int q = 0; q <= top; ++q)
    for (const auto& b : simplices[q]) {
      if (q >= 2) {
        // d0 kappa(b) = kappa(d0 b)^{-1} kappa(d1 b)
        if (kappa(b) != group.mul(group.inv(kappa(face(b, 0))), kappa(face(b, 1))))
          report.fail("identity 1 fails at " + show(b));
        for (int i = 1; i <= q - 1; ++i)
          if (kappa(b) != kappa(face(b, i + 1))) report.fail("identity 2 (i=" + std::to_string(i) + ") fails at " + show(b));
      }
      if (q >= 1)
        for (int i = 0; i <= q - 1; ++i)
          if (kappa(b) != kappa(degeneracy(b, i + 1))) report.fail("identity 3 (i=" + std::to_string(i) + ") fails at " + show(b));
      if (kappa(degeneracy(b, 0)) != group.identity()) report.fail("identity 4 fails at " + show(b));
    }
  return report;
}

/// Every simplex of dimension <= top whose base is nondegenerate and fixed by H.
inline std::vector<std::vector<FormalSimplex>> fixed_formal_simplices(const GSimplicialSet& x, int h, int top) {
  std::vector<std::vector<FormalSimplex>> out(top + 1);
  for (int q = 0; q <= top; ++q)
    for (int p = 0; p <= std::min(q, x.truncation()); ++p)
      for (const auto& r : x.fixed_simplices(h, p))
        for (auto& w : detail::words_between(p, q)) out[q].emplace_back(r, w);
  return out;
}

/// Cocycle condition, labels on every fixed edge, naturality, and the four identities.
inline ValidationReport validate_twisting(const GSimplicialSet& x, const CoefficientSystem& c, const Twisting& k) {
  ValidationReport report;
  const auto& oc = x.category();
  const auto& s = x.base();
  if (static_cast<int>(k.labels.size()) != oc.size()) {
    report.fail("twisting must cover every subgroup");
    return report;
  }
  for (int h = 0; h < oc.size(); ++h) {
    if (static_cast<int>(k.labels[h].size()) != s.count(1)) {
      report.fail("twisting has the wrong number of edges at subgroup " + std::to_string(h));
      return report;
    }
    for (int e = 0; e < s.count(1); ++e) {
      const bool in = x.fixed(h, SimplexRef{1, e});
      const int label = k.labels[h][e];
      if (in && (label < 0 || label >= c.group(h).order()))
        report.fail("edge '" + s.name({1, e}) + "' has no label at subgroup " + std::to_string(h));
      if (!in && label >= 0) report.fail("edge '" + s.name({1, e}) + "' is labelled outside X^H");
    }
  }
  if (!report.ok()) return report;
  for (int h = 0; h < oc.size(); ++h) {
    const FinGroup& p = c.group(h);
    for (const auto& y : x.fixed_simplices(h, 2)) {
      const FormalSimplex fy{y};
      const int lhs = derive_kappa_q(x, c, k, h, s.face(fy, 1));
      const int rhs = p.mul(derive_kappa_q(x, c, k, h, s.face(fy, 0)), derive_kappa_q(x, c, k, h, s.face(fy, 2)));
      if (lhs != rhs)
        report.fail("cocycle condition fails on '" + s.name(y) + "' at subgroup " + std::to_string(h) + ": " +
                    p.name(lhs) + " != " + p.name(rhs));
    }
  }
  for (const auto& m : oc.all_morphisms())
    for (const auto& z : x.fixed_simplices(m.to, 1)) {
      const FormalSimplex gz = x.translate(m, FormalSimplex{z});
      const int lhs = derive_kappa_q(x, c, k, m.from, gz);
      const int rhs = c.pi.apply(m, derive_kappa_q(x, c, k, m.to, FormalSimplex{z}));
      if (lhs != rhs) report.fail("twisting is not natural on " + oc.describe(m) + " at edge '" + s.name(z) + "'");
    }
  if (!report.ok()) return report;
  for (int h = 0; h < oc.size(); ++h) {
    const auto sims = fixed_formal_simplices(x, h, x.truncation());
    report.merge(audit_twisting<FormalSimplex>(
        sims, [&](const FormalSimplex& b, int i) { return s.face(b, i); },
        [&](const FormalSimplex& b, int j) { return s.degeneracy(b, j); },
        [&](const FormalSimplex& b) { return derive_kappa_q(x, c, k, h, b); }, c.group(h),
        [&](const FormalSimplex& b) { return s.describe(b); }),
        "subgroup " + std::to_string(h) + ": ");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Paths and holonomy

struct EdgeStep {
  int edge = 0;
  bool forward = true;  // source (vertex 0) to target (vertex 1)
};
using EdgePath = std::vector<EdgeStep>;

inline int edge_source(const SimplicialSet& s, int e) { return s.base_face({1, e}, 1).base.index; }
inline int edge_target(const SimplicialSet& s, int e) { return s.base_face({1, e}, 0).base.index; }

/// l_k ... l_1 with l = kappa(e) forward and kappa(e)^{-1} backward.
inline int holonomy(const CoefficientSystem& c, const Twisting& k, int h, const EdgePath& path) {
  const FinGroup& p = c.group(h);
  int acc = p.identity();
  for (const auto& step : path) {
    const int label = k.edge(h, step.edge);
    if (label < 0) throw PathMissing("path leaves the fixed complex at subgroup " + std::to_string(h));
    acc = p.mul(step.forward ? label : p.inv(label), acc);
  }
  return acc;
}

inline EdgePath translate_path(const GSimplicialSet& x, int g, const EdgePath& path) {
  EdgePath out;
  for (const auto& step : path) out.push_back({x.act(g, SimplexRef{1, step.edge}).index, step.forward});
  return out;
}

inline EdgePath reverse_path(const EdgePath& path) {
  EdgePath out;
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back({it->edge, !it->forward});
  return out;
}

/// Chosen paths omega_x from the base vertex to every vertex, translated along orbits.
struct PathSystem {
  int base_vertex = 0;
  std::vector<EdgePath> paths;  // per vertex index
};

/// Breadth-first paths inside X^{G_x} for each orbit representative.
inline PathSystem auto_path_system(const GSimplicialSet& x, int base_vertex) {
  const auto& s = x.base();
  if (base_vertex < 0 || base_vertex >= s.count(0) || !x.fixed(x.category().whole(), SimplexRef{0, base_vertex}))
    throw HypothesisViolation("the base vertex must be fixed by the whole group");
  PathSystem ps{base_vertex, std::vector<EdgePath>(s.count(0))};
  for (const auto& o : x.orbits(0)) {
    const int target = o.rep.index;
    const int h = o.stabilizer;
    std::map<int, EdgePath> found{{base_vertex, {}}};
    std::deque<int> queue{base_vertex};
    const auto edges = x.fixed_simplices(h, 1);
    while (!queue.empty() && !found.count(target)) {
      const int v = queue.front();
      queue.pop_front();
      for (const auto& e : edges) {
        const int a = edge_source(s, e.index), b = edge_target(s, e.index);
        for (auto [from, to, fwd] : {std::tuple{a, b, true}, std::tuple{b, a, false}}) {
          if (from != v || found.count(to)) continue;
          EdgePath p = found[v];
          p.push_back({e.index, fwd});
          found[to] = std::move(p);
          queue.push_back(to);
        }
      }
    }
    if (!found.count(target))
      throw PathMissing("vertex '" + s.name(o.rep) + "' is unreachable from the base vertex inside its fixed complex");
    for (const auto& member : o.members)
      ps.paths[member.index] = translate_path(x, x.translator(member), found[target]);
  }
  return ps;
}

/// Builds the system from paths given at orbit representatives.
inline PathSystem path_system_from_representatives(const GSimplicialSet& x, int base_vertex,
                                                   const std::map<int, EdgePath>& rep_paths) {
  PathSystem ps{base_vertex, std::vector<EdgePath>(x.base().count(0))};
  for (const auto& o : x.orbits(0)) {
    auto it = rep_paths.find(o.rep.index);
    if (it == rep_paths.end()) throw PathMissing("no path to vertex '" + x.base().name(o.rep) + "'");
    for (const auto& member : o.members) ps.paths[member.index] = translate_path(x, x.translator(member), it->second);
  }
  return ps;
}

/// Paths are edge-paths from v to x inside X^{G_x}, v is G-fixed with the empty
/// path, and translation by any g with g x = y gives the same path.
inline ValidationReport validate_path_system(const GSimplicialSet& x, const PathSystem& ps) {
  ValidationReport report;
  const auto& s = x.base();
  const auto& oc = x.category();
  if (ps.base_vertex < 0 || ps.base_vertex >= s.count(0) || !x.fixed(oc.whole(), SimplexRef{0, ps.base_vertex})) {
    report.fail("base vertex is not G-fixed");
    return report;
  }
  if (!ps.paths.at(ps.base_vertex).empty()) report.fail("the path to the base vertex must be empty");
  for (int v = 0; v < s.count(0); ++v) {
    const auto& path = ps.paths.at(v);
    const int h = x.stabilizer({0, v});
    int at = ps.base_vertex;
    for (const auto& step : path) {
      if (step.edge < 0 || step.edge >= s.count(1)) {
        report.fail("path to '" + s.name({0, v}) + "' uses an unknown edge");
        break;
      }
      if (!x.fixed(h, SimplexRef{1, step.edge}))
        report.fail("path to '" + s.name({0, v}) + "' leaves X^{G_x} at edge '" + s.name({1, step.edge}) + "'");
      const int from = step.forward ? edge_source(s, step.edge) : edge_target(s, step.edge);
      if (from != at) report.fail("path to '" + s.name({0, v}) + "' is not connected at '" + s.name({1, step.edge}) + "'");
      at = step.forward ? edge_target(s, step.edge) : edge_source(s, step.edge);
    }
    if (at != v) report.fail("path to '" + s.name({0, v}) + "' ends elsewhere");
    for (int g = 0; g < x.group().order(); ++g) {
      const int gv = x.act(g, SimplexRef{0, v}).index;
      const auto moved = translate_path(x, g, path);
      const auto& stored = ps.paths.at(gv);
      bool same = moved.size() == stored.size();
      for (std::size_t i = 0; same && i < moved.size(); ++i)
        same = moved[i].edge == stored[i].edge && moved[i].forward == stored[i].forward;
      if (!same) report.fail("translated path to '" + s.name({0, gv}) + "' depends on the translating element");
    }
  }
  return report;
}

/// kappa(e: a -> b) = hol(omega_b)^{-1} raw(e) hol(omega_a).
inline Twisting based_twisting(const GSimplicialSet& x, const CoefficientSystem& c, const Twisting& raw,
                                   const PathSystem& ps) {
  const auto& s = x.base();
  Twisting based = raw;
  for (int h = 0; h < x.category().size(); ++h) {
    const FinGroup& p = c.group(h);
    for (int e = 0; e < s.count(1); ++e) {
      if (raw.labels[h][e] < 0) continue;
      const int hb = holonomy(c, raw, h, ps.paths.at(edge_target(s, e)));
      const int ha = holonomy(c, raw, h, ps.paths.at(edge_source(s, e)));
      based.labels[h][e] = p.mul(p.mul(p.inv(hb), raw.labels[h][e]), ha);
    }
  }
  return based;
}

/// Which identification of fibres the local system uses: the vertex frame takes
/// raw edge labels as transports between vertex fibres; the path-system frame
/// identifies every fibre with the one at the base vertex along its chosen path.
enum class Frame { vertex, path_system };

/// M([g^, path]) : M0(G/K) -> M0(G/H) for a morphism G/H -> G/K and an edge-path
/// in X^H from x_H to g y_K.
inline AbHom coefficient_morphism(const GSimplicialSet& x, const CoefficientSystem& c, const Twisting& raw,
                                  const PathSystem* ps, Frame frame, const OrbitMorphism& m, const EdgePath& path,
                                  int start_vertex) {
  const int h = m.from;
  const FinGroup& p = c.group(h);
  int alpha = holonomy(c, raw, h, path);
  if (frame == Frame::path_system) {
    if (!ps) throw HypothesisViolation("the path-system frame needs a path system");
    const auto& s = x.base();
    int end = start_vertex;
    for (const auto& step : path) end = step.forward ? edge_target(s, step.edge) : edge_source(s, step.edge);
    alpha = p.mul(p.mul(p.inv(holonomy(c, raw, h, ps->paths.at(end))), alpha),
                  holonomy(c, raw, h, ps->paths.at(start_vertex)));
  }
  const AbHom transport{c.module(h), c.module(h), c.phi.at[h][p.inv(alpha)]};
  return compose(transport, c.m0.hom(m));
}

}  // namespace equicohom
