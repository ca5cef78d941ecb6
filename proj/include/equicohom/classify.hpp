#pragma once

// The classifying side: normalized cochains on Delta[q] with values in M0 (the
// simplicial abelian groups C(M0,n) and K(M0,n)), the W-bar construction with
// its canonical twisting, their twisted cartesian product, the map theta(kappa),
// the isomorphism between twisted cochains on G/H x Delta[q] and cochains on
// Delta[q], lifts of theta(kappa), and vertical homotopies between lifts.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "equicohom/cohomology.hpp"

namespace equicohom {

// ---------------------------------------------------------------------------
// Normalized cochains on Delta[q]

struct EMCochain {
  int subgroup = 0;
  int n = 0;
  int q = 0;
  std::vector<Vector> values;  // indexed by increasing_tuples(q, n)
};

inline EMCochain em_zero(const CoefficientSystem& c, int h, int n, int q) {
  EMCochain out{h, n, q, {}};
  out.values.assign(increasing_tuples(q, n).size(), c.module(h).zero());
  return out;
}

inline const Vector& em_value(const EMCochain& c, const std::vector<int>& alpha) {
  return c.values.at(tuple_index(c.q, alpha));
}

inline bool em_equal(const CoefficientSystem& coeffs, const EMCochain& a, const EMCochain& b) {
  if (a.subgroup != b.subgroup || a.n != b.n || a.q != b.q) return false;
  const auto& mod = coeffs.module(a.subgroup);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    if (!mod.equal(a.values[k], b.values[k])) return false;
  return true;
}

/// (d_i c)(alpha) = c(d^i alpha).
inline EMCochain em_face(const CoefficientSystem& coeffs, const EMCochain& c, int i) {
  if (c.q == 0 || i < 0 || i > c.q) throw IndexOutOfRange("cochain face index out of range");
  EMCochain out = em_zero(coeffs, c.subgroup, c.n, c.q - 1);
  const auto cof = mono::coface(c.q, i);
  const auto tuples = increasing_tuples(c.q - 1, c.n);
  for (std::size_t k = 0; k < tuples.size(); ++k) out.values[k] = em_value(c, mono::compose(cof, tuples[k]));
  return out;
}

/// (s_j c)(beta) = c(s^j beta), zero on degenerate tuples.
inline EMCochain em_degeneracy(const CoefficientSystem& coeffs, const EMCochain& c, int j) {
  if (j < 0 || j > c.q) throw IndexOutOfRange("cochain degeneracy index out of range");
  EMCochain out = em_zero(coeffs, c.subgroup, c.n, c.q + 1);
  const auto codeg = mono::codegeneracy(c.q, j);
  const auto tuples = increasing_tuples(c.q + 1, c.n);
  for (std::size_t k = 0; k < tuples.size(); ++k) {
    const auto image = mono::compose(codeg, tuples[k]);
    if (mono::is_injective(image)) out.values[k] = em_value(c, image);
  }
  return out;
}

/// The simplicial coboundary on Delta[q].
inline EMCochain em_delta(const CoefficientSystem& coeffs, const EMCochain& c) {
  EMCochain out = em_zero(coeffs, c.subgroup, c.n + 1, c.q);
  const auto tuples = increasing_tuples(c.q, c.n + 1);
  for (std::size_t k = 0; k < tuples.size(); ++k)
    for (int i = 0; i <= c.n + 1; ++i) {
      auto alpha = tuples[k];
      alpha.erase(alpha.begin() + i);
      const Vector& v = em_value(c, alpha);
      out.values[k] = i % 2 ? out.values[k] - v : out.values[k] + v;
    }
  return out;
}

/// Entrywise action a . mu = phi(a) o mu.
inline EMCochain em_act(const CoefficientSystem& coeffs, const EMCochain& c, int a) {
  EMCochain out = c;
  for (auto& v : out.values) v = coeffs.act(c.subgroup, a, v);
  return out;
}

/// C(M0,n)(g^) : values pushed through M0 of a morphism G/H -> G/K.
inline EMCochain em_restrict(const CoefficientSystem& coeffs, const OrbitMorphism& m, const EMCochain& c) {
  EMCochain out{m.from, c.n, c.q, {}};
  for (const auto& v : c.values) out.values.push_back(coeffs.restrict(m, v));
  return out;
}

inline bool em_is_cocycle(const CoefficientSystem& coeffs, const EMCochain& c) {
  const EMCochain d = em_delta(coeffs, c);
  return em_equal(coeffs, d, em_zero(coeffs, d.subgroup, d.n, d.q));
}

// ---------------------------------------------------------------------------
// W-bar

struct WBarSimplex {
  int subgroup = 0;
  std::vector<int> entries;  // [g1, ..., gq]

  int dim() const { return static_cast<int>(entries.size()); }
  bool operator==(const WBarSimplex&) const = default;
};

/// d0 drops g1, inner faces merge (g_i, g_{i+1}) into g_{i+1} g_i, d_q drops g_q.
inline WBarSimplex wbar_face(const CoefficientSystem& coeffs, const WBarSimplex& w, int i) {
  const int q = w.dim();
  if (q == 0 || i < 0 || i > q) throw IndexOutOfRange("W-bar face index out of range");
  WBarSimplex out{w.subgroup, {}};
  const FinGroup& p = coeffs.group(w.subgroup);
  if (i == 0) {
    out.entries.assign(w.entries.begin() + 1, w.entries.end());
  } else if (i == q) {
    out.entries.assign(w.entries.begin(), w.entries.end() - 1);
  } else {
    for (int k = 0; k < q; ++k) {
      if (k == i - 1) {
        out.entries.push_back(p.mul(w.entries[k + 1], w.entries[k]));
        ++k;
      } else {
        out.entries.push_back(w.entries[k]);
      }
    }
  }
  return out;
}

/// s_j inserts the identity before entry j (0-based), so s0 prepends it.
inline WBarSimplex wbar_degeneracy(const CoefficientSystem& coeffs, const WBarSimplex& w, int j) {
  if (j < 0 || j > w.dim()) throw IndexOutOfRange("W-bar degeneracy index out of range");
  WBarSimplex out = w;
  out.entries.insert(out.entries.begin() + j, coeffs.group(w.subgroup).identity());
  return out;
}

inline int kappa_pi(const WBarSimplex& w) {
  if (w.entries.empty()) throw DimensionMismatch("the canonical twisting starts in dimension 1");
  return w.entries.front();
}

inline WBarSimplex wbar_restrict(const CoefficientSystem& coeffs, const OrbitMorphism& m, const WBarSimplex& w) {
  WBarSimplex out{m.from, {}};
  for (int g : w.entries) out.entries.push_back(coeffs.pi.apply(m, g));
  return out;
}

// ---------------------------------------------------------------------------
// The twisted cartesian product C(M0,n) x_kappa(pi) W-bar

struct TCPSimplex {
  EMCochain cochain;
  WBarSimplex base;
};

inline TCPSimplex tcp_face(const CoefficientSystem& coeffs, const TCPSimplex& t, int i) {
  if (t.cochain.q != t.base.dim()) throw DimensionMismatch("TCP components of different dimension");
  if (i == 0)
    return {em_act(coeffs, em_face(coeffs, t.cochain, 0), kappa_pi(t.base)), wbar_face(coeffs, t.base, 0)};
  return {em_face(coeffs, t.cochain, i), wbar_face(coeffs, t.base, i)};
}

inline TCPSimplex tcp_degeneracy(const CoefficientSystem& coeffs, const TCPSimplex& t, int j) {
  return {em_degeneracy(coeffs, t.cochain, j), wbar_degeneracy(coeffs, t.base, j)};
}

inline bool tcp_equal(const CoefficientSystem& coeffs, const TCPSimplex& a, const TCPSimplex& b) {
  return em_equal(coeffs, a.cochain, b.cochain) && a.base == b.base;
}

/// u(G/H)((c, w)) = c(0, 1, ..., n).
inline Vector fundamental_u(const TCPSimplex& t) {
  if (t.cochain.q != t.cochain.n) throw DimensionMismatch("the fundamental cochain is evaluated in its own degree");
  return t.cochain.values.at(0);
}

/// Checks the simplicial identities for any face/degeneracy pair on sample simplices.
template <class Simplex, class Face, class Degeneracy, class Equal>
ValidationReport check_simplicial_identities(const std::vector<std::vector<Simplex>>& samples, Face face,
                                             Degeneracy degeneracy, Equal equal, const std::string& what) {
  ValidationReport report;
  auto fail = [&](const std::string& id, int q) {
    report.fail(what + ": " + id + " fails in dimension " + std::to_string(q));
  };
  for (int q = 0; q < static_cast<int>(samples.size()); ++q)
    for (const auto& x : samples[q]) {
      for (int j = 1; j <= q; ++j)
        for (int i = 0; i < j; ++i)
          if (q >= 2 && !equal(face(face(x, j), i), face(face(x, i), j - 1))) fail("d_i d_j = d_{j-1} d_i", q);
      for (int j = 0; j <= q; ++j) {
        const Simplex sx = degeneracy(x, j);
        if (!equal(face(sx, j), x) || !equal(face(sx, j + 1), x)) fail("d_j s_j = d_{j+1} s_j = id", q);
        for (int i = 0; i <= q + 1; ++i) {
          if (q == 0 && i != j && i != j + 1) continue;
          if (i < j && !equal(face(sx, i), degeneracy(face(x, i), j - 1))) fail("d_i s_j = s_{j-1} d_i", q);
          if (i > j + 1 && !equal(face(sx, i), degeneracy(face(x, i - 1), j))) fail("d_i s_j = s_j d_{i-1}", q);
        }
        for (int i = 0; i <= j; ++i)
          if (!equal(degeneracy(degeneracy(x, j), i), degeneracy(degeneracy(x, i), j + 1)))
            fail("s_i s_j = s_{j+1} s_i", q);
      }
    }
  return report;
}

// ---------------------------------------------------------------------------
// Lifts

/// Cochain components of a lift of theta(kappa), per subgroup and nondegenerate simplex.
struct Lift {
  int degree = 0;
  std::vector<std::vector<std::map<int, EMCochain>>> cells;  // [subgroup][q][index in X]
};

class Classifier {
 public:
  explicit Classifier(const EquivariantComplex& complex) : cx_(complex) {}

  const EquivariantComplex& complex() const { return cx_; }
  const CoefficientSystem& coefficients() const { return cx_.coefficients(); }

  /// [kappa(x), kappa(d0 x), ..., kappa(d0^{q-1} x)].
  WBarSimplex theta(int h, const FormalSimplex& x) const {
    WBarSimplex w{h, {}};
    FormalSimplex y = x;
    for (int k = 0; k < x.dim(); ++k) {
      w.entries.push_back(derive_kappa_q(cx_.space(), coefficients(), cx_.twisting(), h, y));
      if (y.dim() > 1) y = cx_.space().base().face(y, 0);
    }
    return w;
  }

  // -- G/H x Delta[q] ---------------------------------------------------------

  const OrbitSimplex& orbit_simplex(int h, int q) const {
    return orbit_simplices_.get({h, q}, [&] { return orbit_times_simplex(cx_.space().category_ptr(), h, q); });
  }

  /// The identity coset of G/H.
  int home_coset(int h) const { return cx_.category().coset_rep(cx_.space().group().identity(), h); }

  /// kappa(eH, (0, a)) on G/H x Delta[q].
  int corner_twist(const OrbitSimplex& y, const Twisting& k, int a) const {
    const int h = y.subgroup;
    if (a == 0) return coefficients().group(h).identity();
    return k.edge(h, y.at(home_coset(h), {0, a}).index);
  }

  /// E_H(f)(alpha) = phi(kappa(eH, (0, alpha_0)))^{-1} f(G/H)(eH, alpha).
  EMCochain e_iso(const OrbitSimplex& y, const EquivariantComplex& ycx, const EquivariantCochain& f) const {
    const int h = y.subgroup;
    EMCochain out = em_zero(coefficients(), h, f.degree, y.q);
    const auto tuples = increasing_tuples(y.q, f.degree);
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      const FormalSimplex z{y.at(home_coset(h), tuples[k])};
      const int twist = corner_twist(y, ycx.twisting(), tuples[k][0]);
      out.values[k] = coefficients().act_inverse(h, twist, ycx.evaluate(f, h, z));
    }
    return out;
  }

  /// f(G/K)(a^, alpha) = M0(a^)(kappa(eH, (0, alpha_0)) c(alpha)), stored at orbit representatives.
  EquivariantCochain e_iso_inverse(const OrbitSimplex& y, const EquivariantComplex& ycx, const EMCochain& c) const {
    const int h = y.subgroup;
    EquivariantCochain f = ycx.zero(c.n, Flavor::twisted);
    const auto& oc = cx_.category();
    for (int o = 0; o < ycx.orbit_count(c.n); ++o) {
      const Orbit& orbit = ycx.space().orbits(c.n)[o];
      const auto [coset, alpha] = y.component(orbit.rep);
      const int twist = corner_twist(y, ycx.twisting(), alpha[0]);
      const Vector at_home = coefficients().act(h, twist, em_value(c, alpha));
      f.values[o] = coefficients().restrict(oc.morphism(orbit.stabilizer, h, coset), at_home);
    }
    return f;
  }

  /// The G-map sigma : G/H x Delta[q] -> X, (aH, alpha) |-> a (x o alpha).
  FormalSimplex characteristic(const OrbitSimplex& y, const FormalSimplex& x, const FormalSimplex& z) const {
    const auto [coset, alpha] = y.component(z.base);
    const FormalSimplex image = cx_.space().base().restrict(x, alpha);
    return cx_.space().act(coset, cx_.space().base().restrict(image, z.surjection()));
  }

  /// The complex on G/H x Delta[q] carrying the twisting pulled back along sigma.
  EquivariantComplex pullback_complex(const OrbitSimplex& y, const FormalSimplex& x) const {
    const auto& ys = y.set;
    const auto& oc = cx_.category();
    Twisting k{std::vector<std::vector<int>>(oc.size(), std::vector<int>(ys.base().count(1), -1))};
    for (int h = 0; h < oc.size(); ++h)
      for (const auto& e : ys.fixed_simplices(h, 1))
        k.labels[h][e.index] =
            derive_kappa_q(cx_.space(), coefficients(), cx_.twisting(), h, characteristic(y, x, FormalSimplex{e}));
    return EquivariantComplex(ys, coefficients(), std::move(k));
  }

  EquivariantCochain pullback_cochain(const OrbitSimplex& y, const EquivariantComplex& ycx, const FormalSimplex& x,
                                      const EquivariantCochain& t) const {
    EquivariantCochain f = ycx.zero(t.degree, Flavor::twisted);
    for (int o = 0; o < ycx.orbit_count(t.degree); ++o) {
      const Orbit& orbit = ycx.space().orbits(t.degree)[o];
      f.values[o] = cx_.evaluate(t, orbit.stabilizer, characteristic(y, x, FormalSimplex{orbit.rep}));
    }
    return f;
  }

  /// Gamma(T)(G/H)(x) = (E_H sigma^* T, theta(x)); the second component is implicit.
  Lift lift_of(const EquivariantCochain& t) const {
    Lift lift{t.degree, {}};
    const auto& oc = cx_.category();
    const auto& xs = cx_.space();
    lift.cells.assign(oc.size(), std::vector<std::map<int, EMCochain>>(xs.truncation() + 1));
    for (int h = 0; h < oc.size(); ++h)
      for (int q = 0; q <= xs.truncation(); ++q) {
        const auto fixed = xs.fixed_simplices(h, q);
        if (fixed.empty()) continue;
        const OrbitSimplex& y = orbit_simplex(h, q);
        for (const auto& r : fixed) {
          const FormalSimplex x{r};
          if (t.degree > q) {
            lift.cells[h][q].emplace(r.index, em_zero(coefficients(), h, t.degree, q));
            continue;
          }
          const EquivariantComplex ycx = pullback_complex(y, x);
          lift.cells[h][q].emplace(r.index, e_iso(y, ycx, pullback_cochain(y, ycx, x, t)));
        }
      }
    return lift;
  }

  /// The lift's cochain component at any simplex of X^H, degenerate ones derived.
  EMCochain lift_value(const Lift& f, int h, const FormalSimplex& x) const {
    EMCochain c = f.cells.at(h).at(x.base.dim).at(x.base.index);
    for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) c = em_degeneracy(coefficients(), c, *it);
    return c;
  }

  TCPSimplex lift_at(const Lift& f, int h, const FormalSimplex& x) const { return {lift_value(f, h, x), theta(h, x)}; }

  /// Psi(F)(G/H)(x) = c(x)(Delta_n) at orbit representatives.
  EquivariantCochain cochain_of(const Lift& f) const {
    EquivariantCochain t = cx_.zero(f.degree, Flavor::twisted);
    for (int o = 0; o < cx_.orbit_count(f.degree); ++o) {
      const Orbit& orbit = cx_.space().orbits(f.degree)[o];
      t.values[o] = fundamental_u(lift_at(f, orbit.stabilizer, FormalSimplex{orbit.rep}));
    }
    return t;
  }

  bool lift_equal(const Lift& a, const Lift& b) const {
    if (a.degree != b.degree || a.cells.size() != b.cells.size()) return false;
    for (std::size_t h = 0; h < a.cells.size(); ++h)
      for (std::size_t q = 0; q < a.cells[h].size(); ++q) {
        if (a.cells[h][q].size() != b.cells[h][q].size()) return false;
        for (const auto& [k, c] : a.cells[h][q]) {
          auto it = b.cells[h][q].find(k);
          if (it == b.cells[h][q].end() || !em_equal(coefficients(), c, it->second)) return false;
        }
      }
    return true;
  }

  /// Simpliciality in the twisted product, naturality over the orbit category,
  /// and p o F = theta(kappa).
  ValidationReport check_lift(const Lift& f) const {
    ValidationReport report;
    const auto& xs = cx_.space();
    const auto& s = xs.base();
    const auto& oc = cx_.category();
    const auto& coeffs = coefficients();
    for (int h = 0; h < oc.size(); ++h)
      for (int q = 0; q <= xs.truncation(); ++q)
        for (const auto& r : xs.fixed_simplices(h, q)) {
          const FormalSimplex x{r};
          if (!f.cells.at(h).at(q).count(r.index)) {
            report.fail("lift has no value at '" + s.name(r) + "'");
            continue;
          }
          const TCPSimplex here = lift_at(f, h, x);
          if (here.cochain.n != f.degree || here.cochain.q != q)
            report.fail("lift value at '" + s.name(r) + "' has the wrong shape");
          for (int i = 0; q > 0 && i <= q; ++i)
            if (!tcp_equal(coeffs, tcp_face(coeffs, here, i), lift_at(f, h, s.face(x, i))))
              report.fail("lift does not commute with d" + std::to_string(i) + " at '" + s.name(r) + "' for subgroup " +
                          std::to_string(h));
          for (int j = 0; j <= q; ++j)
            if (!tcp_equal(coeffs, tcp_degeneracy(coeffs, here, j), lift_at(f, h, s.degeneracy(x, j))))
              report.fail("lift does not commute with s" + std::to_string(j) + " at '" + s.name(r) + "'");
          if (q >= 1 && kappa_pi(here.base) != derive_kappa_q(xs, coeffs, cx_.twisting(), h, x))
            report.fail("p o F differs from theta at '" + s.name(r) + "'");
        }
    for (const auto& m : oc.all_morphisms())
      for (int q = 0; q <= xs.truncation(); ++q)
        for (const auto& r : xs.fixed_simplices(m.to, q)) {
          const FormalSimplex x{r};
          const EMCochain moved = lift_value(f, m.from, xs.translate(m, x));
          if (!em_equal(coeffs, moved, em_restrict(coeffs, m, lift_value(f, m.to, x))))
            report.fail("lift is not natural on " + oc.describe(m) + " at '" + s.name(r) + "'");
          if (!(theta(m.from, xs.translate(m, x)) == wbar_restrict(coeffs, m, theta(m.to, x))))
            report.fail("theta is not natural on " + oc.describe(m) + " at '" + s.name(r) + "'");
        }
    return report;
  }

  /// Psi(F) = F^*(u): the fundamental cochain pulled back agrees with Psi at every (H, x).
  bool check_fundamental_pullback(const Lift& f) const {
    const EquivariantCochain t = cochain_of(f);
    const auto& xs = cx_.space();
    for (int h = 0; h < cx_.category().size(); ++h)
      for (const auto& r : xs.fixed_simplices(h, f.degree)) {
        const FormalSimplex x{r};
        if (!coefficients().module(h).equal(fundamental_u(lift_at(f, h, x)), cx_.evaluate(t, h, x))) return false;
      }
    return true;
  }

  /// Every cochain component is a cocycle on its simplex.
  bool lands_in_cocycles(const Lift& f) const {
    for (const auto& per_h : f.cells)
      for (const auto& per_q : per_h)
        for (const auto& [k, c] : per_q)
          if (!em_is_cocycle(coefficients(), c)) return false;
    return true;
  }

  /// (delta x id) applied to a lift: em_delta on every component.
  Lift lift_coboundary(const Lift& f) const {
    Lift out{f.degree + 1, f.cells};
    for (auto& per_h : out.cells)
      for (auto& per_q : per_h)
        for (auto& [k, c] : per_q) c = em_delta(coefficients(), c);
    return out;
  }

 private:
  const EquivariantComplex& cx_;
  Memo<std::pair<int, int>, OrbitSimplex> orbit_simplices_;
};

// ---------------------------------------------------------------------------
// Vertical homotopies

struct VerticalHomotopy {
  std::shared_ptr<GProduct> cylinder;
  std::shared_ptr<EquivariantComplex> complex;  // on X x Delta[1] with kappa o pr1
  EquivariantCochain gamma;                     // pr1^* f0 - delta beta
  Lift lift;
};

/// The cylinder X x Delta[1] with the projected twisting.
inline std::pair<std::shared_ptr<GProduct>, std::shared_ptr<EquivariantComplex>> cylinder_complex(
    const EquivariantComplex& cx) {
  const auto& xs = cx.space();
  auto cyl = std::make_shared<GProduct>(gproduct(xs, standard_simplex(1, xs.truncation()), xs.truncation()));
  const auto& oc = xs.category();
  Twisting k{std::vector<std::vector<int>>(oc.size(), std::vector<int>(cyl->set.base().count(1), -1))};
  for (int h = 0; h < oc.size(); ++h)
    for (const auto& e : cyl->set.fixed_simplices(h, 1))
      k.labels[h][e.index] =
          derive_kappa_q(xs, cx.coefficients(), cx.twisting(), h, cyl->product.first(FormalSimplex{e}, xs.base()));
  auto ccx = std::make_shared<EquivariantComplex>(cyl->set, cx.coefficients(), std::move(k));
  return {cyl, ccx};
}

/// i_eps : X -> X x Delta[1] on a nondegenerate simplex.
inline FormalSimplex cylinder_end(const GProduct& cyl, const FormalSimplex& x, int end) {
  DegeneracyWord w;
  for (int j = x.dim() - 1; j >= 0; --j) w.push_back(j);
  return cyl.product.pair(x, FormalSimplex{SimplexRef{0, end}, w});
}

/// Builds gamma = pr1^* f0 - delta(beta) with beta = h on simplices constant at vertex 1, and lifts it.
inline VerticalHomotopy vertical_homotopy(const EquivariantComplex& cx, const EquivariantCochain& f0,
                                          const EquivariantCochain& f1, const EquivariantCochain& h) {
  if (f0.degree != f1.degree || h.degree + 1 != f0.degree) throw DimensionMismatch("homotopy data in wrong degrees");
  const EquivariantCochain dh = cx.coboundary(EquivariantCochain{h.degree, Flavor::twisted, h.values});
  if (!cx.equal(dh, cx.subtract(f0, f1))) throw NotCohomologous("delta h differs from f0 - f1");
  auto [cyl, ccx] = cylinder_complex(cx);
  const auto& xs = cx.space();
  const auto& ys = ccx->space();
  const int n = f0.degree;

  EquivariantCochain beta = ccx->zero(n - 1, Flavor::twisted);
  for (int o = 0; o < ccx->orbit_count(n - 1); ++o) {
    const Orbit& orbit = ys.orbits(n - 1)[o];
    const FormalSimplex z{orbit.rep};
    if (cyl->product.pair_of(z.base).second.base == SimplexRef{0, 1}) {
      const FormalSimplex first = cyl->product.first(z, xs.base());
      beta.values[o] = cx.evaluate(h, orbit.stabilizer, first);
    }
  }
  EquivariantCochain pulled = ccx->zero(n, Flavor::twisted);
  for (int o = 0; o < ccx->orbit_count(n); ++o) {
    const Orbit& orbit = ys.orbits(n)[o];
    pulled.values[o] = cx.evaluate(f0, orbit.stabilizer, cyl->product.first(FormalSimplex{orbit.rep}, xs.base()));
  }
  EquivariantCochain gamma = ccx->subtract(pulled, ccx->coboundary(beta));
  Lift lift = Classifier(*ccx).lift_of(gamma);
  return {cyl, ccx, std::move(gamma), std::move(lift)};
}

/// Endpoint recovery, p o F = theta(kappa) o pr1, and the lift invariants.
inline ValidationReport check_vertical_homotopy(const EquivariantComplex& cx, const VerticalHomotopy& vh,
                                                const Lift& start, const Lift& end) {
  ValidationReport report;
  const Classifier base(cx);
  const Classifier cyl(*vh.complex);
  const auto& xs = cx.space();
  const auto& coeffs = cx.coefficients();
  report.merge(cyl.check_lift(vh.lift), "homotopy: ");
  for (int h = 0; h < xs.category().size(); ++h)
    for (int q = 0; q <= xs.truncation(); ++q)
      for (const auto& r : xs.fixed_simplices(h, q)) {
        const FormalSimplex x{r};
        for (int eps = 0; eps < 2; ++eps) {
          const Lift& expected = eps == 0 ? start : end;
          const EMCochain got = cyl.lift_value(vh.lift, h, cylinder_end(*vh.cylinder, x, eps));
          if (!em_equal(coeffs, got, base.lift_value(expected, h, x)))
            report.fail("end " + std::to_string(eps) + " differs at '" + xs.base().name(r) + "' for subgroup " +
                        std::to_string(h));
        }
      }
  const auto& ys = vh.complex->space();
  for (int h = 0; h < xs.category().size(); ++h)
    for (int q = 0; q <= ys.truncation(); ++q)
      for (const auto& r : ys.fixed_simplices(h, q)) {
        const FormalSimplex z{r};
        if (!(cyl.theta(h, z) == base.theta(h, vh.cylinder->product.first(z, xs.base()))))
          report.fail("p o F differs from theta o pr1 at '" + ys.base().name(r) + "'");
      }
  return report;
}

}  // namespace equicohom
