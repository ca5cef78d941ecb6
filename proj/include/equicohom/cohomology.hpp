#pragma once

// Equivariant cochains stored per orbit of nondegenerate simplices, the two
// coboundaries (local-coefficient and twisted), their cohomology, and the
// comparison maps between the two complexes.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "equicohom/localsys.hpp"
#include "equicohom/memo.hpp"

namespace equicohom {

enum class Flavor { bredon, twisted };

inline const char* to_string(Flavor f) { return f == Flavor::bredon ? "bredon" : "twisted"; }

struct EquivariantCochain {
  int degree = 0;
  Flavor flavor = Flavor::twisted;
  std::vector<Vector> values;  // one per orbit of nondegenerate simplices, in M0(G/G_r)
};

class EquivariantComplex {
 public:
  EquivariantComplex(GSimplicialSet space, CoefficientSystem coefficients, Twisting raw,
                     std::optional<PathSystem> paths = std::nullopt, Frame frame = Frame::vertex)
      : space_(std::move(space)),
        coeffs_(std::move(coefficients)),
        raw_(std::move(raw)),
        paths_(std::move(paths)),
        frame_(frame) {
    twisting_ = paths_ ? based_twisting(space_, coeffs_, raw_, *paths_) : raw_;
  }

  const GSimplicialSet& space() const { return space_; }
  const CoefficientSystem& coefficients() const { return coeffs_; }
  const OrbitCategory& category() const { return space_.category(); }
  const Twisting& raw_twisting() const { return raw_; }
  /// The twisting used by the twisted coboundary: based when a path system is present.
  const Twisting& twisting() const { return twisting_; }
  const std::optional<PathSystem>& paths() const { return paths_; }
  Frame frame() const { return frame_; }
  int truncation() const { return space_.truncation(); }

  /// G-connected, a G-fixed base vertex, and a valid path system.
  ValidationReport check_hypotheses() const {
    ValidationReport report;
    if (auto h = space_.disconnected_subgroup())
      report.fail("X^H is empty or disconnected for subgroup " + std::to_string(*h));
    if (!paths_)
      report.fail("no path system");
    else
      report.merge(validate_path_system(space_, *paths_));
    return report;
  }

  void require_hypotheses(const std::string& what) const {
    auto report = check_hypotheses();
    if (!report.ok()) throw HypothesisViolation(what + ": " + report.violations.front());
  }

  // -- cochain groups -------------------------------------------------------

  int orbit_count(int n) const { return n >= 0 && n <= truncation() ? static_cast<int>(space_.orbits(n).size()) : 0; }

  const FGAbelianGroup& orbit_module(int n, int o) const { return coeffs_.module(space_.orbits(n)[o].stabilizer); }

  FGAbelianGroup cochain_group(int n) const {
    std::vector<FGAbelianGroup> parts;
    for (int o = 0; o < orbit_count(n); ++o) parts.push_back(orbit_module(n, o));
    return FGAbelianGroup::direct_sum(parts);
  }

  EquivariantCochain zero(int n, Flavor flavor) const {
    EquivariantCochain f{n, flavor, {}};
    for (int o = 0; o < orbit_count(n); ++o) f.values.push_back(orbit_module(n, o).zero());
    return f;
  }

  Vector flatten(const EquivariantCochain& f) const {
    Vector out;
    for (const auto& v : f.values) out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  EquivariantCochain unflatten(int n, Flavor flavor, const Vector& flat) const {
    EquivariantCochain f = zero(n, flavor);
    if (flat.size() != cochain_group(n).generators()) throw DimensionMismatch("cochain vector has the wrong length");
    std::size_t pos = 0;
    for (auto& v : f.values)
      for (auto& x : v) x = flat[pos++];
    return f;
  }

  bool equal(const EquivariantCochain& a, const EquivariantCochain& b) const {
    if (a.degree != b.degree || a.values.size() != b.values.size()) return false;
    for (int o = 0; o < static_cast<int>(a.values.size()); ++o)
      if (!orbit_module(a.degree, o).equal(a.values[o], b.values[o])) return false;
    return true;
  }

  bool is_zero(const EquivariantCochain& a) const { return equal(a, zero(a.degree, a.flavor)); }

  EquivariantCochain subtract(const EquivariantCochain& a, const EquivariantCochain& b) const {
    EquivariantCochain out = a;
    for (std::size_t o = 0; o < out.values.size(); ++o) out.values[o] = out.values[o] - b.values.at(o);
    return out;
  }

  EquivariantCochain add(const EquivariantCochain& a, const EquivariantCochain& b) const {
    EquivariantCochain out = a;
    for (std::size_t o = 0; o < out.values.size(); ++o) out.values[o] = out.values[o] + b.values.at(o);
    return out;
  }

  template <class Rng>
  EquivariantCochain random(int n, Flavor flavor, Rng& rng, int bound = 5) const {
    std::uniform_int_distribution<int> dist(-bound, bound);
    EquivariantCochain f = zero(n, flavor);
    for (auto& v : f.values)
      for (auto& x : v) x = dist(rng);
    return f;
  }

  /// A random cocycle for the given flavor, as a combination of cocycle-lattice generators.
  template <class Rng>
  EquivariantCochain random_cocycle(int n, Flavor flavor, Rng& rng, int bound = 3) const {
    const IntMatrix basis = cocycle_lattice_basis(coboundary_hom(n, flavor));
    std::uniform_int_distribution<int> dist(-bound, bound);
    Vector combo = zero_vector(basis.cols());
    for (auto& x : combo) x = dist(rng);
    return unflatten(n, flavor, basis.apply(combo));
  }

  // -- evaluation -------------------------------------------------------------

  /// f(G/H)(x) for x in X^H.
  Vector evaluate(const EquivariantCochain& f, int h, const FormalSimplex& x) const {
    if (x.dim() != f.degree) throw DimensionMismatch("evaluating a degree-" + std::to_string(f.degree) + " cochain on a " +
                                                     std::to_string(x.dim()) + "-simplex");
    if (!space_.fixed(h, x)) throw ValidationError("simplex is not fixed by the subgroup");
    if (x.degenerate()) return coeffs_.module(h).zero();
    const int o = space_.orbit_of(x.base);
    const int g = space_.translator(x.base);
    const auto m = category().morphism(h, space_.orbits(f.degree)[o].stabilizer, g);
    return coeffs_.restrict(m, f.values.at(o));
  }

  // -- coboundaries -----------------------------------------------------------

  /// delta^n as a homomorphism of presented groups.
  const AbHom& coboundary_hom(int n, Flavor flavor) const {
    return deltas_.get({n, flavor}, [&] { return build_coboundary(n, flavor); });
  }

  EquivariantCochain coboundary(const EquivariantCochain& f) const {
    const AbHom& d = coboundary_hom(f.degree, f.flavor);
    return unflatten(f.degree + 1, f.flavor, d(flatten(f)));
  }

  /// H^n of the chosen complex; needs the truncation to reach n+1.
  FGAbelianGroup cohomology(int n, Flavor flavor) const {
    if (n < 0 || n + 1 > truncation())
      throw DimensionMismatch("degree " + std::to_string(n) + " needs truncation at least " + std::to_string(n + 1));
    std::vector<FGAbelianGroup> groups;
    std::vector<AbHom> deltas;
    for (int k = 0; k <= n + 1; ++k) groups.push_back(cochain_group(k));
    for (int k = 0; k <= n; ++k) deltas.push_back(coboundary_hom(k, flavor));
    return cohomology_of_complex(groups, deltas).at(n);
  }

  // -- comparison maps --------------------------------------------------------

  /// Transport the value at each representative to the fibre over the base vertex.
  EquivariantCochain bredon_to_twisted(const EquivariantCochain& f) const {
    require_hypotheses("comparison map");
    return transport(f, Flavor::twisted, false);
  }

  EquivariantCochain twisted_to_bredon(const EquivariantCochain& f) const {
    require_hypotheses("comparison map");
    return transport(f, Flavor::bredon, true);
  }

 private:
  AbHom build_coboundary(int n, Flavor flavor) const {
    const FGAbelianGroup src = cochain_group(n), dst = cochain_group(n + 1);
    IntMatrix mat(dst.generators(), src.generators());
    if (n + 1 > truncation()) return {src, dst, mat};
    if (flavor == Flavor::bredon && frame_ == Frame::path_system) require_hypotheses("coboundary in the path-system frame");
    std::vector<std::size_t> src_offset, dst_offset;
    for (std::size_t acc = 0, o = 0; o < static_cast<std::size_t>(orbit_count(n)); ++o)
      src_offset.push_back(acc), acc += orbit_module(n, static_cast<int>(o)).generators();
    for (std::size_t acc = 0, o = 0; o < static_cast<std::size_t>(orbit_count(n + 1)); ++o)
      dst_offset.push_back(acc), acc += orbit_module(n + 1, static_cast<int>(o)).generators();
    const auto& s = space_.base();
    for (int t = 0; t < orbit_count(n + 1); ++t) {
      const Orbit& target = space_.orbits(n + 1)[t];
      const int h = target.stabilizer;
      const FormalSimplex y{target.rep};
      for (int i = 0; i <= n + 1; ++i) {
        const FormalSimplex face = s.face(y, i);
        if (face.degenerate()) continue;
        const int o = space_.orbit_of(face.base);
        const auto m = category().morphism(h, space_.orbits(n)[o].stabilizer, space_.translator(face.base));
        IntMatrix block = coeffs_.m0.maps.at(m);
        if (i == 0) block = first_face_transport(h, y, flavor) * block;
        const Integer sign = i % 2 ? -1 : 1;
        for (std::size_t r = 0; r < block.rows(); ++r)
          for (std::size_t c = 0; c < block.cols(); ++c)
            mat(dst_offset[t] + r, src_offset[o] + c) += sign * block(r, c);
      }
    }
    return {src, dst, mat};
  }

  // Automorphism of M0(G/H) applied to the value on d0 y.
  IntMatrix first_face_transport(int h, const FormalSimplex& y, Flavor flavor) const {
    const auto& s = space_.base();
    if (flavor == Flavor::twisted) {
      const int k = derive_kappa_q(space_, coeffs_, twisting_, h, y);
      return coeffs_.phi.at[h][coeffs_.group(h).inv(k)];
    }
    const FormalSimplex e = s.restrict(y, {0, 1});
    EdgePath path;
    if (!e.degenerate()) path.push_back({e.base.index, true});
    const int start = s.vertex(y, 0).base.index;
    return coefficient_morphism(space_, coeffs_, raw_, paths_ ? &*paths_ : nullptr, frame_, category().identity(h), path,
                                start)
        .matrix;
  }

  EquivariantCochain transport(const EquivariantCochain& f, Flavor to, bool toward_vertex) const {
    EquivariantCochain out = f;
    out.flavor = to;
    const auto& s = space_.base();
    for (int o = 0; o < orbit_count(f.degree); ++o) {
      const Orbit& orbit = space_.orbits(f.degree)[o];
      const int h = orbit.stabilizer;
      const int y0 = s.vertex(FormalSimplex{orbit.rep}, 0).base.index;
      const EdgePath& omega = paths_->paths.at(y0);
      const AbHom t = toward_vertex
                          ? coefficient_morphism(space_, coeffs_, raw_, &*paths_, frame_, category().identity(h),
                                                 reverse_path(omega), y0)
                          : coefficient_morphism(space_, coeffs_, raw_, &*paths_, frame_, category().identity(h), omega,
                                                 paths_->base_vertex);
      out.values[o] = t(f.values[o]);
    }
    return out;
  }

  GSimplicialSet space_;
  CoefficientSystem coeffs_;
  Twisting raw_;
  std::optional<PathSystem> paths_;
  Frame frame_;
  Twisting twisting_;
  Memo<std::pair<int, Flavor>, AbHom> deltas_;
};

}  // namespace equicohom
