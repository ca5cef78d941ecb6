#include <gtest/gtest.h>

#include "equicohom/bundle.hpp"
#include "equicohom/classify.hpp"
#include "support.hpp"

using namespace equicohom;
using testing_support::load;

namespace {

std::string first_violation(const ValidationReport& r) { return r.ok() ? "" : r.violations.front(); }

template <class Rng>
EMCochain random_em(const CoefficientSystem& c, int h, int n, int q, Rng& rng) {
  std::uniform_int_distribution<int> dist(-4, 4);
  EMCochain out = em_zero(c, h, n, q);
  for (auto& v : out.values)
    for (auto& x : v) x = dist(rng);
  return out;
}

template <class Rng>
WBarSimplex random_wbar(const CoefficientSystem& c, int h, int q, Rng& rng) {
  std::uniform_int_distribution<int> dist(0, c.group(h).order() - 1);
  WBarSimplex w{h, {}};
  for (int k = 0; k < q; ++k) w.entries.push_back(dist(rng));
  return w;
}

// Pulls a cochain on G/K x Delta[q] back along (g^ x id) : G/H x Delta[q] -> G/K x Delta[q].
EquivariantCochain pull_along_orbit_map(const OrbitCategory& oc, const OrbitMorphism& m, const OrbitSimplex& yh,
                                        const EquivariantComplex& hcx, const OrbitSimplex& yk,
                                        const EquivariantComplex& kcx, const EquivariantCochain& f) {
  EquivariantCochain out = hcx.zero(f.degree, f.flavor);
  for (int o = 0; o < hcx.orbit_count(f.degree); ++o) {
    const Orbit& orbit = hcx.space().orbits(f.degree)[o];
    const auto [coset, alpha] = yh.component(orbit.rep);
    const int image = oc.coset_rep(oc.group().mul(coset, m.rep), m.to);
    out.values[o] = kcx.evaluate(f, orbit.stabilizer, FormalSimplex{yk.at(image, alpha)});
  }
  return out;
}

}  // namespace

TEST(EilenbergMacLane, SimplicialIdentitiesAndCoboundary) {
  const auto b = load("delta2_s3");
  const auto& c = b.coefficients;
  auto rng = testing_support::rng(31);
  for (int n = 0; n <= 2; ++n) {
    std::vector<std::vector<EMCochain>> samples(5);
    for (int q = 0; q <= 4; ++q)
      for (int k = 0; k < 4; ++k) samples[q].push_back(random_em(c, 0, n, q, rng));
    auto report = check_simplicial_identities(
        samples, [&](const EMCochain& x, int i) { return em_face(c, x, i); },
        [&](const EMCochain& x, int j) { return em_degeneracy(c, x, j); },
        [&](const EMCochain& x, const EMCochain& y) { return em_equal(c, x, y); }, "C(M,n)");
    EXPECT_TRUE(report.ok()) << first_violation(report);
    for (int q = 1; q <= 4; ++q)
      for (const auto& x : samples[q]) {
        EXPECT_TRUE(em_is_cocycle(c, em_delta(c, x)));
        for (int i = 0; i <= q; ++i) EXPECT_TRUE(em_equal(c, em_delta(c, em_face(c, x, i)), em_face(c, em_delta(c, x), i)));
      }
  }
}

TEST(WBar, SimplicialIdentitiesAndCanonicalTwisting) {
  const auto b = load("delta2_s3");  // nonabelian pi
  const auto& c = b.coefficients;
  auto rng = testing_support::rng(32);
  std::vector<std::vector<WBarSimplex>> samples(6);
  for (int q = 0; q <= 5; ++q)
    for (int k = 0; k < 10; ++k) samples[q].push_back(random_wbar(c, 0, q, rng));
  auto report = check_simplicial_identities(
      samples, [&](const WBarSimplex& w, int i) { return wbar_face(c, w, i); },
      [&](const WBarSimplex& w, int j) { return wbar_degeneracy(c, w, j); },
      [](const WBarSimplex& x, const WBarSimplex& y) { return x == y; }, "W-bar");
  EXPECT_TRUE(report.ok()) << first_violation(report);
  std::vector<std::vector<WBarSimplex>> positive(samples.begin() + 1, samples.end());
  positive.insert(positive.begin(), std::vector<WBarSimplex>{});
  auto audit = audit_twisting<WBarSimplex>(
      positive, [&](const WBarSimplex& w, int i) { return wbar_face(c, w, i); },
      [&](const WBarSimplex& w, int j) { return wbar_degeneracy(c, w, j); }, [](const WBarSimplex& w) { return kappa_pi(w); },
      c.group(0), [](const WBarSimplex& w) { return std::to_string(w.dim()) + "-simplex"; });
  EXPECT_TRUE(audit.ok()) << first_violation(audit);
}

TEST(TwistedProduct, SimplicialIdentities) {
  for (const auto& name : {"delta2_s3", "theta_sign"}) {
    const auto b = load(name);
    const auto& c = b.coefficients;
    auto rng = testing_support::rng(33);
    for (int h = 0; h < b.category->size(); ++h)
      for (int n = 0; n <= 2; ++n) {
        std::vector<std::vector<TCPSimplex>> samples(5);
        for (int q = 0; q <= 4; ++q)
          for (int k = 0; k < 4; ++k) samples[q].push_back({random_em(c, h, n, q, rng), random_wbar(c, h, q, rng)});
        auto report = check_simplicial_identities(
            samples, [&](const TCPSimplex& t, int i) { return tcp_face(c, t, i); },
            [&](const TCPSimplex& t, int j) { return tcp_degeneracy(c, t, j); },
            [&](const TCPSimplex& x, const TCPSimplex& y) { return tcp_equal(c, x, y); }, "TCP");
        EXPECT_TRUE(report.ok()) << name << ": " << first_violation(report);
      }
  }
}

TEST(TwistedProduct, MisorderedMergeBreaksTheIdentities) {
  // With a nonabelian group only one merge order in the inner faces is simplicial
  // together with the twisted d0; swapping it must be detected.
  const auto b = load("delta2_s3");
  const auto& c = b.coefficients;
  const auto& p = c.group(0);
  auto rng = testing_support::rng(34);
  auto bad_face = [&](const WBarSimplex& w, int i) {
    if (i == 0 || i == w.dim()) return wbar_face(c, w, i);
    WBarSimplex out = wbar_face(c, w, i);
    out.entries[i - 1] = p.mul(w.entries[i - 1], w.entries[i]);
    return out;
  };
  std::vector<std::vector<TCPSimplex>> samples(4);
  for (int q = 0; q <= 3; ++q)
    for (int k = 0; k < 6; ++k) samples[q].push_back({random_em(c, 0, 1, q, rng), random_wbar(c, 0, q, rng)});
  auto report = check_simplicial_identities(
      samples,
      [&](const TCPSimplex& t, int i) {
        TCPSimplex out = tcp_face(c, t, i);
        out.base = bad_face(t.base, i);
        return out;
      },
      [&](const TCPSimplex& t, int j) { return tcp_degeneracy(c, t, j); },
      [&](const TCPSimplex& x, const TCPSimplex& y) { return tcp_equal(c, x, y); }, "TCP");
  EXPECT_FALSE(report.ok());
}

TEST(Theta, IsSimplicialIntoWBar) {
  for (const auto& name : testing_support::all_bundles()) {
    const auto b = load(name);
    const auto cx = b.complex();
    const Classifier cl(cx);
    const auto& s = b.space.base();
    for (int h = 0; h < b.category->size(); ++h)
      for (const auto& level : fixed_formal_simplices(b.space, h, s.truncation()))
        for (const auto& x : level) {
          for (int i = 0; x.dim() > 0 && i <= x.dim(); ++i)
            EXPECT_EQ(wbar_face(b.coefficients, cl.theta(h, x), i), cl.theta(h, s.face(x, i))) << name;
          for (int j = 0; j <= x.dim(); ++j)
            EXPECT_EQ(wbar_degeneracy(b.coefficients, cl.theta(h, x), j), cl.theta(h, s.degeneracy(x, j))) << name;
        }
  }
}

TEST(OrbitSimplexIso, InverseAndCoboundary) {
  auto rng = testing_support::rng(35);
  int with_coboundary = 0;
  for (const auto& name : {"theta_z2", "theta_sign", "cone_theta", "s3_star", "delta2_s3"}) {
    const auto b = load(name);
    const auto cx = b.complex();
    const Classifier cl(cx);
    for (int h = 0; h < b.category->size(); ++h)
      for (int q = 0; q <= std::min(cx.truncation(), 3); ++q)
        for (const auto& r : b.space.fixed_simplices(h, q)) {
          const OrbitSimplex& y = cl.orbit_simplex(h, q);
          const auto ycx = cl.pullback_complex(y, FormalSimplex{r});
          for (int n = 0; n <= std::min(q, 2); ++n) {
            const auto f = ycx.random(n, Flavor::twisted, rng);
            const auto c = cl.e_iso(y, ycx, f);
            EXPECT_TRUE(ycx.equal(cl.e_iso_inverse(y, ycx, c), f)) << name;
            const auto c2 = random_em(b.coefficients, h, n, q, rng);
            EXPECT_TRUE(em_equal(b.coefficients, cl.e_iso(y, ycx, cl.e_iso_inverse(y, ycx, c2)), c2)) << name;
            if (n + 1 <= q) {
              EXPECT_TRUE(em_equal(b.coefficients, cl.e_iso(y, ycx, ycx.coboundary(f)), em_delta(b.coefficients, c)))
                  << name << " n=" << n << " q=" << q;
              ++with_coboundary;
            }
          }
        }
  }
  EXPECT_GT(with_coboundary, 20);
}

TEST(OrbitSimplexIso, NaturalInTheOrbit) {
  auto rng = testing_support::rng(36);
  int squares = 0;
  for (const auto& name : {"theta_z2", "theta_sign", "cone_theta", "s3_star"}) {
    const auto b = load(name);
    const auto cx = b.complex();
    const Classifier cl(cx);
    const auto& oc = *b.category;
    for (const auto& m : oc.all_morphisms())
      for (int q = 0; q <= std::min(cx.truncation(), 3); ++q)
        for (const auto& r : b.space.fixed_simplices(m.to, q)) {
          const FormalSimplex x{r};
          const OrbitSimplex& yk = cl.orbit_simplex(m.to, q);
          const OrbitSimplex& yh = cl.orbit_simplex(m.from, q);
          const auto kcx = cl.pullback_complex(yk, x);
          const auto hcx = cl.pullback_complex(yh, b.space.translate(m, x));
          for (int n = 0; n <= std::min(q, 2); ++n) {
            const auto f = kcx.random(n, Flavor::twisted, rng);
            const auto pulled = pull_along_orbit_map(oc, m, yh, hcx, yk, kcx, f);
            EXPECT_TRUE(em_equal(b.coefficients, cl.e_iso(yh, hcx, pulled),
                                 em_restrict(b.coefficients, m, cl.e_iso(yk, kcx, f))))
                << name << " " << oc.describe(m);
            ++squares;
          }
        }
  }
  EXPECT_GT(squares, 100);
}

TEST(Lifts, GammaAndPsiAreInverse) {
  auto rng = testing_support::rng(37);
  for (const auto& name : testing_support::all_bundles()) {
    const auto cx = load(name).complex();
    const Classifier cl(cx);
    for (int n = 0; n <= std::min(cx.truncation(), 2); ++n)
      for (int trial = 0; trial < 5; ++trial) {
        const auto t = cx.random(n, Flavor::twisted, rng);
        const Lift f = cl.lift_of(t);
        EXPECT_TRUE(cl.check_lift(f).ok()) << name << ": " << first_violation(cl.check_lift(f));
        EXPECT_TRUE(cx.equal(cl.cochain_of(f), t)) << name;
        EXPECT_TRUE(cl.lift_equal(cl.lift_of(cl.cochain_of(f)), f)) << name;
        EXPECT_TRUE(cl.check_fundamental_pullback(f)) << name;
      }
  }
}

TEST(Lifts, CocyclesLandInTheEilenbergMacLaneSpace) {
  auto rng = testing_support::rng(38);
  for (const auto& name : testing_support::all_bundles()) {
    const auto cx = load(name).complex();
    const Classifier cl(cx);
    for (int n = 0; n + 1 <= cx.truncation() && n <= 2; ++n) {
      const auto z = cx.random_cocycle(n, Flavor::twisted, rng);
      EXPECT_TRUE(cl.lands_in_cocycles(cl.lift_of(z))) << name;
      const auto t = cx.random(n, Flavor::twisted, rng);
      EXPECT_EQ(cl.lands_in_cocycles(cl.lift_of(t)), cx.is_zero(cx.coboundary(t))) << name;
      EXPECT_TRUE(cl.lift_equal(cl.lift_of(cx.coboundary(t)), cl.lift_coboundary(cl.lift_of(t)))) << name;
    }
  }
}

TEST(Lifts, CorruptedLiftIsRejected) {
  auto rng = testing_support::rng(39);
  const auto cx = load("theta_z2").complex();
  const Classifier cl(cx);
  Lift f = cl.lift_of(cx.random(1, Flavor::twisted, rng));
  auto& cell = f.cells[0][1].begin()->second;
  cell.values[0][0] += 1;
  EXPECT_FALSE(cl.check_lift(f).ok());
}

TEST(VerticalHomotopy, JoinsCohomologousCocycles) {
  auto rng = testing_support::rng(40);
  for (const auto& name : {"circle_twisted", "theta_z2", "theta_sign", "cone_theta", "rp2_twisted", "s3_star"}) {
    const auto cx = load(name).complex();
    const Classifier cl(cx);
    for (int n = 1; n + 1 <= cx.truncation() && n <= 2; ++n) {
      const auto f0 = cx.random_cocycle(n, Flavor::twisted, rng);
      const auto h = cx.random(n - 1, Flavor::twisted, rng);
      const auto f1 = cx.subtract(f0, cx.coboundary(h));
      const auto vh = vertical_homotopy(cx, f0, f1, h);
      const auto report = check_vertical_homotopy(cx, vh, cl.lift_of(f0), cl.lift_of(f1));
      EXPECT_TRUE(report.ok()) << name << ": " << first_violation(report);
      EXPECT_TRUE(Classifier(*vh.complex).lands_in_cocycles(vh.lift)) << name;
    }
  }
}

TEST(VerticalHomotopy, NegativeControls) {
  auto rng = testing_support::rng(41);
  const auto cx = load("theta_sign").complex();
  const Classifier cl(cx);
  const auto f0 = cx.random_cocycle(1, Flavor::twisted, rng);
  auto h = cx.random(0, Flavor::twisted, rng);
  const auto f1 = cx.subtract(f0, cx.coboundary(h));
  // A different homotopy that does not connect the pair.
  auto wrong = h;
  wrong.values[0][0] += 1;
  if (!cx.equal(cx.coboundary(wrong), cx.coboundary(h))) {
    EXPECT_THROW(vertical_homotopy(cx, f0, f1, wrong), NotCohomologous);
  }
  const auto vh = vertical_homotopy(cx, f0, f1, h);
  // The wrong endpoint is detected.
  const auto other = cx.add(f1, cx.random_cocycle(1, Flavor::twisted, rng));
  if (!cx.equal(other, f1)) {
    EXPECT_FALSE(check_vertical_homotopy(cx, vh, cl.lift_of(f0), cl.lift_of(other)).ok());
  }
  EXPECT_THROW(vertical_homotopy(cx, f0, f1, f0), DimensionMismatch);
}
