// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "equicohom/report.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace equicohom;
using testing_support::load;

namespace {

constexpr Flavor kFlavors[] = {Flavor::bredon, Flavor::twisted};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

template <class Rng>
EMCochain random_em(const CoefficientSystem& c, int h, int n, int q, Rng& rng) {
  std::uniform_int_distribution<int> dist(-4, 4);
  EMCochain out = em_zero(c, h, n, q);
  for (auto& v : out.values)
    for (auto& x : v) x = dist(rng);
  return out;
}

// delta o delta = 0 in both flavors.
Outcome coboundary_squares_to_zero() {
  Outcome out;
  auto rng = testing_support::rng(101);
  int samples = 0;
  const auto started = std::chrono::steady_clock::now();
  for (const auto& name : testing_support::all_bundles()) {
    const auto cx = load(name).complex();
    for (Flavor flavor : kFlavors)
      for (int trial = 0; trial < 100; ++trial) {
        const int n = trial % (cx.truncation() - 1);
        const auto f = cx.random(n, flavor, rng);
        out.require(cx.is_zero(cx.coboundary(cx.coboundary(f))),
                    name + " " + to_string(flavor) + " n=" + std::to_string(n));
        ++samples;
      }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.require(seconds < 60, "took " + std::to_string(seconds) + "s");
  if (out.pass) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << samples << " cochains over " << testing_support::all_bundles().size() << " bundles in " << seconds << "s";
    out.detail = os.str();
  }
  return out;
}

// The four identities of a twisting function, on X (raw and based labels) and on W-bar.
Outcome twisting_audit() {
  Outcome out;
  auto rng = testing_support::rng(102);
  int audits = 0;
  for (const auto& name : testing_support::all_bundles()) {
    const auto b = load(name);
    const auto raw = validate_twisting(b.space, b.coefficients, b.raw);
    out.require(raw.ok(), name + ": " + (raw.ok() ? "" : raw.violations.front()));
    ++audits;
    if (b.paths) {
      const auto based =
          validate_twisting(b.space, b.coefficients, based_twisting(b.space, b.coefficients, b.raw, *b.paths));
      out.require(based.ok(), name + " based: " + (based.ok() ? "" : based.violations.front()));
      ++audits;
    }
    const auto& c = b.coefficients;
    for (int h = 0; h < b.category->size(); ++h) {
      std::uniform_int_distribution<int> dist(0, c.group(h).order() - 1);
      std::vector<std::vector<WBarSimplex>> samples(6);
      for (int q = 1; q <= 5; ++q)
        for (int k = 0; k < 8; ++k) {
          WBarSimplex w{h, {}};
          for (int e = 0; e < q; ++e) w.entries.push_back(dist(rng));
          samples[q].push_back(w);
        }
      auto face = [&](const WBarSimplex& w, int i) { return wbar_face(c, w, i); };
      auto degeneracy = [&](const WBarSimplex& w, int j) { return wbar_degeneracy(c, w, j); };
      const auto identities = check_simplicial_identities(
          samples, face, degeneracy, [](const WBarSimplex& x, const WBarSimplex& y) { return x == y; }, "W-bar");
      out.require(identities.ok(), name + ": " + (identities.ok() ? "" : identities.violations.front()));
      const auto audit = audit_twisting<WBarSimplex>(
          samples, face, degeneracy, [](const WBarSimplex& w) { return kappa_pi(w); }, c.group(h),
          [](const WBarSimplex& w) { return std::to_string(w.dim()) + "-simplex"; });
      out.require(audit.ok(), name + " W-bar: " + (audit.ok() ? "" : audit.violations.front()));
      ++audits;
    }
  }
  if (out.pass) out.detail = std::to_string(audits) + " audits on X and W-bar";
  return out;
}

// Comparison maps are inverse cochain maps and the invariant factors agree.
Outcome local_coefficient_comparison() {
  Outcome out;
  auto rng = testing_support::rng(103);
  int fixtures = 0;
  for (const auto& name : testing_support::all_bundles()) {
    const auto cx = load(name).complex();
    if (!cx.check_hypotheses().ok()) continue;
    ++fixtures;
    for (int n = 0; n <= cx.truncation(); ++n)
      for (int trial = 0; trial < 10; ++trial) {
        const std::string at = name + " n=" + std::to_string(n);
        const auto f = cx.random(n, Flavor::bredon, rng);
        const auto t = cx.random(n, Flavor::twisted, rng);
        out.require(cx.equal(cx.twisted_to_bredon(cx.bredon_to_twisted(f)), f), at + ": gamma psi != id");
        out.require(cx.equal(cx.bredon_to_twisted(cx.twisted_to_bredon(t)), t), at + ": psi gamma != id");
        if (n + 1 <= cx.truncation()) {
          out.require(cx.equal(cx.coboundary(cx.bredon_to_twisted(f)), cx.bredon_to_twisted(cx.coboundary(f))), at + ": psi not a chain map");
          out.require(cx.equal(cx.coboundary(cx.twisted_to_bredon(t)), cx.twisted_to_bredon(cx.coboundary(t))),
                      at + ": gamma not a chain map");
        }
      }
    for (int n = 0; n <= cx.truncation() - 1; ++n) {
      const auto bredon = cx.cohomology(n, Flavor::bredon), twisted = cx.cohomology(n, Flavor::twisted);
      out.require(bredon.isomorphic(twisted),
                  name + " H^" + std::to_string(n) + ": " + bredon.to_string() + " vs " + twisted.to_string());
    }
  }
  if (out.pass) out.detail = std::to_string(fixtures) + " fixtures satisfying the hypotheses";
  return out;
}

// E_H is invertible and natural along every orbit-category morphism.
Outcome orbit_simplex_isomorphism() {
  Outcome out;
  auto rng = testing_support::rng(104);
  int squares = 0;
  for (const auto& name : testing_support::all_bundles()) {
    const auto b = load(name);
    const auto cx = b.complex();
    const Classifier cl(cx);
    const auto& oc = *b.category;
    const auto& c = b.coefficients;
    for (const auto& m : oc.all_morphisms())
      for (int q = 0; q <= std::min(cx.truncation(), 3); ++q)
        for (const auto& r : b.space.fixed_simplices(m.to, q)) {
          const FormalSimplex x{r};
          const OrbitSimplex& yk = cl.orbit_simplex(m.to, q);
          const OrbitSimplex& yh = cl.orbit_simplex(m.from, q);
          const auto kcx = cl.pullback_complex(yk, x);
          const auto hcx = cl.pullback_complex(yh, b.space.translate(m, x));
          for (int n = 0; n <= std::min(q, 2); ++n) {
            const std::string at = name + " " + oc.describe(m) + " q=" + std::to_string(q) + " n=" + std::to_string(n);
            const auto f = kcx.random(n, Flavor::twisted, rng);
            const auto e = cl.e_iso(yk, kcx, f);
            out.require(kcx.equal(cl.e_iso_inverse(yk, kcx, e), f), at + ": inverse after E");
            const auto em = random_em(c, m.to, n, q, rng);
            out.require(em_equal(c, cl.e_iso(yk, kcx, cl.e_iso_inverse(yk, kcx, em)), em), at + ": E after inverse");
            // (g x id)^* f, read off through the component map of the orbit simplices.
            EquivariantCochain pulled = hcx.zero(n, Flavor::twisted);
            for (int o = 0; o < hcx.orbit_count(n); ++o) {
              const Orbit& orbit = hcx.space().orbits(n)[o];
              const auto [coset, alpha] = yh.component(orbit.rep);
              const int image = oc.coset_rep(oc.group().mul(coset, m.rep), m.to);
              pulled.values[o] = kcx.evaluate(f, orbit.stabilizer, FormalSimplex{yk.at(image, alpha)});
            }
            out.require(em_equal(c, cl.e_iso(yh, hcx, pulled), em_restrict(c, m, e)), at + ": naturality square");
            ++squares;
          }
        }
  }
  if (out.pass) out.detail = std::to_string(squares) + " naturality squares";
  return out;
}

// Lifts and cochains correspond bijectively, cocycles to lifts into the cocycle space.
Outcome classification() {
  Outcome out;
  auto rng = testing_support::rng(105);
  int samples = 0;
  for (const auto& name : testing_support::all_bundles()) {
    const auto cx = load(name).complex();
    const Classifier cl(cx);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = trial % cx.truncation();
      const std::string at = name + " n=" + std::to_string(n) + " sample " + std::to_string(trial);
      const auto t = trial % 2 ? cx.random_cocycle(n, Flavor::twisted, rng) : cx.random(n, Flavor::twisted, rng);
      const Lift f = cl.lift_of(t);
      const auto lift = cl.check_lift(f);
      out.require(lift.ok(), at + ": " + (lift.ok() ? "" : lift.violations.front()));
      out.require(cx.equal(cl.cochain_of(f), t), at + ": psi gamma != id");
      out.require(cl.lift_equal(cl.lift_of(cl.cochain_of(f)), f), at + ": gamma psi != id");
      out.require(cl.check_fundamental_pullback(f), at + ": psi(F) != F*(u)");
      out.require(cx.is_zero(cx.coboundary(t)) == cl.lands_in_cocycles(f), at + ": cocycle criterion");
      ++samples;
    }
  }
  if (out.pass) out.detail = std::to_string(samples) + " cochains";
  return out;
}

// Vertical homotopies between Gamma f0 and Gamma f1 for f1 = f0 - delta h.
Outcome vertical_homotopies() {
  Outcome out;
  auto rng = testing_support::rng(106);
  int pairs = 0;
  for (const auto& name : testing_support::all_bundles()) {
    const auto cx = load(name).complex();
    const Classifier cl(cx);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % (cx.truncation() - 1);
      const std::string at = name + " n=" + std::to_string(n) + " pair " + std::to_string(trial);
      const auto f0 = cx.random_cocycle(n, Flavor::twisted, rng);
      const auto h = cx.random(n - 1, Flavor::twisted, rng);
      const auto f1 = cx.subtract(f0, cx.coboundary(h));
      const auto vh = vertical_homotopy(cx, f0, f1, h);
      const auto report = check_vertical_homotopy(cx, vh, cl.lift_of(f0), cl.lift_of(f1));
      out.require(report.ok(), at + ": " + (report.ok() ? "" : report.violations.front()));
      ++pairs;
    }
  }
  if (out.pass) out.detail = std::to_string(pairs) + " cohomologous pairs";
  return out;
}

// Circle values and the dense non-equivariant oracle.
Outcome oracle_values() {
  Outcome out;
  const auto trivial = load("circle_trivial").complex();
  const auto twisted = load("circle_twisted").complex();
  for (Flavor flavor : kFlavors) {
    const std::string f = to_string(flavor);
    out.require(trivial.cohomology(0, flavor).to_string() == "Z", "trivial circle H^0 " + f);
    out.require(trivial.cohomology(1, flavor).to_string() == "Z", "trivial circle H^1 " + f);
    out.require(twisted.cohomology(0, flavor).to_string() == "0", "twisted circle H^0 " + f);
    out.require(twisted.cohomology(1, flavor).to_string() == "Z/2", "twisted circle H^1 " + f);
  }
  int groups = 0;
  for (const auto& name : testing_support::trivial_group_bundles()) {
    const auto b = load(name);
    const auto cx = b.complex();
    const int top = cx.truncation() - 1;
    const auto ref = oracle::local_coefficient_cohomology(b, top);
    for (int n = 0; n <= top; ++n)
      for (Flavor flavor : kFlavors) {
        const auto h = cx.cohomology(n, flavor);
        std::vector<oracle::Big> torsion;
        for (const auto& t : h.torsion()) torsion.push_back(oracle::Big(t));
        out.require(h.rank() == ref[n].rank && torsion == ref[n].torsion,
                    name + " H^" + std::to_string(n) + " " + to_string(flavor) + " = " + h.to_string());
        ++groups;
      }
  }
  if (out.pass) out.detail = "circle values and " + std::to_string(groups) + " groups against the dense oracle";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Every subcommand on every fixture, run twice through the executable.
Outcome determinism() {
  Outcome out;
  int reports = 0;
  const std::string dir = EQUICOHOM_BUNDLE_DIR;
  const std::string scratch = std::filesystem::temp_directory_path() / "equicohom_acceptance_";
  for (const auto& name : testing_support::all_bundles())
    for (const std::string command : {"validate", "cohomology", "compare", "classify", "homotopy"}) {
      std::string runs[2];
      for (int k = 0; k < 2; ++k) {
        const std::string path = scratch + std::to_string(k) + ".json";
        std::filesystem::remove(path);
        const std::string cmd = std::string(EQUICOHOM_CLI) + " " + command + " --bundle " + dir + "/" + name +
                                ".json --json-out " + path + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        out.require(WIFEXITED(status), name + " " + command + ": did not exit normally");
        runs[k] = read_file(path);
      }
      out.require(!runs[0].empty(), name + " " + command + ": empty report");
      out.require(runs[0] == runs[1], name + " " + command + ": reports differ");
      ++reports;
    }
  if (out.pass) out.detail = std::to_string(reports) + " report pairs identical";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 coboundary squares to zero", coboundary_squares_to_zero},
      {"AC2 twisting audit", twisting_audit},
      {"AC3 local-coefficient comparison", local_coefficient_comparison},
      {"AC4 orbit-simplex isomorphism", orbit_simplex_isomorphism},
      {"AC5 classification of twisted cochains", classification},
      {"AC6 vertical homotopies", vertical_homotopies},
      {"AC7 oracle values", oracle_values},
      {"AC8 deterministic reports", determinism},
  };
  int failures = 0;
  for (const auto& [label, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << label << " (" << o.detail << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
