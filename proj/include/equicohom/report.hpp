#pragma once

// Subcommand pipelines producing machine-readable reports. Reports carry no
// timing or other run-dependent data, so repeated runs are byte-identical.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "equicohom/bundle.hpp"
#include "equicohom/classify.hpp"

namespace equicohom {

using ordered_json = nlohmann::ordered_json;

enum ExitCode : int { exit_pass = 0, exit_validation = 1, exit_hypothesis = 2, exit_internal = 3 };

struct CommandResult {
  ordered_json report;
  int exit_code = exit_pass;
};

struct CommandOptions {
  std::vector<int> degrees;              // empty: the bundle's own list
  std::vector<Flavor> flavors{Flavor::bredon, Flavor::twisted};
  std::optional<int> max_dim;            // cap on the truncation actually used
  std::uint64_t seed = 1;
  int trials = 8;                        // random samples per degree for property checks
};

/// Explicit homotopy data as flat cochain vectors; generated from the seed when absent.
struct HomotopyData {
  Vector f0, f1, h;
};

namespace detail {

inline ordered_json integer_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline ordered_json group_json(int degree, const FGAbelianGroup& g) {
  ordered_json out;
  out["degree"] = degree;
  out["rank"] = g.rank();
  out["torsion"] = ordered_json::array();
  for (const auto& t : g.torsion()) out["torsion"].push_back(integer_json(t));
  out["group"] = g.to_string();
  return out;
}

class ReportBuilder {
 public:
  ReportBuilder(const std::string& command, const Bundle& b) {
    doc_["command"] = command;
    doc_["bundle"] = b.name;
    doc_["truncation"] = b.space.truncation();
  }

  ordered_json& doc() { return doc_; }

  bool check(const std::string& name, bool pass, const std::string& witness = {}) {
    ordered_json c;
    c["name"] = name;
    c["pass"] = pass;
    if (!pass) c["witness"] = witness;
    doc_["checks"].push_back(std::move(c));
    if (!pass) failed_ = true;
    return pass;
  }

  bool check(const std::string& name, const ValidationReport& r) {
    return check(name, r.ok(), r.ok() ? std::string() : r.violations.front());
  }

  bool failed() const { return failed_; }

  CommandResult finish(int failure_code) {
    if (!doc_.contains("checks")) doc_["checks"] = ordered_json::array();
    doc_["verdict"] = failed_ ? "fail" : "pass";
    return {doc_, failed_ ? failure_code : exit_pass};
  }

 private:
  ordered_json doc_;
  bool failed_ = false;
};

inline std::vector<int> requested_degrees(const Bundle& b, const CommandOptions& opt) {
  return opt.degrees.empty() ? b.degrees : opt.degrees;
}

inline int effective_truncation(const Bundle& b, const CommandOptions& opt) {
  const int d = b.space.truncation();
  if (!opt.max_dim) return d;
  if (*opt.max_dim < 0 || *opt.max_dim > d)
    throw DimensionMismatch("--max-dim " + std::to_string(*opt.max_dim) + " exceeds the bundle truncation " +
                            std::to_string(d));
  return *opt.max_dim;
}

// Every degree must satisfy n + extra <= D.
inline void check_degrees(const std::vector<int>& degrees, int truncation, int extra) {
  for (int n : degrees)
    if (n < 0 || n + extra > truncation)
      throw DimensionMismatch("degree " + std::to_string(n) + " needs truncation at least " + std::to_string(n + extra) +
                              " but the bundle is truncated at " + std::to_string(truncation));
}

/// The structural validators; hypotheses are reported separately and never fail validation.
inline void structural_checks(ReportBuilder& r, const Bundle& b) {
  r.check("simplicial identities", b.space.base().validate());
  r.check("group action", b.space.validate_action());
  r.check("coefficient system", b.coefficients.validate());
  r.check("twisting", validate_twisting(b.space, b.coefficients, b.raw));
  if (b.paths) {
    const auto ps = validate_path_system(b.space, *b.paths);
    r.check("path system", ps);
    if (ps.ok())
      r.check("based twisting", validate_twisting(b.space, b.coefficients,
                                                  based_twisting(b.space, b.coefficients, b.raw, *b.paths)));
  }
}

inline ordered_json hypotheses_json(const EquivariantComplex& cx) {
  ordered_json h;
  const auto disconnected = cx.space().disconnected_subgroup();
  h["fixed_sets_connected"] = !disconnected;
  h["path_system"] = cx.paths().has_value();
  const auto report = cx.check_hypotheses();
  h["satisfied"] = report.ok();
  if (!report.ok()) h["witness"] = report.violations.front();
  return h;
}

inline std::string first(const ValidationReport& r) { return r.ok() ? std::string() : r.violations.front(); }

// Runs the validators and returns a failed result when any of them fails.
inline std::optional<CommandResult> require_valid(ReportBuilder& r, const Bundle& b) {
  structural_checks(r, b);
  if (r.failed()) return r.finish(exit_validation);
  return std::nullopt;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, int degree) {
  return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(degree));
}

}  // namespace detail

inline CommandResult cmd_validate(const Bundle& b) {
  detail::ReportBuilder r("validate", b);
  detail::structural_checks(r, b);
  r.doc()["hypotheses"] = detail::hypotheses_json(b.complex());
  return r.finish(exit_validation);
}

inline CommandResult cmd_cohomology(const Bundle& b, const CommandOptions& opt = {}) {
  detail::ReportBuilder r("cohomology", b);
  const auto degrees = detail::requested_degrees(b, opt);
  r.doc()["degrees"] = degrees;
  if (auto failed = detail::require_valid(r, b)) return *failed;
  detail::check_degrees(degrees, detail::effective_truncation(b, opt), 1);
  const auto cx = b.complex();
  for (Flavor f : opt.flavors) {
    auto& list = r.doc()["cohomology"][to_string(f)];
    list = ordered_json::array();
    for (int n : degrees) list.push_back(detail::group_json(n, cx.cohomology(n, f)));
  }
  return r.finish(exit_validation);
}

inline CommandResult cmd_compare(const Bundle& b, const CommandOptions& opt = {}) {
  detail::ReportBuilder r("compare", b);
  const auto degrees = detail::requested_degrees(b, opt);
  r.doc()["degrees"] = degrees;
  r.doc()["seed"] = opt.seed;
  if (auto failed = detail::require_valid(r, b)) return *failed;
  detail::check_degrees(degrees, detail::effective_truncation(b, opt), 1);
  const auto cx = b.complex();
  cx.require_hypotheses("compare");
  std::vector<FGAbelianGroup> bredon, twisted;
  for (int n : degrees) {
    bredon.push_back(cx.cohomology(n, Flavor::bredon));
    twisted.push_back(cx.cohomology(n, Flavor::twisted));
  }
  auto& coh = r.doc()["cohomology"];
  coh["bredon"] = ordered_json::array();
  coh["twisted"] = ordered_json::array();
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    coh["bredon"].push_back(detail::group_json(degrees[k], bredon[k]));
    coh["twisted"].push_back(detail::group_json(degrees[k], twisted[k]));
  }
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    const bool same = bredon[k].isomorphic(twisted[k]);
    r.check("invariant factors agree in degree " + std::to_string(degrees[k]), same,
            same ? "" : bredon[k].to_string() + " vs " + twisted[k].to_string());
  }
  for (int n : degrees) {
    auto rng = detail::make_rng(opt.seed, n);
    std::string inverse_witness, chain_witness;
    for (int trial = 0; trial < opt.trials; ++trial) {
      const auto f = cx.random(n, Flavor::bredon, rng);
      const auto t = cx.random(n, Flavor::twisted, rng);
      if (inverse_witness.empty() && !cx.equal(cx.twisted_to_bredon(cx.bredon_to_twisted(f)), f))
        inverse_witness = "gamma(psi(f)) != f on sample " + std::to_string(trial);
      if (inverse_witness.empty() && !cx.equal(cx.bredon_to_twisted(cx.twisted_to_bredon(t)), t))
        inverse_witness = "psi(gamma(t)) != t on sample " + std::to_string(trial);
      if (chain_witness.empty() && !cx.equal(cx.coboundary(cx.bredon_to_twisted(f)), cx.bredon_to_twisted(cx.coboundary(f))))
        chain_witness = "delta psi != psi delta on sample " + std::to_string(trial);
    }
    const std::string d = " in degree " + std::to_string(n);
    r.check("comparison maps are mutually inverse" + d, inverse_witness.empty(), inverse_witness);
    r.check("comparison map commutes with the coboundaries" + d, chain_witness.empty(), chain_witness);
  }
  // A disagreement here contradicts the comparison theorem.
  return r.finish(exit_internal);
}

inline CommandResult cmd_classify(const Bundle& b, int n, const CommandOptions& opt = {}) {
  detail::ReportBuilder r("classify", b);
  r.doc()["degree"] = n;
  r.doc()["seed"] = opt.seed;
  if (auto failed = detail::require_valid(r, b)) return *failed;
  detail::check_degrees({n}, detail::effective_truncation(b, opt), 1);
  const auto cx = b.complex();
  const Classifier cl(cx);
  auto rng = detail::make_rng(opt.seed, n);
  std::string lift_w, psi_gamma_w, gamma_psi_w, pullback_w, cocycle_w, coboundary_w;
  auto note = [](std::string& w, bool ok, const std::string& what) {
    if (!ok && w.empty()) w = what;
  };
  for (int trial = 0; trial < opt.trials; ++trial) {
    const std::string at = " on sample " + std::to_string(trial);
    // Alternate arbitrary cochains and cocycles so both sides of the cocycle criterion are exercised.
    const auto t = trial % 2 ? cx.random_cocycle(n, Flavor::twisted, rng) : cx.random(n, Flavor::twisted, rng);
    const Lift f = cl.lift_of(t);
    const auto lift_report = cl.check_lift(f);
    note(lift_w, lift_report.ok(), detail::first(lift_report) + at);
    note(psi_gamma_w, cx.equal(cl.cochain_of(f), t), "psi(gamma(T)) != T" + at);
    note(gamma_psi_w, cl.lift_equal(cl.lift_of(cl.cochain_of(f)), f), "gamma(psi(F)) != F" + at);
    note(pullback_w, cl.check_fundamental_pullback(f), "psi(F) != F*(u)" + at);
    const bool cocycle = cx.is_zero(cx.coboundary(t));
    note(cocycle_w, cocycle == cl.lands_in_cocycles(f),
         std::string(cocycle ? "cocycle whose lift leaves" : "non-cocycle whose lift lands in") +
             " the cocycle space" + at);
    note(coboundary_w, cl.lift_equal(cl.lift_of(cx.coboundary(t)), cl.lift_coboundary(f)),
         "gamma(delta T) != delta gamma(T)" + at);
  }
  r.check("lift is a natural simplicial map over theta", lift_w.empty(), lift_w);
  r.check("psi o gamma = id", psi_gamma_w.empty(), psi_gamma_w);
  r.check("gamma o psi = id", gamma_psi_w.empty(), gamma_psi_w);
  r.check("psi(F) = F*(u)", pullback_w.empty(), pullback_w);
  r.check("cocycle iff lift lands in the cocycle space", cocycle_w.empty(), cocycle_w);
  r.check("gamma commutes with the coboundaries", coboundary_w.empty(), coboundary_w);
  return r.finish(exit_internal);
}

/// Joins f0 and f1 = f0 - delta h by a vertical homotopy. Without explicit data,
/// f0 is a random cocycle and h a random cochain drawn from the seed.
inline CommandResult cmd_homotopy(const Bundle& b, int n, const std::optional<HomotopyData>& data,
                                  const CommandOptions& opt = {}) {
  detail::ReportBuilder r("homotopy", b);
  r.doc()["degree"] = n;
  r.doc()["seed"] = opt.seed;
  r.doc()["data"] = data ? "explicit" : "generated";
  if (auto failed = detail::require_valid(r, b)) return *failed;
  if (n < 1) throw DimensionMismatch("a homotopy needs degree at least 1");
  detail::check_degrees({n}, detail::effective_truncation(b, opt), 1);
  const auto cx = b.complex();
  const Classifier cl(cx);
  auto rng = detail::make_rng(opt.seed, n);
  EquivariantCochain f0, f1, h;
  if (data) {
    f0 = cx.unflatten(n, Flavor::twisted, data->f0);
    f1 = cx.unflatten(n, Flavor::twisted, data->f1);
    h = cx.unflatten(n - 1, Flavor::twisted, data->h);
    if (!cx.is_zero(cx.coboundary(f0))) throw NotCohomologous("f0 is not a cocycle");
  } else {
    f0 = cx.random_cocycle(n, Flavor::twisted, rng);
    h = cx.random(n - 1, Flavor::twisted, rng);
    f1 = cx.subtract(f0, cx.coboundary(h));
  }
  const auto vh = vertical_homotopy(cx, f0, f1, h);
  const auto start = cl.lift_of(f0), end = cl.lift_of(f1);
  r.check("endpoints recovered and the homotopy lifts theta o pr1", check_vertical_homotopy(cx, vh, start, end));
  r.check("homotopy lands in the cocycle space", Classifier(*vh.complex).lands_in_cocycles(vh.lift),
          "a cochain component of the homotopy is not a cocycle");

  // Negative controls: a perturbed endpoint must be rejected.
  const auto shift = cx.random_cocycle(n, Flavor::twisted, rng);
  if (!cx.is_zero(shift)) {
    const auto other = cx.add(f1, shift);
    r.check("a different endpoint is rejected", !check_vertical_homotopy(cx, vh, start, cl.lift_of(other)).ok(),
            "the homotopy also matched a perturbed endpoint");
  }
  auto wrong = h;
  for (auto& v : wrong.values)
    if (!v.empty()) {
      v[0] += 1;
      break;
    }
  if (!cx.equal(cx.coboundary(wrong), cx.coboundary(h))) {
    bool rejected = false;
    try {
      vertical_homotopy(cx, f0, f1, wrong);
    } catch (const NotCohomologous&) {
      rejected = true;
    }
    r.check("a mismatched homotopy is rejected", rejected, "delta h' != f0 - f1 was accepted");
  }
  return r.finish(exit_internal);
}

/// Runs a command, turning library errors into a report with the matching exit code.
template <class Run>
CommandResult run_guarded(const std::string& command, const std::string& source, Run&& run) {
  auto failure = [&](const char* kind, const std::string& message, int code) {
    ordered_json doc;
    doc["command"] = command;
    doc["bundle"] = source;
    doc["error"] = {{"kind", kind}, {"message", message}};
    doc["verdict"] = "fail";
    return CommandResult{doc, code};
  };
  try {
    return run();
  } catch (const ParseError& e) {
    return failure("parse", e.what(), exit_validation);
  } catch (const ValidationError& e) {
    return failure("validation", e.what(), exit_validation);
  } catch (const DimensionMismatch& e) {
    return failure("dimension", e.what(), exit_validation);
  } catch (const PathMissing& e) {
    return failure("path", e.what(), exit_validation);
  } catch (const NotCohomologous& e) {
    return failure("not_cohomologous", e.what(), exit_validation);
  } catch (const HypothesisViolation& e) {
    return failure("hypothesis", e.what(), exit_hypothesis);
  } catch (const std::exception& e) {
    return failure("internal", e.what(), exit_internal);
  }
}

}  // namespace equicohom
