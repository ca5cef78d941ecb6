// Command-line front end: validate, cohomology, compare, classify, homotopy.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "equicohom/equicohom.hpp"
#include "equicohom/report.hpp"

using namespace equicohom;

namespace {

// EQUICOHOM_LOG: off, error, warn, info, debug, trace (default warn).
std::shared_ptr<spdlog::logger> make_logger() {
  auto log = spdlog::stderr_color_mt("equicohom");
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("EQUICOHOM_LOG")) log->set_level(spdlog::level::from_str(env));
  return log;
}

// "0,2,4" or "0..3" or a mix such as "0..1,3".
std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots)), hi = std::stoi(item.substr(dots + 2));
        for (int n = lo; n <= hi; ++n) out.push_back(n);
      }
    } catch (const std::logic_error&) {
      throw ParseError("--degrees: cannot read '" + item + "' as a degree or a range a..b");
    }
    pos = comma + 1;
  }
  return out;
}

Vector read_vector(const nlohmann::json& doc, const std::string& key, const std::string& path) {
  if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(path + ": " + key + ": expected an integer array");
  Vector v;
  for (const auto& x : doc[key]) {
    if (!x.is_number_integer()) throw ParseError(path + ": " + key + ": expected an integer array");
    v.push_back(Integer(x.get<std::int64_t>()));
  }
  return v;
}

HomotopyData read_homotopy_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return {read_vector(doc, "f0", path), read_vector(doc, "f1", path), read_vector(doc, "h", path)};
}

// One report per degree, folded into a single document when several were asked for.
CommandResult merge_runs(const std::string& command, const std::string& bundle, std::vector<CommandResult> runs) {
  if (runs.size() == 1) return runs.front();
  ordered_json doc;
  doc["command"] = command;
  doc["bundle"] = bundle;
  doc["runs"] = ordered_json::array();
  int code = exit_pass;
  for (auto& r : runs) {
    code = std::max(code, r.exit_code);
    doc["runs"].push_back(std::move(r.report));
  }
  doc["verdict"] = code == exit_pass ? "pass" : "fail";
  return {doc, code};
}

}  // namespace

int main(int argc, char** argv) {
  auto log = make_logger();

  CLI::App app{"Equivariant cohomology with twisted coefficients: validation, computation and comparison."};
  app.require_subcommand(1);

  std::string bundle_path, degrees_text, flavor_text, json_out, cochains_path;
  std::optional<int> degree, max_dim;
  CommandOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--bundle", bundle_path, "bundle document (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--json-out", json_out, "write the report here instead of stdout");
  };
  auto add_degrees = [&](CLI::App* sub) {
    auto* single = sub->add_option("--degree", degree, "a single degree");
    sub->add_option("--degrees", degrees_text, "degree list such as 0,1 or 0..2")->excludes(single);
    sub->add_option("--max-dim", max_dim, "use at most this truncation (must not exceed the bundle's)");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "seed for the randomized checks")->capture_default_str();
    sub->add_option("--trials", opt.trials, "random samples per degree")->capture_default_str()->check(
        CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "check every structural invariant of a bundle");
  add_common(validate);
  auto* cohomology = app.add_subcommand("cohomology", "invariant factors of H^n in one or both flavors");
  add_common(cohomology);
  add_degrees(cohomology);
  cohomology->add_option("--flavor", flavor_text, "bredon or twisted (default both)")
      ->check(CLI::IsMember({"bredon", "twisted"}));
  auto* compare = app.add_subcommand("compare", "compare the two flavors and check the comparison maps");
  add_common(compare);
  add_degrees(compare);
  add_seed(compare);
  auto* classify = app.add_subcommand("classify", "round-trip checks between cochains and lifts");
  add_common(classify);
  add_degrees(classify);
  add_seed(classify);
  auto* homotopy = app.add_subcommand("homotopy", "join cohomologous cocycles by a vertical homotopy");
  add_common(homotopy);
  add_degrees(homotopy);
  add_seed(homotopy);
  homotopy->add_option("--cochains", cochains_path, "JSON with flat integer arrays f0, f1, h")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  const auto started = std::chrono::steady_clock::now();

  CommandResult result = run_guarded(command, bundle_path, [&]() -> CommandResult {
    log->info("loading {}", bundle_path);
    const Bundle b = load_bundle(bundle_path);
    log->debug("bundle '{}': group of order {}, truncation {}", b.name, b.category->group().order(),
               b.space.truncation());
    opt.max_dim = max_dim;
    if (degree) opt.degrees = {*degree};
    if (!degrees_text.empty()) opt.degrees = parse_degrees(degrees_text);
    if (!flavor_text.empty()) opt.flavors = {flavor_text == "bredon" ? Flavor::bredon : Flavor::twisted};

    if (command == "validate") return cmd_validate(b);
    if (command == "cohomology") return cmd_cohomology(b, opt);
    if (command == "compare") return cmd_compare(b, opt);

    std::vector<int> degrees = opt.degrees;
    if (degrees.empty())
      for (int n : b.degrees)
        if (command == "classify" || n >= 1) degrees.push_back(n);
    if (degrees.empty()) throw DimensionMismatch("no degree to run");
    std::optional<HomotopyData> data;
    if (!cochains_path.empty()) {
      if (degrees.size() != 1) throw DimensionMismatch("--cochains needs exactly one degree");
      data = read_homotopy_data(cochains_path);
    }
    std::vector<CommandResult> runs;
    for (int n : degrees) {
      log->info("{} in degree {}", command, n);
      runs.push_back(command == "classify" ? cmd_classify(b, n, opt) : cmd_homotopy(b, n, data, opt));
    }
    return merge_runs(command, b.name, std::move(runs));
  });

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  log->info("{} finished in {:.3f}s with exit code {}", command, seconds, result.exit_code);
  if (result.report.contains("error")) log->error("{}", result.report["error"]["message"].get<std::string>());

  const std::string text = result.report.dump(2) + "\n";
  if (json_out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(json_out, std::ios::binary);
    if (!out) {
      log->error("cannot write {}", json_out);
      return exit_internal;
    }
    out << text;
    std::cout << command << ": " << result.report["verdict"].get<std::string>() << "\n";
  }
  return result.exit_code;
}
