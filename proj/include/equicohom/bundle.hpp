#pragma once

// Problem bundles: one JSON document describing the group, the G-simplicial
// set, the coefficient data, the twisting labels and an optional path system.

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "equicohom/cohomology.hpp"

namespace equicohom {

struct Bundle {
  std::string name;
  std::shared_ptr<const OrbitCategory> category;
  GSimplicialSet space;
  CoefficientSystem coefficients;
  Twisting raw;
  std::optional<PathSystem> paths;
  Frame frame = Frame::vertex;
  std::vector<int> degrees;

  EquivariantComplex complex() const { return EquivariantComplex(space, coefficients, raw, paths, frame); }
};

namespace detail {

using nlohmann::json;

class BundleParser {
 public:
  explicit BundleParser(const json& doc) : doc_(doc) {}

  Bundle parse() {
    Bundle b;
    b.name = doc_.value("name", std::string("unnamed"));
    b.category = std::make_shared<const OrbitCategory>(parse_group(at(doc_, "group", ""), "group", "s"));
    oc_ = b.category.get();
    const int truncation = get<int>(at(doc_, "truncation", ""), "truncation");
    if (truncation < 0) fail("truncation", "must be nonnegative");
    SimplicialSet s = parse_simplices(truncation);
    auto report = s.validate();
    if (!report.ok()) throw ValidationError("simplicial identities: " + report.violations.front());
    s_ = &s;
    auto action = parse_action(s);
    b.space = GSimplicialSet(b.category, std::move(s), std::move(action));
    s_ = &b.space.base();
    x_ = &b.space;
    b.coefficients = parse_coefficients(at(doc_, "coefficients", ""));
    pi_ = &b.coefficients.pi;
    b.raw = parse_twisting();
    if (doc_.contains("path_system")) b.paths = parse_paths(doc_["path_system"]);
    if (doc_.contains("frame")) {
      const auto f = get<std::string>(doc_["frame"], "frame");
      if (f == "vertex")
        b.frame = Frame::vertex;
      else if (f == "path_system")
        b.frame = Frame::path_system;
      else
        fail("frame", "must be 'vertex' or 'path_system'");
    }
    if (doc_.contains("degrees"))
      for (const auto& d : doc_["degrees"]) b.degrees.push_back(get<int>(d, "degrees"));
    else
      for (int n = 0; n < truncation; ++n) b.degrees.push_back(n);
    return b;
  }

 private:
  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ParseError(where.empty() ? what : where + ": " + what);
  }

  static const json& at(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where.empty() ? key : where + "." + key, "missing");
    return j[key];
  }

  template <class T>
  static T get(const json& j, const std::string& where) {
    try {
      return j.get<T>();
    } catch (const json::exception& e) {
      fail(where, std::string("wrong type (") + e.what() + ")");
    }
  }

  static FinGroup parse_finite_group(const json& j, const std::string& where) {
    const auto names = get<std::vector<std::string>>(at(j, "elements", where), where + ".elements");
    const auto& table = at(j, "table", where);
    std::vector<std::vector<int>> t;
    for (std::size_t r = 0; r < table.size(); ++r) {
      std::vector<int> row;
      for (std::size_t c = 0; c < table[r].size(); ++c) {
        const auto n = get<std::string>(table[r][c], where + ".table");
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) fail(where + ".table", "unknown element '" + n + "'");
        row.push_back(static_cast<int>(it - names.begin()));
      }
      t.push_back(std::move(row));
    }
    try {
      return FinGroup(std::move(t), names);
    } catch (const ValidationError& e) {
      fail(where, e.what());
    }
  }

  // "trivial", "Z/n" (elements e, s, s^2, ...) and "S3" (one-line permutations) are accepted
  // as shorthands for a full multiplication table.
  static FinGroup parse_group(const json& j, const std::string& where, const std::string& prefix) {
    if (j.is_string()) {
      const auto kind = j.get<std::string>();
      if (kind == "trivial") return FinGroup::cyclic(1);
      if (kind == "S3") return FinGroup::symmetric(3);
      if (kind.rfind("Z/", 0) == 0) {
        int n = 0;
        try {
          n = std::stoi(kind.substr(2));
        } catch (const std::exception&) {
        }
        if (n < 1) fail(where, "bad cyclic order in '" + kind + "'");
        return FinGroup::cyclic(n, prefix);
      }
      fail(where, "unknown shorthand '" + kind + "'");
    }
    return parse_finite_group(j, where);
  }

  FormalSimplex parse_formal(const json& j, int dim, const std::string& where) {
    std::string base;
    DegeneracyWord word;
    if (j.is_string()) {
      base = j.get<std::string>();
    } else {
      base = get<std::string>(at(j, "base", where), where + ".base");
      if (j.contains("degeneracies")) word = get<std::vector<int>>(j["degeneracies"], where + ".degeneracies");
    }
    auto it = names_.find(base);
    if (it == names_.end()) fail(where, "unknown simplex '" + base + "'");
    for (std::size_t k = 1; k < word.size(); ++k)
      if (word[k] >= word[k - 1]) fail(where, "degeneracy word must be strictly decreasing");
    FormalSimplex f{it->second, word};
    if (f.dim() != dim) fail(where, "face has dimension " + std::to_string(f.dim()) + ", expected " + std::to_string(dim));
    if (!word.empty() && word.front() >= dim) fail(where, "degeneracy index out of range");
    return f;
  }

  SimplicialSet parse_simplices(int truncation) {
    SimplicialSet s(truncation);
    const auto& dims = at(doc_, "simplices", "");
    if (!dims.is_array() || static_cast<int>(dims.size()) > truncation + 1)
      fail("simplices", "expected one name list per dimension up to the truncation");
    const json faces = doc_.value("faces", json::object());
    for (int q = 0; q < static_cast<int>(dims.size()); ++q)
      for (const auto& jn : dims[q]) {
        const auto name = get<std::string>(jn, "simplices");
        if (names_.count(name)) fail("simplices", "duplicate simplex '" + name + "'");
        std::vector<FormalSimplex> fs;
        if (q > 0) {
          const auto& list = at(faces, name, "faces");
          if (!list.is_array() || static_cast<int>(list.size()) != q + 1)
            fail("faces." + name, "expected " + std::to_string(q + 1) + " faces");
          for (int i = 0; i <= q; ++i) fs.push_back(parse_formal(list[i], q - 1, "faces." + name + "[" + std::to_string(i) + "]"));
        }
        names_[name] = s.add(q, name, std::move(fs));
      }
    return s;
  }

  GSimplicialSet::Action parse_action(const SimplicialSet& s) {
    const FinGroup& g = oc_->group();
    GSimplicialSet::Action action(g.order());
    for (int a = 0; a < g.order(); ++a) {
      action[a].resize(s.truncation() + 1);
      for (int q = 0; q <= s.truncation(); ++q) {
        action[a][q].resize(s.count(q));
        for (int k = 0; k < s.count(q); ++k) action[a][q][k] = k;
      }
    }
    if (!doc_.contains("action")) return action;
    for (const auto& [elem, perm] : doc_["action"].items()) {
      int a = -1;
      try {
        a = g.element(elem);
      } catch (const ValidationError&) {
        fail("action", "unknown group element '" + elem + "'");
      }
      for (const auto& [from, to] : perm.items()) {
        auto f = names_.find(from);
        const auto tn = get<std::string>(to, "action." + elem);
        auto t = names_.find(tn);
        if (f == names_.end() || t == names_.end()) fail("action." + elem, "unknown simplex");
        if (f->second.dim != t->second.dim) fail("action." + elem, "'" + from + "' and '" + tn + "' differ in dimension");
        action[a][f->second.dim][f->second.index] = t->second.index;
      }
    }
    return action;
  }

  int subgroup(const json& j, const std::string& where) {
    const FinGroup& g = oc_->group();
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "trivial") return oc_->trivial();
      if (s == "whole") return oc_->whole();
    }
    Subgroup elems;
    for (const auto& n : j) {
      try {
        elems.push_back(g.element(get<std::string>(n, where)));
      } catch (const ValidationError&) {
        fail(where, "unknown group element");
      }
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (!is_subgroup(g, elems)) fail(where, "not a subgroup");
    return oc_->index_of(elems);
  }

  OrbitMorphism morphism(const json& j, const std::string& where) {
    const int h = subgroup(at(j, "from", where), where + ".from");
    const int k = subgroup(at(j, "to", where), where + ".to");
    int g = oc_->group().identity();
    if (j.contains("via")) {
      try {
        g = oc_->group().element(get<std::string>(j["via"], where + ".via"));
      } catch (const ValidationError&) {
        fail(where + ".via", "unknown group element");
      }
    }
    if (!oc_->subconjugate(h, g, k)) fail(where, "no such morphism in the orbit category");
    return oc_->morphism(h, k, g);
  }

  static IntMatrix matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!j.is_array() || j.size() != rows) fail(where, "expected " + std::to_string(rows) + " rows");
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array() || j[r].size() != cols) fail(where, "expected " + std::to_string(cols) + " columns");
      for (std::size_t c = 0; c < cols; ++c) {
        if (j[r][c].is_string())
          m(r, c) = Integer(j[r][c].get<std::string>());
        else
          m(r, c) = get<long long>(j[r][c], where);
      }
    }
    return m;
  }

  static FGAbelianGroup module(const json& j, const std::string& where) {
    const int gens = get<int>(at(j, "generators", where), where + ".generators");
    if (gens < 0) fail(where + ".generators", "must be nonnegative");
    const json rel = j.value("relations", json::array());
    std::size_t cols = 0;
    if (!rel.empty()) cols = rel.is_array() && rel[0].is_array() ? rel[0].size() : 0;
    if (!rel.empty() && static_cast<int>(rel.size()) != gens)
      fail(where + ".relations", "one row per generator expected");
    return FGAbelianGroup(gens, rel.empty() ? IntMatrix(gens, 0) : matrix(rel, gens, cols, where + ".relations"));
  }

  CoefficientSystem parse_coefficients(const json& j) {
    CoefficientSystem c;
    c.category = x_->category_ptr();
    const int n = oc_->size();
    ValidationReport report;

    const auto& jm = at(j, "M0", "coefficients");
    if (jm.contains("per_subgroup")) {
      c.m0.at.assign(n, FGAbelianGroup());
      std::vector<bool> seen(n);
      for (const auto& e : jm["per_subgroup"]) {
        const int h = subgroup(at(e, "subgroup", "coefficients.M0"), "coefficients.M0.subgroup");
        c.m0.at[h] = module(e, "coefficients.M0");
        seen[h] = true;
      }
      for (int h = 0; h < n; ++h)
        if (!seen[h]) fail("coefficients.M0", "no group for subgroup " + std::to_string(h));
      for (const auto& e : jm.value("morphisms", json::array())) {
        const auto m = morphism(e, "coefficients.M0.morphisms");
        c.m0.maps[m] = matrix(at(e, "matrix", "coefficients.M0.morphisms"), c.m0.at[m.from].generators(),
                              c.m0.at[m.to].generators(), "coefficients.M0.morphisms.matrix");
      }
    } else {
      c.m0.at.assign(n, module(jm, "coefficients.M0"));
      for (const auto& m : oc_->all_morphisms()) c.m0.maps[m] = IntMatrix::identity(c.m0.at[0].generators());
    }

    const auto& jp = at(j, "pi", "coefficients");
    if (jp.contains("per_subgroup")) {
      c.pi.at.assign(n, FinGroup());
      std::vector<bool> seen(n);
      for (const auto& e : jp["per_subgroup"]) {
        const int h = subgroup(at(e, "subgroup", "coefficients.pi"), "coefficients.pi.subgroup");
        c.pi.at[h] = parse_group(at(e, "group", "coefficients.pi"), "coefficients.pi.group", "t");
        seen[h] = true;
      }
      for (int h = 0; h < n; ++h)
        if (!seen[h]) fail("coefficients.pi", "no group for subgroup " + std::to_string(h));
      for (const auto& e : jp.value("morphisms", json::array())) {
        const auto m = morphism(e, "coefficients.pi.morphisms");
        const FinGroup& src = c.pi.at[m.to];
        const FinGroup& dst = c.pi.at[m.from];
        std::vector<int> f(src.order());
        for (int a = 0; a < src.order(); ++a) {
          const auto& jmap = at(e, "map", "coefficients.pi.morphisms");
          if (!jmap.contains(src.name(a))) fail("coefficients.pi.morphisms.map", "missing image of '" + src.name(a) + "'");
          try {
            f[a] = dst.element(get<std::string>(jmap[src.name(a)], "coefficients.pi.morphisms.map"));
          } catch (const ValidationError&) {
            fail("coefficients.pi.morphisms.map", "unknown element");
          }
        }
        c.pi.maps[m] = f;
      }
    } else {
      c.pi.at.assign(n, parse_group(jp, "coefficients.pi", "t"));
      std::vector<int> id(c.pi.at[0].order());
      for (int a = 0; a < static_cast<int>(id.size()); ++a) id[a] = a;
      for (const auto& m : oc_->all_morphisms()) c.pi.maps[m] = id;
    }

    const json jf = j.value("phi", json::object());
    c.phi.at.resize(n);
    auto fill_phi = [&](int h, const json& acts, const std::string& where) {
      const FinGroup& p = c.pi.at[h];
      const auto gens = c.m0.at[h].generators();
      c.phi.at[h].assign(p.order(), IntMatrix::identity(gens));
      for (const auto& [elem, mat] : acts.items()) {
        int a = -1;
        try {
          a = p.element(elem);
        } catch (const ValidationError&) {
          fail(where, "unknown element '" + elem + "'");
        }
        c.phi.at[h][a] = matrix(mat, gens, gens, where + "." + elem);
      }
    };
    if (jf.contains("per_subgroup")) {
      std::vector<bool> seen(n);
      for (const auto& e : jf["per_subgroup"]) {
        const int h = subgroup(at(e, "subgroup", "coefficients.phi"), "coefficients.phi.subgroup");
        fill_phi(h, e.value("action", json::object()), "coefficients.phi");
        seen[h] = true;
      }
      for (int h = 0; h < n; ++h)
        if (!seen[h]) fail("coefficients.phi", "no action for subgroup " + std::to_string(h));
    } else {
      for (int h = 0; h < n; ++h) fill_phi(h, jf, "coefficients.phi");
    }

    c.complete(report);
    if (report.ok()) report.merge(c.validate());
    if (!report.ok()) throw ValidationError("coefficients: " + report.violations.front());
    return c;
  }

  Twisting parse_twisting() {
    const int n = oc_->size();
    Twisting k{std::vector<std::vector<int>>(n, std::vector<int>(s_->count(1), -1))};
    for (int h = 0; h < n; ++h)
      for (const auto& e : x_->fixed_simplices(h, 1)) k.labels[h][e.index] = pi_identity(h);
    if (!doc_.contains("twisting")) return k;
    const auto& jt = doc_["twisting"];
    auto apply = [&](int h, const json& labels, const std::string& where) {
      for (const auto& [edge, elem] : labels.items()) {
        auto it = names_.find(edge);
        if (it == names_.end() || it->second.dim != 1) fail(where, "unknown edge '" + edge + "'");
        if (!x_->fixed(h, it->second)) continue;
        try {
          k.labels[h][it->second.index] = pi_group(h).element(get<std::string>(elem, where));
        } catch (const ValidationError&) {
          fail(where + "." + edge, "unknown element of pi");
        }
      }
    };
    if (jt.contains("per_subgroup")) {
      for (const auto& e : jt["per_subgroup"])
        apply(subgroup(at(e, "subgroup", "twisting"), "twisting.subgroup"), e.value("labels", json::object()), "twisting");
    } else {
      for (int h = 0; h < n; ++h) apply(h, jt, "twisting");
    }
    return k;
  }

  PathSystem parse_paths(const json& j) {
    const auto& v = at(doc_, "base_vertex", "");
    auto it = names_.find(get<std::string>(v, "base_vertex"));
    if (it == names_.end() || it->second.dim != 0) fail("base_vertex", "unknown vertex");
    const int base = it->second.index;
    if (!x_->fixed(oc_->whole(), it->second)) fail("base_vertex", "not fixed by the group");
    if (j.is_string()) {
      if (j.get<std::string>() != "auto") fail("path_system", "expected 'auto' or an object of paths");
      return auto_path_system(*x_, base);
    }
    std::map<int, EdgePath> reps;
    for (const auto& [vertex, steps] : j.items()) {
      auto vt = names_.find(vertex);
      if (vt == names_.end() || vt->second.dim != 0) fail("path_system", "unknown vertex '" + vertex + "'");
      EdgePath path;
      for (const auto& step : steps) {
        const auto e = get<std::string>(at_index(step, 0, "path_system." + vertex), "path_system." + vertex);
        const auto dir = get<std::string>(at_index(step, 1, "path_system." + vertex), "path_system." + vertex);
        auto et = names_.find(e);
        if (et == names_.end() || et->second.dim != 1) fail("path_system." + vertex, "unknown edge '" + e + "'");
        if (dir != "+" && dir != "-") fail("path_system." + vertex, "direction must be '+' or '-'");
        path.push_back({et->second.index, dir == "+"});
      }
      reps[vt->second.index] = std::move(path);
    }
    std::map<int, EdgePath> at_reps;
    for (const auto& o : x_->orbits(0)) {
      // A path may be given for any member; move it to the representative.
      for (const auto& m : o.members)
        if (reps.count(m.index)) {
          const int g = x_->group().inv(x_->translator(m));
          at_reps[o.rep.index] = translate_path(*x_, g, reps[m.index]);
          break;
        }
      if (!at_reps.count(o.rep.index)) {
        if (o.rep.index == base)
          at_reps[base] = {};
        else
          throw PathMissing("path_system: no path to the orbit of '" + s_->name(o.rep) + "'");
      }
    }
    return path_system_from_representatives(*x_, base, at_reps);
  }

  static const json& at_index(const json& j, std::size_t i, const std::string& where) {
    if (!j.is_array() || j.size() <= i) fail(where, "each step is [edge, direction]");
    return j[i];
  }

  const FinGroup& pi_group(int h) const { return pi_->at.at(h); }
  int pi_identity(int h) const { return pi_group(h).identity(); }

  const json& doc_;
  const OrbitCategory* oc_ = nullptr;
  const SimplicialSet* s_ = nullptr;
  const GSimplicialSet* x_ = nullptr;
  const OGGroup* pi_ = nullptr;
  std::map<std::string, SimplexRef> names_;
};

}  // namespace detail

inline Bundle parse_bundle(const nlohmann::json& doc) {
  detail::BundleParser parser(doc);
  return parser.parse();
}

inline Bundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_bundle(doc);
}

}  // namespace equicohom
