#pragma once

// Finite, dimension-truncated simplicial sets. Only nondegenerate simplices are
// stored; every simplex is a FormalSimplex: a nondegenerate base together with a
// degeneracy word in normal form.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "equicohom/errors.hpp"

namespace equicohom {

struct SimplexRef {
  int dim = 0;
  int index = 0;
  auto operator<=>(const SimplexRef&) const = default;
};

/// Strictly decreasing j1 > j2 > ... > jk >= 0, meaning s_{j1} o ... o s_{jk}.
using DegeneracyWord = std::vector<int>;

/// A monotone map [p] -> [q], stored as its list of values.
using MonotoneMap = std::vector<int>;

namespace mono {

inline MonotoneMap identity(int q) {
  MonotoneMap m(q + 1);
  for (int k = 0; k <= q; ++k) m[k] = k;
  return m;
}

// Coface d^i : [q-1] -> [q], skipping i.
inline MonotoneMap coface(int q, int i) {
  MonotoneMap m(q);
  for (int k = 0; k < q; ++k) m[k] = k < i ? k : k + 1;
  return m;
}

// Codegeneracy s^j : [q+1] -> [q], hitting j twice.
inline MonotoneMap codegeneracy(int q, int j) {
  MonotoneMap m(q + 2);
  for (int k = 0; k <= q + 1; ++k) m[k] = k <= j ? k : k - 1;
  return m;
}

// outer o inner
inline MonotoneMap compose(const MonotoneMap& outer, const MonotoneMap& inner) {
  MonotoneMap m(inner.size());
  for (std::size_t k = 0; k < inner.size(); ++k) m[k] = outer[inner[k]];
  return m;
}

inline bool is_injective(const MonotoneMap& m) {
  for (std::size_t k = 1; k < m.size(); ++k)
    if (m[k] == m[k - 1]) return false;
  return true;
}

// Surjection [dim] -> [dim - |word|] described by a degeneracy word.
inline MonotoneMap surjection_of(const DegeneracyWord& word, int dim) {
  MonotoneMap s(dim + 1);
  for (int k = 0; k <= dim; ++k) {
    int below = 0;
    for (int j : word)
      if (j < k) ++below;
    s[k] = k - below;
  }
  return s;
}

// Repeat positions of a surjection, in decreasing order.
inline DegeneracyWord word_of(const MonotoneMap& surjection) {
  DegeneracyWord w;
  for (int k = static_cast<int>(surjection.size()) - 2; k >= 0; --k)
    if (surjection[k] == surjection[k + 1]) w.push_back(k);
  return w;
}

}  // namespace mono

struct FormalSimplex {
  SimplexRef base;
  DegeneracyWord word;

  FormalSimplex() = default;
  FormalSimplex(SimplexRef b, DegeneracyWord w = {}) : base(b), word(std::move(w)) {}

  int dim() const { return base.dim + static_cast<int>(word.size()); }
  bool degenerate() const { return !word.empty(); }
  MonotoneMap surjection() const { return mono::surjection_of(word, dim()); }

  auto operator<=>(const FormalSimplex&) const = default;
};

/// One operator of a face/degeneracy word.
struct SimplicialOp {
  enum Kind { face, degeneracy } kind;
  int index;
};

class SimplicialSet {
 public:
  SimplicialSet() = default;
  explicit SimplicialSet(int truncation) : truncation_(truncation), names_(truncation + 1), faces_(truncation + 1) {}

  int truncation() const { return truncation_; }
  int count(int q) const {
    return q >= 0 && q <= truncation_ ? static_cast<int>(names_[q].size()) : 0;
  }
  const std::string& name(SimplexRef r) const { return names_.at(r.dim).at(r.index); }

  /// Appends a nondegenerate simplex; `faces` must have q+1 entries of dimension q-1.
  SimplexRef add(int q, std::string name, std::vector<FormalSimplex> faces = {}) {
    if (q < 0 || q > truncation_) throw IndexOutOfRange("simplex dimension above truncation");
    if (static_cast<int>(faces.size()) != (q == 0 ? 0 : q + 1))
      throw DimensionMismatch("simplex '" + name + "' needs " + std::to_string(q == 0 ? 0 : q + 1) + " faces");
    names_[q].push_back(std::move(name));
    faces_[q].push_back(std::move(faces));
    return {q, static_cast<int>(names_[q].size()) - 1};
  }

  std::optional<SimplexRef> find(const std::string& name) const {
    for (int q = 0; q <= truncation_; ++q)
      for (int i = 0; i < count(q); ++i)
        if (names_[q][i] == name) return SimplexRef{q, i};
    return std::nullopt;
  }

  const FormalSimplex& base_face(SimplexRef r, int i) const { return faces_.at(r.dim).at(r.index).at(i); }

  FormalSimplex face(const FormalSimplex& x, int i) const {
    const int q = x.dim();
    if (q == 0 || i < 0 || i > q) throw IndexOutOfRange("face index " + std::to_string(i) + " out of range for dimension " + std::to_string(q));
    const MonotoneMap sigma = x.surjection();
    MonotoneMap tau = mono::compose(sigma, mono::coface(q, i));
    const bool surjective = std::find(tau.begin(), tau.end(), sigma[i]) != tau.end();
    if (surjective) return {x.base, mono::word_of(tau)};
    // The missing vertex t of the base is deleted.
    const int t = sigma[i];
    for (int& v : tau)
      if (v > t) --v;
    const FormalSimplex& bf = base_face(x.base, t);
    const MonotoneMap rho = bf.surjection();
    return {bf.base, mono::word_of(mono::compose(rho, tau))};
  }

  FormalSimplex degeneracy(const FormalSimplex& x, int j) const {
    const int q = x.dim();
    if (j < 0 || j > q) throw IndexOutOfRange("degeneracy index " + std::to_string(j) + " out of range for dimension " + std::to_string(q));
    return {x.base, mono::word_of(mono::compose(x.surjection(), mono::codegeneracy(q, j)))};
  }

  /// x o theta for a monotone theta : [p] -> [dim x].
  FormalSimplex restrict(const FormalSimplex& x, const MonotoneMap& theta) const {
    const MonotoneMap through = mono::compose(x.surjection(), theta);
    // Factor through the image: a surjection onto it, then an injection.
    std::vector<int> image;
    for (int v : through)
      if (image.empty() || image.back() != v) image.push_back(v);
    MonotoneMap onto(through.size());
    for (std::size_t k = 0, pos = 0; k < through.size(); ++k) {
      while (image[pos] != through[k]) ++pos;
      onto[k] = static_cast<int>(pos);
    }
    FormalSimplex y{x.base};
    for (int v = x.base.dim; v >= 0; --v)
      if (!std::binary_search(image.begin(), image.end(), v)) y = face(y, v);
    return {y.base, mono::word_of(mono::compose(y.surjection(), onto))};
  }

  /// The k-th vertex of x.
  FormalSimplex vertex(const FormalSimplex& x, int k) const { return restrict(x, {k}); }

  /// d_{i1} d_{i2} ... d_{ir} x, applying i_r first.
  FormalSimplex iterated_face(const FormalSimplex& x, const std::vector<int>& indices) const {
    FormalSimplex y = x;
    for (auto it = indices.rbegin(); it != indices.rend(); ++it) y = face(y, *it);
    return y;
  }

  /// Applies an operator word, listed outermost first, and returns the normal form.
  FormalSimplex normalize(const std::vector<SimplicialOp>& ops, const FormalSimplex& x) const {
    FormalSimplex y = x;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      y = it->kind == SimplicialOp::face ? face(y, it->index) : degeneracy(y, it->index);
    return y;
  }

  std::string describe(const FormalSimplex& x) const {
    std::ostringstream os;
    for (int j : x.word) os << 's' << j;
    if (x.degenerate()) os << '(';
    os << name(x.base);
    if (x.degenerate()) os << ')';
    return os.str();
  }

  /// Face tables are well typed and d_i d_j = d_{j-1} d_i (i < j) on generators.
  ValidationReport validate() const {
    ValidationReport report;
    for (int q = 1; q <= truncation_; ++q)
      for (int k = 0; k < count(q); ++k) {
        const SimplexRef r{q, k};
        for (int i = 0; i <= q; ++i) {
          const FormalSimplex& f = base_face(r, i);
          if (f.dim() != q - 1 || f.base.dim < 0 || f.base.index < 0 || f.base.index >= count(f.base.dim) ||
              !std::is_sorted(f.word.rbegin(), f.word.rend()) ||
              std::adjacent_find(f.word.begin(), f.word.end()) != f.word.end() ||
              (!f.word.empty() && f.word.front() >= q - 1)) {
            report.fail("face d" + std::to_string(i) + " of '" + name(r) + "' is malformed");
          }
        }
      }
    if (!report.ok()) return report;
    for (int q = 2; q <= truncation_; ++q)
      for (int k = 0; k < count(q); ++k) {
        const FormalSimplex x{SimplexRef{q, k}};
        for (int j = 1; j <= q; ++j)
          for (int i = 0; i < j; ++i) {
            const auto lhs = face(face(x, j), i);
            const auto rhs = face(face(x, i), j - 1);
            if (lhs != rhs)
              report.fail("d" + std::to_string(i) + "d" + std::to_string(j) + " != d" + std::to_string(j - 1) +
                          "d" + std::to_string(i) + " on '" + name(x.base) + "': " + describe(lhs) + " vs " +
                          describe(rhs));
          }
      }
    return report;
  }

  std::vector<int> counts() const {
    std::vector<int> c;
    for (int q = 0; q <= truncation_; ++q) c.push_back(count(q));
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
  }

 private:
  int truncation_ = 0;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<std::vector<FormalSimplex>>> faces_;
};

// ---------------------------------------------------------------------------
// Standard simplices

namespace detail {

inline std::string tuple_name(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k]);
  return s + ")";
}

// All strictly increasing (q+1)-tuples in {0..n}, lexicographically.
inline std::vector<std::vector<int>> increasing_tuples(int n, int q) {
  std::vector<std::vector<int>> out;
  if (q < 0 || q > n) return out;
  std::vector<int> t(q + 1);
  for (int k = 0; k <= q; ++k) t[k] = k;
  for (;;) {
    out.push_back(t);
    int k = q;
    while (k >= 0 && t[k] == n - q + k) --k;
    if (k < 0) break;
    ++t[k];
    for (int l = k + 1; l <= q; ++l) t[l] = t[l - 1] + 1;
  }
  return out;
}

inline SimplicialSet simplex_on_tuples(int n, int top, int truncation) {
  SimplicialSet s(truncation);
  std::map<std::vector<int>, int> index;
  for (int q = 0; q <= std::min(top, truncation); ++q)
    for (const auto& t : increasing_tuples(n, q)) {
      std::vector<FormalSimplex> faces;
      if (q > 0)
        for (int i = 0; i <= q; ++i) {
          auto f = t;
          f.erase(f.begin() + i);
          faces.emplace_back(SimplexRef{q - 1, index.at(f)});
        }
      index[t] = s.add(q, tuple_name(t), std::move(faces)).index;
    }
  return s;
}

}  // namespace detail

/// Index of a strictly increasing tuple among the nondegenerate simplices of Delta[n].
inline int tuple_index(int n, const std::vector<int>& tuple) {
  const auto all = detail::increasing_tuples(n, static_cast<int>(tuple.size()) - 1);
  auto it = std::lower_bound(all.begin(), all.end(), tuple);
  if (it == all.end() || *it != tuple) throw IndexOutOfRange("not a strictly increasing tuple");
  return static_cast<int>(it - all.begin());
}

inline std::vector<std::vector<int>> increasing_tuples(int n, int q) { return detail::increasing_tuples(n, q); }

inline SimplicialSet standard_simplex(int n, int truncation = -1) {
  return detail::simplex_on_tuples(n, n, truncation < 0 ? n : truncation);
}

inline SimplicialSet boundary(int n, int truncation = -1) {
  return detail::simplex_on_tuples(n, n - 1, truncation < 0 ? std::max(n - 1, 0) : truncation);
}

// ---------------------------------------------------------------------------
// Simplicial maps

struct SimplicialMap {
  const SimplicialSet* source = nullptr;
  const SimplicialSet* target = nullptr;
  std::vector<std::vector<FormalSimplex>> images;  // images[q][index]

  FormalSimplex operator()(const FormalSimplex& x) const {
    const FormalSimplex& b = images.at(x.base.dim).at(x.base.index);
    return target->restrict(b, x.surjection());
  }
};

/// f d_i = d_i f on every nondegenerate generator, with dimensions preserved.
inline bool check_map(const SimplicialMap& f) {
  const int top = std::min(f.source->truncation(), f.target->truncation());
  for (int q = 0; q <= top; ++q)
    for (int k = 0; k < f.source->count(q); ++k) {
      const FormalSimplex x{SimplexRef{q, k}};
      const FormalSimplex fx = f(x);
      if (fx.dim() != q) return false;
      for (int i = 0; q > 0 && i <= q; ++i)
        if (f(f.source->face(x, i)) != f.target->face(fx, i)) return false;
    }
  return true;
}

inline SimplicialMap identity_map(const SimplicialSet& x) {
  SimplicialMap f{&x, &x, {}};
  for (int q = 0; q <= x.truncation(); ++q) {
    f.images.emplace_back();
    for (int k = 0; k < x.count(q); ++k) f.images.back().emplace_back(SimplexRef{q, k});
  }
  return f;
}

// ---------------------------------------------------------------------------
// Products

/// X x Y truncated at D; nondegenerate simplices are pairs with no common repeat.
struct ProductSet {
  SimplicialSet set;
  std::vector<std::vector<std::pair<FormalSimplex, FormalSimplex>>> components;
  std::map<std::pair<FormalSimplex, FormalSimplex>, SimplexRef> lookup;

  const std::pair<FormalSimplex, FormalSimplex>& pair_of(SimplexRef r) const {
    return components.at(r.dim).at(r.index);
  }
  FormalSimplex first(const FormalSimplex& z, const SimplicialSet& x) const {
    return x.restrict(FormalSimplex{pair_of(z.base).first}, z.surjection());
  }
  FormalSimplex second(const FormalSimplex& z, const SimplicialSet& y) const {
    return y.restrict(FormalSimplex{pair_of(z.base).second}, z.surjection());
  }
  /// The product simplex with the given components, in normal form.
  FormalSimplex pair(const FormalSimplex& a, const FormalSimplex& b) const {
    if (a.dim() != b.dim()) throw DimensionMismatch("product components of different dimension");
    const int q = a.dim();
    const auto sa = a.surjection(), sb = b.surjection();
    // Common repeat positions factor out as a shared degeneracy.
    MonotoneMap common(q + 1);
    int v = 0;
    for (int k = 0; k <= q; ++k) {
      if (k > 0 && !(sa[k] == sa[k - 1] && sb[k] == sb[k - 1])) ++v;
      common[k] = v;
    }
    MonotoneMap section;
    for (int k = 0; k <= q; ++k)
      if (k == 0 || common[k] != common[k - 1]) section.push_back(k);
    // a = a' o common where a' = a o section.
    auto restrict_word = [&](const MonotoneMap& s, SimplexRef base) {
      return FormalSimplex{base, mono::word_of(mono::compose(s, section))};
    };
    const FormalSimplex a2 = restrict_word(sa, a.base), b2 = restrict_word(sb, b.base);
    auto it = lookup.find({a2, b2});
    if (it == lookup.end()) throw IndexOutOfRange("product simplex above truncation");
    return {it->second, mono::word_of(common)};
  }
};

namespace detail {

// All degeneracy words taking dimension p to dimension q (choose q-p repeat positions among 0..q-1).
inline std::vector<DegeneracyWord> words_between(int p, int q) {
  std::vector<DegeneracyWord> out;
  const int k = q - p;
  if (k < 0) return out;
  if (k == 0) return {DegeneracyWord{}};
  for (const auto& t : increasing_tuples(q - 1, k - 1)) out.emplace_back(t.rbegin(), t.rend());
  return out;
}

}  // namespace detail

inline ProductSet product(const SimplicialSet& x, const SimplicialSet& y, int truncation) {
  if (x.truncation() < truncation || y.truncation() < truncation)
    throw DimensionMismatch("product factors truncated below the requested dimension");
  ProductSet p{SimplicialSet(truncation), {}, {}};
  auto formal_of = [](const SimplicialSet& s, int q) {
    std::vector<FormalSimplex> out;
    for (int b = 0; b <= q; ++b)
      for (int k = 0; k < s.count(b); ++k)
        for (auto& w : detail::words_between(b, q)) out.emplace_back(SimplexRef{b, k}, w);
    return out;
  };
  for (int q = 0; q <= truncation; ++q) {
    p.components.emplace_back();
    const auto xs = formal_of(x, q), ys = formal_of(y, q);
    for (const auto& a : xs)
      for (const auto& b : ys) {
        bool disjoint = true;
        for (int j : a.word)
          if (std::find(b.word.begin(), b.word.end(), j) != b.word.end()) disjoint = false;
        if (!disjoint) continue;
        std::vector<FormalSimplex> faces;
        for (int i = 0; q > 0 && i <= q; ++i) faces.push_back(p.pair(x.face(a, i), y.face(b, i)));
        const SimplexRef r = p.set.add(q, "(" + x.describe(a) + "," + y.describe(b) + ")", std::move(faces));
        p.components.back().emplace_back(a, b);
        p.lookup[{a, b}] = r;
      }
  }
  return p;
}

}  // namespace equicohom
