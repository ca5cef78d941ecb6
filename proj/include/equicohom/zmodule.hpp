#pragma once

// Exact integer linear algebra: Smith normal form, finitely generated abelian
// groups given by presentations, their homomorphisms, and the cohomology of
// cochain complexes built from them.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "equicohom/errors.hpp"

namespace equicohom {

using Integer = boost::multiprecision::cpp_int;
using Vector = std::vector<Integer>;

inline Vector zero_vector(std::size_t n) { return Vector(n, Integer(0)); }

inline bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

inline Vector operator+(Vector a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vector operator-(Vector a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vector operator*(const Integer& s, Vector a) {
  for (auto& x : a) x *= s;
  return a;
}

// ---------------------------------------------------------------------------
// IntMatrix

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
      for (long long x : r) data_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<Vector>& columns, std::size_t rows) {
    IntMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw DimensionMismatch("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  Vector apply(const Vector& x) const {
    if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
    Vector y = zero_vector(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!data_[i * cols_ + j].is_zero() && !x[j].is_zero()) y[i] += data_[i * cols_ + j] * x[j];
    return y;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
  }

  // [A | B]
  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw DimensionMismatch("hstack row mismatch");
    IntMatrix m(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
    }
    return m;
  }

  // Block diagonal sum.
  static IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) r += b.rows_, c += b.cols_;
    IntMatrix m(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) m(r0 + i, c0 + j) = b(i, j);
      r0 += b.rows_;
      c0 += b.cols_;
    }
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(src, j).is_zero()) (*this)(dst, j) += k * (*this)(src, j);
  }
  // col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      if (!(*this)(i, src).is_zero()) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product size mismatch");
    IntMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) m(i, j) += aik * b(k, j);
      }
    return m;
  }
  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum size mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference size mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend IntMatrix operator*(const Integer& s, IntMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// ---------------------------------------------------------------------------
// Smith normal form

/// S = U * A * V with U, V unimodular; U_inv and V_inv are tracked alongside.
struct SmithDecomposition {
  IntMatrix U, S, V, U_inv, V_inv;
  std::size_t rank = 0;

  const Integer& diagonal(std::size_t i) const { return S(i, i); }
};

inline SmithDecomposition smith_decomposition(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  SmithDecomposition d{IntMatrix::identity(m), A, IntMatrix::identity(n), IntMatrix::identity(m),
                       IntMatrix::identity(n), 0};
  IntMatrix& S = d.S;

  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    S.add_row(dst, src, k);
    d.U.add_row(dst, src, k);
    d.U_inv.add_col(src, dst, -k);
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    S.swap_rows(a, b);
    d.U.swap_rows(a, b);
    d.U_inv.swap_cols(a, b);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
    S.add_col(dst, src, k);
    d.V.add_col(dst, src, k);
    d.V_inv.add_row(src, dst, -k);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    S.swap_cols(a, b);
    d.V.swap_cols(a, b);
    d.V_inv.swap_rows(a, b);
  };

  // Quotient rounded to the nearest integer keeps remainders at most |b|/2.
  auto nearest = [](const Integer& a, const Integer& b) {
    Integer q = a / b;
    Integer r = a - q * b;
    if (2 * abs(r) > abs(b)) q += (r < 0) == (b < 0) ? 1 : -1;
    return q;
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (S(i, j) != 0 && (!best || abs(S(i, j)) < abs(S(best->first, best->second)))) best = {i, j};
      if (!best) break;
      if (best->first != t) row_swap(t, best->first);
      if (best->second != t) col_swap(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (S(i, t) == 0) continue;
        row_add(i, t, -nearest(S(i, t), S(t, t)));
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (S(t, j) == 0) continue;
        col_add(j, t, -nearest(S(t, j), S(t, t)));
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Pivot must divide the whole trailing block.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < m && !offender; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (S(i, j) % S(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      row_add(t, *offender, Integer(1));
    }
    if (S(t, t) == 0) break;
    if (S(t, t) < 0) {
      S.negate_row(t);
      d.U.negate_row(t);
      d.U_inv.negate_col(t);
    }
  }
  d.rank = t;
  return d;
}

inline std::tuple<IntMatrix, IntMatrix, IntMatrix> smith_normal_form(const IntMatrix& A) {
  auto d = smith_decomposition(A);
  return {std::move(d.U), std::move(d.S), std::move(d.V)};
}

/// Basis (as columns) of the integer kernel {x : A x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& A) {
  auto d = smith_decomposition(A);
  IntMatrix K(A.cols(), A.cols() - d.rank);
  for (std::size_t j = d.rank; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.cols(); ++i) K(i, j - d.rank) = d.V(i, j);
  return K;
}

// ---------------------------------------------------------------------------
// Lattice: the column span of an integer matrix inside Z^m.

class Lattice {
 public:
  explicit Lattice(const IntMatrix& generators)
      : ambient_(generators.rows()), gens_(generators), snf_(smith_decomposition(generators)) {}

  std::size_t ambient_dimension() const { return ambient_; }
  std::size_t rank() const { return snf_.rank; }
  const IntMatrix& generators() const { return gens_; }

  bool contains(const Vector& x) const {
    Vector y = snf_.U.apply(x);
    for (std::size_t i = 0; i < ambient_; ++i) {
      if (i < snf_.rank) {
        if (y[i] % snf_.diagonal(i) != 0) return false;
      } else if (y[i] != 0) {
        return false;
      }
    }
    return true;
  }

  /// Some c with generators * c = x, if x lies in the lattice.
  std::optional<Vector> solve(const Vector& x) const {
    Vector y = snf_.U.apply(x);
    Vector z = zero_vector(gens_.cols());
    for (std::size_t i = 0; i < ambient_; ++i) {
      if (i < snf_.rank) {
        if (y[i] % snf_.diagonal(i) != 0) return std::nullopt;
        z[i] = y[i] / snf_.diagonal(i);
      } else if (y[i] != 0) {
        return std::nullopt;
      }
    }
    return snf_.V.apply(z);
  }

  /// Canonical representative of the coset x + L.
  Vector reduce(const Vector& x) const {
    Vector y = snf_.U.apply(x);
    for (std::size_t i = 0; i < snf_.rank; ++i) {
      const Integer& d = snf_.diagonal(i);
      y[i] %= d;
      if (y[i] < 0) y[i] += d;
    }
    return snf_.U_inv.apply(y);
  }

  /// A Z-basis of the lattice, as the columns of an ambient x rank matrix.
  IntMatrix basis() const {
    IntMatrix B(ambient_, snf_.rank);
    for (std::size_t j = 0; j < snf_.rank; ++j)
      for (std::size_t i = 0; i < ambient_; ++i) B(i, j) = snf_.U_inv(i, j) * snf_.diagonal(j);
    return B;
  }

  const SmithDecomposition& smith() const { return snf_; }

 private:
  std::size_t ambient_;
  IntMatrix gens_;
  SmithDecomposition snf_;
};

// ---------------------------------------------------------------------------
// FGAbelianGroup

/// Z^generators modulo the column span of `relations`.
class FGAbelianGroup {
 public:
  FGAbelianGroup() : FGAbelianGroup(0, IntMatrix(0, 0)) {}

  FGAbelianGroup(std::size_t generators, IntMatrix relations)
      : generators_(generators), relations_(std::move(relations)) {
    if (relations_.rows() != generators_)
      throw DimensionMismatch("relation matrix must have one row per generator");
    lattice_ = std::make_shared<const Lattice>(relations_);
    const auto& snf = lattice_->smith();
    std::size_t units = 0;
    for (std::size_t i = 0; i < snf.rank; ++i) {
      if (snf.diagonal(i) == 1)
        ++units;
      else
        torsion_.push_back(snf.diagonal(i));
    }
    rank_ = generators_ - snf.rank;
    (void)units;
  }

  static FGAbelianGroup free(std::size_t n) { return FGAbelianGroup(n, IntMatrix(n, 0)); }
  static FGAbelianGroup cyclic(long long order) {
    if (order == 0) return free(1);
    return FGAbelianGroup(1, IntMatrix{{order}});
  }
  static FGAbelianGroup from_invariants(std::size_t rank, const std::vector<Integer>& torsion) {
    const std::size_t n = rank + torsion.size();
    IntMatrix rel(n, torsion.size());
    for (std::size_t i = 0; i < torsion.size(); ++i) rel(rank + i, i) = torsion[i];
    return FGAbelianGroup(n, std::move(rel));
  }
  static FGAbelianGroup direct_sum(const std::vector<FGAbelianGroup>& parts) {
    std::vector<IntMatrix> blocks;
    std::size_t gens = 0;
    for (const auto& p : parts) {
      blocks.push_back(p.relations_);
      gens += p.generators_;
    }
    return FGAbelianGroup(gens, IntMatrix::block_diagonal(blocks));
  }

  std::size_t generators() const { return generators_; }
  const IntMatrix& relations() const { return relations_; }
  const Lattice& relation_lattice() const { return *lattice_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  bool is_trivial() const { return rank_ == 0 && torsion_.empty(); }

  bool contains_relation(const Vector& x) const { return lattice_->contains(x); }
  bool equal(const Vector& a, const Vector& b) const { return lattice_->contains(a - b); }
  bool is_zero_element(const Vector& a) const { return lattice_->contains(a); }
  Vector reduce(const Vector& a) const { return lattice_->reduce(a); }
  Vector zero() const { return zero_vector(generators_); }

  /// Canonical forms agree.
  bool isomorphic(const FGAbelianGroup& other) const {
    return rank_ == other.rank_ && torsion_ == other.torsion_;
  }

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank_ > 0) {
      os << "Z";
      if (rank_ > 1) os << '^' << rank_;
      first = false;
    }
    for (const auto& d : torsion_) {
      os << (first ? "" : " + ") << "Z/" << d;
      first = false;
    }
    return os.str();
  }

 private:
  std::size_t generators_ = 0;
  IntMatrix relations_;
  std::shared_ptr<const Lattice> lattice_;
  std::size_t rank_ = 0;
  std::vector<Integer> torsion_;
};

// ---------------------------------------------------------------------------
// AbHom

/// Homomorphism given on generators: matrix is codomain.generators x domain.generators.
struct AbHom {
  FGAbelianGroup domain;
  FGAbelianGroup codomain;
  IntMatrix matrix;

  Vector operator()(const Vector& x) const { return matrix.apply(x); }

  static AbHom identity(const FGAbelianGroup& g) {
    return {g, g, IntMatrix::identity(g.generators())};
  }
  static AbHom zero(const FGAbelianGroup& from, const FGAbelianGroup& to) {
    return {from, to, IntMatrix(to.generators(), from.generators())};
  }
};

/// True iff the matrix carries the domain's relations into the codomain's.
inline bool hom_is_well_defined(const AbHom& h) {
  if (h.matrix.rows() != h.codomain.generators() || h.matrix.cols() != h.domain.generators())
    return false;
  const IntMatrix image = h.matrix * h.domain.relations();
  for (std::size_t j = 0; j < image.cols(); ++j)
    if (!h.codomain.contains_relation(image.column(j))) return false;
  return true;
}

/// second o first
inline AbHom compose(const AbHom& second, const AbHom& first) {
  if (first.codomain.generators() != second.domain.generators())
    throw DimensionMismatch("composing homomorphisms with mismatched groups");
  return {first.domain, second.codomain, second.matrix * first.matrix};
}

/// Same map of presented groups: generator images agree modulo relations.
inline bool hom_equal(const AbHom& a, const AbHom& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) return false;
  const IntMatrix diff = a.matrix - b.matrix;
  for (std::size_t j = 0; j < diff.cols(); ++j)
    if (!a.codomain.contains_relation(diff.column(j))) return false;
  return true;
}

inline bool hom_is_zero(const AbHom& h) {
  for (std::size_t j = 0; j < h.matrix.cols(); ++j)
    if (!h.codomain.contains_relation(h.matrix.column(j))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Cohomology of a cochain complex of presented groups

namespace detail {

// Basis of {x in Z^m : f(x) = 0 in the codomain}, as columns.
inline IntMatrix kernel_lattice_basis(const AbHom& f) {
  const std::size_t m = f.domain.generators();
  if (f.codomain.generators() == 0) return IntMatrix::identity(m);
  const IntMatrix stacked = IntMatrix::hstack(f.matrix, Integer(-1) * f.codomain.relations());
  const IntMatrix K = integer_kernel(stacked);
  IntMatrix P(m, K.cols());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < K.cols(); ++j) P(i, j) = K(i, j);
  return Lattice(P).basis();
}

}  // namespace detail

/// Preimage of the codomain's relation lattice: a basis of the cocycle lattice.
inline IntMatrix cocycle_lattice_basis(const AbHom& f) { return detail::kernel_lattice_basis(f); }

/// H^n = ker(delta^n) / im(delta^{n-1}) for a complex C^0 -> C^1 -> ... -> C^N -> 0.
/// The last group is followed by the zero map. Throws ComplexNotExact if two
/// consecutive coboundaries do not compose to zero.
inline std::vector<FGAbelianGroup> cohomology_of_complex(const std::vector<FGAbelianGroup>& groups,
                                                         const std::vector<AbHom>& deltas) {
  if (groups.empty()) return {};
  if (deltas.size() + 1 != groups.size())
    throw DimensionMismatch("a complex with k groups needs k-1 coboundaries");
  for (std::size_t n = 0; n < deltas.size(); ++n) {
    if (deltas[n].domain.generators() != groups[n].generators() ||
        deltas[n].codomain.generators() != groups[n + 1].generators())
      throw DimensionMismatch("coboundary " + std::to_string(n) + " does not match its groups");
    if (!hom_is_well_defined(deltas[n]))
      throw ValidationError("coboundary " + std::to_string(n) + " is not well defined");
  }
  for (std::size_t n = 0; n + 1 < deltas.size(); ++n)
    if (!hom_is_zero(compose(deltas[n + 1], deltas[n])))
      throw ComplexNotExact("delta^" + std::to_string(n + 1) + " o delta^" + std::to_string(n) +
                            " is not zero");

  std::vector<FGAbelianGroup> result;
  for (std::size_t n = 0; n < groups.size(); ++n) {
    const FGAbelianGroup& C = groups[n];
    const IntMatrix Z = n < deltas.size() ? detail::kernel_lattice_basis(deltas[n])
                                          : IntMatrix::identity(C.generators());
    // Boundaries plus the presentation's own relations.
    IntMatrix B = C.relations();
    if (n > 0) B = IntMatrix::hstack(deltas[n - 1].matrix, B);
    const Lattice zl(Z);
    IntMatrix coords(Z.cols(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
      auto c = zl.solve(B.column(j));
      if (!c) throw ComplexNotExact("image of delta^" + std::to_string(n - 1) + " escapes the kernel");
      for (std::size_t i = 0; i < Z.cols(); ++i) coords(i, j) = (*c)[i];
    }
    result.emplace_back(Z.cols(), std::move(coords));
  }
  return result;
}

/// Convenience overload: the groups are read off the coboundaries.
inline std::vector<FGAbelianGroup> cohomology_of_complex(const std::vector<AbHom>& deltas) {
  if (deltas.empty()) return {};
  std::vector<FGAbelianGroup> groups;
  for (const auto& d : deltas) groups.push_back(d.domain);
  groups.push_back(deltas.back().codomain);
  return cohomology_of_complex(groups, deltas);
}

}  // namespace equicohom
