#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nodalsyz/rational.hpp"

namespace nodalsyz {

using Index = std::uint32_t;

struct Entry {
  Index index;
  Rational value;

  bool operator==(const Entry&) const = default;
};

// Sorted by index, no stored zeros.
using SparseVector = std::vector<Entry>;

// Thrown when two maps that are supposed to form a complex do not compose to
// zero, or when their shapes do not chain.
class ComplexError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Exact rational matrix stored as sparse columns.  The storage layout is an
// implementation detail: every query below depends only on the entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  // Dense row-major literal, mostly for tests.
  static Matrix from_rows(std::initializer_list<std::initializer_list<Rational>> rows);
  static Matrix from_dense(std::size_t rows, std::size_t cols, const std::vector<Rational>& row_major);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  Rational at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Rational& value);

  const SparseVector& column(std::size_t c) const { return columns_[c]; }
  // `v` must be sorted, zero-free and within range.
  void set_column(std::size_t c, SparseVector v);
  void append_column(SparseVector v);

  Matrix transpose() const;
  // Rows restricted to the given (sorted, distinct) row indices, renumbered.
  Matrix select_rows(const std::vector<Index>& keep) const;
  std::size_t nonzeros() const;
  bool is_zero() const;

  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
  friend bool operator==(const Matrix& lhs, const Matrix& rhs);

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

// lhs * v for a sparse column v of length lhs.cols().
SparseVector apply(const Matrix& lhs, const SparseVector& v);

// Incremental row echelon form over Q.  Vectors are reduced against stored
// pivots keyed by their leading (smallest) index; pivots are kept monic.
class Echelon {
 public:
  explicit Echelon(std::size_t dimension);

  // Reduces `v` and stores it as a new pivot if it is independent of the
  // current span.  Returns whether the rank grew.
  bool insert(SparseVector v);
  // Reduces `v` against the span; the result is zero iff v is in the span.
  SparseVector reduce(SparseVector v) const;

  std::size_t rank() const { return pivots_.size(); }
  std::size_t dimension() const { return pivot_slot_.size(); }
  const std::vector<SparseVector>& pivots() const { return pivots_; }

  // Back-substitutes so that every pivot index appears in exactly one stored
  // vector (reduced row echelon form).
  void make_reduced();

 private:
  std::vector<std::int64_t> pivot_slot_;
  std::vector<SparseVector> pivots_;
};

struct Kernel {
  // Columns span the null space; column j has a 1 at free_columns[j] and a 0
  // at every other free column, so coordinates of a null vector x in this
  // basis are just x[free_columns[j]].
  Matrix basis;
  std::vector<Index> free_columns;
};

std::size_t rank(const Matrix& m);
Kernel kernel(const Matrix& m);
Matrix kernel_basis(const Matrix& m);

// Whether after * before == 0, without materialising the product.
bool composes_to_zero(const Matrix& after, const Matrix& before);

// Rank over Z/p with p = 2^61 - 1, or nullopt when some denominator is
// divisible by p.  Never exceeds the rank over Q.
std::optional<std::size_t> rank_mod_prime(const Matrix& m);

enum class HomologyMethod {
  // Exact ranks over Q throughout.
  rational,
  // Ranks mod p first.  Since b * a = 0 over Q and rank mod p <= rank over Q,
  // dim V - rank_p(a) - rank_p(b) = 0 proves the homology vanishes; any other
  // outcome falls back to exact ranks over Q.
  certified,
};

// dim ker(b) - rank(a) for a complex U --a--> V --b--> W.  Throws
// ComplexError if the shapes do not chain or b * a != 0.
std::size_t middle_homology_dim(const Matrix& a, const Matrix& b,
                                HomologyMethod method = HomologyMethod::certified);

}  // namespace nodalsyz
