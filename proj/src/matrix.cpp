#include "nodalsyz/matrix.hpp"

#include <algorithm>
#include <utility>

namespace nodalsyz {

namespace {

// v <- v - c * p, both sorted.  `scratch` is reused storage.
void subtract_scaled(SparseVector& v, const Rational& c, const SparseVector& p, SparseVector& scratch) {
  scratch.clear();
  scratch.reserve(v.size() + p.size());
  auto vi = v.begin();
  auto pi = p.begin();
  Rational tmp;
  while (vi != v.end() || pi != p.end()) {
    if (pi == p.end() || (vi != v.end() && vi->index < pi->index)) {
      scratch.push_back(std::move(*vi));
      ++vi;
    } else if (vi == v.end() || pi->index < vi->index) {
      tmp = c * pi->value;
      scratch.push_back({pi->index, -tmp});
      ++pi;
    } else {
      tmp = c * pi->value;
      vi->value -= tmp;
      if (vi->value != 0) scratch.push_back(std::move(*vi));
      ++vi;
      ++pi;
    }
  }
  v.swap(scratch);
}

void make_monic(SparseVector& v) {
  if (v.empty() || v.front().value == 1) return;
  const Rational inv = 1 / v.front().value;
  for (auto& e : v) e.value *= inv;
}

SparseVector sorted_sum(std::vector<Entry>& terms) {
  std::sort(terms.begin(), terms.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  SparseVector out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().index == t.index) {
      out.back().value += t.value;
    } else {
      if (!out.empty() && out.back().value == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().value == 0) out.pop_back();
  return out;
}

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  std::uint64_t s = static_cast<std::uint64_t>(r & kPrime) + static_cast<std::uint64_t>(r >> 61);
  if (s >= kPrime) s -= kPrime;
  return s;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1) {
    if (e & 1) r = mul_mod(r, a);
    a = mul_mod(a, a);
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::optional<std::uint64_t> reduce_mod(const Rational& q) {
  const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (den == 0) return std::nullopt;
  const std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  return mul_mod(num, inv_mod(den));
}

struct ModEntry {
  Index index;
  std::uint64_t value;
};

std::optional<std::size_t> rank_mod_columns(const Matrix& m) {
  std::vector<std::int64_t> slot(m.rows(), -1);
  std::vector<std::vector<ModEntry>> pivots;
  std::vector<ModEntry> v;
  std::vector<ModEntry> scratch;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    v.clear();
    for (const auto& e : m.column(c)) {
      const auto r = reduce_mod(e.value);
      if (!r) return std::nullopt;
      if (*r != 0) v.push_back({e.index, *r});
    }
    while (!v.empty()) {
      const auto s = slot[v.front().index];
      if (s < 0) {
        const std::uint64_t inv = inv_mod(v.front().value);
        for (auto& e : v) e.value = mul_mod(e.value, inv);
        slot[v.front().index] = static_cast<std::int64_t>(pivots.size());
        pivots.push_back(std::move(v));
        v = {};
        break;
      }
      const std::uint64_t f = v.front().value;
      const auto& p = pivots[static_cast<std::size_t>(s)];
      scratch.clear();
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < v.size() || j < p.size()) {
        if (j == p.size() || (i < v.size() && v[i].index < p[j].index)) {
          scratch.push_back(v[i++]);
        } else if (i == v.size() || p[j].index < v[i].index) {
          scratch.push_back({p[j].index, kPrime - mul_mod(f, p[j].value)});
          ++j;
        } else {
          std::uint64_t x = v[i].value + kPrime - mul_mod(f, p[j].value);
          if (x >= kPrime) x -= kPrime;
          if (x != 0) scratch.push_back({v[i].index, x});
          ++i;
          ++j;
        }
      }
      v.swap(scratch);
    }
  }
  return pivots.size();
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Rational>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged matrix literal");
    std::size_t j = 0;
    for (const auto& v : row) {
      if (v != 0) m.columns_[j].push_back({static_cast<Index>(i), v});
      ++j;
    }
    ++i;
  }
  return m;
}

Matrix Matrix::from_dense(std::size_t rows, std::size_t cols, const std::vector<Rational>& row_major) {
  if (row_major.size() != rows * cols) throw std::invalid_argument("dense data does not match shape");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const Rational& v = row_major[i * cols + j];
      if (v != 0) m.columns_[j].push_back({static_cast<Index>(i), v});
    }
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].push_back({static_cast<Index>(i), Rational(1)});
  return m;
}

Rational Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols()) throw std::out_of_range("matrix index out of range");
  const auto& col = columns_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t i) { return e.index < i; });
  if (it != col.end() && it->index == r) return it->value;
  return 0;
}

void Matrix::set(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows_ || c >= cols()) throw std::out_of_range("matrix index out of range");
  auto& col = columns_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r, [](const Entry& e, std::size_t i) { return e.index < i; });
  if (it != col.end() && it->index == r) {
    if (value == 0) {
      col.erase(it);
    } else {
      it->value = value;
    }
  } else if (value != 0) {
    col.insert(it, {static_cast<Index>(r), value});
  }
}

void Matrix::set_column(std::size_t c, SparseVector v) {
  if (c >= cols()) throw std::out_of_range("column index out of range");
  if (!v.empty() && v.back().index >= rows_) throw std::out_of_range("column entry beyond row count");
  columns_[c] = std::move(v);
}

void Matrix::append_column(SparseVector v) {
  if (!v.empty() && v.back().index >= rows_) throw std::out_of_range("column entry beyond row count");
  columns_.push_back(std::move(v));
}

Matrix Matrix::transpose() const {
  Matrix t(cols(), rows_);
  std::vector<std::size_t> counts(rows_, 0);
  for (const auto& col : columns_) {
    for (const auto& e : col) ++counts[e.index];
  }
  for (std::size_t r = 0; r < rows_; ++r) t.columns_[r].reserve(counts[r]);
  for (std::size_t c = 0; c < cols(); ++c) {
    for (const auto& e : columns_[c]) t.columns_[e.index].push_back({static_cast<Index>(c), e.value});
  }
  return t;
}

Matrix Matrix::select_rows(const std::vector<Index>& keep) const {
  std::vector<std::int64_t> remap(rows_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= rows_) throw std::out_of_range("selected row out of range");
    remap[keep[i]] = static_cast<std::int64_t>(i);
  }
  Matrix out(keep.size(), cols());
  for (std::size_t c = 0; c < cols(); ++c) {
    for (const auto& e : columns_[c]) {
      if (remap[e.index] >= 0) out.columns_[c].push_back({static_cast<Index>(remap[e.index]), e.value});
    }
  }
  return out;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& col : columns_) n += col.size();
  return n;
}

bool Matrix::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const SparseVector& c) { return c.empty(); });
}

SparseVector apply(const Matrix& lhs, const SparseVector& v) {
  std::vector<Entry> terms;
  for (const auto& e : v) {
    if (e.index >= lhs.cols()) throw std::out_of_range("vector longer than matrix width");
    for (const auto& a : lhs.column(e.index)) terms.push_back({a.index, a.value * e.value});
  }
  return sorted_sum(terms);
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw std::invalid_argument("matrix product shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) out.columns_[c] = apply(lhs, rhs.columns_[c]);
  return out;
}

bool operator==(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows_ != rhs.rows_ || lhs.cols() != rhs.cols()) return false;
  for (std::size_t c = 0; c < lhs.cols(); ++c) {
    const auto& a = lhs.columns_[c];
    const auto& b = rhs.columns_[c];
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].index != b[i].index || a[i].value != b[i].value) return false;
    }
  }
  return true;
}

Echelon::Echelon(std::size_t dimension) : pivot_slot_(dimension, -1) {}

SparseVector Echelon::reduce(SparseVector v) const {
  SparseVector scratch;
  std::size_t pos = 0;
  // Entries before `pos` have no pivot and are final.
  while (pos < v.size()) {
    const auto slot = pivot_slot_[v[pos].index];
    if (slot < 0) {
      ++pos;
      continue;
    }
    const Rational c = v[pos].value;
    subtract_scaled(v, c, pivots_[static_cast<std::size_t>(slot)], scratch);
  }
  return v;
}

bool Echelon::insert(SparseVector v) {
  SparseVector scratch;
  while (!v.empty()) {
    const auto slot = pivot_slot_[v.front().index];
    if (slot < 0) {
      make_monic(v);
      pivot_slot_[v.front().index] = static_cast<std::int64_t>(pivots_.size());
      pivots_.push_back(std::move(v));
      return true;
    }
    const Rational c = v.front().value;
    subtract_scaled(v, c, pivots_[static_cast<std::size_t>(slot)], scratch);
  }
  return false;
}

void Echelon::make_reduced() {
  std::vector<std::size_t> order(pivots_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pivots_[a].front().index > pivots_[b].front().index; });
  SparseVector scratch;
  // Reduce each pivot against all pivots with larger leading index; handling
  // larger leads first keeps those already reduced.
  for (std::size_t k = 0; k < order.size(); ++k) {
    SparseVector& v = pivots_[order[k]];
    std::size_t pos = 1;
    while (pos < v.size()) {
      const auto slot = pivot_slot_[v[pos].index];
      if (slot < 0) {
        ++pos;
        continue;
      }
      const Rational c = v[pos].value;
      subtract_scaled(v, c, pivots_[static_cast<std::size_t>(slot)], scratch);
    }
  }
}

std::size_t rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  // Insert whichever side has fewer vectors.
  if (m.cols() <= m.rows()) {
    Echelon e(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) e.insert(m.column(c));
    return e.rank();
  }
  const Matrix t = m.transpose();
  Echelon e(t.rows());
  for (std::size_t c = 0; c < t.cols(); ++c) e.insert(t.column(c));
  return e.rank();
}

Kernel kernel(const Matrix& m) {
  const Matrix rows = m.transpose();  // columns of `rows` are rows of m
  Echelon e(m.cols());
  for (std::size_t r = 0; r < rows.cols(); ++r) e.insert(rows.column(r));
  e.make_reduced();

  std::vector<std::int64_t> pivot_row(m.cols(), -1);
  for (std::size_t i = 0; i < e.pivots().size(); ++i) {
    pivot_row[e.pivots()[i].front().index] = static_cast<std::int64_t>(i);
  }
  Kernel k;
  k.basis = Matrix(m.cols(), 0);
  // Free column f contributes e_f - sum_r R[r][f] e_{lead(r)}.
  std::vector<std::vector<Entry>> contributions(m.cols());
  for (const auto& p : e.pivots()) {
    const Index lead = p.front().index;
    for (std::size_t i = 1; i < p.size(); ++i) contributions[p[i].index].push_back({lead, -p[i].value});
  }
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (pivot_row[f] >= 0) continue;
    std::vector<Entry> terms = std::move(contributions[f]);
    terms.push_back({static_cast<Index>(f), Rational(1)});
    std::sort(terms.begin(), terms.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    k.basis.append_column(std::move(terms));
    k.free_columns.push_back(static_cast<Index>(f));
  }
  if (k.basis.cols() + e.rank() != m.cols()) throw std::logic_error("rank-nullity violated in kernel computation");
  return k;
}

Matrix kernel_basis(const Matrix& m) { return kernel(m).basis; }

bool composes_to_zero(const Matrix& after, const Matrix& before) {
  if (after.cols() != before.rows()) throw ComplexError("maps do not chain: shapes mismatch");
  for (std::size_t c = 0; c < before.cols(); ++c) {
    if (!apply(after, before.column(c)).empty()) return false;
  }
  return true;
}

std::optional<std::size_t> rank_mod_prime(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.cols() <= m.rows()) return rank_mod_columns(m);
  return rank_mod_columns(m.transpose());
}

std::size_t middle_homology_dim(const Matrix& a, const Matrix& b, HomologyMethod method) {
  if (b.cols() != a.rows()) throw ComplexError("maps do not chain: shapes mismatch");
  if (!composes_to_zero(b, a)) throw ComplexError("not a complex: composite of differentials is nonzero");
  if (method == HomologyMethod::certified) {
    const auto ra = rank_mod_prime(a);
    if (ra && *ra == b.cols()) return 0;
    const auto rb = rank_mod_prime(b);
    if (ra && rb && *ra + *rb == b.cols()) return 0;
  }
  return b.cols() - rank(b) - rank(a);
}

}  // namespace nodalsyz
