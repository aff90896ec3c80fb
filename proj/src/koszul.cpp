#include "nodalsyz/koszul.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

namespace nodalsyz {

namespace {

constexpr unsigned kMaxWedgeRank = 63;

std::size_t wedge_size(std::size_t m, int t) {
  if (t < 0 || static_cast<std::size_t>(t) > m) return 0;
  return static_cast<std::size_t>(binomial(static_cast<unsigned>(m), static_cast<unsigned>(t)));
}

// w_i * u for every W basis vector i and every source column, as coordinates
// in the target section space.
std::vector<std::vector<SparseVector>> products(const LinearSystem& w, const BlockLayout& source_layout,
                                                const Matrix& source_vectors, const SectionSpace& target) {
  const BlockLayout& wl = w.ambient().layout();
  std::vector<std::vector<SparseVector>> out(w.dimension());
  for (std::size_t i = 0; i < w.dimension(); ++i) {
    out[i].reserve(source_vectors.cols());
    for (std::size_t k = 0; k < source_vectors.cols(); ++k) {
      SparseVector prod = multiply(wl, w.sections().column(i), source_layout, source_vectors.column(k), target.layout());
      out[i].push_back(target.coordinates(prod));
    }
  }
  return out;
}

LineBundle twist(const LineBundle& b, const LineBundle& l, int q) { return tensor(b, power(l, q)); }

}  // namespace

std::size_t slice_cap() {
  if (const char* env = std::getenv("NODALSYZ_SLICE_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("NODALSYZ_SLICE_CAP is not a number: ") + env);
    }
  }
  return 1000000;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

WedgeBasis::WedgeBasis(unsigned m, int t) : m_(m), t_(t) {
  if (m > kMaxWedgeRank) throw std::invalid_argument("wedge basis supports dim W <= 63");
  if (t < 0 || static_cast<unsigned>(t) > m) return;
  subsets_.reserve(binomial(m, static_cast<unsigned>(t)));
  // Lexicographic enumeration of index tuples c_0 < ... < c_{t-1}.
  std::vector<unsigned> c(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) c[static_cast<std::size_t>(i)] = static_cast<unsigned>(i);
  while (true) {
    std::uint64_t mask = 0;
    for (unsigned x : c) mask |= std::uint64_t{1} << x;
    subsets_.push_back(mask);
    int i = t - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == m - static_cast<unsigned>(t - i)) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < t; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::size_t WedgeBasis::index_of(std::uint64_t subset) const {
  if (std::popcount(subset) != t_ || (m_ < 64 && (subset >> m_) != 0)) {
    throw std::invalid_argument("subset does not belong to this wedge basis");
  }
  std::size_t r = 0;
  int prev = -1;
  int i = 1;
  while (subset) {
    const int c = std::countr_zero(subset);
    subset &= subset - 1;
    for (int j = prev + 1; j < c; ++j) r += binomial(m_ - 1 - static_cast<unsigned>(j), static_cast<unsigned>(t_ - i));
    prev = c;
    ++i;
  }
  return r;
}

Matrix koszul_map(int t, const LinearSystem& w, const BlockLayout& source_layout, const Matrix& source_vectors,
                  const SectionSpace& target) {
  const std::size_t m = w.dimension();
  const std::size_t nu = source_vectors.cols();
  const std::size_t nt = target.dimension();
  if (t <= 0 || static_cast<std::size_t>(t) > m) {
    return Matrix(wedge_size(m, t - 1) * nt, wedge_size(m, t) * nu);
  }
  const WedgeBasis src(static_cast<unsigned>(m), t);
  const WedgeBasis dst(static_cast<unsigned>(m), t - 1);
  const auto prod = products(w, source_layout, source_vectors, target);
  Matrix out(dst.size() * nt, 0);
  std::vector<Entry> terms;
  for (std::size_t s = 0; s < src.size(); ++s) {
    const std::uint64_t mask = src.subset(s);
    for (std::size_t k = 0; k < nu; ++k) {
      terms.clear();
      std::uint64_t rest = mask;
      bool negative = false;
      while (rest) {
        const int i = std::countr_zero(rest);
        rest &= rest - 1;
        const std::size_t base = dst.index_of(mask & ~(std::uint64_t{1} << i)) * nt;
        for (const auto& e : prod[static_cast<std::size_t>(i)][k]) {
          terms.push_back({static_cast<Index>(base + e.index), negative ? Rational(-e.value) : e.value});
        }
        negative = !negative;
      }
      std::sort(terms.begin(), terms.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
      out.append_column(terms);
    }
  }
  return out;
}

Matrix koszul_differential(int t, const LinearSystem& w, const SectionSpace& b) {
  require_same_curve(w.bundle().curve(), b.bundle().curve());
  const SectionSpace target(tensor(b.bundle(), w.bundle()));
  return koszul_map(t, w, b.layout(), b.basis(), target);
}

std::size_t slice_middle_dimension(int p, int q, const LineBundle& b, const LinearSystem& w) {
  if (p < 0) throw std::invalid_argument("Koszul slice needs p >= 0");
  const std::size_t wp = wedge_size(w.dimension(), p);
  if (wp == 0) return 0;
  return wp * h0(twist(b, w.bundle(), q));
}

KoszulSlice build_slice(int p, int q, const LineBundle& b, const LinearSystem& w) {
  if (p < 0) throw std::invalid_argument("Koszul slice needs p >= 0");
  require_same_curve(w.bundle().curve(), b.curve());
  const LineBundle& l = w.bundle();
  const std::size_t m = w.dimension();
  KoszulSlice s;
  s.p = p;
  s.q = q;
  s.middle = std::make_shared<const SectionSpace>(twist(b, l, q));
  s.middle_dim = wedge_size(m, p) * s.middle->dimension();
  const std::size_t cap = slice_cap();
  if (s.middle_dim > cap) {
    throw SliceTooLarge("Koszul slice (p=" + std::to_string(p) + ", q=" + std::to_string(q) + ") has middle dimension " +
                        std::to_string(s.middle_dim) + " above the cap " + std::to_string(cap));
  }
  s.left = std::make_shared<const SectionSpace>(twist(b, l, q - 1));
  s.right = std::make_shared<const SectionSpace>(twist(b, l, q + 1));
  s.left_dim = wedge_size(m, p + 1) * s.left->dimension();
  s.right_dim = wedge_size(m, p - 1) * s.right->dimension();
  s.d_in = koszul_map(p + 1, w, s.left->layout(), s.left->basis(), *s.middle);
  s.d_out = koszul_map(p, w, s.middle->layout(), s.middle->basis(), *s.right);
  return s;
}

std::size_t koszul_dim(int p, int q, const LineBundle& b, const LinearSystem& w) {
  if (p < 0 || static_cast<std::size_t>(p) > w.dimension()) return 0;
  return build_slice(p, q, b, w).homology();
}

std::size_t koszul_dim(int p, int q, const CoefficientBundle& b, const LinearSystem& w) {
  std::size_t total = 0;
  for (const auto& s : b.summands()) total += koszul_dim(p, q, s, w);
  return total;
}

DualityResult duality_check(int p, const LineBundle& l) {
  if (h1(l) != 0) throw std::invalid_argument("duality check needs h^1(L) = 0");
  const LinearSystem w = LinearSystem::complete(l);
  const int m = static_cast<int>(w.dimension());
  DualityResult r;
  r.k_p2 = koszul_dim(p, 2, structure_sheaf(l.curve_ptr()), w);
  r.k_dual0 = koszul_dim(m - 2 - p, 0, dualizing_sheaf(l.curve_ptr()), w);
  return r;
}

InjectivityResult green_injectivity_check(int t, const LinearSystem& w, const LinearSystem& v) {
  require_same_curve(w.bundle().curve(), v.bundle().curve());
  if (w.bundle().curve().component_count() != 1) {
    throw std::invalid_argument("the injectivity lemma is stated for irreducible curves");
  }
  if (t < 0) throw std::invalid_argument("wedge degree must be nonnegative");
  const SectionSpace target(tensor(v.bundle(), w.bundle()));
  InjectivityResult r;
  r.source_dim = wedge_size(w.dimension(), t) * v.dimension();
  r.claimed = static_cast<std::size_t>(t) >= v.dimension();
  if (r.source_dim == 0) return r;
  r.rank = rank(koszul_map(t, w, v.ambient().layout(), v.sections(), target));
  return r;
}

}  // namespace nodalsyz
