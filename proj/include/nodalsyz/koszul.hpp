#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nodalsyz/matrix.hpp"
#include "nodalsyz/sheaf.hpp"

namespace nodalsyz {

// Raised when a slice's middle term exceeds the configured size cap.
class SliceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Middle-dimension cap for Koszul slices: NODALSYZ_SLICE_CAP if set, else 10^6.
std::size_t slice_cap();

std::uint64_t binomial(unsigned n, unsigned k);

// The t-subsets of {0..m-1} in lexicographic order, stored as bitmasks.
class WedgeBasis {
 public:
  WedgeBasis(unsigned m, int t);

  unsigned m() const { return m_; }
  int t() const { return t_; }
  std::size_t size() const { return subsets_.size(); }
  std::uint64_t subset(std::size_t i) const { return subsets_[i]; }
  // Lexicographic rank of a t-subset.
  std::size_t index_of(std::uint64_t subset) const;

 private:
  unsigned m_;
  int t_;
  std::vector<std::uint64_t> subsets_;
};

// Matrix of  wedge^t W (x) U -> wedge^{t-1} W (x) H^0(A (x) L),
//   w_S (x) u  |->  sum_j (-1)^j w_{S \ s_j} (x) (w_{s_j} * u),
// with s_0 < s_1 < ... the elements of S.  U is given by ambient columns in
// the layout of `source_layout` (sections of A); `target` is H^0(A (x) L).
// Column S_index * dim U + k, row T_index * dim target + r.
Matrix koszul_map(int t, const LinearSystem& w, const BlockLayout& source_layout, const Matrix& source_vectors,
                  const SectionSpace& target);

// The differential on wedge^t W (x) H^0(B).
Matrix koszul_differential(int t, const LinearSystem& w, const SectionSpace& b);

//   wedge^{p+1} W (x) H^0(B L^{q-1}) --d_in--> wedge^p W (x) H^0(B L^q)
//                                     --d_out--> wedge^{p-1} W (x) H^0(B L^{q+1})
struct KoszulSlice {
  int p = 0;
  int q = 0;
  std::shared_ptr<const SectionSpace> left;
  std::shared_ptr<const SectionSpace> middle;
  std::shared_ptr<const SectionSpace> right;
  std::size_t left_dim = 0;
  std::size_t middle_dim = 0;
  std::size_t right_dim = 0;
  Matrix d_in;
  Matrix d_out;

  std::size_t homology() const { return middle_homology_dim(d_in, d_out); }
};

// Builds the slice; throws SliceTooLarge past slice_cap().  Requires p >= 0.
KoszulSlice build_slice(int p, int q, const LineBundle& b, const LinearSystem& w);

// Middle dimension of the slice without building it.
std::size_t slice_middle_dimension(int p, int q, const LineBundle& b, const LinearSystem& w);

// dim K_{p,q}(X; B, L, W); zero for p < 0 or p > m.
std::size_t koszul_dim(int p, int q, const LineBundle& b, const LinearSystem& w);
std::size_t koszul_dim(int p, int q, const CoefficientBundle& b, const LinearSystem& w);

struct DualityResult {
  std::size_t k_p2 = 0;      // K_{p,2}(O, L)
  std::size_t k_dual0 = 0;   // K_{m-2-p,0}(omega, L)
  bool agree() const { return k_p2 == k_dual0; }
};

// Both sides of the duality identity for W = H^0(L).  Throws
// std::invalid_argument if h^1(L) != 0.
DualityResult duality_check(int p, const LineBundle& l);

struct InjectivityResult {
  std::size_t rank = 0;
  std::size_t source_dim = 0;
  bool claimed = false;  // t >= dim V, where the lemma asserts injectivity
  bool injective() const { return rank == source_dim; }
};

// Rank of wedge^t W (x) V -> wedge^{t-1} W (x) H^0(E (x) L) for V a subspace of
// H^0(E).  Throws std::invalid_argument on a curve with several components.
InjectivityResult green_injectivity_check(int t, const LinearSystem& w, const LinearSystem& v);

}  // namespace nodalsyz
