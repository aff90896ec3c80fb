#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "nodalsyz/curve.hpp"
#include "nodalsyz/matrix.hpp"
#include "nodalsyz/rational.hpp"

namespace nodalsyz {

using CurvePtr = std::shared_ptr<const NodalCurve>;

// A line bundle on a nodal curve: an integer degree on each component and, at
// each node e, a nonzero scalar relating the branch values of a section,
//   s_a(p_a) = gluing[e] * s_b(p_b),
// where a section is a polynomial of degree <= deg_Z in the affine coordinate
// of every component Z (the zero polynomial when deg_Z < 0).
class LineBundle {
 public:
  LineBundle(CurvePtr curve, std::vector<int> degrees, std::vector<Rational> gluings);

  const NodalCurve& curve() const { return *curve_; }
  const CurvePtr& curve_ptr() const { return curve_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(std::size_t component) const { return degrees_.at(component); }
  const std::vector<Rational>& gluings() const { return gluings_; }
  int total_degree() const;
  int degree_on(const ComponentSum& z) const;

  friend bool operator==(const LineBundle& lhs, const LineBundle& rhs);

 private:
  CurvePtr curve_;
  std::vector<int> degrees_;
  std::vector<Rational> gluings_;
};

// Throws std::invalid_argument unless both objects live on equal curves.
void require_same_curve(const NodalCurve& lhs, const NodalCurve& rhs);

LineBundle structure_sheaf(CurvePtr curve);
LineBundle tensor(const LineBundle& lhs, const LineBundle& rhs);
LineBundle inverse(const LineBundle& bundle);
LineBundle power(const LineBundle& bundle, int exponent);

// omega_X in the trivialization f(x) dx / prod_i (x - q_i) on each component,
// q_i running over its branch points; the node scalars encode
// Res_{p_a} + Res_{p_b} = 0.
LineBundle dualizing_sheaf(CurvePtr curve);

struct DivisorTerm {
  std::size_t component = 0;
  Rational point;
  int multiplicity = 0;
};

// L(D) for D = sum multiplicity * (component, point).  Points must avoid
// branch points.  A section sigma of L(D) stands for sigma / prod (x - p)^mult
// in the trivialization of L, which rescales the scalars of nodes touching the
// twisted components.
LineBundle twist_by_divisor(const LineBundle& bundle, const std::vector<DivisorTerm>& divisor);

// Ambient coordinate space of a multidegree: the power-basis coefficient
// blocks of every component, concatenated in component order.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(const std::vector<int>& degrees);

  std::size_t dimension() const { return dimension_; }
  std::size_t offset(std::size_t component) const { return offsets_[component]; }
  std::size_t block_size(std::size_t component) const;
  int degree(std::size_t component) const { return degrees_[component]; }
  std::size_t component_count() const { return degrees_.size(); }
  std::size_t component_of(Index i) const { return component_of_[i]; }
  std::size_t power_of(Index i) const { return power_of_[i]; }
  // Coordinates belonging to the blocks of `z`, ascending.
  std::vector<Index> indices_on(const ComponentSum& z) const;

 private:
  std::vector<int> degrees_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> component_of_;
  std::vector<std::size_t> power_of_;
  std::size_t dimension_ = 0;
};

using Polynomial = std::vector<Rational>;  // ascending coefficients

struct Section {
  std::vector<Polynomial> blocks;
};

// H^0 of a line bundle, with an exact basis.  The basis comes from the reduced
// echelon form of the node-constraint matrix, so the coordinates of any
// global section are its ambient entries at the free positions.
class SectionSpace {
 public:
  explicit SectionSpace(LineBundle bundle);

  const LineBundle& bundle() const { return bundle_; }
  const BlockLayout& layout() const { return layout_; }
  std::size_t dimension() const { return basis_.cols(); }
  // ambient dimension x h^0; column j is the j-th basis section.
  const Matrix& basis() const { return basis_; }
  const Matrix& constraints() const { return constraints_; }

  // Coordinates of a global section given in ambient form.  The input must be
  // a global section; use contains() when that is not already known.
  SparseVector coordinates(const SparseVector& ambient) const;
  bool contains(const SparseVector& ambient) const;
  SparseVector from_coordinates(const SparseVector& coords) const;

  Section section(std::size_t j) const;
  SparseVector to_ambient(const Section& s) const;

 private:
  LineBundle bundle_;
  BlockLayout layout_;
  Matrix constraints_;
  Matrix basis_;
  std::vector<Index> free_;
};

SectionSpace global_sections(const LineBundle& bundle);
std::size_t h0(const LineBundle& bundle);
// h^0(omega (x) L^{-1}), i.e. h^1 by Serre duality.
std::size_t h1(const LineBundle& bundle);

// A subspace W of H^0(L), given by independent coefficient columns in the
// basis of H^0(L).
class LinearSystem {
 public:
  LinearSystem(std::shared_ptr<const SectionSpace> ambient, Matrix coefficients);
  static LinearSystem complete(std::shared_ptr<const SectionSpace> ambient);
  static LinearSystem complete(const LineBundle& bundle);

  std::size_t dimension() const { return coefficients_.cols(); }
  const SectionSpace& ambient() const { return *ambient_; }
  const std::shared_ptr<const SectionSpace>& ambient_ptr() const { return ambient_; }
  const LineBundle& bundle() const { return ambient_->bundle(); }
  const Matrix& coefficients() const { return coefficients_; }
  // Ambient-coordinate sections w_1..w_m (ambient dimension x m).
  const Matrix& sections() const { return sections_; }
  bool is_complete() const { return dimension() == ambient_->dimension(); }

  // Same subspace with basis coefficients * change (change must be m x m
  // invertible).
  LinearSystem recombined(const Matrix& change) const;

 private:
  std::shared_ptr<const SectionSpace> ambient_;
  Matrix coefficients_;
  Matrix sections_;
};

// A vector bundle modelled as a direct sum of line bundles on one curve.
class CoefficientBundle {
 public:
  explicit CoefficientBundle(std::vector<LineBundle> summands);
  const std::vector<LineBundle>& summands() const { return summands_; }
  const NodalCurve& curve() const { return summands_.front().curve(); }

 private:
  std::vector<LineBundle> summands_;
};

// Rank of the map forgetting every block outside Z, applied to the columns of
// `sections` (ambient coordinates for `layout`).
std::size_t restriction_rank(const Matrix& sections, const BlockLayout& layout, const ComponentSum& z);
std::size_t restriction_rank(const SectionSpace& space, const ComponentSum& z);
std::size_t restriction_rank(const LinearSystem& system, const ComponentSum& z);
// e_Z for a direct sum: the sum of the summands' restriction ranks.
std::size_t restriction_rank(const CoefficientBundle& bundle, const ComponentSum& z);

// W_Z: independent columns spanning the image of W on the blocks of Z
// (rows = layout.indices_on(z)).
Matrix induced_system(const LinearSystem& system, const ComponentSum& z);

Section multiply(const Section& lhs, const Section& rhs);
// Blockwise polynomial product of ambient vectors.
SparseVector multiply(const BlockLayout& lhs_layout, const SparseVector& lhs, const BlockLayout& rhs_layout,
                      const SparseVector& rhs, const BlockLayout& out_layout);

// Matrix of H^0(A) (x) H^0(B) -> H^0(A (x) B); column i * dim B + j holds the
// target coordinates of a_i * b_j.
Matrix multiplication_map(const SectionSpace& lhs, const SectionSpace& rhs, const SectionSpace& target);
Matrix multiplication_map(const SectionSpace& lhs, const SectionSpace& rhs);

struct PointCondition {
  std::size_t component = 0;
  Rational point;
  int multiplicity = 0;
};

// J_{a,b} = (x^a, y^b) at a node, x the coordinate on branch a.
struct NodeCondition {
  std::size_t node = 0;
  int a = 0;
  int b = 0;
};

struct IdealSpec {
  std::vector<PointCondition> points;
  std::vector<NodeCondition> nodes;

  int colength() const;
};

// h^0(I L).  Throws std::invalid_argument on negative exponents, repeated
// support, or a smooth condition placed on a branch point.
std::size_t ideal_twisted_sections(const LineBundle& bundle, const IdealSpec& ideal);
std::size_t ideal_twisted_sections(const SectionSpace& space, const IdealSpec& ideal);

}  // namespace nodalsyz
