#include "nodalsyz/sheaf.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace nodalsyz {

namespace {

Rational binomial(std::size_t n, std::size_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

// Adds scale * (j-th Taylor coefficient at `point`) of the block of
// `component` to a dense row over the ambient coordinates.
void add_taylor_row(std::vector<Rational>& row, const BlockLayout& layout, std::size_t component,
                    const Rational& point, std::size_t order, const Rational& scale) {
  if (layout.degree(component) < 0) return;
  const auto d = static_cast<std::size_t>(layout.degree(component));
  const std::size_t base = layout.offset(component);
  Rational pw = 1;  // point^(k - order)
  for (std::size_t k = order; k <= d; ++k) {
    row[base + k] += scale * binomial(k, order) * pw;
    pw *= point;
  }
}

std::vector<std::vector<Rational>> node_constraint_rows(const LineBundle& bundle, const BlockLayout& layout) {
  const auto& curve = bundle.curve();
  std::vector<std::vector<Rational>> rows;
  for (std::size_t e = 0; e < curve.node_count(); ++e) {
    const Node& n = curve.nodes()[e];
    std::vector<Rational> row(layout.dimension());
    add_taylor_row(row, layout, n.a.component, n.a.point, 0, Rational(1));
    add_taylor_row(row, layout, n.b.component, n.b.point, 0, -bundle.gluings()[e]);
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rows_to_matrix(const std::vector<std::vector<Rational>>& rows, std::size_t width) {
  std::vector<Rational> dense;
  dense.reserve(rows.size() * width);
  for (const auto& r : rows) dense.insert(dense.end(), r.begin(), r.end());
  return Matrix::from_dense(rows.size(), width, dense);
}

bool is_branch_point(const NodalCurve& curve, std::size_t component, const Rational& point) {
  const auto& pts = curve.components()[component].branch_points;
  return std::find(pts.begin(), pts.end(), point) != pts.end();
}

}  // namespace

LineBundle::LineBundle(CurvePtr curve, std::vector<int> degrees, std::vector<Rational> gluings)
    : curve_(std::move(curve)), degrees_(std::move(degrees)), gluings_(std::move(gluings)) {
  if (!curve_) throw std::invalid_argument("line bundle needs a curve");
  if (degrees_.size() != curve_->component_count()) {
    throw std::invalid_argument("line bundle needs one degree per component");
  }
  if (gluings_.size() != curve_->node_count()) throw std::invalid_argument("line bundle needs one gluing per node");
  for (std::size_t e = 0; e < gluings_.size(); ++e) {
    if (gluings_[e] == 0) throw std::invalid_argument("gluing must be nonzero (node " + std::to_string(e) + ")");
  }
}

int LineBundle::total_degree() const {
  int d = 0;
  for (int x : degrees_) d += x;
  return d;
}

int LineBundle::degree_on(const ComponentSum& z) const {
  int d = 0;
  for (auto c : z.members()) d += degrees_.at(c);
  return d;
}

bool operator==(const LineBundle& lhs, const LineBundle& rhs) {
  return (lhs.curve_ == rhs.curve_ || *lhs.curve_ == *rhs.curve_) && lhs.degrees_ == rhs.degrees_ &&
         lhs.gluings_ == rhs.gluings_;
}

void require_same_curve(const NodalCurve& lhs, const NodalCurve& rhs) {
  if (&lhs != &rhs && !(lhs == rhs)) throw std::invalid_argument("objects live on different curves");
}

LineBundle structure_sheaf(CurvePtr curve) {
  const auto c = curve->component_count();
  const auto n = curve->node_count();
  return LineBundle(std::move(curve), std::vector<int>(c, 0), std::vector<Rational>(n, Rational(1)));
}

LineBundle tensor(const LineBundle& lhs, const LineBundle& rhs) {
  require_same_curve(lhs.curve(), rhs.curve());
  std::vector<int> deg(lhs.degrees().size());
  std::vector<Rational> glue(lhs.gluings().size());
  for (std::size_t i = 0; i < deg.size(); ++i) deg[i] = lhs.degrees()[i] + rhs.degrees()[i];
  for (std::size_t e = 0; e < glue.size(); ++e) glue[e] = lhs.gluings()[e] * rhs.gluings()[e];
  return LineBundle(lhs.curve_ptr(), std::move(deg), std::move(glue));
}

LineBundle inverse(const LineBundle& bundle) { return power(bundle, -1); }

LineBundle power(const LineBundle& bundle, int exponent) {
  std::vector<int> deg(bundle.degrees().size());
  std::vector<Rational> glue(bundle.gluings().size());
  for (std::size_t i = 0; i < deg.size(); ++i) deg[i] = bundle.degrees()[i] * exponent;
  for (std::size_t e = 0; e < glue.size(); ++e) glue[e] = power(bundle.gluings()[e], exponent);
  return LineBundle(bundle.curve_ptr(), std::move(deg), std::move(glue));
}

LineBundle dualizing_sheaf(CurvePtr curve) {
  std::vector<int> deg;
  for (const auto& c : curve->components()) deg.push_back(static_cast<int>(c.branch_points.size()) - 2);
  // Residue of f dx / prod(x - q) at a branch point p is f(p) / c(p) with
  // c(p) = prod_{q != p} (p - q); residues summing to zero means
  // f_a(p_a) = -(c(p_a) / c(p_b)) f_b(p_b).
  auto residue_denominator = [&](const BranchPoint& br) {
    Rational c = 1;
    for (const auto& q : curve->components()[br.component].branch_points) {
      if (q != br.point) c *= br.point - q;
    }
    return c;
  };
  std::vector<Rational> glue;
  for (const auto& n : curve->nodes()) glue.push_back(-residue_denominator(n.a) / residue_denominator(n.b));
  return LineBundle(std::move(curve), std::move(deg), std::move(glue));
}

LineBundle twist_by_divisor(const LineBundle& bundle, const std::vector<DivisorTerm>& divisor) {
  const auto& curve = bundle.curve();
  std::vector<int> deg = bundle.degrees();
  std::vector<Rational> glue = bundle.gluings();
  for (const auto& t : divisor) {
    if (t.component >= curve.component_count()) throw std::invalid_argument("divisor on a missing component");
    if (is_branch_point(curve, t.component, t.point)) {
      throw std::invalid_argument("divisor point " + to_string(t.point) + " collides with a branch point of \"" +
                                  curve.components()[t.component].id + "\"");
    }
    if (t.multiplicity == 0) continue;
    deg[t.component] += t.multiplicity;
    for (std::size_t e = 0; e < curve.node_count(); ++e) {
      const Node& n = curve.nodes()[e];
      if (n.a.component == t.component) glue[e] *= power(n.a.point - t.point, t.multiplicity);
      if (n.b.component == t.component) glue[e] *= power(n.b.point - t.point, -t.multiplicity);
    }
  }
  return LineBundle(bundle.curve_ptr(), std::move(deg), std::move(glue));
}

BlockLayout::BlockLayout(const std::vector<int>& degrees) : degrees_(degrees) {
  for (std::size_t c = 0; c < degrees_.size(); ++c) {
    offsets_.push_back(dimension_);
    const std::size_t size = block_size(c);
    for (std::size_t k = 0; k < size; ++k) {
      component_of_.push_back(c);
      power_of_.push_back(k);
    }
    dimension_ += size;
  }
}

std::size_t BlockLayout::block_size(std::size_t component) const {
  return degrees_[component] < 0 ? 0 : static_cast<std::size_t>(degrees_[component]) + 1;
}

std::vector<Index> BlockLayout::indices_on(const ComponentSum& z) const {
  std::vector<Index> out;
  for (auto c : z.members()) {
    for (std::size_t k = 0; k < block_size(c); ++k) out.push_back(static_cast<Index>(offsets_[c] + k));
  }
  return out;
}

SectionSpace::SectionSpace(LineBundle bundle) : bundle_(std::move(bundle)), layout_(bundle_.degrees()) {
  constraints_ = rows_to_matrix(node_constraint_rows(bundle_, layout_), layout_.dimension());
  Kernel k = kernel(constraints_);
  basis_ = std::move(k.basis);
  free_ = std::move(k.free_columns);
}

SparseVector SectionSpace::coordinates(const SparseVector& ambient) const {
  SparseVector out;
  std::size_t j = 0;
  for (const auto& e : ambient) {
    while (j < free_.size() && free_[j] < e.index) ++j;
    if (j == free_.size()) break;
    if (free_[j] == e.index) out.push_back({static_cast<Index>(j), e.value});
  }
  return out;
}

bool SectionSpace::contains(const SparseVector& ambient) const {
  if (!ambient.empty() && ambient.back().index >= layout_.dimension()) return false;
  return apply(constraints_, ambient).empty();
}

SparseVector SectionSpace::from_coordinates(const SparseVector& coords) const { return apply(basis_, coords); }

Section SectionSpace::section(std::size_t j) const {
  Section s;
  for (std::size_t c = 0; c < layout_.component_count(); ++c) s.blocks.emplace_back(layout_.block_size(c));
  for (const auto& e : basis_.column(j)) {
    s.blocks[layout_.component_of(e.index)][layout_.power_of(e.index)] = e.value;
  }
  return s;
}

SparseVector SectionSpace::to_ambient(const Section& s) const {
  if (s.blocks.size() != layout_.component_count()) throw std::invalid_argument("section has wrong block count");
  SparseVector out;
  for (std::size_t c = 0; c < s.blocks.size(); ++c) {
    for (std::size_t k = 0; k < s.blocks[c].size(); ++k) {
      if (s.blocks[c][k] == 0) continue;
      if (k >= layout_.block_size(c)) throw std::invalid_argument("section block exceeds the bundle degree");
      out.push_back({static_cast<Index>(layout_.offset(c) + k), s.blocks[c][k]});
    }
  }
  return out;
}

SectionSpace global_sections(const LineBundle& bundle) { return SectionSpace(bundle); }

std::size_t h0(const LineBundle& bundle) { return SectionSpace(bundle).dimension(); }

std::size_t h1(const LineBundle& bundle) {
  return h0(tensor(dualizing_sheaf(bundle.curve_ptr()), inverse(bundle)));
}

LinearSystem::LinearSystem(std::shared_ptr<const SectionSpace> ambient, Matrix coefficients)
    : ambient_(std::move(ambient)), coefficients_(std::move(coefficients)) {
  if (coefficients_.rows() != ambient_->dimension()) {
    throw std::invalid_argument("linear system coefficients must have h^0(L) rows");
  }
  if (rank(coefficients_) != coefficients_.cols()) {
    throw std::invalid_argument("linear system coefficients must be independent");
  }
  sections_ = ambient_->basis() * coefficients_;
}

LinearSystem LinearSystem::complete(std::shared_ptr<const SectionSpace> ambient) {
  const auto n = ambient->dimension();
  return LinearSystem(std::move(ambient), Matrix::identity(n));
}

LinearSystem LinearSystem::complete(const LineBundle& bundle) {
  return complete(std::make_shared<const SectionSpace>(bundle));
}

LinearSystem LinearSystem::recombined(const Matrix& change) const {
  if (change.rows() != dimension() || change.cols() != dimension() || rank(change) != dimension()) {
    throw std::invalid_argument("basis change must be square and invertible");
  }
  return LinearSystem(ambient_, coefficients_ * change);
}

CoefficientBundle::CoefficientBundle(std::vector<LineBundle> summands) : summands_(std::move(summands)) {
  if (summands_.empty()) throw std::invalid_argument("coefficient bundle needs at least one summand");
  for (const auto& s : summands_) require_same_curve(s.curve(), summands_.front().curve());
}

std::size_t restriction_rank(const Matrix& sections, const BlockLayout& layout, const ComponentSum& z) {
  return rank(sections.select_rows(layout.indices_on(z)));
}

std::size_t restriction_rank(const SectionSpace& space, const ComponentSum& z) {
  return restriction_rank(space.basis(), space.layout(), z);
}

std::size_t restriction_rank(const LinearSystem& system, const ComponentSum& z) {
  return restriction_rank(system.sections(), system.ambient().layout(), z);
}

std::size_t restriction_rank(const CoefficientBundle& bundle, const ComponentSum& z) {
  std::size_t total = 0;
  for (const auto& s : bundle.summands()) total += restriction_rank(SectionSpace(s), z);
  return total;
}

Matrix induced_system(const LinearSystem& system, const ComponentSum& z) {
  const Matrix restricted = system.sections().select_rows(system.ambient().layout().indices_on(z));
  Echelon e(restricted.rows());
  Matrix out(restricted.rows(), 0);
  for (std::size_t c = 0; c < restricted.cols(); ++c) {
    if (e.insert(restricted.column(c))) out.append_column(restricted.column(c));
  }
  return out;
}

Section multiply(const Section& lhs, const Section& rhs) {
  if (lhs.blocks.size() != rhs.blocks.size()) throw std::invalid_argument("sections on different curves");
  Section out;
  for (std::size_t c = 0; c < lhs.blocks.size(); ++c) {
    const auto& a = lhs.blocks[c];
    const auto& b = rhs.blocks[c];
    if (a.empty() || b.empty()) {
      out.blocks.emplace_back();
      continue;
    }
    Polynomial p(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) p[i + j] += a[i] * b[j];
    }
    out.blocks.push_back(std::move(p));
  }
  return out;
}

SparseVector multiply(const BlockLayout& lhs_layout, const SparseVector& lhs, const BlockLayout& rhs_layout,
                      const SparseVector& rhs, const BlockLayout& out_layout) {
  std::vector<Entry> terms;
  terms.reserve(lhs.size() * 4);
  // Both inputs are sorted, hence grouped by component.
  auto rb = rhs.begin();
  for (auto la = lhs.begin(); la != lhs.end();) {
    const std::size_t c = lhs_layout.component_of(la->index);
    auto le = la;
    while (le != lhs.end() && lhs_layout.component_of(le->index) == c) ++le;
    while (rb != rhs.end() && rhs_layout.component_of(rb->index) < c) ++rb;
    auto re = rb;
    while (re != rhs.end() && rhs_layout.component_of(re->index) == c) ++re;
    for (auto i = la; i != le; ++i) {
      for (auto j = rb; j != re; ++j) {
        const std::size_t k = lhs_layout.power_of(i->index) + rhs_layout.power_of(j->index);
        terms.push_back({static_cast<Index>(out_layout.offset(c) + k), i->value * j->value});
      }
    }
    la = le;
    rb = re;
  }
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

Matrix multiplication_map(const SectionSpace& lhs, const SectionSpace& rhs, const SectionSpace& target) {
  if (!(target.bundle() == tensor(lhs.bundle(), rhs.bundle()))) {
    throw std::invalid_argument("multiplication target is not the tensor product bundle");
  }
  Matrix out(target.dimension(), 0);
  for (std::size_t i = 0; i < lhs.dimension(); ++i) {
    for (std::size_t j = 0; j < rhs.dimension(); ++j) {
      const SparseVector prod =
          multiply(lhs.layout(), lhs.basis().column(i), rhs.layout(), rhs.basis().column(j), target.layout());
      out.append_column(target.coordinates(prod));
    }
  }
  return out;
}

Matrix multiplication_map(const SectionSpace& lhs, const SectionSpace& rhs) {
  return multiplication_map(lhs, rhs, SectionSpace(tensor(lhs.bundle(), rhs.bundle())));
}

int IdealSpec::colength() const {
  int total = 0;
  for (const auto& p : points) total += p.multiplicity;
  for (const auto& n : nodes) {
    if (n.a > 0 && n.b > 0) total += n.a + n.b - 1;
  }
  return total;
}

std::size_t ideal_twisted_sections(const SectionSpace& space, const IdealSpec& ideal) {
  const auto& curve = space.bundle().curve();
  const auto& layout = space.layout();
  std::vector<std::vector<Rational>> rows;
  std::set<std::pair<std::size_t, Rational>> seen_points;
  for (const auto& p : ideal.points) {
    if (p.component >= curve.component_count()) throw std::invalid_argument("ideal point on a missing component");
    if (p.multiplicity < 0) throw std::invalid_argument("ideal multiplicity must be nonnegative");
    if (is_branch_point(curve, p.component, p.point)) {
      throw std::invalid_argument("smooth ideal condition placed on branch point " + to_string(p.point));
    }
    if (!seen_points.insert({p.component, p.point}).second) {
      throw std::invalid_argument("ideal lists the point " + to_string(p.point) + " twice");
    }
    for (int j = 0; j < p.multiplicity; ++j) {
      std::vector<Rational> row(layout.dimension());
      add_taylor_row(row, layout, p.component, p.point, static_cast<std::size_t>(j), Rational(1));
      rows.push_back(std::move(row));
    }
  }
  std::set<std::size_t> seen_nodes;
  for (const auto& n : ideal.nodes) {
    if (n.node >= curve.node_count()) throw std::invalid_argument("ideal condition at a missing node");
    if (n.a < 0 || n.b < 0) throw std::invalid_argument("J_{a,b} needs a, b >= 0");
    if (!seen_nodes.insert(n.node).second) throw std::invalid_argument("ideal lists a node twice");
    if (n.a == 0 || n.b == 0) continue;  // unit ideal
    const Node& node = curve.nodes()[n.node];
    for (int j = 0; j < n.a; ++j) {
      std::vector<Rational> row(layout.dimension());
      add_taylor_row(row, layout, node.a.component, node.a.point, static_cast<std::size_t>(j), Rational(1));
      rows.push_back(std::move(row));
    }
    for (int j = 0; j < n.b; ++j) {
      std::vector<Rational> row(layout.dimension());
      add_taylor_row(row, layout, node.b.component, node.b.point, static_cast<std::size_t>(j), Rational(1));
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) return space.dimension();
  const Matrix conditions = rows_to_matrix(rows, layout.dimension());
  return space.dimension() - rank(conditions * space.basis());
}

std::size_t ideal_twisted_sections(const LineBundle& bundle, const IdealSpec& ideal) {
  return ideal_twisted_sections(SectionSpace(bundle), ideal);
}

}  // namespace nodalsyz
