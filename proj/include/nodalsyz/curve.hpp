#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodalsyz/rational.hpp"

namespace nodalsyz {

class CurveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A rational irreducible piece, i.e. the normalization P^1 with one affine
// coordinate.  Branch points are the affine coordinates where nodes attach;
// marked points are smooth points remembered after a node is blown up.
struct Component {
  std::string id;
  std::vector<Rational> branch_points;
  std::vector<Rational> marked_points;

  friend bool operator==(const Component&, const Component&) = default;
};

struct BranchPoint {
  std::size_t component = 0;
  Rational point;

  friend bool operator==(const BranchPoint&, const BranchPoint&) = default;
};

struct Node {
  std::string id;
  BranchPoint a;
  BranchPoint b;

  bool is_self_node() const { return a.component == b.component; }
  friend bool operator==(const Node&, const Node&) = default;
};

// Nonempty set of component indices, kept sorted.
class ComponentSum {
 public:
  explicit ComponentSum(std::vector<std::size_t> members);
  static ComponentSum single(std::size_t component) { return ComponentSum({component}); }

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::size_t component) const;

  friend bool operator==(const ComponentSum&, const ComponentSum&) = default;

 private:
  std::vector<std::size_t> members_;
};

// A nodal curve assembled from rational components.  Branch points of each
// component are derived from the node list; the constructor enforces that
// every (component, point) pair is used by at most one node and that marked
// points are distinct from branch points.  Disconnected curves are allowed
// (they arise after blow-ups); `connected()` reports which case applies.
class NodalCurve {
 public:
  NodalCurve(std::vector<Component> components, std::vector<Node> nodes);

  const std::vector<Component>& components() const { return components_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t component_count() const { return components_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  std::size_t component_index(const std::string& id) const;
  std::size_t node_index(const std::string& id) const;
  bool connected() const { return connected_; }
  ComponentSum all() const;

  // Nodes whose two branches both lie on `component`.
  std::size_t self_node_count(std::size_t component) const;

  friend bool operator==(const NodalCurve& lhs, const NodalCurve& rhs) {
    return lhs.components_ == rhs.components_ && lhs.nodes_ == rhs.nodes_;
  }

 private:
  std::vector<Component> components_;
  std::vector<Node> nodes_;
  bool connected_ = true;
};

// Graph-level equality: same component count and the same multiset of
// (component, component) node incidences, ignoring node ids and positions.
bool same_dual_graph(const NodalCurve& lhs, const NodalCurve& rhs);

// #nodes - #components + 1; throws CurveError on a disconnected curve.
int arithmetic_genus(const NodalCurve& curve);

// Z^+; throws CurveError if Z covers the whole curve.
ComponentSum complement(const NodalCurve& curve, const ComponentSum& z);

// n_Z = Z.Z^+, the number of nodes with exactly one branch on Z.
int intersection_count(const NodalCurve& curve, const ComponentSum& z);

// b_0 of the subcurve spanned by Z and the nodes internal to it.
int connected_components_count(const NodalCurve& curve, const ComponentSum& z);

// deg(omega_Y) = sum over components of (#internal branch points - 2).
int dualizing_degree(const NodalCurve& curve, const ComponentSum& y);

// (deg omega_Y + 2) / 2 for connected Y; throws CurveError otherwise.
int subcurve_genus(const NodalCurve& curve, const ComponentSum& y);

// Removes the node, turning its two branch points into smooth marked points.
NodalCurve blow_up_node(const NodalCurve& curve, std::size_t node);

// Inverse of blow_up_node: identifies two marked points into a new node.
NodalCurve glue_marked_points(const NodalCurve& curve, Node node);

}  // namespace nodalsyz
