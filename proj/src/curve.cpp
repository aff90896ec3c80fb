#include "nodalsyz/curve.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

namespace nodalsyz {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

bool contains_point(const std::vector<Rational>& pts, const Rational& p) {
  return std::find(pts.begin(), pts.end(), p) != pts.end();
}

void require_proper(const NodalCurve& curve, const ComponentSum& z) {
  for (auto c : z.members()) {
    if (c >= curve.component_count()) throw CurveError("component sum refers to a missing component");
  }
}

}  // namespace

ComponentSum::ComponentSum(std::vector<std::size_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw CurveError("component sum must be nonempty");
}

bool ComponentSum::contains(std::size_t component) const {
  return std::binary_search(members_.begin(), members_.end(), component);
}

NodalCurve::NodalCurve(std::vector<Component> components, std::vector<Node> nodes)
    : components_(std::move(components)), nodes_(std::move(nodes)) {
  std::set<std::string> ids;
  for (const auto& c : components_) {
    if (c.id.empty()) throw CurveError("component id must be nonempty");
    if (!ids.insert(c.id).second) throw CurveError("duplicate component id \"" + c.id + "\"");
  }
  std::set<std::string> node_ids;
  std::vector<std::vector<Rational>> derived(components_.size());
  for (const auto& n : nodes_) {
    if (!n.id.empty() && !node_ids.insert(n.id).second) throw CurveError("duplicate node id \"" + n.id + "\"");
    for (const BranchPoint* br : {&n.a, &n.b}) {
      if (br->component >= components_.size()) {
        throw CurveError("node \"" + n.id + "\" refers to a missing component");
      }
      auto& pts = derived[br->component];
      if (contains_point(pts, br->point)) {
        throw CurveError("node \"" + n.id + "\": branch point " + to_string(br->point) + " on component \"" +
                         components_[br->component].id + "\" is already used by another node");
      }
      pts.push_back(br->point);
    }
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    auto& c = components_[i];
    if (!c.branch_points.empty()) {
      auto given = c.branch_points;
      auto got = derived[i];
      std::sort(given.begin(), given.end());
      std::sort(got.begin(), got.end());
      if (given != got) {
        throw CurveError("component \"" + c.id + "\": listed branch points do not match the nodes attached to it");
      }
    }
    c.branch_points = derived[i];
    std::vector<Rational> seen;
    for (const auto& m : c.marked_points) {
      if (contains_point(c.branch_points, m)) {
        throw CurveError("component \"" + c.id + "\": marked point " + to_string(m) + " coincides with a branch point");
      }
      if (contains_point(seen, m)) throw CurveError("component \"" + c.id + "\": duplicate marked point");
      seen.push_back(m);
    }
  }
  DisjointSets ds(components_.size());
  for (const auto& n : nodes_) ds.unite(n.a.component, n.b.component);
  std::size_t roots = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) roots += ds.find(i) == i ? 1 : 0;
  connected_ = roots <= 1;
}

std::size_t NodalCurve::component_index(const std::string& id) const {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].id == id) return i;
  }
  throw CurveError("unknown component \"" + id + "\"");
}

std::size_t NodalCurve::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  throw CurveError("unknown node \"" + id + "\"");
}

ComponentSum NodalCurve::all() const {
  std::vector<std::size_t> members(components_.size());
  std::iota(members.begin(), members.end(), 0);
  return ComponentSum(std::move(members));
}

std::size_t NodalCurve::self_node_count(std::size_t component) const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [&](const Node& n) {
    return n.is_self_node() && n.a.component == component;
  }));
}

bool same_dual_graph(const NodalCurve& lhs, const NodalCurve& rhs) {
  if (lhs.component_count() != rhs.component_count()) return false;
  auto edges = [](const NodalCurve& c) {
    std::multiset<std::pair<std::size_t, std::size_t>> out;
    for (const auto& n : c.nodes()) out.insert(std::minmax(n.a.component, n.b.component));
    return out;
  };
  return edges(lhs) == edges(rhs);
}

int arithmetic_genus(const NodalCurve& curve) {
  if (!curve.connected()) throw CurveError("arithmetic genus requested for a disconnected curve");
  return static_cast<int>(curve.node_count()) - static_cast<int>(curve.component_count()) + 1;
}

ComponentSum complement(const NodalCurve& curve, const ComponentSum& z) {
  require_proper(curve, z);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < curve.component_count(); ++i) {
    if (!z.contains(i)) rest.push_back(i);
  }
  if (rest.empty()) throw CurveError("complement of the whole curve is empty");
  return ComponentSum(std::move(rest));
}

int intersection_count(const NodalCurve& curve, const ComponentSum& z) {
  require_proper(curve, z);
  int n = 0;
  for (const auto& node : curve.nodes()) {
    if (z.contains(node.a.component) != z.contains(node.b.component)) ++n;
  }
  return n;
}

int connected_components_count(const NodalCurve& curve, const ComponentSum& z) {
  require_proper(curve, z);
  DisjointSets ds(curve.component_count());
  for (const auto& node : curve.nodes()) {
    if (z.contains(node.a.component) && z.contains(node.b.component)) ds.unite(node.a.component, node.b.component);
  }
  std::set<std::size_t> roots;
  for (auto c : z.members()) roots.insert(ds.find(c));
  return static_cast<int>(roots.size());
}

int dualizing_degree(const NodalCurve& curve, const ComponentSum& y) {
  require_proper(curve, y);
  int internal = 0;
  for (const auto& node : curve.nodes()) {
    if (y.contains(node.a.component) && y.contains(node.b.component)) ++internal;
  }
  return 2 * internal - 2 * static_cast<int>(y.size());
}

int subcurve_genus(const NodalCurve& curve, const ComponentSum& y) {
  if (connected_components_count(curve, y) != 1) {
    throw CurveError("genus requested for a disconnected subcurve; use dualizing_degree");
  }
  return (dualizing_degree(curve, y) + 2) / 2;
}

NodalCurve blow_up_node(const NodalCurve& curve, std::size_t node) {
  if (node >= curve.node_count()) throw CurveError("blow-up of a missing node");
  std::vector<Component> comps = curve.components();
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < curve.node_count(); ++i) {
    if (i != node) nodes.push_back(curve.nodes()[i]);
  }
  const Node& p = curve.nodes()[node];
  for (auto& c : comps) c.branch_points.clear();
  comps[p.a.component].marked_points.push_back(p.a.point);
  comps[p.b.component].marked_points.push_back(p.b.point);
  return NodalCurve(std::move(comps), std::move(nodes));
}

NodalCurve glue_marked_points(const NodalCurve& curve, Node node) {
  std::vector<Component> comps = curve.components();
  for (auto& c : comps) c.branch_points.clear();
  for (const BranchPoint* br : {&node.a, &node.b}) {
    if (br->component >= comps.size()) throw CurveError("gluing refers to a missing component");
    auto& marked = comps[br->component].marked_points;
    auto it = std::find(marked.begin(), marked.end(), br->point);
    if (it == marked.end()) throw CurveError("gluing point is not a marked point");
    marked.erase(it);
  }
  std::vector<Node> nodes = curve.nodes();
  nodes.push_back(std::move(node));
  return NodalCurve(std::move(comps), std::move(nodes));
}

}  // namespace nodalsyz
