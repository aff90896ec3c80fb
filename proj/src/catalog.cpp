#include "nodalsyz/catalog.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace nodalsyz::catalog {

namespace {

Component comp(const char* id) { return Component{id, {}, {}}; }

Node node(const char* id, std::size_t ca, int pa, std::size_t cb, int pb) {
  return Node{id, {ca, Rational(pa)}, {cb, Rational(pb)}};
}

CurvePtr build(const std::string& name) {
  if (name == "F1") return std::make_shared<const NodalCurve>(std::vector<Component>{comp("Z1")}, std::vector<Node>{});
  if (name == "F2") {
    return std::make_shared<const NodalCurve>(std::vector<Component>{comp("Z1"), comp("Z2")},
                                              std::vector<Node>{node("e1", 0, 0, 1, 0)});
  }
  if (name == "F3") {
    return std::make_shared<const NodalCurve>(std::vector<Component>{comp("Z1"), comp("Z2")},
                                              std::vector<Node>{node("e1", 0, 0, 1, 0), node("e2", 0, 1, 1, 1)});
  }
  if (name == "F4") {
    return std::make_shared<const NodalCurve>(std::vector<Component>{comp("Z1")},
                                              std::vector<Node>{node("e1", 0, 0, 0, 1)});
  }
  if (name == "F5") {
    return std::make_shared<const NodalCurve>(
        std::vector<Component>{comp("Z1"), comp("Z2"), comp("Z3")},
        std::vector<Node>{node("e1", 0, 0, 1, 0), node("e2", 1, 1, 2, 0), node("e3", 0, 1, 2, 1),
                          node("e4", 0, 2, 2, 2)});
  }
  throw std::invalid_argument("unknown catalog curve \"" + name + "\"");
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"F1", "F2", "F3", "F4", "F5"};
  return n;
}

CurvePtr curve(const std::string& name) { return build(name); }

std::string description(const std::string& name) {
  static const std::map<std::string, std::string> d{
      {"F1", "single smooth rational component (genus 0)"},
      {"F2", "chain of two lines meeting once (genus 0)"},
      {"F3", "two lines meeting twice (genus 1)"},
      {"F4", "rational component with one self-node (genus 1)"},
      {"F5", "three components on a theta graph (genus 2)"},
  };
  const auto it = d.find(name);
  if (it == d.end()) throw std::invalid_argument("unknown catalog curve \"" + name + "\"");
  return it->second;
}

std::string fixture_path(const std::string& name) { return std::string(NODALSYZ_CATALOG_DIR) + "/" + name + ".json"; }

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<Rational> random_gluings(const NodalCurve& curve, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> out;
  for (std::size_t e = 0; e < curve.node_count(); ++e) {
    const std::uint64_t r = rng();
    long num = static_cast<long>(r % 18) - 9;
    if (num >= 0) ++num;  // skip zero
    Rational q(num, static_cast<long>((r >> 32) % 5) + 1);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

Rational smooth_point(const NodalCurve& curve, std::size_t component) {
  const Component& c = curve.components().at(component);
  Rational p = 7;
  auto used = [&](const Rational& x) {
    return std::find(c.branch_points.begin(), c.branch_points.end(), x) != c.branch_points.end() ||
           std::find(c.marked_points.begin(), c.marked_points.end(), x) != c.marked_points.end();
  };
  while (used(p)) p += 1;
  return p;
}

LinearSystem random_hyperplane(std::shared_ptr<const SectionSpace> space, std::uint64_t seed) {
  const std::size_t h = space->dimension();
  if (h < 2) throw std::invalid_argument("a hyperplane of H^0 needs h^0 >= 2");
  std::mt19937_64 rng(seed);
  // Columns e_i + r_i e_{h-1}, i < h - 1.
  Matrix coeff(h, 0);
  for (std::size_t i = 0; i + 1 < h; ++i) {
    const long r = static_cast<long>(rng() % 11) - 5;
    SparseVector v{{static_cast<Index>(i), Rational(1)}};
    if (r != 0) v.push_back({static_cast<Index>(h - 1), Rational(r)});
    coeff.append_column(std::move(v));
  }
  return LinearSystem(std::move(space), std::move(coeff));
}

std::vector<std::pair<std::string, CoefficientBundle>> standard_coefficients(const CurvePtr& curve) {
  const LineBundle o = structure_sheaf(curve);
  const LineBundle op = twist_by_divisor(o, {{0, smooth_point(*curve, 0), 1}});
  std::vector<std::pair<std::string, CoefficientBundle>> out;
  out.emplace_back("omega", CoefficientBundle({dualizing_sheaf(curve)}));
  out.emplace_back("O", CoefficientBundle({o}));
  out.emplace_back("O+O", CoefficientBundle({o, o}));
  out.emplace_back("O(P)", CoefficientBundle({op}));
  return out;
}

}  // namespace nodalsyz::catalog
