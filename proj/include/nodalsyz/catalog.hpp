#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nodalsyz/sheaf.hpp"

namespace nodalsyz::catalog {

// F1 line, F2 chain of two lines, F3 two lines meeting twice, F4 one rational
// component with a self-node, F5 three components on a theta graph (genus 2).
const std::vector<std::string>& names();
CurvePtr curve(const std::string& name);
std::string description(const std::string& name);
// data/catalog/<name>.json in the source tree.
std::string fixture_path(const std::string& name);

// Deterministic 64-bit FNV-1a, used to derive per-instance seeds.
std::uint64_t fnv1a(const std::string& text, std::uint64_t seed = 0);

// Nonzero rationals a/b with |a| <= 9, 1 <= b <= 5, one per node.
std::vector<Rational> random_gluings(const NodalCurve& curve, std::uint64_t seed);

// A smooth point of `component` that avoids branch and marked points.
Rational smooth_point(const NodalCurve& curve, std::size_t component);

// Random codimension-one subspace of H^0(L) (dimension h^0 - 1); requires
// h^0(L) >= 2.
LinearSystem random_hyperplane(std::shared_ptr<const SectionSpace> space, std::uint64_t seed);

// The coefficient bundles of the vanishing sweep: omega, O, O + O and O(P)
// for a smooth point P on the first component.
std::vector<std::pair<std::string, CoefficientBundle>> standard_coefficients(const CurvePtr& curve);

}  // namespace nodalsyz::catalog
