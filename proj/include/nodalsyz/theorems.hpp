#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nodalsyz/koszul.hpp"
#include "nodalsyz/sheaf.hpp"

namespace nodalsyz {

// Per irreducible component Z (one Component together with its self-nodes).
struct ComponentBounds {
  std::size_t component = 0;
  int deg = 0;           // deg_Z L
  int g = 0;             // g_Z = number of self-nodes
  int n = 0;             // n_Z = Z.Z^+
  int b0_plus = 0;       // b_0(Z^+), 0 when Z^+ is empty
  int m_z = 0;           // dim W_Z
  int g_zx = 0;          // rank H^0(omega) -> H^0(omega|_Z)
  int g_zx_formula = 0;  // g_Z + n_Z - b_0(Z^+)
  std::optional<int> e_z;
};

// A bound value below zero means "no prediction"; values are never clamped.
struct BoundReport {
  std::vector<ComponentBounds> components;
  int m = 0;
  int p_thm = 0;               // min_Z (m_Z - g_{Z,X} - 2)
  int p_cor1 = 0;              // min_Z (deg_Z - g_Z - g_{Z,X} - n_Z - 1)
  int p_cor2 = 0;              // min_Z (deg_Z - 2 g_Z - 2 n_Z - 1 + b_0(Z^+))
  int t_threshold_omega = 0;   // max_Z (g_{Z,X} - m_Z + m)
  std::optional<int> t_threshold;  // max_Z (e_Z - m_Z + m), when E is given
  std::optional<int> ununs_level;  // absent past the enumeration cap
};

constexpr std::size_t kDefaultUnunsCap = 12;

// Requires a connected curve.
BoundReport compute_bounds(const LinearSystem& w, const CoefficientBundle* e = nullptr,
                           std::size_t ununs_cap = kDefaultUnunsCap);

// deg(L_Y) - deg(omega_Y): the largest k with L_Y k-nuns.
int nuns_level(const ComponentSum& y, const LineBundle& l);
// Minimum of nuns_level over all nonempty component sums.  Throws
// std::invalid_argument when the curve has more than `cap` components.
int ununs_level(const LineBundle& l, std::size_t cap = kDefaultUnunsCap);

struct ProbePoint {
  std::size_t component = 0;
  Rational point;
};

// Two smooth points per component: the first of 3, 4, 5, ... that is neither a
// branch point nor a marked point, and a seeded random rational.
std::vector<ProbePoint> default_probe_points(const NodalCurve& curve, std::uint64_t seed = 1);

struct SpannedVerdict {
  int k = 0;
  bool refuted = false;
  std::optional<IdealSpec> witness;
  std::size_t witness_h0 = 0;
  std::size_t ideals_checked = 0;
  std::string label() const { return refuted ? "REFUTED" : "PASSED-ON-PROBES"; }
};

// Checks h^0(I L) = h^0(L) - colength(I) for every ideal of colength 1..k
// built from the probe points (any multiplicities) and J_{a,b} at nodes.
// Sound when refuting; a pass only covers the probes.
SpannedVerdict spanned_probe(const LineBundle& l, int k, const std::vector<ProbePoint>& probes);
SpannedVerdict spanned_probe(const LineBundle& l, int k);

struct JLemmaResult {
  std::shared_ptr<const NodalCurve> blown_up;
  std::optional<LineBundle> transported;
  int e = 0;  // a + b - 1
  int ununs_before = 0;
  int ununs_after = 0;
  bool disconnected = false;
  bool claimed = false;  // k - e > 0
  bool holds() const { return ununs_after >= ununs_before - e; }
};

// Blows up `node` and twists the pullback by -a at branch a and -b at branch
// b (the roles swap when `swap` is set).  Requires 0 < b <= a.
JLemmaResult jlemma_transport(const LineBundle& l, std::size_t node, int a, int b, bool swap = false);

struct WarmupReport {
  int ununs = 0;
  bool expected_dimension_claimed = false;  // ununs >= 1
  std::size_t h0 = 0;
  int expected_h0 = 0;
  std::size_t h0_omega_minus_l = 0;
  bool expected_dimension_ok = true;
  std::optional<SpannedVerdict> spanned;  // run when ununs >= 2
  bool passed() const { return expected_dimension_ok && (!spanned || !spanned->refuted); }
};

// Spanned probing runs at min(ununs, max_k) - 1.
WarmupReport warmup_checks(const LineBundle& l, int max_k = 4);

enum class Status { passed, failed, partial, not_applicable };
std::string to_string(Status s);

struct VanishingVerdict {
  Status status = Status::passed;
  int threshold = 0;  // max_Z (e_Z - m_Z + m) + offset
  int t_first = 0;
  int t_last_checked = -1;
  std::optional<int> witness_t;
  std::size_t witness_dim = 0;
  std::vector<std::pair<int, std::size_t>> dims;  // (t, dim K_{t,0})
};

// K_{t,0}(X; E, L, W) = 0 for max(threshold + offset, 0) <= t <= m.
VanishingVerdict verify_vanishing(const CoefficientBundle& e, const LinearSystem& w, int threshold_offset = 0);

struct KoszulEntry {
  int p = 0;
  int q = 0;
  std::size_t dim = 0;
};

enum class NpStatus { verified, not_very_ample, h1_nonzero, no_degree_bound };
std::string to_string(NpStatus s);

struct NpReport {
  NpStatus status = NpStatus::verified;
  int p_max = 0;
  int largest_p = -1;  // largest p <= p_max with N_p; -1 if N_0 fails
  int q_low = 2;
  int q_high = 3;       // K_{i,q} computed for q_low <= q <= q_high
  bool degree_condition = false;  // deg_Z L >= 1 and deg_Z omega < deg_Z L on every Z
  bool partial = false;           // slice cap hit; largest_p covers the verified range
  std::optional<SpannedVerdict> probe;
  std::vector<KoszulEntry> table;
  bool holds_up_to(int p) const { return status == NpStatus::verified && largest_p >= p; }
};

// Property N_p for W = H^0(L) by direct Koszul computation, for p <= p_max.
NpReport verify_np_direct(const LineBundle& l, int p_max);

struct HypothesisReport {
  int k = 0;
  bool tested = false;  // k >= 3
  std::optional<NpReport> np;
  bool agrees() const { return !tested || (np && np->status == NpStatus::verified && np->largest_p >= k - 3); }
};

// Tests "k-ununs implies N_{k-3}" on one instance.  A disagreement is a
// counterexample candidate, not an error.
HypothesisReport hypothesis_kununs_np(const LineBundle& l);

}  // namespace nodalsyz
