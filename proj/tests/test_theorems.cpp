#include <gtest/gtest.h>

#include "nodalsyz/catalog.hpp"
#include "nodalsyz/theorems.hpp"

using namespace nodalsyz;

namespace {

LineBundle bundle(const std::string& name, std::vector<int> degrees, std::vector<Rational> gluings = {}) {
  const auto x = catalog::curve(name);
  if (gluings.empty()) gluings.assign(x->node_count(), Rational(1));
  return LineBundle(x, std::move(degrees), std::move(gluings));
}

std::vector<ProbePoint> probes(std::size_t component, std::initializer_list<long> points) {
  std::vector<ProbePoint> out;
  for (long p : points) out.push_back({component, Rational(p)});
  return out;
}

}  // namespace

TEST(Bounds, CycleDegreeFive) {
  const LinearSystem w = LinearSystem::complete(bundle("F3", {5, 5}));
  const BoundReport b = compute_bounds(w);
  EXPECT_EQ(b.m, 10);
  ASSERT_EQ(b.components.size(), 2u);
  for (const auto& c : b.components) {
    EXPECT_EQ(c.m_z, 6);
    EXPECT_EQ(c.g_zx, 1);
    EXPECT_EQ(c.g_zx_formula, 1);
    EXPECT_EQ(c.n, 2);
    EXPECT_EQ(c.b0_plus, 1);
    EXPECT_EQ(c.g, 0);
  }
  EXPECT_EQ(b.p_thm, 3);
  EXPECT_EQ(b.p_cor1, 1);
  EXPECT_EQ(b.p_cor2, 1);
  EXPECT_EQ(b.t_threshold_omega, 5);
  EXPECT_FALSE(b.t_threshold.has_value());
  ASSERT_TRUE(b.ununs_level.has_value());
  EXPECT_EQ(*b.ununs_level, 7);
}

TEST(Bounds, ChainAndSelfNode) {
  const BoundReport chain = compute_bounds(LinearSystem::complete(bundle("F2", {3, 3})));
  EXPECT_EQ(chain.components[0].g_zx, 0);
  EXPECT_EQ(chain.components[0].g_zx_formula, 0);
  const BoundReport nodal = compute_bounds(LinearSystem::complete(bundle("F4", {5})));
  EXPECT_EQ(nodal.components[0].g, 1);
  EXPECT_EQ(nodal.components[0].n, 0);
  EXPECT_EQ(nodal.components[0].b0_plus, 0);
  EXPECT_EQ(nodal.components[0].g_zx, 1);
}

TEST(Bounds, WithCoefficientBundle) {
  const LineBundle l = bundle("F3", {4, 4});
  const LinearSystem w = LinearSystem::complete(l);
  const CoefficientBundle e({dualizing_sheaf(l.curve_ptr())});
  const BoundReport b = compute_bounds(w, &e);
  ASSERT_TRUE(b.t_threshold.has_value());
  EXPECT_EQ(*b.t_threshold, b.t_threshold_omega);
  for (const auto& c : b.components) EXPECT_EQ(c.e_z, c.g_zx);
}

TEST(Bounds, MonotoneForCompleteSystems) {
  for (const auto& name : catalog::names()) {
    const auto x = catalog::curve(name);
    const std::size_t c = x->component_count();
    std::vector<int> d(c, 1);
    while (true) {
      const BoundReport b = compute_bounds(LinearSystem::complete(LineBundle(x, d, std::vector<Rational>(x->node_count(), Rational(1)))));
      EXPECT_EQ(b.p_cor1, b.p_cor2) << name;
      EXPECT_LE(b.p_cor1, b.p_thm) << name;
      std::size_t i = 0;
      while (i < c && d[i] == 5) d[i++] = 1;
      if (i == c) break;
      ++d[i];
    }
  }
}

TEST(Bounds, RejectsDisconnected) {
  const auto y = std::make_shared<const NodalCurve>(blow_up_node(*catalog::curve("F2"), 0));
  const LineBundle l(y, {2, 2}, {});
  EXPECT_THROW(compute_bounds(LinearSystem::complete(l)), CurveError);
}

TEST(Ununs, SpecExamples) {
  for (int d = 0; d <= 5; ++d) EXPECT_EQ(ununs_level(bundle("F1", {d})), d + 2);
  EXPECT_EQ(ununs_level(bundle("F3", {3, 3})), 5);
  EXPECT_EQ(ununs_level(bundle("F2", {0, 5})), 2);
  EXPECT_EQ(nuns_level(ComponentSum({0, 1}), bundle("F3", {3, 3})), 6);
}

TEST(Ununs, RefusesPastCap) {
  EXPECT_THROW(ununs_level(bundle("F5", {1, 1, 1}), 2), std::invalid_argument);
  EXPECT_NO_THROW(ununs_level(bundle("F5", {1, 1, 1}), 3));
}

TEST(Spanned, VeryAmpleCubic) {
  const SpannedVerdict v = spanned_probe(bundle("F1", {3}), 2, probes(0, {0, 1, 2}));
  EXPECT_FALSE(v.refuted);
  EXPECT_EQ(v.label(), "PASSED-ON-PROBES");
  EXPECT_GT(v.ideals_checked, 0u);
}

TEST(Spanned, ChainWithConstantComponent) {
  const LineBundle l = bundle("F2", {1, 0});
  ASSERT_EQ(h0(l), 2u);
  EXPECT_FALSE(spanned_probe(l, 1, probes(1, {3})).refuted);
  const SpannedVerdict v = spanned_probe(l, 2, probes(1, {3, 4}));
  EXPECT_TRUE(v.refuted);
  EXPECT_EQ(v.label(), "REFUTED");
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->colength(), 2);
}

TEST(Spanned, CycleDegreeThree) {
  const LineBundle l = bundle("F3", {3, 3});
  for (int k = 1; k <= 4; ++k) EXPECT_FALSE(spanned_probe(l, k).refuted) << k;
}

TEST(Spanned, RejectsNonPositiveK) { EXPECT_THROW(spanned_probe(bundle("F1", {3}), 0), std::invalid_argument); }

TEST(Probes, DefaultPointsAvoidBranchPoints) {
  const auto x = catalog::curve("F5");
  const auto p = default_probe_points(*x);
  ASSERT_EQ(p.size(), 6u);
  for (const auto& q : p) {
    const auto& bp = x->components()[q.component].branch_points;
    EXPECT_EQ(std::find(bp.begin(), bp.end(), q.point), bp.end());
  }
  EXPECT_EQ(p[0].point, Rational(3));
  const auto again = default_probe_points(*x);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i].point, again[i].point);
}

TEST(JLemma, CycleDegreeThree) {
  const LineBundle l = bundle("F3", {3, 3});
  const JLemmaResult r11 = jlemma_transport(l, 0, 1, 1);
  EXPECT_EQ(r11.e, 1);
  EXPECT_EQ(r11.ununs_before, 5);
  ASSERT_TRUE(r11.transported.has_value());
  EXPECT_EQ(r11.transported->degrees(), (std::vector<int>{2, 2}));
  EXPECT_TRUE(same_dual_graph(*r11.blown_up, *catalog::curve("F2")));
  EXPECT_EQ(r11.ununs_after, 4);
  EXPECT_TRUE(r11.holds());
  EXPECT_TRUE(r11.claimed);
  EXPECT_FALSE(r11.disconnected);

  const JLemmaResult r21 = jlemma_transport(l, 0, 2, 1);
  EXPECT_EQ(r21.e, 2);
  EXPECT_EQ(r21.transported->degrees(), (std::vector<int>{1, 2}));
  EXPECT_GE(r21.ununs_after, 3);
  EXPECT_TRUE(r21.holds());

  const JLemmaResult swapped = jlemma_transport(l, 0, 2, 1, true);
  EXPECT_EQ(swapped.transported->degrees(), (std::vector<int>{2, 1}));
}

TEST(JLemma, DisconnectingBlowUpIsFlagged) {
  const JLemmaResult r = jlemma_transport(bundle("F2", {3, 3}), 0, 1, 1);
  EXPECT_TRUE(r.disconnected);
  EXPECT_TRUE(r.holds());
}

TEST(JLemma, RejectsBadExponents) {
  const LineBundle l = bundle("F3", {3, 3});
  EXPECT_THROW(jlemma_transport(l, 0, 1, 2), std::invalid_argument);
  EXPECT_THROW(jlemma_transport(l, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(jlemma_transport(l, 5, 1, 1), std::invalid_argument);
}

TEST(Warmup, CycleDegreeThree) {
  const WarmupReport r = warmup_checks(bundle("F3", {3, 3}));
  EXPECT_EQ(r.ununs, 5);
  EXPECT_TRUE(r.expected_dimension_claimed);
  EXPECT_EQ(r.h0, 6u);
  EXPECT_EQ(r.expected_h0, 6);
  EXPECT_EQ(r.h0_omega_minus_l, 0u);
  ASSERT_TRUE(r.spanned.has_value());
  EXPECT_EQ(r.spanned->k, 3);
  EXPECT_TRUE(r.passed());
}

TEST(Warmup, NotClaimedBelowOneUnuns) {
  const WarmupReport r = warmup_checks(structure_sheaf(catalog::curve("F3")));
  EXPECT_EQ(r.ununs, 0);
  EXPECT_FALSE(r.expected_dimension_claimed);
}

TEST(Vanishing, CycleDegreeFive) {
  const LinearSystem w = LinearSystem::complete(bundle("F3", {5, 5}));
  const VanishingVerdict v = verify_vanishing(CoefficientBundle({dualizing_sheaf(w.bundle().curve_ptr())}), w);
  EXPECT_EQ(v.status, Status::passed);
  EXPECT_EQ(v.threshold, 5);
  EXPECT_EQ(v.t_last_checked, 10);
  for (const auto& [t, dim] : v.dims) EXPECT_EQ(dim, 0u) << t;
}

TEST(Vanishing, LoweredThresholdFindsWitness) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {3}));
  const CoefficientBundle o({structure_sheaf(w.bundle().curve_ptr())});
  EXPECT_EQ(verify_vanishing(o, w).status, Status::passed);
  const VanishingVerdict v = verify_vanishing(o, w, -1);
  EXPECT_EQ(v.status, Status::failed);
  ASSERT_TRUE(v.witness_t.has_value());
  EXPECT_EQ(*v.witness_t, 0);
  EXPECT_EQ(v.witness_dim, 1u);
}

TEST(Np, RationalNormalCurves) {
  for (int d = 3; d <= 5; ++d) {
    const NpReport r = verify_np_direct(bundle("F1", {d}), d - 1);
    EXPECT_EQ(r.status, NpStatus::verified);
    EXPECT_EQ(r.largest_p, d - 1);
    EXPECT_TRUE(r.holds_up_to(d - 1));
    EXPECT_TRUE(r.degree_condition);
    EXPECT_FALSE(r.partial);
  }
}

TEST(Np, CycleReachesN3) {
  const NpReport r = verify_np_direct(bundle("F3", {5, 5}), 3);
  EXPECT_EQ(r.status, NpStatus::verified);
  EXPECT_EQ(r.largest_p, 3);
  EXPECT_EQ(r.q_low, 2);
  EXPECT_EQ(r.q_high, 3);
}

TEST(Np, UndefinedCases) {
  EXPECT_EQ(verify_np_direct(structure_sheaf(catalog::curve("F3")), 1).status, NpStatus::h1_nonzero);
  EXPECT_EQ(verify_np_direct(bundle("F1", {0}), 1).status, NpStatus::not_very_ample);
  EXPECT_EQ(to_string(NpStatus::verified), "verified");
}

TEST(Np, PartialWhenSliceCapIsHit) {
  setenv("NODALSYZ_SLICE_CAP", "40", 1);
  const NpReport r = verify_np_direct(bundle("F1", {5}), 4);
  unsetenv("NODALSYZ_SLICE_CAP");
  EXPECT_TRUE(r.partial);
  EXPECT_LT(r.largest_p, 4);
}

TEST(Hypothesis, IsReportedNotEnforced) {
  const HypothesisReport r = hypothesis_kununs_np(bundle("F3", {3, 3}));
  EXPECT_EQ(r.k, 5);
  EXPECT_TRUE(r.tested);
  ASSERT_TRUE(r.np.has_value());
  const HypothesisReport low = hypothesis_kununs_np(bundle("F1", {0}));
  EXPECT_FALSE(low.tested);
  EXPECT_TRUE(low.agrees());
}

TEST(Status, Labels) {
  EXPECT_EQ(to_string(Status::passed), "PASS");
  EXPECT_EQ(to_string(Status::failed), "FAIL");
  EXPECT_EQ(to_string(Status::partial), "PARTIAL");
  EXPECT_EQ(to_string(Status::not_applicable), "N/A");
}
