#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "nodalsyz/catalog.hpp"
#include "nodalsyz/koszul.hpp"

using namespace nodalsyz;

namespace {

LineBundle bundle(const std::string& name, std::vector<int> degrees, std::vector<Rational> gluings = {}) {
  const auto x = catalog::curve(name);
  if (gluings.empty()) gluings.assign(x->node_count(), Rational(1));
  return LineBundle(x, std::move(degrees), std::move(gluings));
}

class ScopedCap {
 public:
  explicit ScopedCap(const char* value) { setenv("NODALSYZ_SLICE_CAP", value, 1); }
  ~ScopedCap() { unsetenv("NODALSYZ_SLICE_CAP"); }
};

}  // namespace

TEST(WedgeBasis, LexOrderAndRanks) {
  const WedgeBasis b(5, 2);
  ASSERT_EQ(b.size(), 10u);
  EXPECT_EQ(b.subset(0), 0b00011u);
  EXPECT_EQ(b.subset(1), 0b00101u);
  EXPECT_EQ(b.subset(4), 0b00110u);
  EXPECT_EQ(b.subset(9), 0b11000u);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index_of(b.subset(i)), i);
  EXPECT_THROW(b.index_of(0b00111), std::invalid_argument);
  EXPECT_THROW(b.index_of(0b100001), std::invalid_argument);

  EXPECT_EQ(WedgeBasis(4, 0).size(), 1u);
  EXPECT_EQ(WedgeBasis(4, 5).size(), 0u);
  EXPECT_EQ(WedgeBasis(12, 6).size(), binomial(12, 6));
  const WedgeBasis big(20, 7);
  for (std::size_t i = 0; i < big.size(); i += 997) EXPECT_EQ(big.index_of(big.subset(i)), i);
}

TEST(KoszulMap, EmptyWedgeIsZeroMap) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {2}));
  const SectionSpace o(structure_sheaf(w.bundle().curve_ptr()));
  const Matrix d0 = koszul_differential(0, w, o);
  EXPECT_EQ(d0.cols(), 1u);
  EXPECT_EQ(d0.rows(), 0u);
  EXPECT_TRUE(d0.is_zero());
}

TEST(KoszulMap, MultiplicationOnDegreeOne) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {2}));
  const SectionSpace o(structure_sheaf(w.bundle().curve_ptr()));
  const Matrix d1 = koszul_differential(1, w, o);
  EXPECT_EQ(d1.cols(), 3u);
  EXPECT_EQ(d1.rows(), 3u);
  EXPECT_EQ(rank(d1), 3u);
}

TEST(KoszulMap, RejectsMismatchedCurves) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {2}));
  const SectionSpace other(structure_sheaf(catalog::curve("F2")));
  EXPECT_THROW(koszul_differential(1, w, other), std::invalid_argument);
  EXPECT_THROW(build_slice(1, 1, structure_sheaf(catalog::curve("F3")), w), std::invalid_argument);
}

TEST(Koszul, RationalNormalCurves) {
  // K_{p,1}(P^1, O(d)) = p * C(d, p + 1); K_{p,q} = 0 for q >= 2.
  const std::map<int, std::vector<std::size_t>> k1{{3, {0, 3, 2, 0}}, {4, {0, 6, 8, 3, 0}}, {5, {0, 10, 20, 15, 4, 0}}};
  for (const auto& [d, row] : k1) {
    const LinearSystem w = LinearSystem::complete(bundle("F1", {d}));
    const LineBundle o = structure_sheaf(w.bundle().curve_ptr());
    for (int p = 0; p < static_cast<int>(row.size()); ++p) {
      EXPECT_EQ(koszul_dim(p, 1, o, w), row[static_cast<std::size_t>(p)]) << "d=" << d << " p=" << p;
      EXPECT_EQ(koszul_dim(p, 2, o, w), 0u) << "d=" << d << " p=" << p;
      if (d < 5 || p < 4) EXPECT_EQ(koszul_dim(p, 3, o, w), 0u) << "d=" << d << " p=" << p;
    }
  }
}

TEST(Koszul, TwistedCubicSliceShape) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {3}));
  const KoszulSlice s = build_slice(1, 1, structure_sheaf(w.bundle().curve_ptr()), w);
  EXPECT_EQ(s.left_dim, 6u);
  EXPECT_EQ(s.middle_dim, 16u);
  EXPECT_EQ(s.right_dim, 7u);
  EXPECT_EQ(rank(s.d_in), 6u);
  EXPECT_EQ(s.middle_dim - rank(s.d_out), 9u);
  EXPECT_EQ(s.homology(), 3u);
}

TEST(Koszul, CycleDualityPairs) {
  const LineBundle l = bundle("F3", {3, 3});
  const LinearSystem w = LinearSystem::complete(l);
  ASSERT_EQ(w.dimension(), 6u);
  const LineBundle o = structure_sheaf(l.curve_ptr());
  const LineBundle om = dualizing_sheaf(l.curve_ptr());
  const std::vector<std::pair<int, std::size_t>> expected{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 1}};
  for (const auto& [p, dim] : expected) {
    EXPECT_EQ(koszul_dim(p, 2, o, w), dim) << p;
    EXPECT_EQ(koszul_dim(4 - p, 0, om, w), dim) << p;
    const DualityResult r = duality_check(p, l);
    EXPECT_TRUE(r.agree());
    EXPECT_EQ(r.k_p2, dim);
  }
  EXPECT_EQ(koszul_dim(1, 1, o, w), 9u);
}

TEST(Koszul, NodalCubicModel) {
  const LinearSystem w = LinearSystem::complete(bundle("F4", {4}));
  const LineBundle o = structure_sheaf(w.bundle().curve_ptr());
  EXPECT_EQ(koszul_dim(1, 1, o, w), 2u);
  EXPECT_EQ(koszul_dim(0, 2, o, w), 0u);
}

TEST(Koszul, BoundaryConventions) {
  const LinearSystem w = LinearSystem::complete(bundle("F3", {2, 2}));
  const LineBundle o = structure_sheaf(w.bundle().curve_ptr());
  EXPECT_EQ(koszul_dim(-1, 1, o, w), 0u);
  EXPECT_EQ(koszul_dim(static_cast<int>(w.dimension()) + 1, 1, o, w), 0u);
  EXPECT_THROW(build_slice(-1, 1, o, w), std::invalid_argument);
}

TEST(Koszul, SlicesAreComplexes) {
  for (const auto& name : catalog::names()) {
    const auto x = catalog::curve(name);
    std::vector<int> d(x->component_count(), 2);
    const LineBundle l(x, d, catalog::random_gluings(*x, 5));
    const LinearSystem w = LinearSystem::complete(l);
    for (const LineBundle& b : {structure_sheaf(x), dualizing_sheaf(x)}) {
      for (int p = 0; p <= static_cast<int>(w.dimension()); ++p) {
        for (int q = 0; q <= 2; ++q) {
          const KoszulSlice s = build_slice(p, q, b, w);
          EXPECT_TRUE(composes_to_zero(s.d_out, s.d_in)) << name << " p=" << p << " q=" << q;
          EXPECT_EQ(s.d_in.rows(), s.middle_dim);
          EXPECT_EQ(s.d_out.cols(), s.middle_dim);
          EXPECT_EQ(s.d_in.cols(), s.left_dim);
          EXPECT_EQ(s.d_out.rows(), s.right_dim);
        }
      }
    }
  }
}

TEST(Koszul, CertifiedAgreesWithRational) {
  for (const auto& name : {"F2", "F3", "F4", "F5"}) {
    const auto x = catalog::curve(name);
    std::vector<int> d(x->component_count(), 2);
    const LineBundle l(x, d, catalog::random_gluings(*x, 8));
    const LinearSystem w = LinearSystem::complete(l);
    for (int p = 0; p <= static_cast<int>(w.dimension()); ++p) {
      for (int q = 0; q <= 2; ++q) {
        const KoszulSlice s = build_slice(p, q, structure_sheaf(x), w);
        EXPECT_EQ(middle_homology_dim(s.d_in, s.d_out, HomologyMethod::certified),
                  middle_homology_dim(s.d_in, s.d_out, HomologyMethod::rational))
            << name << " p=" << p << " q=" << q;
      }
    }
  }
}

TEST(Koszul, InvariantUnderChangeOfBasisOfW) {
  std::mt19937_64 rng(3);
  for (const auto& name : {"F1", "F3", "F5"}) {
    const auto x = catalog::curve(name);
    std::vector<int> d(x->component_count(), name == std::string("F1") ? 4 : 2);
    const LineBundle l(x, d, catalog::random_gluings(*x, 21));
    const LinearSystem w = LinearSystem::complete(l);
    const std::size_t m = w.dimension();
    // Unit upper triangular change of basis.
    std::vector<Rational> dense(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      dense[i * m + i] = 1;
      for (std::size_t j = i + 1; j < m; ++j) dense[i * m + j] = static_cast<long>(rng() % 5) - 2;
    }
    const LinearSystem w2 = w.recombined(Matrix::from_dense(m, m, dense));
    EXPECT_FALSE(w2.sections() == w.sections());
    for (int p = 0; p <= static_cast<int>(m); ++p) {
      for (int q = 0; q <= 2; ++q) {
        EXPECT_EQ(koszul_dim(p, q, structure_sheaf(x), w), koszul_dim(p, q, structure_sheaf(x), w2))
            << name << " p=" << p << " q=" << q;
      }
    }
  }
}

TEST(Koszul, CoefficientBundleSumsSummands) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {3}));
  const LineBundle o = structure_sheaf(w.bundle().curve_ptr());
  EXPECT_EQ(koszul_dim(1, 1, CoefficientBundle({o, o}), w), 6u);
}

TEST(Koszul, SliceCap) {
  const LinearSystem w = LinearSystem::complete(bundle("F1", {5}));
  const LineBundle o = structure_sheaf(w.bundle().curve_ptr());
  EXPECT_EQ(slice_middle_dimension(2, 1, o, w), 15u * 6u);
  {
    ScopedCap cap("50");
    EXPECT_EQ(slice_cap(), 50u);
    EXPECT_THROW(build_slice(2, 1, o, w), SliceTooLarge);
    EXPECT_NO_THROW(build_slice(1, 0, o, w));
  }
  {
    ScopedCap cap("lots");
    EXPECT_THROW(slice_cap(), std::invalid_argument);
  }
  EXPECT_EQ(slice_cap(), 1000000u);
}

TEST(Duality, RefusesWhenH1Nonzero) {
  EXPECT_THROW(duality_check(0, structure_sheaf(catalog::curve("F3"))), std::invalid_argument);
}

TEST(GreenInjectivity, SpecExample) {
  const auto x = catalog::curve("F1");
  const LinearSystem w = LinearSystem::complete(LineBundle(x, {2}, {}));
  const LinearSystem v = LinearSystem::complete(LineBundle(x, {1}, {}));
  const InjectivityResult r = green_injectivity_check(2, w, v);
  EXPECT_EQ(r.source_dim, 6u);
  EXPECT_EQ(r.rank, 6u);
  EXPECT_TRUE(r.claimed);
  EXPECT_TRUE(r.injective());
}

TEST(GreenInjectivity, ZeroSpaceIsVacuous) {
  const auto x = catalog::curve("F1");
  const LinearSystem w = LinearSystem::complete(LineBundle(x, {2}, {}));
  const LinearSystem v = LinearSystem::complete(LineBundle(x, {-1}, {}));
  ASSERT_EQ(v.dimension(), 0u);
  const InjectivityResult r = green_injectivity_check(1, w, v);
  EXPECT_EQ(r.source_dim, 0u);
  EXPECT_TRUE(r.injective());
}

TEST(GreenInjectivity, RejectsReducibleCurves) {
  const LinearSystem w = LinearSystem::complete(bundle("F2", {1, 1}));
  EXPECT_THROW(green_injectivity_check(1, w, w), std::invalid_argument);
}
