#include <gtest/gtest.h>

#include "isl/errors.hpp"
#include "isl/hitchin.hpp"

using namespace isl;

namespace {

const HitchinSeed kSeed{0.3, 0.2};
const cplx kTau(0, 1.2);

std::vector<cplx> sample_z(cplx tau) { return {0.13 + 0.27 * tau, -0.31 + 0.4 * tau, 0.2 - 0.15 * tau}; }

}  // namespace

TEST(Hitchin, DegenerateSeedsAreRejected) {
  EXPECT_THROW(validate_seed({0.5, 0.0}), ValidationError);
  EXPECT_THROW(validate_seed({1.0, -0.5}), ValidationError);
  EXPECT_NO_THROW(validate_seed({0.5, 0.25}));
  EXPECT_THROW(hitchin_p({0.0, 0.5}, kTau), ValidationError);
}

TEST(Hitchin, InvertWpRoundTrip) {
  LatticeData lat = lattice_invariants(cplx(0.2, 1.1));
  for (cplx p : {cplx(0.2, 0.3), cplx(-0.41, 0.05), cplx(0.01, 0.02), cplx(0.3, -0.45)}) {
    cplx w = wp(p, lat);
    cplx q = invert_wp(w, lat);
    EXPECT_LT(std::abs(wp(q, lat) - w) / (1.0 + std::abs(w)), 1e-11);
  }
}

TEST(Hitchin, PSolvesClosedForm) {
  LatticeData lat = lattice_invariants(kTau);
  HitchinP hp = hitchin_p(kSeed, lat);
  EXPECT_LT(std::abs(wp(hp.p, lat) - hp.wp_p) / (1.0 + std::abs(hp.wp_p)), 1e-11);
  EXPECT_GE(hp.p.imag(), 0.0);
  EXPECT_LT(std::abs(hp.wp_p - hitchin_wp(kSeed, lat)), 1e-15);
}

TEST(Hitchin, ConstraintAndSolutions) {
  HitchinLame h = hitchin_lame_data(kSeed, kTau);
  EXPECT_LT(std::abs(h.constraint_residual), 1e-10);
  EXPECT_LT(hitchin_solution_residual(h, sample_z(kTau)), 1e-8);
}

TEST(Hitchin, AgreesWithAFromPOnClosedForm) {
  HitchinLame h = hitchin_lame_data(kSeed, kTau);
  LatticeData lat = lattice_invariants(kTau);
  EXPECT_LT(std::abs(hitchin_A(h.params.p, h.a1, lat) - h.params.A), 1e-14);
}

TEST(Hitchin, SchwarzianBasics) {
  EXPECT_EQ(schwarzian(1.0, 0.0, 0.0), cplx(0.0));
  const cplx k(0.3, 1.1), e = std::exp(k * 0.7);
  EXPECT_LT(std::abs(schwarzian(k * e, k * k * e, k * k * k * e) + 0.5 * k * k), 1e-14);
  // Mobius map 1/z at z0: f' = -1/z^2, f'' = 2/z^3, f''' = -6/z^4
  const cplx z0(0.4, -0.2);
  EXPECT_LT(std::abs(schwarzian(-1.0 / (z0 * z0), 2.0 / (z0 * z0 * z0), -6.0 / (z0 * z0 * z0 * z0))), 1e-12);
}

TEST(Hitchin, SchwarzianOfRatioIsMinusTwoI) {
  EXPECT_LT(schwarzian_residual(kSeed, kTau, sample_z(kTau)), 1e-7);
  EXPECT_LT(schwarzian_residual({0.25, 0.25}, cplx(0.1, 1.0), sample_z(cplx(0.1, 1.0))), 1e-7);
}

TEST(Hitchin, ExpectedMonodromyIsUnimodular) {
  for (const Mat2& m : expected_monodromy(kSeed)) EXPECT_LT(std::abs(m.determinant() - 1.0), 1e-14);
  auto m = expected_monodromy(kSeed);
  EXPECT_LT(std::abs(m[1].trace() - 2.0 * std::cos(2.0 * kPi * 0.2)), 1e-14);
  EXPECT_LT(std::abs(m[2].trace() - 2.0 * std::cos(2.0 * kPi * 0.3)), 1e-14);
}

TEST(Hitchin, TranslationFactorsAreInverse) {
  HitchinLame h = hitchin_lame_data(kSeed, kTau);
  cplx q0 = 0.11 + 0.13 * kTau;
  auto f = hitchin_translation_factors(h, {q0, q0 + 0.5, q0 + 1.0});
  EXPECT_LT(std::abs(f[0] * f[1] - 1.0), 1e-10);
  double two_cos = 2.0 * std::cos(2.0 * kPi * 0.2);
  EXPECT_LT(std::min(std::abs(f[0] + f[1] - two_cos), std::abs(f[0] + f[1] + two_cos)), 1e-10);
}

TEST(Hitchin, TrajectoryIsUniformAndContinuous) {
  Trajectory tr = hitchin_trajectory(kSeed, {cplx(0, 1.0), cplx(0, 1.6)}, 200);
  ASSERT_EQ(tr.size(), 201u);
  for (size_t i = 1; i < tr.size(); ++i) EXPECT_LT(std::abs(tr.p[i] - tr.p[i - 1]), 0.01);
  EXPECT_LT(elliptic_pvi_residual(tr, painleve_params_from_n(Vec4::Zero())), 1e-6);
}
