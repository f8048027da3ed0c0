#include <gtest/gtest.h>

#include <random>

#include "isl/correspondence.hpp"
#include "isl/errors.hpp"
#include "isl/hitchin.hpp"

using namespace isl;

namespace {

const cplx kTau(0.1, 1.2);
const Vec4 kN(0.3, 0.1, -0.2, 0.7);
const cplx kP(0.23, 0.31), kA(0.4, -0.2);

LameParams generic() { return canonicalize(make_apparent(kN, kP, kA, kTau), lattice_invariants(kTau)); }

}  // namespace

TEST(Correspondence, LameFuchsRoundTrip) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 12; ++k) {
    cplx tau(0.3 * u(rng), 1.2 + 0.3 * u(rng));
    Vec4 n;
    for (int j = 0; j < 4; ++j) n[j] = cplx(0.3 + 0.4 * u(rng), 0.1 * u(rng));
    cplx p = (0.25 + 0.15 * u(rng)) + (0.25 + 0.15 * u(rng)) * tau;
    LameParams lp = canonicalize(make_apparent(n, p, cplx(u(rng), u(rng)), tau), lattice_invariants(tau));
    FuchsianParams fp = lame_to_fuchsian(lp);
    LameParams back = fuchsian_to_lame(fp, tau);
    EXPECT_LT(std::abs(back.p - lp.p), 1e-10);
    EXPECT_LT(std::abs(back.A - lp.A), 1e-10);
    EXPECT_LT(std::abs(back.B - lp.B), 1e-10 * (1.0 + std::abs(lp.B)));
    EXPECT_LT((back.n - lp.n).norm(), 1e-14);
  }
}

TEST(Correspondence, SignOfPDoesNotMatter) {
  LameParams lp = make_apparent(kN, kP, kA, kTau);
  LameParams flipped = make_apparent(kN, -kP, -kA, kTau);
  FuchsianParams a = lame_to_fuchsian(lp), b = lame_to_fuchsian(flipped);
  EXPECT_LT(std::abs(a.lambda - b.lambda), 1e-12);
  EXPECT_LT(std::abs(a.mu - b.mu), 1e-10);
}

TEST(Correspondence, KFormsAgree) {
  LameParams lp = generic();
  LatticeData lat = lattice_invariants(kTau);
  FuchsianParams fp = lame_to_fuchsian(lp);
  cplx k98 = cp1_K(fp.lambda, fp.mu, fp.t, cp1_params(fp));
  EXPECT_LT(std::abs(K_from_lame(lp, lat) - k98), 1e-9);
  EXPECT_LT(std::abs(fp.K - k98), 1e-9);
  // the alternate closed form carries a known offset
  EXPECT_GT(std::abs(K_alternate_form(lp, lat) - k98), 1e-3);
}

TEST(Correspondence, MuMatchesMap) {
  LameParams lp = generic();
  EXPECT_LT(std::abs(mu_from_lame(lp, lattice_invariants(kTau)) - lame_to_fuchsian(lp).mu), 1e-14);
}

TEST(Correspondence, FuchsianValidation) {
  FuchsianParams fp = lame_to_fuchsian(generic());
  FuchsianParams bad = fp;
  bad.lambda = 1.0;
  EXPECT_THROW(validate_fuchsian(bad), ValidationError);
  bad = fp;
  bad.K += 0.1;
  EXPECT_THROW(validate_fuchsian(bad), ValidationError);
  EXPECT_THROW(fuchsian_to_lame(fp, kTau + 0.05), ValidationError);
}

TEST(Correspondence, ResiduesOfCoefficients) {
  LameParams lp = generic();
  FuchsianParams fp = lame_to_fuchsian(lp);
  FuchsianCoefficients fc = fuchsian_coefficients(fp, lp);
  EXPECT_LT(std::abs(residue(fc.p1, fp.lambda) + 1.0), 1e-10);
  EXPECT_LT(std::abs(residue(fc.p2, fp.lambda) - fp.mu), 1e-9);
  EXPECT_LT(std::abs(residue(fc.p2, fp.t) + fp.K), 1e-9);
  for (cplx x : {cplx(0.37, 0.55), cplx(-0.4, 0.2), cplx(1.3, -0.6)}) {
    EXPECT_LT(std::abs(fc.p1_hat(x) - fc.p1(x)), 1e-10 * (1.0 + std::abs(fc.p1(x))));
    EXPECT_LT(std::abs(fc.p2_hat(x) - fc.p2(x)), 1e-10 * (1.0 + std::abs(fc.p2(x))));
  }
}

TEST(Correspondence, GaugedHitchinSolutionsSolveFuchsianEquation) {
  HitchinLame h = hitchin_lame_data({0.3, 0.2}, cplx(0, 1.2));
  std::vector<cplx> zs{cplx(0.13, 0.27), cplx(-0.31, 0.4), cplx(0.2, -0.15)};
  for (double sign : {1.0, -1.0}) {
    auto g = gauge_transport(h.params, [&](cplx z) { return hitchin_log_y(z, h, sign); }, zs);
    ASSERT_EQ(g.size(), zs.size());
    for (const auto& s : g) EXPECT_LT(s.residual, 1e-6);
  }
}

TEST(Correspondence, RiemannSchemesSatisfyFuchsRelation) {
  FuchsianParams fp = lame_to_fuchsian(generic());
  // five points: exponents sum to 3
  EXPECT_LT(std::abs(scheme_fuchsian(fp).exponent_sum() - 3.0), 1e-14);
  EXPECT_LT(std::abs(scheme_lame_cp1(kN).exponent_sum() - 3.0), 1e-14);
  EXPECT_LT(std::abs(scheme_gauged(kN).exponent_sum() - 3.0), 1e-14);
  RiemannScheme g = scheme_gauged(kN);
  EXPECT_LT(std::abs(g.exponents[0][1] - fp.theta0), 1e-14);
  EXPECT_LT(std::abs(g.exponents[3][0] - fp.alpha_hat), 1e-14);
}
