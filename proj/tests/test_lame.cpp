#include <gtest/gtest.h>

#include "isl/errors.hpp"
#include "isl/flow.hpp"
#include "isl/lame.hpp"
#include "isl/numdiff.hpp"

using namespace isl;

namespace {

const cplx kTau(0.1, 1.2);
const Vec4 kN(0.3, 0.1, -0.2, 0.7);
const cplx kP(0.23, 0.31), kA(0.4, -0.2);

}  // namespace

TEST(Lame, IndicialRootsAtP) {
  auto r = indicial_roots_at_p();
  EXPECT_DOUBLE_EQ(r[0], -0.5);
  EXPECT_DOUBLE_EQ(r[1], 1.5);
}

TEST(Lame, ApparentBKillsTheLogarithm) {
  LameParams lp = make_apparent(kN, kP, kA, kTau);
  EXPECT_LT(std::abs(frobenius_log_coefficient(lp)), 1e-9);
  LameParams bad = make_non_apparent(kN, kP, kA, lp.B + 0.3, kTau);
  EXPECT_GT(std::abs(frobenius_log_coefficient(bad)), 1e-2);
}

TEST(Lame, ValidationRejectsBadData) {
  EXPECT_THROW(make_apparent(kN, 0.5 * kTau, kA, kTau), ValidationError);
  EXPECT_THROW(make_apparent(Vec4(1.5, 0, 0, 0), kP, kA, kTau), ValidationError);
  EXPECT_THROW(make_apparent(kN, kP, kA, cplx(0, 0.01)), DomainError);
}

TEST(Lame, HamiltonianTwoForms) {
  LatticeData lat = lattice_invariants(kTau);
  cplx k1 = hamiltonian_K(kP, kA, kN, lat), k2 = hamiltonian_K_via_B(kP, kA, kN, lat);
  EXPECT_LT(std::abs(k1 - k2), 1e-12 * (1.0 + std::abs(k1)));
}

TEST(Lame, CanonicalRepresentativeLeavesPotentialUnchanged) {
  LatticeData lat = lattice_invariants(kTau);
  LameParams lp = make_apparent(kN, -kP + 1.0 - kTau, -kA, kTau);
  LameParams c = canonicalize(lp, lat);
  EXPECT_GE(c.p.imag(), 0.0);
  for (cplx z : {cplx(0.11, 0.05), cplx(-0.3, 0.4)})
    EXPECT_LT(std::abs(potential_I(z, c, lat) - potential_I(z, lp, lat)), 1e-10);
  EXPECT_LT(std::abs(canonical_p(-kP, kTau) - canonical_p(kP + kTau, kTau)), 1e-13);
}

TEST(Lame, PotentialPrimeMatchesDifferences) {
  LatticeData lat = lattice_invariants(kTau);
  LameParams lp = make_apparent(kN, kP, kA, kTau);
  const cplx z(0.07, 0.12);
  const double h = 1e-5;
  cplx fd = (potential_I(z + h, lp, lat) - potential_I(z - h, lp, lat)) / (2 * h);
  EXPECT_LT(std::abs(fd - potential_I_prime(z, lp, lat)) / std::abs(fd), 1e-7);
}

TEST(Lame, Omega12JetDerivatives) {
  LatticeData lat = lattice_invariants(kTau);
  const cplx z(0.07, 0.12);
  const double h = 1e-3;
  auto d5 = [&](auto f) { return (f(z - 2 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2 * h)) / (12 * h); };
  Omega12Jet j = omega12_jet(z, kP, lat);
  cplx d1 = d5([&](cplx x) { return omega12(x, kP, lat); });
  EXPECT_LT(std::abs(d1 - j.d1) / std::abs(j.d1), 1e-8);
  cplx d3 = d5([&](cplx x) { return omega12_jet(x, kP, lat).d2; });
  EXPECT_LT(std::abs(d3 - j.d3) / std::abs(j.d3), 1e-8);
}

TEST(Lame, DeformationCoefficientsVanishOnTheFlow) {
  LatticeData lat = lattice_invariants(kTau);
  FlowRhs r = flow_rhs({kP, kA}, lat, kN);
  EXPECT_LT(deformation_coeffs(kP, kA, r.p_dot, r.A_dot, kN, lat).max_abs(), 1e-10);
  EXPECT_GT(deformation_coeffs(kP, kA, r.p_dot, 0.0, kN, lat).max_abs(), 1e-2);
  EXPECT_GT(deformation_coeffs(kP, kA, 0.0, r.A_dot, kN, lat).max_abs(), 1e-2);
}

TEST(Lame, IntegrabilityDecompositionAgrees) {
  LatticeData lat = lattice_invariants(kTau);
  LameParams lp = make_apparent(kN, kP, kA, kTau);
  FlowRhs r = flow_rhs({kP, kA}, lat, kN);
  const cplx z(0.13, -0.21);
  // off the flow the two evaluations must still agree
  IntegrabilityParts off = integrability_parts(z, lp, r.p_dot + 0.1, r.A_dot, lat);
  EXPECT_LT(std::abs(off.direct - off.expanded), 1e-6 * off.scale);
  EXPECT_GT(std::abs(off.direct), 1e-3);
  // on the flow the direct value vanishes
  EXPECT_LT(std::abs(integrability_residual(z, lp, r.p_dot, r.A_dot)), 1e-6);
}

TEST(Lame, ApparentBDotMatchesDifferences) {
  FlowRhs r = flow_rhs({kP, kA}, kTau, kN);
  const double h = 1e-5;
  auto B = [&](double s) {
    cplx t = kTau + s;
    return apparent_B(kP + s * r.p_dot, kA + s * r.A_dot, kN, t);
  };
  cplx fd = (B(h) - B(-h)) / (2 * h);
  cplx exact = apparent_B_dot(kP, kA, r.p_dot, r.A_dot, kN, lattice_invariants(kTau));
  EXPECT_LT(std::abs(fd - exact) / std::abs(exact), 1e-6);
}

TEST(Lame, PoleDataOfPotentialAtP) {
  LatticeData lat = lattice_invariants(kTau);
  LameParams lp = make_apparent(kN, kP, kA, kTau);
  Vec c = laurent_fit([&](cplx z) { return potential_I(z, lp, lat); }, kP, 1e-2, -2, 3, 32);
  EXPECT_LT(std::abs(c[0] - 0.75), 1e-10);
  EXPECT_LT(std::abs(c[1] + kA), 1e-10);
}
