#include <gtest/gtest.h>

#include "isl/correspondence.hpp"
#include "isl/errors.hpp"
#include "isl/flow.hpp"
#include "isl/hitchin.hpp"

using namespace isl;

namespace {

const cplx kTau(0.1, 1.2);
const Vec4 kN(0.3, 0.1, -0.2, 0.7);
const cplx kP(0.23, 0.31), kA(0.4, -0.2);
const std::vector<cplx> kPath{cplx(0.1, 1.1), cplx(0.15, 1.3)};

}  // namespace

TEST(Flow, RhsIsHamiltonian) {
  LatticeData lat = lattice_invariants(kTau);
  FlowRhs r = flow_rhs({kP, kA}, lat, kN);
  const double h = 1e-5;
  auto K = [&](cplx p, cplx A) { return hamiltonian_K(p, A, kN, lat); };
  cplx dKdA = (K(kP, kA + h) - K(kP, kA - h)) / (2 * h);
  cplx dKdp = (K(kP + h, kA) - K(kP - h, kA)) / (2 * h);
  EXPECT_LT(std::abs(r.p_dot - dKdA) / std::abs(dKdA), 1e-6);
  EXPECT_LT(std::abs(r.A_dot + dKdp) / std::abs(dKdp), 1e-6);
}

TEST(Flow, PDotVanishesOnTheCancellationLocus) {
  LatticeData lat = lattice_invariants(kTau);
  cplx A = 0.5 * (zeta(2.0 * kP, lat) - 2.0 * kP * lat.eta1);
  EXPECT_LT(std::abs(flow_rhs({kP, A}, lat, kN).p_dot), 1e-14);
}

TEST(Flow, PoleOnTwoTorsion) {
  EXPECT_THROW(flow_rhs({0.5, kA}, kTau, kN), PoleError);
}

TEST(Flow, MatchesHitchinDerivative) {
  const HitchinSeed s{0.3, 0.2};
  const cplx tau(0, 1);
  HitchinLame h = hitchin_lame_data(s, tau);
  cplx p_dot = flow_rhs({h.params.p, h.params.A}, tau, Vec4::Zero()).p_dot;
  const double d = 1e-4;
  std::vector<cplx> taus{tau - d, tau, tau + d};
  std::vector<cplx> ps;
  for (cplx t : taus) ps.push_back(hitchin_p(s, t).p);
  ps = lift_continuous(ps, taus);
  cplx fd = (ps[2] - ps[0]) / (2 * d);
  // the lift may pick -p; compare up to sign of the representative at tau
  double err = std::min(std::abs(fd - p_dot), std::abs(fd + p_dot)) / std::abs(p_dot);
  EXPECT_LT(err, 1e-5);
}

TEST(Flow, ForwardThenBackwardIsIdentity) {
  Trajectory f = integrate_flow({kP, kA}, kPath, kN);
  Trajectory b = integrate_flow({f.p.back(), f.A.back()}, {kPath[1], kPath[0]}, kN);
  EXPECT_LT(std::abs(b.p.back() - kP), 1e-8);
  EXPECT_LT(std::abs(b.A.back() - kA), 1e-8);
}

TEST(Flow, GenericTrajectorySatisfiesEllipticForm) {
  Trajectory f = integrate_flow({kP, kA}, kPath, kN);
  EXPECT_EQ(f.size(), 201u);
  EXPECT_LT(elliptic_pvi_residual(f, painleve_params_from_n(kN)), 1e-6);
  // wrong weights leave a visible residual
  EXPECT_GT(elliptic_pvi_residual(f, painleve_params_from_n(Vec4::Zero())), 1e-3);
}

TEST(Flow, ConstantPathHasForcingResidual) {
  std::vector<cplx> tau, p;
  for (int i = 0; i <= 20; ++i) {
    tau.push_back(kTau + 0.01 * i * kI);
    p.push_back(kP);
  }
  auto al = alphas_from_n(Vec4::Zero());
  double r = elliptic_pvi_residual(tau, p, al);
  EXPECT_GT(r, 1e-3);
}

TEST(Flow, ResidualNeedsSamples) {
  std::vector<cplx> tau{kTau, kTau + 0.01}, p{kP, kP};
  EXPECT_THROW(elliptic_pvi_residual(tau, p, alphas_from_n(kN)), ValidationError);
}

TEST(Flow, BranchPointIsReported) {
  LatticeData lat = lattice_invariants(kTau);
  EXPECT_THROW(integrate_flow({0.5 + 1e-5, kA}, kPath, kN), NumericalError);
  (void)lat;
}

TEST(Flow, ToleranceRangeIsChecked) {
  FlowOptions o;
  o.rel_tol = 1e-3;
  EXPECT_THROW(integrate_flow({kP, kA}, kPath, kN, o), ValidationError);
}

TEST(Flow, ParameterMaps) {
  auto a0 = alphas_from_n(Vec4::Zero());
  for (cplx a : a0) EXPECT_LT(std::abs(a - 0.125), 1e-15);
  PainleveParams pp = pvi_from_thetas({0.5, 0.5, 0.5, 0.5});
  EXPECT_LT(std::abs(pp.alpha - 0.125), 1e-15);
  EXPECT_LT(std::abs(pp.beta + 0.125), 1e-15);
  EXPECT_LT(std::abs(pp.gamma - 0.125), 1e-15);
  EXPECT_LT(std::abs(pp.delta - 0.375), 1e-15);
  Vec4 back = n_from_alphas(alphas_from_n(kN));
  EXPECT_LT((back - kN).norm(), 1e-13);
  auto el = elliptic_from_pvi(pp.alpha, pp.beta, pp.gamma, pp.delta);
  for (cplx a : el) EXPECT_LT(std::abs(a - 0.125), 1e-15);
  // the PVI map composed with its elliptic inverse reproduces alpha_k from n
  PainleveParams g = painleve_params_from_n(kN);
  auto ak = alphas_from_n(kN);
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(g.alpha_k[k] - ak[k]), 1e-14);
}

TEST(Flow, AFromPMatchesHitchinClosedForm) {
  const HitchinSeed s{0.3, 0.2};
  Trajectory tr = hitchin_trajectory(s, {cplx(0, 1.0), cplx(0, 1.2)}, 200);
  auto A = A_from_trajectory(tr);
  for (size_t i = 20; i + 20 < tr.size(); i += 40) EXPECT_LT(std::abs(A[i] - tr.A[i]), 1e-8);
}

TEST(Flow, FLogDerivativeIdentityAndSign) {
  const HitchinSeed s{0.3, 0.2};
  Trajectory tr = hitchin_trajectory(s, {cplx(0, 1.0), cplx(0, 1.6)}, 200);
  EXPECT_LT(F_log_derivative_residual(tr), 1e-6);
  LatticeData lat = lattice_invariants(tr.tau[0]);
  // F is odd under (p, A) -> (-p, -A); the log-derivative does not see the sign
  EXPECT_LT(std::abs(F_value(tr.p[0], tr.A[0], lat) + F_value(-tr.p[0], -tr.A[0], lat)) /
                std::abs(F_value(tr.p[0], tr.A[0], lat)),
            1e-12);
}

TEST(Flow, ThetaPrimePrefactor) {
  LatticeData lat = lattice_invariants(kTau);
  cplx d = tau_derivative_suite(0.2, lat).dlog_theta1_prime;
  EXPECT_LT(std::abs(2.0 / 3.0 * d - kI / (2.0 * kPi) * lat.eta1), 1e-13);
}

TEST(Flow, ManinMatchesFlow) {
  const std::vector<cplx> path{cplx(0.1, 1.0), cplx(0.2, 1.5)};
  HitchinLame h = hitchin_lame_data({0.3, 0.2}, path.front());
  Trajectory tr = integrate_flow({h.params.p, h.params.A}, path, Vec4::Zero());
  cplx q0 = flow_rhs({tr.p[0], tr.A[0]}, path.front(), Vec4::Zero()).p_dot;
  auto m = integrate_manin(tr.p[0], q0, path, alphas_from_n(Vec4::Zero()));
  ASSERT_EQ(m.size(), tr.size());
  for (size_t i = 0; i < tr.size(); i += 25) EXPECT_LT(std::abs(m[i].y[0] - tr.p[i]), 1e-7);
}

TEST(Flow, KawaiHalfBSolvesEllipticForm) {
  const cplx theta(0.7, 0.0);
  auto k = integrate_kawai(cplx(0.2, 0.3), cplx(0.1, 0.05), kPath, theta);
  std::vector<cplx> tau, half_b;
  for (const auto& s : k) {
    tau.push_back(s.x);
    half_b.push_back(0.5 * s.y[0]);
  }
  std::array<cplx, 4> al;
  al.fill(theta * theta / 32.0);
  EXPECT_LT(elliptic_pvi_residual(tau, lift_continuous(half_b, tau), al), 1e-6);
}

TEST(Flow, Cp1HamiltonianDerivatives) {
  CP1Params cp = cp1_params_from_thetas(thetas_from_n(kN));
  const cplx l(0.3, 0.2), mu(-0.4, 0.7), t(0.4, -0.3);
  const double h = 1e-6;
  cplx dmu = (cp1_K(l, mu + h, t, cp) - cp1_K(l, mu - h, t, cp)) / (2 * h);
  cplx dl = (cp1_K(l + h, mu, t, cp) - cp1_K(l - h, mu, t, cp)) / (2 * h);
  EXPECT_LT(std::abs(dmu - cp1_dK_dmu(l, mu, t, cp)), 1e-8);
  EXPECT_LT(std::abs(dl - cp1_dK_dlambda(l, mu, t, cp)), 1e-8);
  EXPECT_THROW(cp1_rhs(1.0, mu, t, cp), DomainError);
}

TEST(Flow, Cp1FlowSolvesPainleveSix) {
  CP1Params cp = cp1_params_from_thetas(thetas_from_n(kN));
  std::vector<cplx> tpath{cplx(0.3, 0.2), cplx(0.4, 0.25)};
  auto sol = integrate_cp1(cplx(0.6, 0.4), cplx(0.2, -0.1), tpath, cp);
  std::vector<cplx> t, l;
  for (const auto& s : sol) {
    t.push_back(s.x);
    l.push_back(s.y[0]);
  }
  EXPECT_LT(pvi_residual(t, l, painleve_params_from_n(kN)), 1e-6);
}

TEST(Flow, TorusFlowMapsToCp1Flow) {
  Trajectory f = integrate_flow({kP, kA}, kPath, kN);
  FuchsianParams f0 = lame_to_fuchsian(make_apparent(kN, f.p[0], f.A[0], f.tau[0]));
  auto c = integrate_cp1_tau(f0.lambda, f0.mu, kPath, cp1_params(f0));
  for (size_t i = 0; i < f.size(); i += 20) {
    FuchsianParams fi = lame_to_fuchsian(make_apparent(kN, f.p[i], f.A[i], f.tau[i]));
    EXPECT_LT(std::abs(fi.lambda - c[i].y[0]), 1e-6);
  }
}
