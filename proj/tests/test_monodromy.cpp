#include <gtest/gtest.h>

#include "isl/errors.hpp"
#include "isl/hitchin.hpp"
#include "isl/monodromy.hpp"

using namespace isl;

namespace {

const cplx kTau(0.1, 1.2);
const Vec4 kN(0.2, 0.1, 0.3, 0.15);
const cplx kP(0.23, 0.31), kA(0.4, -0.2);

LameParams generic() { return make_apparent(kN, kP, kA, kTau); }

}  // namespace

TEST(Monodromy, AllGeneratorsAreUnimodular) {
  MonodromyRep rep = monodromy_rep(generic());
  EXPECT_EQ(rep.matrices.size(), 8u);
  for (const auto& [label, M] : rep.matrices) EXPECT_LT(std::abs(M.determinant() - 1.0), 1e-9) << label;
}

TEST(Monodromy, LocalTracesFollowExponents) {
  MonodromyRep rep = monodromy_rep(generic());
  for (int k = 0; k < 4; ++k) {
    cplx expected = 2.0 * std::cos(2.0 * kPi * kN[k]);
    EXPECT_LT(std::abs(rep.matrices.at("gamma_" + std::to_string(k)).trace() - expected), 1e-8);
  }
  // apparent singularity: local monodromy is -I
  for (const char* l : {"gamma_plus", "gamma_minus"})
    EXPECT_LT((rep.matrices.at(l) + Mat2::Identity()).norm(), 1e-8) << l;
}

TEST(Monodromy, NonApparentPointHasNontrivialJordanBlock) {
  LameParams lp = generic();
  LameParams bad = make_non_apparent(kN, kP, kA, lp.B + 0.5, kTau);
  MonodromyRep rep = monodromy_rep(bad);
  EXPECT_LT(std::abs(rep.matrices.at("gamma_plus").trace() + 2.0), 1e-8);
  EXPECT_GT((rep.matrices.at("gamma_plus") + Mat2::Identity()).norm(), 1e-3);
}

TEST(Monodromy, LoopsWindOnceAroundTheirPoint) {
  LameParams lp = generic();
  for (const LoopPath& l : standard_loops(lp, default_basepoint(kTau))) {
    EXPECT_EQ(l.vertices.front(), l.basepoint);
    if (l.kind == LoopKind::Ell1 || l.kind == LoopKind::Ell2) {
      cplx shift = l.kind == LoopKind::Ell1 ? cplx(1.0) : kTau;
      EXPECT_LT(std::abs(l.vertices.back() - l.center), 1e-12) << l.label;
      EXPECT_LT(std::abs(l.center - l.basepoint - shift), 1e-12) << l.label;
      continue;
    }
    EXPECT_EQ(l.vertices.back(), l.basepoint);
    EXPECT_NEAR(std::abs(winding_number(l.vertices, l.center)), 1.0, 1e-9) << l.label;
    EXPECT_NEAR(winding_number(l.vertices, l.center + 0.45), 0.0, 1e-9) << l.label;
    EXPECT_GE(path_clearance(lp, l.vertices), LoopConstants{}.clearance) << l.label;
  }
}

TEST(Monodromy, ReversedPathInvertsTransport) {
  LameParams lp = generic();
  cplx q0 = default_basepoint(kTau);
  std::vector<cplx> path{q0, q0 + cplx(0.2, 0.05), q0 + cplx(0.3, -0.1)};
  std::vector<cplx> back(path.rbegin(), path.rend());
  Mat2 M = transport(lp, back) * transport(lp, path);
  EXPECT_LT((M - Mat2::Identity()).norm(), 1e-10);
}

TEST(Monodromy, ClearanceViolationIsReported) {
  LameParams lp = generic();
  std::vector<cplx> path{kP - 0.1, kP + 0.01 * kI, kP + 0.1};
  EXPECT_THROW(transport(lp, path), ValidationError);
}

TEST(Monodromy, TracesIndependentOfBasepoint) {
  LameParams lp = generic();
  MonodromyRep a = monodromy_rep(lp, default_basepoint(kTau));
  MonodromyRep b = monodromy_rep(lp, cplx(-0.07, 0.0) + 0.21 * kTau);
  for (const auto& [label, M] : a.matrices)
    EXPECT_LT(std::abs(M.trace() - b.matrices.at(label).trace()), 1e-8) << label;
}

TEST(Monodromy, HitchinTracesMatchTranslationFactors) {
  HitchinSeed s{0.3, 0.2};
  HitchinLame h = hitchin_lame_data(s, kTau);
  MonodromyRep rep = monodromy_rep(h.params);
  for (const LoopPath& l : rep.loops) {
    if (l.kind != LoopKind::Ell1 && l.kind != LoopKind::Ell2) continue;
    auto f = hitchin_translation_factors(h, l.vertices);
    EXPECT_LT(std::abs(rep.matrices.at(l.label).trace() - (f[0] + f[1])), 1e-8) << l.label;
    double two_cos = 2.0 * std::cos(2.0 * kPi * (l.kind == LoopKind::Ell1 ? 0.2 : 0.3));
    EXPECT_NEAR(std::abs(f[0] + f[1]), std::abs(two_cos), 1e-10);
  }
}

TEST(Monodromy, DriftVanishesAlongFlowOnly) {
  Trajectory f = integrate_flow({kP, kA}, {kTau, kTau + cplx(0.05, 0.1)}, kN);
  EXPECT_LT(isomonodromy_drift(f, 3), 1e-6);
  Trajectory frozen = f;
  for (auto& a : frozen.A) a = f.A.front();
  EXPECT_GT(isomonodromy_drift(frozen, 3), 1e-2);
  EXPECT_EQ(isomonodromy_drift(f, 1), 0.0);
}
