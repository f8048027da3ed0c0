#pragma once

#include <array>

#include "isl/elliptic.hpp"

namespace isl {

struct LameParams {
  Vec4 n = Vec4::Zero();
  cplx p, A, B;
  cplx tau;
  bool apparent = true;  // false when B was supplied directly
};

// Checks p off E_tau[2], n_k off 1/2 + Z and the tau domain.
void validate_lame(const LameParams& lp);

LameParams make_apparent(const Vec4& n, cplx p, cplx A, cplx tau);
LameParams make_non_apparent(const Vec4& n, cplx p, cplx A, cplx B, cplx tau);

// Fundamental-cell representative of +-p with Im >= 0, ties broken by Re >= 0.
cplx canonical_p(cplx p, cplx tau);
// Same equation written with the canonical representative of p.
LameParams canonicalize(const LameParams& lp, const LatticeData& lat);

cplx apparent_B(cplx p, cplx A, const Vec4& n, const LatticeData& lat);
cplx apparent_B(cplx p, cplx A, const Vec4& n, cplx tau);

cplx potential_I(cplx z, const LameParams& lp, const LatticeData& lat);
cplx potential_I(cplx z, const LameParams& lp);
cplx potential_I_prime(cplx z, const LameParams& lp, const LatticeData& lat);

cplx hamiltonian_K(cplx p, cplx A, const Vec4& n, const LatticeData& lat);
// Same value through (-i/4pi)(B + 2 p eta1 A).
cplx hamiltonian_K_via_B(cplx p, cplx A, const Vec4& n, const LatticeData& lat);

struct ExpansionCoeffs {
  cplx H1, H2;
  std::array<cplx, 4> Lambda;
};

ExpansionCoeffs expansion_coeffs(const LameParams& lp, const LatticeData& lat);

struct Omega12Jet {
  cplx v, d1, d2, d3;
};

Omega12Jet omega12_jet(cplx z, cplx p, const LatticeData& lat);
cplx omega12(cplx z, cplx p, const LatticeData& lat);
Mat2 omega_matrix(cplx z, const LameParams& lp, const LatticeData& lat);

struct DeformationCoeffs {
  cplx L, M, N, C;
  double max_abs() const;
};

DeformationCoeffs deformation_coeffs(cplx p, cplx A, cplx p_dot, cplx A_dot, const Vec4& n,
                                     const LatticeData& lat);

// d/dtau of apparent_B along (p_dot, A_dot).
cplx apparent_B_dot(cplx p, cplx A, cplx p_dot, cplx A_dot, const Vec4& n, const LatticeData& lat);

struct IntegrabilityParts {
  cplx direct;    // Omega12''' - 4 I Omega12' - 2 I' Omega12 + 2 dI/dtau
  cplx expanded;  // L, M, N, C decomposition
  double scale;   // magnitude of the largest term in the direct sum
};

IntegrabilityParts integrability_parts(cplx z, const LameParams& lp, cplx p_dot, cplx A_dot,
                                       const LatticeData& lat);
// Returns the direct value; throws NumericalError("inconsistency") when the
// two evaluations disagree.
cplx integrability_residual(cplx z, const LameParams& lp, cplx p_dot, cplx A_dot);

std::array<double, 2> indicial_roots_at_p();

// Obstruction at step 2 of the Frobenius recursion for the -1/2 exponent at p.
cplx frobenius_log_coefficient(const LameParams& lp);

}  // namespace isl
