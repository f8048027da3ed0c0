#pragma once

#include <array>

#include "isl/types.hpp"

namespace isl {

inline constexpr double kMinImTau = 0.05;
inline constexpr double kPoleTol = 1e-10;

void check_tau(cplx tau);

struct LatticePoint {
  cplx z;    // reduced point
  int m = 0;
  int n = 0;  // original = z + m + n*tau
};

// Lattice-basis coefficients of the result lie in [-1/2, 1/2).
LatticePoint reduce_to_cell(cplx z, cplx tau);

// Distance from z to the nearest point of the lattice Z + tau Z.
double lattice_distance(cplx z, cplx tau);
// Distance from z to the nearest half period omega_k/2 (mod lattice).
double half_period_distance(cplx z, cplx tau);

// z-derivative of the given order (0..3) of theta_1(z; tau).
cplx theta1(cplx z, cplx tau, int deriv);
// All four derivatives at once; z must already be reduced.
std::array<cplx, 4> theta1_series(cplx z, cplx tau);

cplx dedekind_eta(cplx tau);  // independent q-product

struct LatticeData {
  cplx tau;
  cplx eta1, eta2;
  cplx e1, e2, e3;
  cplx g2, g3;
  cplx theta1_prime;
  cplx dedekind_eta;
  cplx theta2, theta3, theta4;

  cplx e(int k) const { return k == 1 ? e1 : k == 2 ? e2 : e3; }
  cplx w(int k) const { return omega(k, tau); }
  cplx quasi(int m, int n) const { return double(m) * eta1 + double(n) * eta2; }
};

LatticeData lattice_invariants(cplx tau);

struct WeierstrassValues {
  cplx sigma, zeta, wp, wp_prime, wp_prime2;
};

WeierstrassValues weierstrass_suite(cplx z, const LatticeData& lat);
WeierstrassValues weierstrass_suite(cplx z, cplx tau);

// Cheaper single-value helpers.
cplx wp(cplx z, const LatticeData& lat);
cplx wp_prime(cplx z, const LatticeData& lat);
cplx zeta(cplx z, const LatticeData& lat);

// Closed-form tau derivatives at fixed z.
struct TauDerivatives {
  cplx dlog_sigma, dzeta, dwp, dwp_prime, deta1, dlog_theta1_prime;
};

TauDerivatives tau_derivative_suite(cplx z, const LatticeData& lat);
TauDerivatives tau_derivative_suite(cplx z, cplx tau);
// Same quantities by 5-point central differences in tau (log terms via ratios).
TauDerivatives tau_derivative_fd(cplx z, cplx tau, double h = 1e-3);
// Largest relative deviation between the two, per field in declaration order.
std::array<double, 6> tau_derivative_rel_errors(const TauDerivatives& exact, const TauDerivatives& fd);

struct CurveMap {
  cplx t, dt_dtau;
};

CurveMap curve_map(const LatticeData& lat);
cplx curve_map_point(cplx p, const LatticeData& lat);

struct OracleValues {
  cplx wp, zeta, eta1;
};

// Brute-force symmetric lattice sums with Richardson extrapolation in the radius.
OracleValues oracle_lattice_sums(cplx z, cplx tau, int radius = 200);

}  // namespace isl
