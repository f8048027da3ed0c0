#include "isl/lame.hpp"

#include <cmath>

#include "isl/errors.hpp"
#include "isl/numdiff.hpp"

namespace isl {

namespace {

const cplx kC = kI / (4.0 * kPi);  // i/(4 pi)

cplx sum_nn_wp(cplx x, const Vec4& n, const LatticeData& lat) {
  cplx s = 0.0;
  for (int k = 0; k < 4; ++k)
    if (nn1(n[k]) != 0.0) s += nn1(n[k]) * wp(x + 0.5 * lat.w(k), lat);
  return s;
}

cplx sum_nn_wpp(cplx x, const Vec4& n, const LatticeData& lat) {
  cplx s = 0.0;
  for (int k = 0; k < 4; ++k)
    if (nn1(n[k]) != 0.0) s += nn1(n[k]) * wp_prime(x + 0.5 * lat.w(k), lat);
  return s;
}

}  // namespace

void validate_lame(const LameParams& lp) {
  check_tau(lp.tau);
  if (half_period_distance(lp.p, lp.tau) <= 1e-8) throw ValidationError("p lies on E_tau[2]");
  for (int k = 0; k < 4; ++k) {
    double re = lp.n[k].real() - 0.5;
    if (std::abs(lp.n[k] - cplx(std::round(re) + 0.5, 0.0)) < 1e-10)
      throw ValidationError("n_" + std::to_string(k) + " lies in 1/2 + Z");
  }
}

LameParams make_apparent(const Vec4& n, cplx p, cplx A, cplx tau) {
  LameParams lp{n, p, A, 0.0, tau, true};
  validate_lame(lp);
  lp.B = apparent_B(p, A, n, tau);
  return lp;
}

LameParams make_non_apparent(const Vec4& n, cplx p, cplx A, cplx B, cplx tau) {
  LameParams lp{n, p, A, B, tau, false};
  validate_lame(lp);
  return lp;
}

cplx canonical_p(cplx p, cplx tau) {
  cplx a = reduce_to_cell(p, tau).z;
  cplx b = reduce_to_cell(-p, tau).z;
  auto good = [](cplx x) { return x.imag() > 1e-14 || (std::abs(x.imag()) <= 1e-14 && x.real() >= 0.0); };
  if (good(a)) return a;
  if (good(b)) return b;
  return a;
}

LameParams canonicalize(const LameParams& lp, const LatticeData& lat) {
  LameParams out = lp;
  cplx pc = canonical_p(lp.p, lp.tau);
  // pc = s*p + m + n*tau
  LatticePoint plus = reduce_to_cell(pc - lp.p, lp.tau);
  LatticePoint minus = reduce_to_cell(pc + lp.p, lp.tau);
  double s;
  int m, n;
  if (std::abs(plus.z) <= std::abs(minus.z)) {
    s = 1.0;
    m = plus.m;
    n = plus.n;
  } else {
    s = -1.0;
    m = minus.m;
    n = minus.n;
  }
  out.p = pc;
  out.A = s * lp.A;
  out.B = lp.B - 2.0 * lat.quasi(m, n) * out.A;
  return out;
}

cplx apparent_B(cplx p, cplx A, const Vec4& n, const LatticeData& lat) {
  if (half_period_distance(p, lat.tau) <= 1e-8) throw PoleError("p lies on E_tau[2]");
  WeierstrassValues w2 = weierstrass_suite(2.0 * p, lat);
  return A * A - w2.zeta * A - 0.75 * w2.wp - sum_nn_wp(p, n, lat);
}

cplx apparent_B(cplx p, cplx A, const Vec4& n, cplx tau) { return apparent_B(p, A, n, lattice_invariants(tau)); }

cplx potential_I(cplx z, const LameParams& lp, const LatticeData& lat) {
  WeierstrassValues wpl = weierstrass_suite(z + lp.p, lat);
  WeierstrassValues wmi = weierstrass_suite(z - lp.p, lat);
  return sum_nn_wp(z, lp.n, lat) + 0.75 * (wpl.wp + wmi.wp) + lp.A * (wpl.zeta - wmi.zeta) + lp.B;
}

cplx potential_I(cplx z, const LameParams& lp) { return potential_I(z, lp, lattice_invariants(lp.tau)); }

cplx potential_I_prime(cplx z, const LameParams& lp, const LatticeData& lat) {
  WeierstrassValues wpl = weierstrass_suite(z + lp.p, lat);
  WeierstrassValues wmi = weierstrass_suite(z - lp.p, lat);
  return sum_nn_wpp(z, lp.n, lat) + 0.75 * (wpl.wp_prime + wmi.wp_prime) - lp.A * (wpl.wp - wmi.wp);
}

cplx hamiltonian_K(cplx p, cplx A, const Vec4& n, const LatticeData& lat) {
  if (half_period_distance(p, lat.tau) <= 1e-8) throw PoleError("p lies on E_tau[2]");
  WeierstrassValues w2 = weierstrass_suite(2.0 * p, lat);
  return -kC * (A * A + (-w2.zeta + 2.0 * p * lat.eta1) * A - 0.75 * w2.wp - sum_nn_wp(p, n, lat));
}

cplx hamiltonian_K_via_B(cplx p, cplx A, const Vec4& n, const LatticeData& lat) {
  return -kC * (apparent_B(p, A, n, lat) + 2.0 * p * lat.eta1 * A);
}

ExpansionCoeffs expansion_coeffs(const LameParams& lp, const LatticeData& lat) {
  if (half_period_distance(lp.p, lat.tau) <= 1e-8) throw PoleError("p lies on E_tau[2]");
  ExpansionCoeffs ec;
  WeierstrassValues w2 = weierstrass_suite(2.0 * lp.p, lat);
  cplx s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (nn1(lp.n[k]) == 0.0) continue;
    WeierstrassValues wk = weierstrass_suite(lp.p + 0.5 * lat.w(k), lat);
    s1 += nn1(lp.n[k]) * wk.wp_prime;
    s2 += nn1(lp.n[k]) * wk.wp_prime2;
  }
  ec.H1 = s1 + 0.75 * w2.wp_prime - lp.A * w2.wp;
  ec.H2 = 0.5 * (s2 + 0.75 * w2.wp_prime2 + 0.075 * lat.g2 - lp.A * w2.wp_prime);
  for (int k = 0; k < 4; ++k) {
    cplx hk = 0.5 * lat.w(k);
    cplx acc = 0.0;
    for (int j = 0; j < 4; ++j)
      if (j != k && nn1(lp.n[j]) != 0.0) acc += nn1(lp.n[j]) * wp(hk + 0.5 * lat.w(j), lat);
    WeierstrassValues a = weierstrass_suite(hk + lp.p, lat);
    WeierstrassValues b = weierstrass_suite(hk - lp.p, lat);
    ec.Lambda[k] = acc + 1.5 * a.wp + lp.A * (a.zeta - b.zeta) + lp.B;
  }
  return ec;
}

Omega12Jet omega12_jet(cplx z, cplx p, const LatticeData& lat) {
  WeierstrassValues a = weierstrass_suite(z - p, lat);
  WeierstrassValues b = weierstrass_suite(z + p, lat);
  Omega12Jet j;
  j.v = -kC * (a.zeta + b.zeta - 2.0 * z * lat.eta1);
  j.d1 = -kC * (-a.wp - b.wp - 2.0 * lat.eta1);
  j.d2 = -kC * (-a.wp_prime - b.wp_prime);
  j.d3 = -kC * (-a.wp_prime2 - b.wp_prime2);
  return j;
}

cplx omega12(cplx z, cplx p, const LatticeData& lat) { return omega12_jet(z, p, lat).v; }

Mat2 omega_matrix(cplx z, const LameParams& lp, const LatticeData& lat) {
  Omega12Jet j = omega12_jet(z, lp.p, lat);
  cplx I = potential_I(z, lp, lat);
  Mat2 W;
  W(0, 1) = j.v;
  W(0, 0) = -0.5 * j.d1;
  W(1, 0) = -0.5 * j.d2 + j.v * I;
  W(1, 1) = j.d1 + W(0, 0);
  return W;
}

double DeformationCoeffs::max_abs() const {
  return std::max({std::abs(L), std::abs(M), std::abs(N), std::abs(C)});
}

DeformationCoeffs deformation_coeffs(cplx p, cplx A, cplx p_dot, cplx A_dot, const Vec4& n,
                                     const LatticeData& lat) {
  if (half_period_distance(p, lat.tau) <= 1e-8) throw PoleError("p lies on E_tau[2]");
  WeierstrassValues w2 = weierstrass_suite(2.0 * p, lat);
  const cplx E = lat.eta1;
  const cplx zs = w2.zeta - 2.0 * p * E;
  const cplx snp = sum_nn_wpp(p, n, lat);
  const cplx H1 = snp + 0.75 * w2.wp_prime - A * w2.wp;
  DeformationCoeffs d;
  d.L = -0.5 * (3.0 * p_dot + kC * (6.0 * A - 3.0 * zs));
  d.M = -2.0 * A * p_dot + kC * (-4.0 * A * A + 2.0 * A * zs);
  d.N = -2.0 * A_dot + kC * (4.0 * A * (w2.wp + E) - 3.0 * w2.wp_prime - 2.0 * snp);
  cplx c_raw = 4.0 * A * A_dot - 2.0 * H1 * p_dot +
               kC * (-4.0 * A * A * (w2.wp + 2.0 * E) + 3.0 * A * w2.wp_prime + 2.0 * H1 * zs);
  // c_raw is the constant Laurent coefficient of U at p; shift it to the
  // constant of the L, M, N, C decomposition.
  d.C = c_raw + d.L * w2.wp_prime - d.M * w2.wp + d.N * w2.zeta;
  return d;
}

cplx apparent_B_dot(cplx p, cplx A, cplx p_dot, cplx A_dot, const Vec4& n, const LatticeData& lat) {
  WeierstrassValues w2 = weierstrass_suite(2.0 * p, lat);
  TauDerivatives t2 = tau_derivative_suite(2.0 * p, lat);
  cplx out = 2.0 * A * A_dot - (t2.dzeta - 2.0 * w2.wp * p_dot) * A - w2.zeta * A_dot -
             0.75 * (t2.dwp + 2.0 * w2.wp_prime * p_dot);
  for (int k = 0; k < 4; ++k) {
    if (nn1(n[k]) == 0.0) continue;
    cplx x = p + 0.5 * lat.w(k);
    TauDerivatives tk = tau_derivative_suite(x, lat);
    out -= nn1(n[k]) * (tk.dwp + wp_prime(x, lat) * (p_dot + 0.5 * omega_tau_rate(k)));
  }
  return out;
}

IntegrabilityParts integrability_parts(cplx z, const LameParams& lp, cplx p_dot, cplx A_dot,
                                       const LatticeData& lat) {
  const cplx p = lp.p, A = lp.A;
  Omega12Jet om = omega12_jet(z, p, lat);
  cplx I = potential_I(z, lp, lat);
  cplx Ip = potential_I_prime(z, lp, lat);

  // total tau derivative of I at fixed z
  cplx dI = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (nn1(lp.n[k]) == 0.0) continue;
    cplx x = z + 0.5 * lat.w(k);
    dI += nn1(lp.n[k]) * (tau_derivative_suite(x, lat).dwp + wp_prime(x, lat) * 0.5 * omega_tau_rate(k));
  }
  WeierstrassValues wpl = weierstrass_suite(z + p, lat), wmi = weierstrass_suite(z - p, lat);
  TauDerivatives tpl = tau_derivative_suite(z + p, lat), tmi = tau_derivative_suite(z - p, lat);
  dI += 0.75 * (tpl.dwp + wpl.wp_prime * p_dot + tmi.dwp - wmi.wp_prime * p_dot);
  dI += A_dot * (wpl.zeta - wmi.zeta);
  dI += A * (tpl.dzeta - wpl.wp * p_dot - tmi.dzeta - wmi.wp * p_dot);
  dI += lp.apparent ? apparent_B_dot(p, A, p_dot, A_dot, lp.n, lat) : 0.0;

  cplx t1 = om.d3, t2 = -4.0 * I * om.d1, t3 = -2.0 * Ip * om.v, t4 = 2.0 * dI;
  IntegrabilityParts out;
  out.direct = t1 + t2 + t3 + t4;
  out.scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1.0});

  DeformationCoeffs d = deformation_coeffs(p, A, p_dot, A_dot, lp.n, lat);
  out.expanded = d.L * (wmi.wp_prime - wpl.wp_prime) + d.M * (wmi.wp + wpl.wp) + d.N * (wmi.zeta - wpl.zeta) + d.C;
  return out;
}

cplx integrability_residual(cplx z, const LameParams& lp, cplx p_dot, cplx A_dot) {
  if (!lp.apparent) throw ValidationError("integrability residual needs an apparent configuration");
  LatticeData lat = lattice_invariants(lp.tau);
  IntegrabilityParts u = integrability_parts(z, lp, p_dot, A_dot, lat);
  if (std::abs(u.direct - u.expanded) > 1e-8 * u.scale)
    throw NumericalError("inconsistency", "U from the compatibility equation disagrees with its decomposition");
  return u.direct;
}

std::array<double, 2> indicial_roots_at_p() { return {-0.5, 1.5}; }

cplx frobenius_log_coefficient(const LameParams& lp) {
  validate_lame(lp);
  LatticeData lat = lattice_invariants(lp.tau);
  // Laurent data of I at p: coefficients of u^-2 .. u^3
  Vec c = laurent_fit([&](cplx z) { return potential_I(z, lp, lat); }, lp.p, 1e-2, -2, 3, 32);
  auto Ik = [&](int k) { return c[k + 2]; };
  const double rho = indicial_roots_at_p()[0];
  std::array<cplx, 3> a{1.0, 0.0, 0.0};
  // [(J+rho)(J+rho-1) - I_{-2}] a_J = sum_{i=1}^{J} I_{i-2} a_{J-i}
  for (int J = 1; J <= 2; ++J) {
    cplx rhs = 0.0;
    for (int i = 1; i <= J; ++i) rhs += Ik(i - 2) * a[J - i];
    cplx lhs = (J + rho) * (J + rho - 1.0) - Ik(-2);
    if (J == 2) return rhs - lhs * a[2];
    a[J] = rhs / lhs;
  }
  return 0.0;
}

}  // namespace isl
