#include "isl/elliptic.hpp"

#include <cmath>
#include <string>

#include "isl/errors.hpp"

namespace isl {

namespace {

constexpr int kMaxTerms = 512;
constexpr double kSeriesTol = 1e-18;

double binom(int n, int k) {
  static const double t[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  return t[n][k];
}

// Weierstrass values at an already reduced point, with eta1 supplied.
struct Core {
  cplx th[4];
  cplx zeta_r, wp, wpp;
};

Core core_at(cplx zr, cplx tau, cplx eta1) {
  Core c;
  auto th = theta1_series(zr, tau);
  for (int i = 0; i < 4; ++i) c.th[i] = th[i];
  cplx r1 = th[1] / th[0], r2 = th[2] / th[0], r3 = th[3] / th[0];
  c.zeta_r = eta1 * zr + r1;
  c.wp = -eta1 - (r2 - r1 * r1);
  c.wpp = -(r3 - 3.0 * r2 * r1 + 2.0 * r1 * r1 * r1);
  return c;
}

cplx theta_null(cplx tau, int which) {
  // which: 2, 3 or 4
  cplx sum = which == 2 ? 0.0 : 1.0;
  double acc = std::abs(sum);
  for (int n = 0; n < kMaxTerms; ++n) {
    cplx term;
    if (which == 2) {
      double h = n + 0.5;
      term = 2.0 * std::exp(kI * kPi * tau * (h * h));
    } else {
      if (n == 0) continue;
      double sgn = (which == 4 && (n % 2)) ? -1.0 : 1.0;
      term = 2.0 * sgn * std::exp(kI * kPi * tau * double(n * n));
    }
    sum += term;
    acc += std::abs(term);
    if (std::abs(term) < kSeriesTol * acc) return sum;
  }
  throw NumericalError("series", "theta null series did not converge");
}

}  // namespace

void check_tau(cplx tau) {
  if (!(tau.imag() >= kMinImTau))
    throw DomainError("Im(tau) = " + std::to_string(tau.imag()) + " below 0.05");
}

LatticePoint reduce_to_cell(cplx z, cplx tau) {
  double b = z.imag() / tau.imag();
  double a = z.real() - b * tau.real();
  LatticePoint lp;
  lp.n = int(std::floor(b + 0.5));
  lp.m = int(std::floor(a + 0.5));
  lp.z = z - double(lp.m) - double(lp.n) * tau;
  return lp;
}

double lattice_distance(cplx z, cplx tau) {
  cplx zr = reduce_to_cell(z, tau).z;
  double best = std::abs(zr);
  for (int j = -1; j <= 1; ++j)
    for (int k = -1; k <= 1; ++k) best = std::min(best, std::abs(zr - double(j) - double(k) * tau));
  return best;
}

double half_period_distance(cplx z, cplx tau) {
  double best = lattice_distance(z, tau);
  for (int k = 1; k < 4; ++k) best = std::min(best, lattice_distance(z - 0.5 * omega(k, tau), tau));
  return best;
}

std::array<cplx, 4> theta1_series(cplx z, cplx tau) {
  std::array<cplx, 4> sum{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> acc{0, 0, 0, 0};
  for (int n = 0; n < kMaxTerms; ++n) {
    double h = n + 0.5;
    double k = (2 * n + 1) * kPi;
    cplx a = ((n % 2) ? -2.0 : 2.0) * std::exp(kI * kPi * tau * (h * h));
    cplx s = std::sin(k * z), c = std::cos(k * z);
    std::array<cplx, 4> term{a * s, a * k * c, -a * k * k * s, -a * k * k * k * c};
    bool done = n > 0;
    for (int d = 0; d < 4; ++d) {
      sum[d] += term[d];
      double m = std::abs(term[d]);
      acc[d] += m;
      if (m > kSeriesTol * acc[d] && m != 0.0) done = false;
    }
    if (done) return sum;
  }
  throw NumericalError("series", "theta_1 series hit the term cap");
}

cplx theta1(cplx z, cplx tau, int deriv) {
  if (deriv < 0 || deriv > 3) throw ValidationError("theta1 derivative order must be 0..3");
  check_tau(tau);
  LatticePoint lp = reduce_to_cell(z, tau);
  auto th = theta1_series(lp.z, tau);
  if (lp.n == 0) return ((lp.m % 2) ? -1.0 : 1.0) * th[deriv];
  double nn = lp.n;
  cplx E = (((lp.m + lp.n) % 2) ? -1.0 : 1.0) * std::exp(-kI * kPi * nn * nn * tau - 2.0 * kI * kPi * nn * lp.z);
  cplx k = -2.0 * kI * kPi * nn;
  cplx out = 0.0;
  for (int j = 0; j <= deriv; ++j) out += binom(deriv, j) * std::pow(k, deriv - j) * th[j];
  return E * out;
}

cplx dedekind_eta(cplx tau) {
  check_tau(tau);
  cplx prod = 1.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    cplx qn = std::exp(2.0 * kI * kPi * tau * double(n));
    prod *= 1.0 - qn;
    if (std::abs(qn) < kSeriesTol) return std::exp(kI * kPi * tau / 12.0) * prod;
  }
  throw NumericalError("series", "eta product did not converge");
}

LatticeData lattice_invariants(cplx tau) {
  check_tau(tau);
  LatticeData L;
  L.tau = tau;
  auto th0 = theta1_series(0.0, tau);
  L.theta1_prime = th0[1];
  L.eta1 = -th0[3] / (3.0 * th0[1]);
  L.eta2 = tau * L.eta1 - 2.0 * kPi * kI;
  L.e1 = core_at(reduce_to_cell(0.5, tau).z, tau, L.eta1).wp;
  L.e2 = core_at(reduce_to_cell(0.5 * tau, tau).z, tau, L.eta1).wp;
  L.e3 = core_at(reduce_to_cell(0.5 + 0.5 * tau, tau).z, tau, L.eta1).wp;
  L.g2 = -4.0 * (L.e1 * L.e2 + L.e1 * L.e3 + L.e2 * L.e3);
  L.g3 = 4.0 * L.e1 * L.e2 * L.e3;
  L.dedekind_eta = dedekind_eta(tau);
  L.theta2 = theta_null(tau, 2);
  L.theta3 = theta_null(tau, 3);
  L.theta4 = theta_null(tau, 4);
  return L;
}

WeierstrassValues weierstrass_suite(cplx z, const LatticeData& lat) {
  LatticePoint lp = reduce_to_cell(z, lat.tau);
  if (lattice_distance(lp.z, lat.tau) < kPoleTol) throw PoleError("z lies on the lattice");
  Core c = core_at(lp.z, lat.tau, lat.eta1);
  WeierstrassValues w;
  w.wp = c.wp;
  w.wp_prime = c.wpp;
  w.wp_prime2 = 6.0 * c.wp * c.wp - 0.5 * lat.g2;
  cplx eta_w = lat.quasi(lp.m, lp.n);
  w.zeta = c.zeta_r + eta_w;
  cplx sig_r = std::exp(0.5 * lat.eta1 * lp.z * lp.z) * c.th[0] / lat.theta1_prime;
  if (lp.m == 0 && lp.n == 0) {
    w.sigma = sig_r;
  } else {
    cplx w_shift = double(lp.m) + double(lp.n) * lat.tau;
    long parity = long(lp.m) + lp.n + long(lp.m) * lp.n;
    double sgn = (parity % 2 != 0) ? -1.0 : 1.0;
    w.sigma = sgn * std::exp(eta_w * (lp.z + 0.5 * w_shift)) * sig_r;
  }
  return w;
}

WeierstrassValues weierstrass_suite(cplx z, cplx tau) { return weierstrass_suite(z, lattice_invariants(tau)); }

cplx wp(cplx z, const LatticeData& lat) {
  LatticePoint lp = reduce_to_cell(z, lat.tau);
  if (lattice_distance(lp.z, lat.tau) < kPoleTol) throw PoleError("z lies on the lattice");
  return core_at(lp.z, lat.tau, lat.eta1).wp;
}

cplx wp_prime(cplx z, const LatticeData& lat) {
  LatticePoint lp = reduce_to_cell(z, lat.tau);
  if (lattice_distance(lp.z, lat.tau) < kPoleTol) throw PoleError("z lies on the lattice");
  return core_at(lp.z, lat.tau, lat.eta1).wpp;
}

cplx zeta(cplx z, const LatticeData& lat) {
  LatticePoint lp = reduce_to_cell(z, lat.tau);
  if (lattice_distance(lp.z, lat.tau) < kPoleTol) throw PoleError("z lies on the lattice");
  return core_at(lp.z, lat.tau, lat.eta1).zeta_r + lat.quasi(lp.m, lp.n);
}

TauDerivatives tau_derivative_suite(cplx z, const LatticeData& lat) {
  const cplx c = kI / (4.0 * kPi);
  const cplx e = lat.eta1, g2 = lat.g2;
  WeierstrassValues w = weierstrass_suite(z, lat);
  cplx zr = w.zeta - z * e;
  TauDerivatives d;
  d.dlog_sigma = c * (w.wp - w.zeta * w.zeta + 2.0 * e * (z * w.zeta - 1.0) - g2 * z * z / 12.0);
  d.dzeta = c * (w.wp_prime + 2.0 * zr * w.wp + 2.0 * e * w.zeta - z * g2 / 6.0);
  d.dwp = -c * (2.0 * zr * w.wp_prime + 4.0 * (w.wp - e) * w.wp - 2.0 * g2 / 3.0);
  d.dwp_prime = -c * (6.0 * (w.wp - e) * w.wp_prime + zr * (12.0 * w.wp * w.wp - g2));
  d.deta1 = c * (2.0 * e * e - g2 / 6.0);
  d.dlog_theta1_prime = 3.0 * c * e;
  return d;
}

TauDerivatives tau_derivative_suite(cplx z, cplx tau) { return tau_derivative_suite(z, lattice_invariants(tau)); }

TauDerivatives tau_derivative_fd(cplx z, cplx tau, double h) {
  const double w[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  LatticeData l0 = lattice_invariants(tau);
  WeierstrassValues v0 = weierstrass_suite(z, l0);
  TauDerivatives d{};
  for (int k = -2; k <= 2; ++k) {
    if (k == 0) continue;
    LatticeData l = lattice_invariants(tau + double(k) * h);
    WeierstrassValues v = weierstrass_suite(z, l);
    const double c = w[k + 2] / h;
    d.dlog_sigma += c * std::log(v.sigma / v0.sigma);
    d.dzeta += c * v.zeta;
    d.dwp += c * v.wp;
    d.dwp_prime += c * v.wp_prime;
    d.deta1 += c * l.eta1;
    d.dlog_theta1_prime += c * std::log(l.theta1_prime / l0.theta1_prime);
  }
  return d;
}

std::array<double, 6> tau_derivative_rel_errors(const TauDerivatives& a, const TauDerivatives& b) {
  auto rel = [](cplx x, cplx y) { return std::abs(x - y) / std::max(std::abs(x), 1e-300); };
  return {rel(a.dlog_sigma, b.dlog_sigma), rel(a.dzeta, b.dzeta), rel(a.dwp, b.dwp),
          rel(a.dwp_prime, b.dwp_prime), rel(a.deta1, b.deta1), rel(a.dlog_theta1_prime, b.dlog_theta1_prime)};
}

CurveMap curve_map(const LatticeData& lat) {
  CurveMap cm;
  cm.t = (lat.e3 - lat.e1) / (lat.e2 - lat.e1);
  cplx t2 = lat.theta2 * lat.theta2;
  cm.dt_dtau = -kI * kPi * cm.t * t2 * t2;
  return cm;
}

cplx curve_map_point(cplx p, const LatticeData& lat) { return (wp(p, lat) - lat.e1) / (lat.e2 - lat.e1); }

namespace {

void box_sums(cplx z, cplx tau, int R, cplx& wp_sum, cplx& zeta_sum) {
  wp_sum = 1.0 / (z * z);
  zeta_sum = 1.0 / z;
  for (int m = -R; m <= R; ++m) {
    for (int n = -R; n <= R; ++n) {
      if (m == 0 && n == 0) continue;
      cplx w = double(m) + double(n) * tau;
      cplx iw = 1.0 / w;
      cplx izw = 1.0 / (z - w);
      wp_sum += izw * izw - iw * iw;
      zeta_sum += izw + iw + z * iw * iw;
    }
  }
}

// Two Richardson passes; the truncation tail behaves like a R^-2 + b R^-3.
cplx richardson(cplx s1, cplx s2, cplx s4) {
  cplx a = (4.0 * s1 - s2) / 3.0;
  cplx b = (4.0 * s2 - s4) / 3.0;
  return (8.0 * a - b) / 7.0;
}

}  // namespace

OracleValues oracle_lattice_sums(cplx z, cplx tau, int radius) {
  if (radius < 20) throw ValidationError("oracle radius must be at least 20");
  check_tau(tau);
  auto eval = [&](cplx x, cplx& wpv, cplx& zv) {
    cplx w[3], zz[3];
    int base = radius / 4 * 4;
    int R[3] = {base, base / 2, base / 4};
    for (int i = 0; i < 3; ++i) box_sums(x, tau, R[i], w[i], zz[i]);
    wpv = richardson(w[0], w[1], w[2]);
    zv = richardson(zz[0], zz[1], zz[2]);
  };
  OracleValues o;
  eval(z, o.wp, o.zeta);
  cplx wh, zh;
  eval(0.5, wh, zh);
  o.eta1 = 2.0 * zh;
  return o;
}

}  // namespace isl
