#include "isl/hitchin.hpp"

#include <cmath>

#include "isl/errors.hpp"

namespace isl {

void validate_seed(const HitchinSeed& seed) {
  auto near_half = [](cplx x) { return std::abs(2.0 * x - std::round(2.0 * x.real())) < 1e-8; };
  if (near_half(seed.r) && near_half(seed.s)) throw ValidationError("Hitchin seed lies in (1/2)Z^2");
}

cplx invert_wp(cplx w, const LatticeData& lat) {
  const cplx tau = lat.tau;
  // coarse scan of the cell plus the pole expansion wp ~ 1/p^2
  cplx p = 1.0 / std::sqrt(w);
  double best = std::abs(wp(p, lat) - w) / (1.0 + std::abs(w));
  const int G = 16;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      cplx q = (-0.5 + (i + 0.5) / G) + (-0.5 + (j + 0.5) / G) * tau;
      double d = std::abs(wp(q, lat) - w) / (1.0 + std::abs(w));
      if (d < best) {
        best = d;
        p = q;
      }
    }
  }
  for (int it = 0; it < 100; ++it) {
    WeierstrassValues v = weierstrass_suite(p, lat);
    cplx f = v.wp - w;
    if (f == 0.0) return p;
    if (std::abs(v.wp_prime) < 1e-300) break;
    cplx dp = f / v.wp_prime;
    // damp very large steps
    if (std::abs(dp) > 0.25) dp *= 0.25 / std::abs(dp);
    p = reduce_to_cell(p - dp, tau).z;
    if (std::abs(dp) < 1e-14 * (1.0 + std::abs(p))) {
      if (std::abs(wp(p, lat) - w) <= 1e-9 * (1.0 + std::abs(w))) return p;
      break;
    }
  }
  throw NumericalError("newton_divergence", "wp inversion did not converge");
}

cplx hitchin_wp(const HitchinSeed& seed, const LatticeData& lat) {
  validate_seed(seed);
  cplx a = seed.r + seed.s * lat.tau;
  WeierstrassValues v = weierstrass_suite(a, lat);
  cplx den = v.zeta - seed.r * lat.eta1 - seed.s * lat.eta2;
  if (std::abs(den) < 1e-12) throw NumericalError("degenerate_seed", "zeta(a) - r eta1 - s eta2 vanishes");
  return v.wp + v.wp_prime / (2.0 * den);
}

HitchinP hitchin_p(const HitchinSeed& seed, const LatticeData& lat) {
  HitchinP h;
  h.wp_p = hitchin_wp(seed, lat);
  h.p = canonical_p(invert_wp(h.wp_p, lat), lat.tau);
  return h;
}

HitchinP hitchin_p(const HitchinSeed& seed, cplx tau) { return hitchin_p(seed, lattice_invariants(tau)); }

cplx hitchin_A(cplx p, cplx a1, const LatticeData& lat) {
  return 0.5 * (zeta(p + a1, lat) + zeta(p - a1, lat) - zeta(2.0 * p, lat));
}

HitchinLame hitchin_lame_data(const HitchinSeed& seed, cplx tau) {
  LatticeData lat = lattice_invariants(tau);
  HitchinP hp = hitchin_p(seed, lat);
  HitchinLame h;
  h.seed = seed;
  h.a1 = seed.r + seed.s * tau;
  cplx A = hitchin_A(hp.p, h.a1, lat);
  h.params = make_apparent(Vec4::Zero(), hp.p, A, tau);
  h.c = zeta(h.a1 + hp.p, lat) + zeta(h.a1 - hp.p, lat);
  h.constraint_residual = h.c - 2.0 * (seed.r * lat.eta1 + seed.s * lat.eta2);
  return h;
}

std::array<Mat2, 3> expected_monodromy(const HitchinSeed& seed) {
  Mat2 g = -Mat2::Identity();
  Mat2 l1 = Mat2::Zero(), l2 = Mat2::Zero();
  l1(0, 0) = std::exp(-2.0 * kPi * kI * seed.s);
  l1(1, 1) = std::exp(2.0 * kPi * kI * seed.s);
  l2(0, 0) = std::exp(2.0 * kPi * kI * seed.r);
  l2(1, 1) = std::exp(-2.0 * kPi * kI * seed.r);
  return {g, l1, l2};
}

cplx hitchin_log_y(cplx z, const HitchinLame& h, double sign) {
  LatticeData lat = lattice_invariants(h.params.tau);
  const cplx p = h.params.p;
  return sign * 0.5 * z * h.c + std::log(weierstrass_suite(z - sign * h.a1, lat).sigma) -
         0.5 * (std::log(weierstrass_suite(z + p, lat).sigma) + std::log(weierstrass_suite(z - p, lat).sigma));
}

double hitchin_solution_residual(const HitchinLame& h, const std::vector<cplx>& zs) {
  LatticeData lat = lattice_invariants(h.params.tau);
  const cplx p = h.params.p;
  double worst = 0;
  for (cplx z : zs) {
    WeierstrassValues pl = weierstrass_suite(z + p, lat), mi = weierstrass_suite(z - p, lat);
    cplx I = potential_I(z, h.params, lat);
    for (double sg : {1.0, -1.0}) {
      WeierstrassValues wa = weierstrass_suite(z - sg * h.a1, lat);
      cplx g = sg * 0.5 * h.c + wa.zeta - 0.5 * (pl.zeta + mi.zeta);
      cplx gp = -wa.wp + 0.5 * (pl.wp + mi.wp);
      worst = std::max(worst, std::abs(gp + g * g - I) / (1.0 + std::abs(I)));
    }
  }
  return worst;
}

cplx schwarzian(cplx f1, cplx f2, cplx f3) {
  cplx r = f2 / f1;
  return f3 / f1 - 1.5 * r * r;
}

double schwarzian_residual(const HitchinSeed& seed, cplx tau, const std::vector<cplx>& zs) {
  HitchinLame h = hitchin_lame_data(seed, tau);
  LatticeData lat = lattice_invariants(tau);
  double worst = 0;
  for (cplx z : zs) {
    if (lattice_distance(z - h.params.p, tau) < 1e-3 || lattice_distance(z + h.params.p, tau) < 1e-3)
      throw ValidationError("sample near a singular point");
    WeierstrassValues m = weierstrass_suite(z - h.a1, lat), pz = weierstrass_suite(z + h.a1, lat);
    cplx g = h.c + m.zeta - pz.zeta;
    cplx g1 = -m.wp + pz.wp;
    cplx g2 = -m.wp_prime + pz.wp_prime;
    if (std::abs(g) < 1e-10) throw ValidationError("sample near a zero of f'");
    // f'/f = g; the common factor f cancels in the Schwarzian
    cplx s = schwarzian(g, g1 + g * g, g2 + 3.0 * g * g1 + g * g * g);
    cplx I = potential_I(z, h.params, lat);
    worst = std::max(worst, std::abs(s + 2.0 * I) / (1.0 + std::abs(I)));
  }
  return worst;
}

std::array<cplx, 2> hitchin_translation_factors(const HitchinLame& h, const std::vector<cplx>& path) {
  LatticeData lat = lattice_invariants(h.params.tau);
  const cplx p = h.params.p;
  // Gauss-Legendre 10-point nodes on [-1, 1]
  static const double xg[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                               0.9739065285171717};
  static const double wg[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                               0.0666713443086881};
  cplx integral = 0.0;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    cplx a = path[k], b = path[k + 1];
    int pieces = std::max(1, int(std::ceil(std::abs(b - a) / 0.01)));
    for (int q = 0; q < pieces; ++q) {
      cplx u0 = a + (b - a) * (double(q) / pieces), u1 = a + (b - a) * (double(q + 1) / pieces);
      cplx mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
      for (int i = 0; i < 5; ++i) {
        for (double sg : {-1.0, 1.0}) {
          cplx z = mid + sg * xg[i] * half;
          integral += wg[i] * half * (zeta(z + p, lat) + zeta(z - p, lat));
        }
      }
    }
  }
  const cplx z0 = path.front(), z1 = path.back(), w = z1 - z0;
  std::array<cplx, 2> out;
  int idx = 0;
  for (double sg : {1.0, -1.0}) {
    cplx num = weierstrass_suite(z1 - sg * h.a1, lat).sigma;
    cplx den = weierstrass_suite(z0 - sg * h.a1, lat).sigma;
    out[idx++] = std::exp(sg * 0.5 * h.c * w - 0.5 * integral) * num / den;
  }
  return out;
}

Trajectory hitchin_trajectory(const HitchinSeed& seed, const std::vector<cplx>& path, int per_segment) {
  if (path.size() < 2) throw ValidationError("tau path needs at least two vertices");
  Trajectory tr;
  tr.path = path;
  for (size_t k = 0; k + 1 < path.size(); ++k)
    for (int i = (k == 0 ? 0 : 1); i <= per_segment; ++i)
      tr.tau.push_back(path[k] + (path[k + 1] - path[k]) * (double(i) / per_segment));
  std::vector<cplx> raw;
  for (cplx t : tr.tau) raw.push_back(hitchin_p(seed, t).p);
  tr.p = lift_continuous(raw, tr.tau);
  for (size_t i = 0; i < tr.tau.size(); ++i) {
    LatticeData lat = lattice_invariants(tr.tau[i]);
    tr.A.push_back(hitchin_A(tr.p[i], seed.r + seed.s * tr.tau[i], lat));
  }
  return tr;
}

}  // namespace isl
