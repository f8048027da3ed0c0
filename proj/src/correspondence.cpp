#include "isl/correspondence.hpp"

#include <cmath>

#include "isl/errors.hpp"
#include "isl/hitchin.hpp"
#include "isl/numdiff.hpp"

namespace isl {

namespace {

cplx log1p_c(cplx u) { return std::log(1.0 + u); }

cplx frak_p(cplx x, cplx t) { return 4.0 * x * (x - 1.0) * (x - t); }
cplx frak_p_prime(cplx x, cplx t) { return 4.0 * ((x - 1.0) * (x - t) + x * (x - t) + x * (x - 1.0)); }

struct TorusCurve {
  cplx b, t, lambda;
  WeierstrassValues wpv;
};

TorusCurve torus_curve(const LameParams& lp, const LatticeData& lat) {
  if (half_period_distance(lp.p, lp.tau) <= 1e-8) throw PoleError("p lies on E_tau[2]");
  TorusCurve c;
  c.b = lat.e2 - lat.e1;
  c.t = (lat.e3 - lat.e1) / c.b;
  c.wpv = weierstrass_suite(lp.p, lat);
  c.lambda = (c.wpv.wp - lat.e1) / c.b;
  return c;
}

// Numerator q(x) of the transformed potential: p2_hat = -q/frak_p + gauge terms.
cplx q_of_x(cplx x, const LameParams& lp, const LatticeData& lat, const TorusCurve& c, bool drop_t_pole) {
  const Vec4& n = lp.n;
  const cplx b = c.b, t = c.t, lam = c.lambda;
  cplx q = nn1(n[0]) * (x + lat.e1 / b) + nn1(n[1]) * (lat.e1 / b + t / x) +
           nn1(n[2]) * (lat.e2 / b + (1.0 - t) / (x - 1.0));
  q += drop_t_pole ? nn1(n[3]) * lat.e3 / b : nn1(n[3]) * (lat.e3 / b + t * (t - 1.0) / (x - t));
  cplx dx = x - lam;
  q += 0.75 * ((frak_p(x, t) + frak_p(lam, t)) / (2.0 * dx * dx) - 2.0 * lat.e1 / b - 2.0 * x - 2.0 * c.wpv.wp / b);
  q += lp.A * (2.0 * c.wpv.zeta / b - c.wpv.wp_prime / (b * b * dx));
  q += lp.B / b;
  return q;
}

}  // namespace

CP1Params cp1_params(const FuchsianParams& fp) {
  return cp1_params_from_thetas({fp.theta0, fp.theta1, fp.theta_t, fp.theta_inf});
}

void validate_fuchsian(const FuchsianParams& fp) {
  for (cplx s : {cplx(0.0), cplx(1.0), fp.t})
    if (std::abs(fp.lambda - s) < 1e-8) throw ValidationError("lambda coincides with a fixed singular point");
  if (std::abs(fp.t) < 1e-8 || std::abs(fp.t - 1.0) < 1e-8) throw ValidationError("degenerate t");
  cplx ah = -0.5 * (fp.theta_t + fp.theta0 + fp.theta1 + fp.theta_inf - 1.0);
  if (std::abs(ah - fp.alpha_hat) > 1e-10 * (1.0 + std::abs(ah))) throw ValidationError("alpha_hat inconsistent");
  cplx kh = ah * (ah + fp.theta_inf);
  if (std::abs(kh - fp.kappa_hat) > 1e-10 * (1.0 + std::abs(kh))) throw ValidationError("kappa_hat inconsistent");
  cplx K = cp1_K(fp.lambda, fp.mu, fp.t, cp1_params(fp));
  if (std::abs(K - fp.K) > 1e-8 * (1.0 + std::abs(K))) throw ValidationError("K inconsistent with (lambda, mu, t)");
}

cplx mu_from_lame(const LameParams& lp, const LatticeData& lat) {
  TorusCurve c = torus_curve(lp, lat);
  const Vec4& n = lp.n;
  const cplx t = c.t, lam = c.lambda, b = c.b;
  return (2.0 * n[3] - 1.0) / (4.0 * (lam - t)) + (2.0 * n[2] - 1.0) / (4.0 * (lam - 1.0)) +
         (2.0 * n[1] - 1.0) / (4.0 * lam) + 0.375 * frak_p_prime(lam, t) / frak_p(lam, t) +
         lp.A * c.wpv.wp_prime / (b * b * frak_p(lam, t));
}

cplx K_from_lame(const LameParams& lp, const LatticeData& lat) {
  TorusCurve c = torus_curve(lp, lat);
  const Vec4& n = lp.n;
  const cplx t = c.t, lam = c.lambda;
  cplx R = nn1(n[3]) * t * (t - 1.0);
  cplx g = 1.0 / (4.0 * t * (t - 1.0));
  cplx gd = -(2.0 * t - 1.0) / (4.0 * t * t * (t - 1.0) * (t - 1.0));
  cplx L1r = -1.0 / (2.0 * (t - lam)) - n[1] / (2.0 * t) - n[2] / (2.0 * (t - 1.0));
  cplx res = -(q_of_x(t, lp, lat, c, true) * g + R * gd) + 0.5 * L1r - 0.25 * n[3] * (1.0 / t + 1.0 / (t - 1.0)) -
             n[3] * L1r;
  return -res;
}

cplx K_alternate_form(const LameParams& lp, const LatticeData& lat) {
  TorusCurve c = torus_curve(lp, lat);
  const Vec4& n = lp.n;
  const cplx t = c.t, lam = c.lambda, b = c.b, w = c.wpv.wp, A = lp.A;
  return -(2.0 * n[2] * n[3] - n[2] - n[3]) / (4.0 * (t - 1.0)) - (2.0 * n[1] * n[3] - n[1] - n[3]) / (4.0 * t) -
         (2.0 * n[3] - 1.0) / (4.0 * (t - lam)) +
         1.0 / (4.0 * t * (t - 1.0)) *
             (1.5 * lam * (lam - 1.0) / (lam - t) - 1.5 * (w + lat.e3) / b + A * c.wpv.wp_prime / ((lam - t) * b * b) +
              nn1(n[0]) * lat.e3 / b + nn1(n[1]) * lat.e2 / b + nn1(n[2]) * lat.e1 / b - 2.0 * nn1(n[3]) * lat.e3 / b +
              2.0 / b * A * w + lp.B / b);
}

FuchsianParams lame_to_fuchsian(const LameParams& lp_in) {
  validate_lame(lp_in);
  if (!lp_in.apparent) throw ValidationError("correspondence needs an apparent configuration");
  LatticeData lat = lattice_invariants(lp_in.tau);
  LameParams lp = lp_in;
  lp.B = apparent_B(lp.p, lp.A, lp.n, lat);
  TorusCurve c = torus_curve(lp, lat);
  FuchsianParams fp;
  fp.t = c.t;
  fp.lambda = c.lambda;
  auto th = thetas_from_n(lp.n);
  fp.theta0 = th[0];
  fp.theta1 = th[1];
  fp.theta_t = th[2];
  fp.theta_inf = th[3];
  fp.alpha_hat = -0.5 * (fp.theta_t + fp.theta0 + fp.theta1 + fp.theta_inf - 1.0);
  fp.kappa_hat = fp.alpha_hat * (fp.alpha_hat + fp.theta_inf);
  fp.mu = mu_from_lame(lp, lat);
  fp.K = K_from_lame(lp, lat);
  cplx K98 = cp1_K(fp.lambda, fp.mu, fp.t, cp1_params(fp));
  if (std::abs(fp.K - K98) > 1e-9 * (1.0 + std::abs(K98)))
    throw NumericalError("inconsistency", "torus-side K disagrees with the closed form");
  return fp;
}

LameParams fuchsian_to_lame(const FuchsianParams& fp, cplx tau) {
  validate_fuchsian(fp);
  LatticeData lat = lattice_invariants(tau);
  CurveMap cm = curve_map(lat);
  if (std::abs(cm.t - fp.t) > 1e-8 * (1.0 + std::abs(cm.t))) throw ValidationError("t_mismatch", "t differs from t(tau)");
  const cplx b = lat.e2 - lat.e1, t = cm.t, lam = fp.lambda;
  cplx p = canonical_p(invert_wp(lat.e1 + lam * b, lat), tau);
  Vec4 n;
  n << fp.theta_inf - 0.5, fp.theta0 - 0.5, fp.theta1 - 0.5, fp.theta_t - 0.5;
  cplx wpp = wp_prime(p, lat);
  if (std::abs(wpp) < 1e-12) throw NumericalError("degenerate", "wp'(p) vanishes");
  cplx rest = (2.0 * n[3] - 1.0) / (4.0 * (lam - t)) + (2.0 * n[2] - 1.0) / (4.0 * (lam - 1.0)) +
              (2.0 * n[1] - 1.0) / (4.0 * lam) + 0.375 * frak_p_prime(lam, t) / frak_p(lam, t);
  cplx A = (fp.mu - rest) * b * b * frak_p(lam, t) / wpp;
  return make_apparent(n, p, A, tau);
}

FuchsianCoefficients fuchsian_coefficients(const FuchsianParams& fp, const LameParams& lp_in) {
  FuchsianCoefficients fc;
  FuchsianParams f = fp;
  auto pole_guard = [f](cplx x) {
    for (cplx s : {cplx(0.0), cplx(1.0), f.t, f.lambda})
      if (std::abs(x - s) < kPoleTol) throw PoleError("evaluation at a singular point");
  };
  fc.p1 = [f, pole_guard](cplx x) {
    pole_guard(x);
    return (1.0 - f.theta_t) / (x - f.t) + (1.0 - f.theta0) / x + (1.0 - f.theta1) / (x - 1.0) - 1.0 / (x - f.lambda);
  };
  fc.p2 = [f, pole_guard](cplx x) {
    pole_guard(x);
    const cplx t = f.t, l = f.lambda;
    return f.kappa_hat / (x * (x - 1.0)) - t * (t - 1.0) * f.K / (x * (x - 1.0) * (x - t)) +
           l * (l - 1.0) * f.mu / (x * (x - 1.0) * (x - l));
  };
  LatticeData lat = lattice_invariants(lp_in.tau);
  LameParams lp = lp_in;
  TorusCurve c = torus_curve(lp, lat);
  const Vec4 n = lp.n;
  fc.p1_hat = [c, n, pole_guard](cplx x) {
    pole_guard(x);
    return (0.5 - n[1]) / x + (0.5 - n[2]) / (x - 1.0) + (0.5 - n[3]) / (x - c.t) - 1.0 / (x - c.lambda);
  };
  fc.p2_hat = [c, n, lp, lat, pole_guard](cplx x) {
    pole_guard(x);
    const cplx t = c.t, l = c.lambda;
    cplx L1 = -0.5 / (x - l) - n[1] / (2.0 * x) - n[2] / (2.0 * (x - 1.0)) - n[3] / (2.0 * (x - t));
    cplx L1d = 0.5 / ((x - l) * (x - l)) + n[1] / (2.0 * x * x) + n[2] / (2.0 * (x - 1.0) * (x - 1.0)) +
               n[3] / (2.0 * (x - t) * (x - t));
    cplx P = frak_p(x, t);
    return -q_of_x(x, lp, lat, c, false) / P + frak_p_prime(x, t) / (2.0 * P) * L1 + L1d + L1 * L1;
  };
  return fc;
}

cplx residue(const RationalFn& f, cplx x0, double radius) {
  Vec c = laurent_fit(f, x0, radius, -2, 4, 32);
  return c[1];  // coefficient of (x-x0)^-1
}

cplx log_psi(cplx x, const FuchsianParams& fp, const Vec4& n) {
  return -0.5 * std::log(x - fp.lambda) - 0.5 * n[1] * std::log(x) - 0.5 * n[2] * std::log(x - 1.0) -
         0.5 * n[3] * std::log(x - fp.t);
}

std::vector<GaugeSample> gauge_transport(const LameParams& lp, const std::function<cplx(cplx)>& log_y,
                                         const std::vector<cplx>& zs) {
  LatticeData lat = lattice_invariants(lp.tau);
  FuchsianParams fp = lame_to_fuchsian(lp);
  FuchsianCoefficients fc = fuchsian_coefficients(fp, lp);
  const cplx b = lat.e2 - lat.e1;
  std::vector<GaugeSample> out;
  for (cplx z0 : zs) {
    GaugeSample gs;
    gs.z = z0;
    gs.x = (wp(z0, lat) - lat.e1) / b;
    double dmin = INFINITY;
    for (cplx s : {cplx(0.0), cplx(1.0), fp.t, fp.lambda}) dmin = std::min(dmin, std::abs(gs.x - s));
    if (dmin < 1e-3) throw ValidationError("near_branch_point", "sample maps too close to a singular point of the CP^1 equation");
    double h = std::min(1e-3, 0.05 * dmin) * std::max(1.0, std::abs(gs.x));
    h = std::min(h, 0.05 * dmin);
    cplx ly0 = log_y(z0), lpsi0 = log_psi(gs.x, fp, lp.n);
    gs.y_hat = std::exp(ly0 - lpsi0);
    // ln(y/psi) relative to the centre, unwrapped locally
    std::array<cplx, 5> v;
    for (int k = -2; k <= 2; ++k) {
      cplx xk = gs.x + double(k) * h;
      cplx zk = z0;
      if (k != 0) {
        zk = z0;
        for (int it = 0; it < 40; ++it) {
          WeierstrassValues w = weierstrass_suite(zk, lat);
          cplx dz = (w.wp - (lat.e1 + b * xk)) / w.wp_prime;
          zk -= dz;
          if (std::abs(dz) < 1e-15 * (1.0 + std::abs(zk))) break;
        }
        if (std::abs(zk - z0) > 0.1) throw NumericalError("newton_divergence", "local inverse of x(z) failed");
      }
      cplx dly = log_y(zk) - ly0;
      dly = cplx(dly.real(), std::remainder(dly.imag(), 2.0 * kPi));
      cplx dpsi = -0.5 * log1p_c(double(k) * h / (gs.x - fp.lambda)) - 0.5 * lp.n[1] * log1p_c(double(k) * h / gs.x) -
                  0.5 * lp.n[2] * log1p_c(double(k) * h / (gs.x - 1.0)) -
                  0.5 * lp.n[3] * log1p_c(double(k) * h / (gs.x - fp.t));
      v[k + 2] = std::exp(dly - dpsi);
    }
    cplx d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    cplx d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    cplx a = d2, bb = fc.p1(gs.x) * d1, cc = fc.p2(gs.x) * v[2];
    gs.residual = std::abs(a + bb + cc) / (std::abs(a) + std::abs(bb) + std::abs(cc));
    out.push_back(gs);
  }
  return out;
}

cplx RiemannScheme::exponent_sum() const {
  cplx s = 0.0;
  for (const auto& e : exponents) s += e[0] + e[1];
  return s;
}

RiemannScheme scheme_fuchsian(const FuchsianParams& fp) {
  RiemannScheme rs;
  rs.points = {"t", "0", "1", "inf", "lambda"};
  rs.exponents = {{{0.0, fp.theta_t}, {0.0, fp.theta0}, {0.0, fp.theta1},
                   {fp.alpha_hat, fp.alpha_hat + fp.theta_inf}, {0.0, 2.0}}};
  return rs;
}

RiemannScheme scheme_lame_cp1(const Vec4& n) {
  RiemannScheme rs;
  rs.points = {"0", "1", "t", "inf", "lambda"};
  rs.exponents = {{{-0.5 * n[1], 0.5 * (n[1] + 1.0)}, {-0.5 * n[2], 0.5 * (n[2] + 1.0)},
                   {-0.5 * n[3], 0.5 * (n[3] + 1.0)}, {-0.5 * n[0], 0.5 * (n[0] + 1.0)}, {-0.5, 1.5}}};
  return rs;
}

RiemannScheme scheme_gauged(const Vec4& n) {
  RiemannScheme rs;
  rs.points = {"0", "1", "t", "inf", "lambda"};
  cplx ah = -0.5 * (1.0 + n.sum());
  rs.exponents = {{{0.0, n[1] + 0.5}, {0.0, n[2] + 0.5}, {0.0, n[3] + 0.5}, {ah, ah + n[0] + 0.5}, {0.0, 2.0}}};
  return rs;
}

}  // namespace isl
