#include "isl/flow.hpp"

#include <cmath>

#include "isl/errors.hpp"
#include "isl/numdiff.hpp"

namespace isl {

namespace {

const cplx kC = kI / (4.0 * kPi);

void check_path(const std::vector<cplx>& path) {
  if (path.size() < 2) throw ValidationError("tau path needs at least two vertices");
  for (cplx t : path) check_tau(t);
}

void check_tols(const FlowOptions& opt) {
  if (opt.fixed_step > 0) return;
  auto ok = [](double x) { return x >= 1e-13 && x <= 1e-6; };
  if (!ok(opt.rel_tol) || !ok(opt.abs_tol)) throw ValidationError("tolerances must lie in [1e-13, 1e-6]");
}

OdeOptions ode_opts(const FlowOptions& opt) {
  OdeOptions o;
  o.rel_tol = opt.rel_tol;
  o.abs_tol = opt.abs_tol;
  o.fixed_step = opt.fixed_step;
  return o;
}

cplx elliptic_force(cplx p, const LatticeData& lat, const std::array<cplx, 4>& alpha_k) {
  cplx s = 0.0;
  for (int k = 0; k < 4; ++k)
    if (alpha_k[k] != 0.0) s += alpha_k[k] * wp_prime(p + 0.5 * lat.w(k), lat);
  return -s / (4.0 * kPi * kPi);
}

std::vector<cplx> lift_with_signs(const std::vector<cplx>& p, const std::vector<cplx>& tau,
                                  std::vector<double>* signs) {
  std::vector<cplx> out(p.size());
  if (signs) signs->assign(p.size(), 1.0);
  if (p.empty()) return out;
  out[0] = p[0];
  for (size_t i = 1; i < p.size(); ++i) {
    cplx rp = reduce_to_cell(p[i] - out[i - 1], tau[i]).z;
    cplx rm = reduce_to_cell(-p[i] - out[i - 1], tau[i]).z;
    if (std::abs(rp) <= std::abs(rm)) {
      out[i] = out[i - 1] + rp;
    } else {
      out[i] = out[i - 1] + rm;
      if (signs) (*signs)[i] = -1.0;
    }
  }
  return out;
}

}  // namespace

FlowRhs flow_rhs(const FlowState& s, const LatticeData& lat, const Vec4& n) {
  if (half_period_distance(s.p, lat.tau) <= 1e-8) throw PoleError("p lies on E_tau[2]");
  WeierstrassValues w2 = weierstrass_suite(2.0 * s.p, lat);
  cplx sum = 0.0;
  for (int k = 0; k < 4; ++k)
    if (nn1(n[k]) != 0.0) sum += nn1(n[k]) * wp_prime(s.p + 0.5 * lat.w(k), lat);
  FlowRhs r;
  r.p_dot = -kC * (2.0 * s.A - w2.zeta + 2.0 * s.p * lat.eta1);
  r.A_dot = kC * ((2.0 * w2.wp + 2.0 * lat.eta1) * s.A - 1.5 * w2.wp_prime - sum);
  return r;
}

FlowRhs flow_rhs(const FlowState& s, cplx tau, const Vec4& n) { return flow_rhs(s, lattice_invariants(tau), n); }

Trajectory integrate_flow(const FlowState& initial, const std::vector<cplx>& path, const Vec4& n,
                          const FlowOptions& opt, OdeStats* stats) {
  check_path(path);
  check_tols(opt);
  if (half_period_distance(initial.p, path.front()) <= opt.branch_guard)
    throw NumericalError("branch_point", "initial p is at a half period");
  ComplexRhs rhs = [&](cplx tau, const Vec& y) {
    if (tau.imag() < kMinImTau) throw DomainError("flow left the tau domain");
    FlowRhs r = flow_rhs({y[0], y[1]}, lattice_invariants(tau), n);
    Vec d(2);
    d << r.p_dot, r.A_dot;
    return d;
  };
  StepGuard guard = [&](cplx tau, const Vec& y) {
    if (half_period_distance(y[0], tau) < opt.branch_guard)
      throw NumericalError("branch_point", "p approached a half period (square-root branch point)");
  };
  Vec y0(2);
  y0 << initial.p, initial.A;
  auto samples = integrate_polyline(rhs, y0, path, opt.per_segment, ode_opts(opt), guard, stats);
  Trajectory tr;
  tr.n = n;
  tr.path = path;
  tr.rel_tol = opt.rel_tol;
  tr.abs_tol = opt.abs_tol;
  for (auto& s : samples) {
    tr.tau.push_back(s.x);
    tr.p.push_back(s.y[0]);
    tr.A.push_back(s.y[1]);
  }
  return tr;
}

std::vector<cplx> lift_continuous(const std::vector<cplx>& p, const std::vector<cplx>& tau) {
  return lift_with_signs(p, tau, nullptr);
}

cplx uniform_step(const std::vector<cplx>& x) {
  if (x.size() < 2) throw ValidationError("insufficient_samples", "need at least two samples");
  cplx h = (x.back() - x.front()) / double(x.size() - 1);
  for (size_t i = 0; i + 1 < x.size(); ++i)
    if (std::abs(x[i + 1] - x[i] - h) > 1e-9 * std::abs(h))
      throw ValidationError("non_uniform", "samples are not uniformly spaced");
  return h;
}

double elliptic_pvi_residual(const std::vector<cplx>& tau, const std::vector<cplx>& p,
                             const std::array<cplx, 4>& alpha_k) {
  if (tau.size() < 5 || p.size() != tau.size())
    throw ValidationError("insufficient_samples", "elliptic PVI residual needs at least 5 samples");
  cplx h = uniform_step(tau);
  auto pl = lift_continuous(p, tau);
  Vec f = Eigen::Map<const Vec>(pl.data(), Eigen::Index(pl.size()));
  Vec d2 = fd_derivative(f, h, 2);
  const int m = fd_margin(f.size());
  double worst = 0;
  for (Eigen::Index i = m; i < f.size() - m; ++i) {
    LatticeData lat = lattice_invariants(tau[i]);
    worst = std::max(worst, std::abs(d2[i] - elliptic_force(pl[i], lat, alpha_k)));
  }
  return worst;
}

double elliptic_pvi_residual(const Trajectory& traj, const PainleveParams& pp) {
  return elliptic_pvi_residual(traj.tau, traj.p, pp.alpha_k);
}

std::array<cplx, 4> alphas_from_n(const Vec4& n) {
  std::array<cplx, 4> a;
  for (int k = 0; k < 4; ++k) a[k] = 0.5 * (n[k] + 0.5) * (n[k] + 0.5);
  return a;
}

Vec4 n_from_alphas(const std::array<cplx, 4>& alpha_k) {
  Vec4 n;
  for (int k = 0; k < 4; ++k) {
    cplx v = std::sqrt(2.0 * alpha_k[k]) - 0.5;
    if (v.real() < -0.5) v = -v - 1.0;
    n[k] = v;
  }
  return n;
}

std::array<cplx, 4> thetas_from_n(const Vec4& n) { return {n[1] + 0.5, n[2] + 0.5, n[3] + 0.5, n[0] + 0.5}; }

PainleveParams pvi_from_thetas(const std::array<cplx, 4>& th) {
  PainleveParams pp;
  pp.alpha = 0.5 * th[3] * th[3];
  pp.beta = -0.5 * th[0] * th[0];
  pp.gamma = 0.5 * th[1] * th[1];
  pp.delta = 0.5 * (1.0 - th[2] * th[2]);
  pp.alpha_k = elliptic_from_pvi(pp.alpha, pp.beta, pp.gamma, pp.delta);
  pp.q_momentum = 0.0;
  return pp;
}

std::array<cplx, 4> elliptic_from_pvi(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  return {alpha, -beta, gamma, 0.5 - delta};
}

PainleveParams painleve_params_from_n(const Vec4& n) { return pvi_from_thetas(thetas_from_n(n)); }

cplx A_from_p(cplx p, cplx p_dot, const LatticeData& lat) {
  return 2.0 * kPi * kI * p_dot + 0.5 * (zeta(2.0 * p, lat) - 2.0 * p * lat.eta1);
}

cplx F_value(cplx p, cplx A, const LatticeData& lat) { return A + 0.5 * (zeta(2.0 * p, lat) - 2.0 * zeta(p, lat)); }

std::vector<cplx> A_from_trajectory(const Trajectory& traj) {
  cplx h = uniform_step(traj.tau);
  auto pl = lift_continuous(traj.p, traj.tau);
  Vec f = Eigen::Map<const Vec>(pl.data(), Eigen::Index(pl.size()));
  Vec d1 = fd_derivative(f, h, 1);
  const int m = fd_margin(f.size());
  std::vector<cplx> out(pl.size(), cplx(NAN, NAN));
  for (Eigen::Index i = m; i < f.size() - m; ++i) out[i] = A_from_p(pl[i], d1[i], lattice_invariants(traj.tau[i]));
  return out;
}

double F_log_derivative_residual(const Trajectory& traj) {
  if (traj.n.norm() != 0.0) throw ValidationError("F identity check needs n = (0,0,0,0)");
  if (traj.size() < 5) throw ValidationError("insufficient_samples", "F residual needs at least 5 samples");
  cplx h = uniform_step(traj.tau);
  std::vector<double> sg;
  auto pl = lift_with_signs(traj.p, traj.tau, &sg);
  const Eigen::Index N = Eigen::Index(pl.size());
  Vec F(N), target(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    LatticeData lat = lattice_invariants(traj.tau[i]);
    cplx A = (sg[i] < 0 ? -1.0 : 1.0) * traj.A[i];
    F[i] = F_value(pl[i], A, lat);
    target[i] = kI / (2.0 * kPi) * (2.0 * wp(2.0 * pl[i], lat) - wp(pl[i], lat) + lat.eta1);
  }
  double fmax = F.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < N; ++i)
    if (std::abs(F[i]) < 1e-14 * fmax) throw NumericalError("zero_crossing", "F vanishes on the path");
  Vec dF = fd_derivative(F, h, 1);
  const int m = fd_margin(N);
  double worst = 0;
  for (Eigen::Index i = m; i < N - m; ++i) worst = std::max(worst, std::abs(dF[i] / F[i] - target[i]));
  return worst;
}

Vec manin_rhs(cplx p, cplx q, const LatticeData& lat, const std::array<cplx, 4>& alpha_k) {
  Vec d(2);
  d << q, elliptic_force(p, lat, alpha_k);
  return d;
}

Vec kawai_rhs(cplx b, cplx mu, const LatticeData& lat, cplx theta) {
  WeierstrassValues w = weierstrass_suite(b, lat);
  Vec d(2);
  d << -kI / (2.0 * kPi) * (2.0 * mu - w.zeta + b * lat.eta1),
      kI / (2.0 * kPi) * (mu * w.wp + mu * lat.eta1 - 0.25 * (theta * theta - 1.0) * w.wp_prime);
  return d;
}

CP1Params cp1_params_from_thetas(const std::array<cplx, 4>& th) {
  CP1Params cp{th[0], th[1], th[2], th[3], 0.0};
  cplx ah = -0.5 * (cp.theta_t + cp.theta0 + cp.theta1 + cp.theta_inf - 1.0);
  cp.kappa_hat = ah * (ah + cp.theta_inf);
  return cp;
}

cplx cp1_K(cplx l, cplx mu, cplx t, const CP1Params& cp) {
  cplx lin = cp.theta0 * (l - 1.0) * (l - t) + cp.theta1 * l * (l - t) + (cp.theta_t - 1.0) * l * (l - 1.0);
  return (l * (l - 1.0) * (l - t) * mu * mu + cp.kappa_hat * (l - t) - lin * mu) / (t * (t - 1.0));
}

cplx cp1_dK_dmu(cplx l, cplx mu, cplx t, const CP1Params& cp) {
  cplx lin = cp.theta0 * (l - 1.0) * (l - t) + cp.theta1 * l * (l - t) + (cp.theta_t - 1.0) * l * (l - 1.0);
  return (2.0 * l * (l - 1.0) * (l - t) * mu - lin) / (t * (t - 1.0));
}

cplx cp1_dK_dlambda(cplx l, cplx mu, cplx t, const CP1Params& cp) {
  cplx cubic_d = 3.0 * l * l - 2.0 * (1.0 + t) * l + t;
  cplx lin_d = cp.theta0 * (2.0 * l - 1.0 - t) + cp.theta1 * (2.0 * l - t) + (cp.theta_t - 1.0) * (2.0 * l - 1.0);
  return (cubic_d * mu * mu + cp.kappa_hat - lin_d * mu) / (t * (t - 1.0));
}

Vec cp1_rhs(cplx lambda, cplx mu, cplx t, const CP1Params& cp) {
  if (std::abs(lambda) < 1e-8 || std::abs(lambda - 1.0) < 1e-8 || std::abs(lambda - t) < 1e-8)
    throw DomainError("lambda hits a fixed singular point");
  Vec d(2);
  d << cp1_dK_dmu(lambda, mu, t, cp), -cp1_dK_dlambda(lambda, mu, t, cp);
  return d;
}

double pvi_residual(const std::vector<cplx>& t, const std::vector<cplx>& lambda, const PainleveParams& pp) {
  if (t.size() < 5 || lambda.size() != t.size())
    throw ValidationError("insufficient_samples", "PVI residual needs at least 5 samples");
  cplx h = uniform_step(t);
  Vec f = Eigen::Map<const Vec>(lambda.data(), Eigen::Index(lambda.size()));
  Vec d1 = fd_derivative(f, h, 1), d2 = fd_derivative(f, h, 2);
  const int m = fd_margin(f.size());
  double worst = 0;
  for (Eigen::Index i = m; i < f.size() - m; ++i) {
    cplx l = f[i], tt = t[i], lp = d1[i];
    cplx rhs = 0.5 * (1.0 / l + 1.0 / (l - 1.0) + 1.0 / (l - tt)) * lp * lp -
               (1.0 / tt + 1.0 / (tt - 1.0) + 1.0 / (l - tt)) * lp +
               l * (l - 1.0) * (l - tt) / (tt * tt * (tt - 1.0) * (tt - 1.0)) *
                   (pp.alpha + pp.beta * tt / (l * l) + pp.gamma * (tt - 1.0) / ((l - 1.0) * (l - 1.0)) +
                    pp.delta * tt * (tt - 1.0) / ((l - tt) * (l - tt)));
    worst = std::max(worst, std::abs(d2[i] - rhs));
  }
  return worst;
}

std::vector<OdeSample> integrate_manin(cplx p0, cplx q0, const std::vector<cplx>& path,
                                       const std::array<cplx, 4>& alpha_k, const FlowOptions& opt) {
  check_path(path);
  check_tols(opt);
  ComplexRhs rhs = [&](cplx tau, const Vec& y) { return manin_rhs(y[0], y[1], lattice_invariants(tau), alpha_k); };
  Vec y0(2);
  y0 << p0, q0;
  return integrate_polyline(rhs, y0, path, opt.per_segment, ode_opts(opt));
}

std::vector<OdeSample> integrate_kawai(cplx b0, cplx mu0, const std::vector<cplx>& path, cplx theta,
                                       const FlowOptions& opt) {
  check_path(path);
  check_tols(opt);
  ComplexRhs rhs = [&](cplx tau, const Vec& y) { return kawai_rhs(y[0], y[1], lattice_invariants(tau), theta); };
  Vec y0(2);
  y0 << b0, mu0;
  return integrate_polyline(rhs, y0, path, opt.per_segment, ode_opts(opt));
}

std::vector<OdeSample> integrate_cp1(cplx lambda0, cplx mu0, const std::vector<cplx>& t_path, const CP1Params& cp,
                                     const FlowOptions& opt) {
  check_tols(opt);
  for (cplx t : t_path)
    if (std::abs(t) < 1e-8 || std::abs(t - 1.0) < 1e-8) throw DomainError("t path touches 0 or 1");
  ComplexRhs rhs = [&](cplx t, const Vec& y) { return cp1_rhs(y[0], y[1], t, cp); };
  Vec y0(2);
  y0 << lambda0, mu0;
  return integrate_polyline(rhs, y0, t_path, opt.per_segment, ode_opts(opt));
}

std::vector<OdeSample> integrate_cp1_tau(cplx lambda0, cplx mu0, const std::vector<cplx>& tau_path,
                                         const CP1Params& cp, const FlowOptions& opt) {
  check_path(tau_path);
  check_tols(opt);
  ComplexRhs rhs = [&](cplx tau, const Vec& y) {
    CurveMap cm = curve_map(lattice_invariants(tau));
    return Vec(cp1_rhs(y[0], y[1], cm.t, cp) * cm.dt_dtau);
  };
  Vec y0(2);
  y0 << lambda0, mu0;
  return integrate_polyline(rhs, y0, tau_path, opt.per_segment, ode_opts(opt));
}

}  // namespace isl
