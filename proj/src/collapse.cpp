#include "isl/collapse.hpp"

#include <cmath>

#include "isl/errors.hpp"

namespace isl {

namespace {

cplx small_rep(cplx p, cplx tau) { return reduce_to_cell(p, tau).z; }

Vec flow_vec(cplx tau, const Vec& y, const Vec4& n) {
  if (tau.imag() < kMinImTau) throw DomainError("flow left the tau domain");
  FlowRhs r = flow_rhs({y[0], y[1]}, lattice_invariants(tau), n);
  Vec d(2);
  d << r.p_dot, r.A_dot;
  return d;
}

std::vector<OdeSample> run(const Vec& y0, cplx a, cplx b, const std::vector<double>& fr, const Vec4& n, double tol) {
  OdeOptions o;
  o.rel_tol = tol;
  o.abs_tol = tol * 1e-2;
  return integrate_segment([&](cplx x, const Vec& y) { return flow_vec(x, y, n); }, y0, a, b, fr, o);
}

}  // namespace

cplx branch_c0_squared(cplx n0, Branch branch) {
  cplx th4 = n0 + 0.5;
  return (branch == Branch::Plus ? 1.0 : -1.0) * kI * th4 / kPi;
}

CollapseData collapse_constants_fitted(const Vec4& n, Branch branch, cplx c0_squared, cplx h_tilde, cplx tau0) {
  cplx th4 = n[0] + 0.5;
  if (std::abs(th4) < 1e-12) throw ValidationError("zero_theta4", "n0 + 1/2 must be nonzero");
  LatticeData lat = lattice_invariants(tau0);
  CollapseData cd;
  cd.tau0 = tau0;
  cd.branch = branch;
  cd.c0_squared = c0_squared;
  cd.h_tilde = h_tilde;
  cd.m = branch == Branch::Plus ? n[0] + 1.0 : n[0] - 1.0;
  cd.c = kPi * kI * c0_squared + 0.25;
  cd.t0 = curve_map(lat).t;
  cd.beta = (branch == Branch::Plus ? -1.0 : 1.0) * cd.t0 * (cd.t0 - 1.0) / th4;
  cplx s = 0.0;
  for (int j = 1; j <= 3; ++j) s += nn1(n[j]) * lat.e(j);
  cd.B0 = 2.0 * kPi * kI * c0_squared * (4.0 * kPi * kI * h_tilde - lat.eta1) - s;
  return cd;
}

CollapseData collapse_constants(const Vec4& n, Branch branch, cplx h_tilde, cplx tau0) {
  if (std::abs(n[0] + 0.5) < 1e-12) throw ValidationError("zero_theta4", "n0 + 1/2 must be nonzero");
  return collapse_constants_fitted(n, branch, branch_c0_squared(n[0], branch), h_tilde, tau0);
}

FlowState collapse_asymptotic_state(cplx c0_squared, cplx h_tilde, cplx tau0, cplx delta) {
  cplx c0 = std::sqrt(c0_squared);
  cplx sd = std::sqrt(delta);
  cplx p = c0 * sd * (1.0 + h_tilde * delta);
  cplx pd = 0.5 * c0 / sd * (1.0 + 3.0 * h_tilde * delta);
  return {p, A_from_p(p, pd, lattice_invariants(tau0 + delta))};
}

CollapseFit fit_collapse(const Trajectory& traj, double window, int degree) {
  if (traj.size() < 2) throw ValidationError("insufficient_samples", "trajectory too short");
  double pmin = INFINITY;
  for (size_t i = 0; i < traj.size(); ++i) pmin = std::min(pmin, std::abs(small_rep(traj.p[i], traj.tau[i])));
  if (pmin >= 0.02) throw NumericalError("non_vanishing_p", "p stays away from 0 along the trajectory");
  const cplx tend = traj.tau.back();
  std::vector<size_t> idx;
  for (size_t i = 0; i < traj.size(); ++i)
    if (std::abs(traj.tau[i] - tend) < window) idx.push_back(i);
  if (int(idx.size()) < std::max(8, degree + 2)) throw NumericalError("ill_conditioned", "too few samples near tau0");
  double scale = 0;
  for (size_t i : idx) scale = std::max(scale, std::abs(traj.tau[i] - tend));
  Eigen::MatrixXcd V(idx.size(), degree + 1);
  Vec rhs(idx.size());
  double pmax = 0;
  for (size_t r = 0; r < idx.size(); ++r) {
    cplx u = (traj.tau[idx[r]] - tend) / scale;
    cplx pw = 1.0;
    for (int k = 0; k <= degree; ++k, pw *= u) V(r, k) = pw;
    cplx ps = small_rep(traj.p[idx[r]], traj.tau[idx[r]]);
    rhs[r] = ps * ps;
    pmax = std::max(pmax, std::abs(rhs[r]));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
  Vec c = qr.solve(rhs);
  if (qr.rank() < degree + 1) throw NumericalError("ill_conditioned", "rank-deficient fit");
  CollapseFit fit;
  fit.samples = int(idx.size());
  fit.residual = (V * c - rhs).norm() / std::sqrt(double(idx.size())) / pmax;
  auto P = [&](cplx u, int d) {
    cplx s = 0.0;
    for (int k = degree; k >= d; --k) {
      double f = 1;
      for (int j = 0; j < d; ++j) f *= k - j;
      s = s * u + f * c[k];
    }
    return s;
  };
  cplx u = 0.0;
  for (int it = 0; it < 50; ++it) {
    cplx du = P(u, 0) / P(u, 1);
    u -= du;
    if (std::abs(du) < 1e-15) break;
  }
  fit.tau0 = tend + scale * u;
  fit.c0_squared = P(u, 1) / scale;
  fit.h_tilde = P(u, 2) / (scale * scale) / (4.0 * fit.c0_squared);
  const cplx plus = branch_c0_squared(traj.n[0], Branch::Plus);
  fit.branch = std::abs(fit.c0_squared - plus) <= std::abs(fit.c0_squared + plus) ? Branch::Plus : Branch::Minus;
  return fit;
}

LimitReport limit_potential_residual(const Trajectory& traj, const CollapseData& cd, const std::vector<cplx>& zs,
                                     int last_samples) {
  LatticeData lat0 = lattice_invariants(cd.tau0);
  for (cplx z : zs)
    if (lattice_distance(z, cd.tau0) < 0.05) throw ValidationError("near_lattice", "z sample too close to a lattice point");
  std::vector<cplx> lim;
  for (cplx z : zs) {
    cplx s = nn1(cd.m) * wp(z, lat0) + cd.B0;
    for (int j = 1; j <= 3; ++j) s += nn1(traj.n[j]) * wp(z + 0.5 * lat0.w(j), lat0);
    lim.push_back(s);
  }
  LimitReport rep;
  size_t first = traj.size() > size_t(last_samples) ? traj.size() - last_samples : 0;
  std::vector<double> lx, ly;
  for (size_t i = first; i < traj.size(); ++i) {
    LatticeData lat = lattice_invariants(traj.tau[i]);
    LameParams lp = make_apparent(traj.n, small_rep(traj.p[i], traj.tau[i]), traj.A[i], traj.tau[i]);
    double worst = 0;
    for (size_t k = 0; k < zs.size(); ++k) worst = std::max(worst, std::abs(potential_I(zs[k], lp, lat) - lim[k]));
    rep.residual.push_back(worst);
    rep.b_minus_b0.push_back(std::abs(lp.B - cd.B0));
    rep.p_abs.push_back(std::abs(lp.p));
    lx.push_back(std::log(rep.p_abs.back()));
    ly.push_back(std::log(rep.b_minus_b0.back()));
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    rep.slope = sxy / sxx;
  }
  return rep;
}

SteeredCollapse steer_collapse(const Vec4& n, Branch branch, cplx h_tilde, cplx tau0_guess, const SteerOptions& opt) {
  validate_lame(make_non_apparent(n, 0.1 + 0.1 * tau0_guess, 0.0, 0.0, tau0_guess));
  const cplx dir = opt.direction / std::abs(opt.direction);
  cplx c0sq = branch_c0_squared(n[0], branch) * (1.0 + opt.seed_perturb);
  cplx ts = tau0_guess + opt.seed_offset * dir;
  FlowState s0 = collapse_asymptotic_state(c0sq, h_tilde, tau0_guess, opt.seed_offset * dir);
  Vec y(2);
  y << s0.p, s0.A;
  cplx tfar = tau0_guess + opt.far_offset * dir;
  Vec yfar = run(y, ts, tfar, {1.0}, n, opt.rel_tol).back().y;

  // Newton on p^2 = 0, each evaluation integrated from the reference point
  SteeredCollapse out;
  cplx tk = ts;
  cplx t0 = tk;
  for (int it = 0; it < 30; ++it) {
    Vec yk = run(yfar, tfar, tk, {1.0}, n, opt.rel_tol).back().y;
    cplx p = small_rep(yk[0], tk);
    FlowRhs r = flow_rhs({yk[0], yk[1]}, lattice_invariants(tk), n);
    cplx step = p * p / (2.0 * p * r.p_dot);
    out.newton_iterations = it + 1;
    t0 = tk - step;
    if (std::abs(step) < 1e-9) break;
    tk = t0;
    if (it == 29) throw NumericalError("newton_divergence", "zero of p not located");
  }
  out.tau0_newton = t0;

  cplx span = tfar - t0;
  double L = std::abs(span);
  std::vector<double> fr;
  for (int j = 0; j < opt.samples; ++j) {
    double d = L * std::pow(opt.delta_min / L, double(j) / (opt.samples - 1));
    fr.push_back(1.0 - d / L);
  }
  auto samples = run(yfar, tfar, t0, fr, n, opt.rel_tol);
  Trajectory& tr = out.traj;
  tr.n = n;
  tr.path = {tfar, t0};
  tr.rel_tol = opt.rel_tol;
  tr.abs_tol = opt.rel_tol * 1e-2;
  for (auto& s : samples) {
    tr.tau.push_back(s.x);
    tr.p.push_back(s.y[0]);
    tr.A.push_back(s.y[1]);
  }
  return out;
}

}  // namespace isl
