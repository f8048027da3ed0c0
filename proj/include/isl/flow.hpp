#pragma once

#include <array>
#include <vector>

#include "isl/integrator.hpp"
#include "isl/lame.hpp"

namespace isl {

struct FlowState {
  cplx p, A;
};

struct FlowRhs {
  cplx p_dot, A_dot;
};

struct Trajectory {
  Vec4 n = Vec4::Zero();
  std::vector<cplx> tau, p, A;
  std::vector<cplx> path;
  double rel_tol = 0, abs_tol = 0;
  size_t size() const { return tau.size(); }
};

// Elliptic-form weights and the matching PVI parameters.
struct PainleveParams {
  std::array<cplx, 4> alpha_k{};
  cplx alpha, beta, gamma, delta;
  cplx q_momentum;
};

FlowRhs flow_rhs(const FlowState& s, const LatticeData& lat, const Vec4& n);
FlowRhs flow_rhs(const FlowState& s, cplx tau, const Vec4& n);

struct FlowOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-13;
  int per_segment = 200;     // uniform output intervals per path segment
  double fixed_step = 0.0;   // > 0 selects fixed-step mode
  double branch_guard = 1e-4;
};

Trajectory integrate_flow(const FlowState& initial, const std::vector<cplx>& path, const Vec4& n,
                          const FlowOptions& opt = {}, OdeStats* stats = nullptr);

// Continuous lift of p along samples: picks +-p + lattice nearest the previous.
std::vector<cplx> lift_continuous(const std::vector<cplx>& p, const std::vector<cplx>& tau);

// Checks uniform spacing and returns the common step.
cplx uniform_step(const std::vector<cplx>& x);

double elliptic_pvi_residual(const std::vector<cplx>& tau, const std::vector<cplx>& p,
                             const std::array<cplx, 4>& alpha_k);
double elliptic_pvi_residual(const Trajectory& traj, const PainleveParams& pp);

// Parameter maps
std::array<cplx, 4> alphas_from_n(const Vec4& n);       // alpha_k = (n_k + 1/2)^2 / 2
Vec4 n_from_alphas(const std::array<cplx, 4>& alpha_k);  // root with n >= -1/2
std::array<cplx, 4> thetas_from_n(const Vec4& n);       // (theta_0, theta_1, theta_t, theta_inf)
PainleveParams pvi_from_thetas(const std::array<cplx, 4>& th);
std::array<cplx, 4> elliptic_from_pvi(cplx alpha, cplx beta, cplx gamma, cplx delta);
PainleveParams painleve_params_from_n(const Vec4& n);

// A = 2 pi i p_dot + (zeta(2p) - 2 p eta1)/2
cplx A_from_p(cplx p, cplx p_dot, const LatticeData& lat);
// F = A + (zeta(2p) - 2 zeta(p))/2
cplx F_value(cplx p, cplx A, const LatticeData& lat);
// A_from_p along a trajectory with finite-difference p_dot (interior samples).
std::vector<cplx> A_from_trajectory(const Trajectory& traj);

double F_log_derivative_residual(const Trajectory& traj);

// Companion systems
Vec manin_rhs(cplx p, cplx q, const LatticeData& lat, const std::array<cplx, 4>& alpha_k);
Vec kawai_rhs(cplx b, cplx mu, const LatticeData& lat, cplx theta);

struct CP1Params {
  cplx theta0, theta1, theta_t, theta_inf;
  cplx kappa_hat;
};

CP1Params cp1_params_from_thetas(const std::array<cplx, 4>& th);
cplx cp1_K(cplx lambda, cplx mu, cplx t, const CP1Params& cp);
cplx cp1_dK_dmu(cplx lambda, cplx mu, cplx t, const CP1Params& cp);
cplx cp1_dK_dlambda(cplx lambda, cplx mu, cplx t, const CP1Params& cp);
Vec cp1_rhs(cplx lambda, cplx mu, cplx t, const CP1Params& cp);

double pvi_residual(const std::vector<cplx>& t, const std::vector<cplx>& lambda, const PainleveParams& pp);

std::vector<OdeSample> integrate_manin(cplx p0, cplx q0, const std::vector<cplx>& path,
                                       const std::array<cplx, 4>& alpha_k, const FlowOptions& opt = {});
std::vector<OdeSample> integrate_kawai(cplx b0, cplx mu0, const std::vector<cplx>& path, cplx theta,
                                       const FlowOptions& opt = {});
// (lambda, mu) in the t-plane along a t-polyline.
std::vector<OdeSample> integrate_cp1(cplx lambda0, cplx mu0, const std::vector<cplx>& t_path, const CP1Params& cp,
                                     const FlowOptions& opt = {});
// (lambda, mu) driven by tau through t(tau), along a tau-polyline.
std::vector<OdeSample> integrate_cp1_tau(cplx lambda0, cplx mu0, const std::vector<cplx>& tau_path,
                                         const CP1Params& cp, const FlowOptions& opt = {});

}  // namespace isl
