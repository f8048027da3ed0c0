#pragma once

#include <vector>

#include "isl/flow.hpp"

namespace isl {

enum class Branch { Plus, Minus };

struct CollapseData {
  cplx tau0;
  cplx c0_squared;
  cplx h_tilde;
  Branch branch = Branch::Plus;
  cplx m;
  cplx B0;
  cplx c;     // pi i c0^2 + 1/4
  cplx beta;  // pole residue of lambda(t) at t0
  cplx t0;
};

cplx branch_c0_squared(cplx n0, Branch branch);
CollapseData collapse_constants(const Vec4& n, Branch branch, cplx h_tilde, cplx tau0);
// Same constants with a measured c0^2 (B0 uses it directly).
CollapseData collapse_constants_fitted(const Vec4& n, Branch branch, cplx c0_squared, cplx h_tilde, cplx tau0);

// Leading asymptotics at tau = tau0 + delta.
FlowState collapse_asymptotic_state(cplx c0_squared, cplx h_tilde, cplx tau0, cplx delta);

struct CollapseFit {
  cplx tau0;
  cplx c0_squared;
  cplx h_tilde;
  double residual;  // rms of the fit relative to max |p^2| over the fitted window
  int samples;
  Branch branch = Branch::Plus;  // nearest closed-form branch
};

// Polynomial fit of p^2 over samples with |tau - tau_end| < window.
CollapseFit fit_collapse(const Trajectory& traj, double window = 0.05, int degree = 6);

struct LimitReport {
  std::vector<double> residual;   // per sample, from the first considered sample to the end
  std::vector<double> b_minus_b0; // |B - B0| per sample
  std::vector<double> p_abs;
  double slope = 0;               // log|B - B0| against log|p|
  double last() const { return residual.back(); }
};

LimitReport limit_potential_residual(const Trajectory& traj, const CollapseData& cd, const std::vector<cplx>& z,
                                     int last_samples = 8);

struct SteerOptions {
  double seed_offset = 0.04;    // |delta| of the asymptotic seed
  double far_offset = 0.3;      // |delta| of the reference point
  double seed_perturb = 0.03;   // relative change of c0^2 at the seed
  double delta_min = 1e-4;      // closest approach
  int samples = 40;
  cplx direction = cplx(0, 1);  // tau0 + direction * delta
  double rel_tol = 1e-12;
};

struct SteeredCollapse {
  Trajectory traj;
  cplx tau0_newton;
  int newton_iterations = 0;
};

// Builds a flow trajectory ending near a zero of p from a perturbed asymptotic seed.
SteeredCollapse steer_collapse(const Vec4& n, Branch branch, cplx h_tilde, cplx tau0_guess,
                               const SteerOptions& opt = {});

}  // namespace isl
