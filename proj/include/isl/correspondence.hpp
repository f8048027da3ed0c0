#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "isl/flow.hpp"
#include "isl/lame.hpp"

namespace isl {

struct FuchsianParams {
  cplx t, lambda, mu, K;
  cplx theta0, theta1, theta_t, theta_inf;
  cplx kappa_hat, alpha_hat;
};

CP1Params cp1_params(const FuchsianParams& fp);

// Throws ValidationError when lambda hits {0, 1, t}, or alpha_hat / kappa_hat / K
// disagree with their closed forms.
void validate_fuchsian(const FuchsianParams& fp);

// K from the residue of the transformed coefficient at x = t, computed from
// torus data. Matches cp1_K at the mapped point.
cplx K_from_lame(const LameParams& lp, const LatticeData& lat);
// An alternate closed form with a known constant offset; kept for comparison only.
cplx K_alternate_form(const LameParams& lp, const LatticeData& lat);

// mu from torus data.
cplx mu_from_lame(const LameParams& lp, const LatticeData& lat);

FuchsianParams lame_to_fuchsian(const LameParams& lp);
// Result carries the canonical p representative.
LameParams fuchsian_to_lame(const FuchsianParams& fp, cplx tau);

using RationalFn = std::function<cplx(cplx)>;

struct FuchsianCoefficients {
  RationalFn p1, p2;          // from the CP^1 data
  RationalFn p1_hat, p2_hat;  // from the torus data after the gauge by psi
};

FuchsianCoefficients fuchsian_coefficients(const FuchsianParams& fp, const LameParams& lp);

// Residue at x0 by a small-circle Laurent fit.
cplx residue(const RationalFn& f, cplx x0, double radius = 1e-3);

struct GaugeSample {
  cplx z, x;
  cplx y_hat;      // y(z) / psi(x), principal branches
  double residual; // of y'' + p1 y' + p2 y = 0, relative, by 5-point stencils in x
};

// log psi(x) with principal logs.
cplx log_psi(cplx x, const FuchsianParams& fp, const Vec4& n);

// `log_y` returns any branch of ln y(z) for a solution of the Lame equation.
std::vector<GaugeSample> gauge_transport(const LameParams& lp, const std::function<cplx(cplx)>& log_y,
                                         const std::vector<cplx>& z);

struct RiemannScheme {
  std::array<std::string, 5> points;
  std::array<std::array<cplx, 2>, 5> exponents;
  cplx exponent_sum() const;
};

RiemannScheme scheme_fuchsian(const FuchsianParams& fp);  // t, 0, 1, inf, lambda
RiemannScheme scheme_lame_cp1(const Vec4& n);             // before the gauge: 0, 1, t, inf, lambda
RiemannScheme scheme_gauged(const Vec4& n);               // after the gauge: 0, 1, t, inf, lambda

}  // namespace isl
