#pragma once

#include <array>
#include <vector>

#include "isl/flow.hpp"
#include "isl/lame.hpp"

namespace isl {

struct HitchinSeed {
  cplx r, s;
};

void validate_seed(const HitchinSeed& seed);

// Solve wp(p) = w by Newton, seeded from a coarse scan of the cell.
cplx invert_wp(cplx w, const LatticeData& lat);

struct HitchinP {
  cplx wp_p;
  cplx p;  // canonical representative
};

cplx hitchin_wp(const HitchinSeed& seed, const LatticeData& lat);
HitchinP hitchin_p(const HitchinSeed& seed, cplx tau);
HitchinP hitchin_p(const HitchinSeed& seed, const LatticeData& lat);

struct HitchinLame {
  LameParams params;
  HitchinSeed seed;
  cplx a1;
  cplx c;  // zeta(a1+p) + zeta(a1-p)
  cplx constraint_residual;
};

HitchinLame hitchin_lame_data(const HitchinSeed& seed, cplx tau);
// A from the closed form at a given p representative.
cplx hitchin_A(cplx p, cplx a1, const LatticeData& lat);

// rho(gamma_+-), rho(ell_1), rho(ell_2) in the basis (y_{a1}, y_{-a1}).
std::array<Mat2, 3> expected_monodromy(const HitchinSeed& seed);

// ln y_{+-a1}(z), principal logs of sigma; sign = +1 or -1.
cplx hitchin_log_y(cplx z, const HitchinLame& h, double sign);

// Max over z of |y'' / y - I| for y = y_{+a1} and y_{-a1}.
double hitchin_solution_residual(const HitchinLame& h, const std::vector<cplx>& z);

cplx schwarzian(cplx f1, cplx f2, cplx f3);
double schwarzian_residual(const HitchinSeed& seed, cplx tau, const std::vector<cplx>& z);

// Eigenvalues of the translation along the polyline `path` (start q0, end
// q0 + omega_j) for y_{+a1} and y_{-a1}, with sqrt(sigma(z+p)sigma(z-p))
// continued along the path.
std::array<cplx, 2> hitchin_translation_factors(const HitchinLame& h, const std::vector<cplx>& path);

// Uniform samples along a tau-polyline; p lifted continuously, A from the closed form.
Trajectory hitchin_trajectory(const HitchinSeed& seed, const std::vector<cplx>& path, int per_segment = 200);

}  // namespace isl
