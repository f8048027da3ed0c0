#pragma once

#include <map>
#include <string>
#include <vector>

#include "isl/flow.hpp"
#include "isl/integrator.hpp"
#include "isl/lame.hpp"

namespace isl {

struct LoopConstants {
  double radius = 0.08;
  int segments = 64;
  double detour = 0.05;
  double clearance = 0.03;
};

enum class LoopKind { GammaK, GammaPlus, GammaMinus, Ell1, Ell2 };

struct LoopPath {
  std::string label;  // gamma_0..gamma_3, gamma_plus, gamma_minus, ell_1, ell_2
  LoopKind kind;
  std::vector<cplx> vertices;
  cplx basepoint;
  cplx center;  // encircled point, or the endpoint for ell_j
};

struct SingularPoint {
  std::string label;
  cplx z;
  bool active;  // carries a nonzero coefficient in I
};

struct MonodromyRep {
  std::map<std::string, Mat2> matrices;
  cplx basepoint;
  std::vector<LoopPath> loops;
};

cplx default_basepoint(cplx tau);  // 0.11 + 0.13 tau

// Half periods and +-p, each as the lattice representative nearest `near`.
std::vector<SingularPoint> singular_points(const LameParams& lp, cplx near);

// Smallest distance from the polyline to any lattice translate of an active singular point.
double path_clearance(const LameParams& lp, const std::vector<cplx>& path);

Mat2 transport(const LameParams& lp, const std::vector<cplx>& path, const LoopConstants& lc = {},
               double rel_tol = 1e-12, OdeStats* stats = nullptr);

std::vector<LoopPath> standard_loops(const LameParams& lp, cplx basepoint, const LoopConstants& lc = {});

MonodromyRep monodromy_rep(const LameParams& lp, cplx basepoint, const LoopConstants& lc = {});
MonodromyRep monodromy_rep(const LameParams& lp);

// Discrete winding number of a closed polyline about a point.
double winding_number(const std::vector<cplx>& loop, cplx point);

// Max over generators and the chosen samples of |tr - tr(start)|; `samples`
// evenly spaced indices including both ends.
double isomonodromy_drift(const Trajectory& traj, int samples = 5, const LoopConstants& lc = {});

}  // namespace isl
