#pragma once

#include <functional>
#include <vector>

#include "isl/types.hpp"

namespace isl {

struct OdeOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double fixed_step = 0.0;  // > 0 disables adaptivity (arclength units)
  double initial_step = 0.0;
  int max_steps = 200000;
};

struct OdeStats {
  int accepted = 0;
  int rejected = 0;
};

// dy/dx for a complex independent variable x.
using ComplexRhs = std::function<Vec(cplx x, const Vec& y)>;
// Called after every accepted step; may throw to abort.
using StepGuard = std::function<void(cplx x, const Vec& y)>;

struct OdeSample {
  cplx x;
  Vec y;
};

// Dormand-Prince 5(4) along the straight segment x0 -> x1, parametrized by
// real arclength. Output is produced exactly at x0 + f*(x1-x0) for each
// fraction f in `fractions` (ascending, within [0,1]).
std::vector<OdeSample> integrate_segment(const ComplexRhs& rhs, const Vec& y0, cplx x0, cplx x1,
                                         const std::vector<double>& fractions, const OdeOptions& opt,
                                         const StepGuard& guard = {}, OdeStats* stats = nullptr);

// Polyline version; `per_segment` uniform outputs per segment, shared vertices
// appear once.
std::vector<OdeSample> integrate_polyline(const ComplexRhs& rhs, const Vec& y0, const std::vector<cplx>& path,
                                          int per_segment, const OdeOptions& opt, const StepGuard& guard = {},
                                          OdeStats* stats = nullptr);

std::vector<double> uniform_fractions(int intervals);

}  // namespace isl
