#pragma once

#include <functional>

#include "isl/types.hpp"

namespace isl {

// Number of samples trimmed from each end by fd_derivative.
int fd_margin(Eigen::Index n);

// First or second derivative of uniformly sampled data (complex step h) by
// 5-point central stencils with one Richardson pass when n >= 9. Entries
// outside [margin, n-1-margin] are left zero.
Vec fd_derivative(const Vec& f, cplx h, int order);

// Least-squares Laurent coefficients c_kmin..c_kmax of f around center from
// `samples` equally spaced points on a circle of the given radius.
Vec laurent_fit(const std::function<cplx(cplx)>& f, cplx center, double radius, int kmin, int kmax,
                int samples);

}  // namespace isl
