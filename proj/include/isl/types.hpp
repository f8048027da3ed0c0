#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace isl {

using cplx = std::complex<double>;

using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec4 = Eigen::Vector4cd;  // index weights n_0..n_3

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// omega_0 = 0, omega_1 = 1, omega_2 = tau, omega_3 = 1 + tau
inline cplx omega(int k, cplx tau) {
  switch (k) {
    case 1: return 1.0;
    case 2: return tau;
    case 3: return 1.0 + tau;
    default: return 0.0;
  }
}

// d omega_k / d tau
inline double omega_tau_rate(int k) { return (k == 2 || k == 3) ? 1.0 : 0.0; }

inline cplx nn1(cplx n) { return n * (n + 1.0); }

}  // namespace isl
