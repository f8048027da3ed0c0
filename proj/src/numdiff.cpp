#include "isl/numdiff.hpp"

#include <cmath>

#include "isl/errors.hpp"

namespace isl {

namespace {

cplx stencil(const Vec& f, Eigen::Index i, int s, cplx h, int order) {
  cplx fm2 = f[i - 2 * s], fm1 = f[i - s], f0 = f[i], fp1 = f[i + s], fp2 = f[i + 2 * s];
  cplx hh = double(s) * h;
  if (order == 1) return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * hh);
  return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * hh * hh);
}

}  // namespace

int fd_margin(Eigen::Index n) { return n >= 9 ? 4 : 2; }

Vec fd_derivative(const Vec& f, cplx h, int order) {
  const Eigen::Index n = f.size();
  if (n < 5) throw ValidationError("insufficient_samples", "finite differences need at least 5 samples");
  if (order != 1 && order != 2) throw ValidationError("derivative order must be 1 or 2");
  Vec d = Vec::Zero(n);
  const int m = fd_margin(n);
  for (Eigen::Index i = m; i < n - m; ++i) {
    cplx d1 = stencil(f, i, 1, h, order);
    if (m == 4) {
      cplx d2 = stencil(f, i, 2, h, order);
      d[i] = (16.0 * d1 - d2) / 15.0;
    } else {
      d[i] = d1;
    }
  }
  return d;
}

Vec laurent_fit(const std::function<cplx(cplx)>& f, cplx center, double radius, int kmin, int kmax,
                int samples) {
  const int nk = kmax - kmin + 1;
  if (nk <= 0 || samples < nk) throw ValidationError("laurent fit needs at least as many samples as unknowns");
  Eigen::MatrixXcd M(samples, nk);
  Vec rhs(samples);
  for (int j = 0; j < samples; ++j) {
    cplx e = std::polar(1.0, 2.0 * kPi * (j + 0.5) / samples);
    for (int k = 0; k < nk; ++k) M(j, k) = std::pow(e, kmin + k);
    rhs[j] = f(center + radius * e);
  }
  Vec c = M.colPivHouseholderQr().solve(rhs);
  for (int k = 0; k < nk; ++k) c[k] /= std::pow(radius, kmin + k);
  return c;
}

}  // namespace isl
