#include "isl/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "isl/errors.hpp"

namespace isl {

namespace {

// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const ComplexRhs& f;
  cplx x0, dir;

  Vec eval(double s, const Vec& y) const { return f(x0 + s * dir, y) * dir; }

  // One step from (s, y) with FSAL derivative k1; returns y_new, err, k7.
  void step(double s, const Vec& y, const Vec& k1, double h, Vec& ynew, Vec& err, Vec& k7) const {
    Vec k2 = eval(s + c2 * h, y + h * (a21 * k1));
    Vec k3 = eval(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Vec k4 = eval(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec k5 = eval(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = eval(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = eval(s + h, ynew);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  }
};

double err_norm(const Vec& err, const Vec& y, const Vec& ynew, const OdeOptions& opt) {
  double acc = 0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    double r = std::abs(err[i]) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / double(std::max<Eigen::Index>(1, err.size())));
}

bool finite(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

}  // namespace

std::vector<double> uniform_fractions(int intervals) {
  std::vector<double> f(intervals + 1);
  for (int i = 0; i <= intervals; ++i) f[i] = double(i) / intervals;
  return f;
}

std::vector<OdeSample> integrate_segment(const ComplexRhs& rhs, const Vec& y0, cplx x0, cplx x1,
                                         const std::vector<double>& fractions, const OdeOptions& opt,
                                         const StepGuard& guard, OdeStats* stats) {
  const double len = std::abs(x1 - x0);
  std::vector<OdeSample> out;
  if (len == 0.0) {
    for (size_t i = 0; i < fractions.size(); ++i) out.push_back({x0, y0});
    return out;
  }
  Stepper st{rhs, x0, (x1 - x0) / len};
  double s = 0.0;
  Vec y = y0;
  Vec k1 = st.eval(0.0, y);
  double h = opt.fixed_step > 0 ? opt.fixed_step
             : opt.initial_step > 0 ? opt.initial_step
                                    : std::min(len, 1e-3 * std::max(len, 1.0));
  int steps = 0;
  Vec ynew, err, k7;
  for (double frac : fractions) {
    const double target = frac * len;
    while (s < target - 1e-15 * len) {
      if (++steps > opt.max_steps) throw NumericalError("step_failure", "integrator exceeded max steps");
      double hs = std::min(h, target - s);
      bool last = hs == target - s;
      st.step(s, y, k1, hs, ynew, err, k7);
      double en = opt.fixed_step > 0 ? 0.0 : err_norm(err, y, ynew, opt);
      if (!finite(ynew)) en = 1e10;
      if (en <= 1.0) {
        s = last ? target : s + hs;
        y = ynew;
        k1 = k7;
        if (stats) ++stats->accepted;
        if (guard) guard(x0 + s * st.dir, y);
        if (opt.fixed_step <= 0) {
          double fac = en == 0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
          bool clipped = hs < h;
          h = clipped ? std::max(h * std::min(fac, 1.0), hs * fac) : hs * fac;
        }
      } else {
        if (stats) ++stats->rejected;
        h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
        if (h < 1e-14 * len) throw NumericalError("step_failure", "integrator step size underflow");
      }
    }
    out.push_back({x0 + frac * (x1 - x0), y});
  }
  return out;
}

std::vector<OdeSample> integrate_polyline(const ComplexRhs& rhs, const Vec& y0, const std::vector<cplx>& path,
                                          int per_segment, const OdeOptions& opt, const StepGuard& guard,
                                          OdeStats* stats) {
  if (path.size() < 2) throw ValidationError("path needs at least two vertices");
  std::vector<OdeSample> out;
  Vec y = y0;
  auto fr = uniform_fractions(std::max(1, per_segment));
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    auto seg = integrate_segment(rhs, y, path[k], path[k + 1], fr, opt, guard, stats);
    for (size_t i = (k == 0 ? 0 : 1); i < seg.size(); ++i) out.push_back(seg[i]);
    y = seg.back().y;
  }
  return out;
}

}  // namespace isl
