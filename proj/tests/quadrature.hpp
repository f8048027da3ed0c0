#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "isl/types.hpp"

namespace isl::test {

// 20-point Gauss-Legendre nodes and weights on [-1, 1].
inline const std::array<std::array<double, 2>, 20>& gauss_legendre_20() {
  static const auto table = [] {
    std::array<std::array<double, 2>, 20> t{};
    constexpr int N = 20;
    for (int i = 0; i < N; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (N + 0.5)), dp = 1;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = 0;
        for (int j = 1; j <= N; ++j) {
          double pm = p1;
          p1 = p0;
          p0 = ((2 * j - 1) * x * p1 - (j - 1) * pm) / j;
        }
        dp = N * (x * p0 - p1) / (x * x - 1);
        double dx = p0 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      t[i] = {x, 2 / ((1 - x * x) * dp * dp)};
    }
    return t;
  }();
  return table;
}

}  // namespace isl::test

namespace isl {

// Composite Gauss-Legendre along the straight segment a -> b.
inline cplx integrate_line(const std::function<cplx(cplx)>& f, cplx a, cplx b, int pieces) {
  cplx sum = 0;
  for (int s = 0; s < pieces; ++s) {
    cplx lo = a + (b - a) * (double(s) / pieces), hi = a + (b - a) * (double(s + 1) / pieces);
    cplx mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (const auto& [x, w] : test::gauss_legendre_20()) sum += half * w * f(mid + half * x);
  }
  return sum;
}

}  // namespace isl
