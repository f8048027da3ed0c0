#include "isl/monodromy.hpp"

#include <cmath>

#include "isl/errors.hpp"

namespace isl {

namespace {

const char* kHalfLabels[4] = {"gamma_0", "gamma_1", "gamma_2", "gamma_3"};

cplx nearest_translate(cplx s, cplx near, cplx tau) {
  LatticePoint d = reduce_to_cell(s - near, tau);
  return near + d.z;
}

double segment_distance(cplx a, cplx b, cplx o) {
  cplx d = b - a;
  double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(o - a);
  double t = std::clamp(((o - a) * std::conj(d)).real() / L2, 0.0, 1.0);
  return std::abs(a + t * d - o);
}

// All lattice translates of the active singular points within `reach` of the segment.
std::vector<cplx> obstacles_near(const std::vector<SingularPoint>& sp, cplx a, cplx b, cplx tau, double reach) {
  std::vector<cplx> out;
  cplx mid = 0.5 * (a + b);
  double half = 0.5 * std::abs(b - a) + reach;
  int rm = int(std::ceil(half)) + 1;
  int rn = int(std::ceil(half / tau.imag())) + 1;
  for (const auto& s : sp) {
    if (!s.active) continue;
    cplx base = nearest_translate(s.z, mid, tau);
    for (int m = -rm; m <= rm; ++m)
      for (int n = -rn; n <= rn; ++n) {
        cplx o = base + double(m) + double(n) * tau;
        if (segment_distance(a, b, o) < reach) out.push_back(o);
      }
  }
  return out;
}

// Straight segment a -> b with arc bumps of radius `r` around obstacles.
void append_with_detours(std::vector<cplx>& path, cplx a, cplx b, const std::vector<SingularPoint>& sp, cplx tau,
                         double r, double clearance) {
  std::vector<cplx> obs = obstacles_near(sp, a, b, tau, r);
  cplx d = b - a;
  double L = std::abs(d);
  cplx u = d / L;
  struct Bump {
    double t0, t1;
    cplx o;
  };
  std::vector<Bump> bumps;
  for (cplx o : obs) {
    if (std::abs(o - a) < r + 1e-12 || std::abs(o - b) < r + 1e-12)
      throw ValidationError("no_valid_detour", "segment endpoint too close to a singular point");
    double tc = ((o - a) * std::conj(u)).real();
    double h = ((o - a) * std::conj(u)).imag();
    double w = std::sqrt(std::max(0.0, r * r - h * h));
    bumps.push_back({tc - w, tc + w, o});
  }
  std::sort(bumps.begin(), bumps.end(), [](const Bump& x, const Bump& y) { return x.t0 < y.t0; });
  for (size_t i = 0; i + 1 < bumps.size(); ++i)
    if (bumps[i].t1 > bumps[i + 1].t0) throw ValidationError("no_valid_detour", "overlapping detours");
  for (const Bump& bp : bumps) {
    cplx p0 = a + bp.t0 * u, p1 = a + bp.t1 * u;
    path.push_back(p0);
    double th0 = std::arg(p0 - bp.o), th1 = std::arg(p1 - bp.o);
    double dth = std::remainder(th1 - th0, 2.0 * kPi);  // minor arc, stays on the chord side
    if (std::abs(std::abs(dth) - kPi) < 1e-9) dth = -kPi;
    int k = std::max(4, int(std::ceil(std::abs(dth) / (2.0 * kPi / 64))));
    for (int j = 1; j < k; ++j) path.push_back(bp.o + r * std::exp(kI * (th0 + dth * j / k)));
    path.push_back(p1);
  }
  path.push_back(b);
  (void)clearance;
}

}  // namespace

cplx default_basepoint(cplx tau) { return 0.11 + 0.13 * tau; }

std::vector<SingularPoint> singular_points(const LameParams& lp, cplx near) {
  std::vector<SingularPoint> sp;
  for (int k = 0; k < 4; ++k)
    sp.push_back({kHalfLabels[k], nearest_translate(0.5 * omega(k, lp.tau), near, lp.tau), nn1(lp.n[k]) != 0.0});
  sp.push_back({"gamma_plus", nearest_translate(lp.p, near, lp.tau), true});
  sp.push_back({"gamma_minus", nearest_translate(-lp.p, near, lp.tau), true});
  return sp;
}

double path_clearance(const LameParams& lp, const std::vector<cplx>& path) {
  double best = INFINITY;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    std::vector<SingularPoint> sp = singular_points(lp, 0.5 * (path[k] + path[k + 1]));
    for (cplx o : obstacles_near(sp, path[k], path[k + 1], lp.tau, 1.0))
      best = std::min(best, segment_distance(path[k], path[k + 1], o));
  }
  return best;
}

Mat2 transport(const LameParams& lp, const std::vector<cplx>& path, const LoopConstants& lc, double rel_tol,
               OdeStats* stats) {
  if (path.size() < 2) throw ValidationError("path needs at least two vertices");
  if (path_clearance(lp, path) < lc.clearance) throw ValidationError("clearance", "path too close to a singular point");
  LatticeData lat = lattice_invariants(lp.tau);
  ComplexRhs rhs = [&](cplx z, const Vec& y) {
    cplx I = potential_I(z, lp, lat);
    Vec d(4);
    // Y = [[y00, y01], [y10, y11]] stored row-major
    d << y[2], y[3], I * y[0], I * y[1];
    return d;
  };
  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * 1e-2;
  Vec y(4);
  y << 1.0, 0.0, 0.0, 1.0;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    if (path[k] == path[k + 1]) continue;
    auto out = integrate_segment(rhs, y, path[k], path[k + 1], {1.0}, opt, {}, stats);
    y = out.back().y;
  }
  Mat2 M;
  M << y[0], y[1], y[2], y[3];
  return M;
}

std::vector<LoopPath> standard_loops(const LameParams& lp, cplx q0, const LoopConstants& lc) {
  check_tau(lp.tau);
  std::vector<SingularPoint> sp = singular_points(lp, q0);
  for (const auto& s : sp)
    if (s.active && std::abs(s.z - q0) < lc.radius + lc.clearance)
      throw ValidationError("clearance", "basepoint too close to a singular point");
  std::vector<LoopPath> loops;
  for (const auto& s : sp) {
    LoopPath lp_;
    lp_.label = s.label;
    lp_.kind = s.label == "gamma_plus" ? LoopKind::GammaPlus : s.label == "gamma_minus" ? LoopKind::GammaMinus
                                                                                          : LoopKind::GammaK;
    lp_.basepoint = q0;
    lp_.center = s.z;
    cplx dir = (q0 - s.z) / std::abs(q0 - s.z);
    cplx entry = s.z + lc.radius * dir;
    std::vector<cplx> others;
    std::vector<SingularPoint> rest;
    for (const auto& o : sp)
      if (o.label != s.label) rest.push_back(o);
    // connector avoids the other points; also check the circle itself
    for (int m = -1; m <= 1; ++m)
      for (int n = -1; n <= 1; ++n)
        for (const auto& o : sp) {
          if (!o.active) continue;
          cplx oz = o.z + double(m) + double(n) * lp.tau;
          if (o.label == s.label && m == 0 && n == 0) continue;
          if (std::abs(oz - s.z) < lc.radius + lc.clearance)
            throw ValidationError("no_valid_detour", "singular points " + s.label + " and " + o.label + " too close");
        }
    std::vector<cplx> conn{q0};
    append_with_detours(conn, q0, entry, rest, lp.tau, lc.detour, lc.clearance);
    std::vector<cplx> v = conn;
    double th0 = std::arg(dir);
    for (int j = 1; j <= lc.segments; ++j) v.push_back(s.z + lc.radius * std::exp(kI * (th0 + 2.0 * kPi * j / lc.segments)));
    for (auto it = conn.rbegin() + 1; it != conn.rend(); ++it) v.push_back(*it);
    lp_.vertices = std::move(v);
    loops.push_back(std::move(lp_));
  }
  for (int j = 1; j <= 2; ++j) {
    LoopPath l;
    l.label = j == 1 ? "ell_1" : "ell_2";
    l.kind = j == 1 ? LoopKind::Ell1 : LoopKind::Ell2;
    l.basepoint = q0;
    l.center = q0 + omega(j, lp.tau);
    l.vertices = {q0};
    append_with_detours(l.vertices, q0, l.center, sp, lp.tau, lc.detour, lc.clearance);
    loops.push_back(std::move(l));
  }
  return loops;
}

MonodromyRep monodromy_rep(const LameParams& lp, cplx q0, const LoopConstants& lc) {
  MonodromyRep rep;
  rep.basepoint = q0;
  rep.loops = standard_loops(lp, q0, lc);
  for (const auto& l : rep.loops) rep.matrices[l.label] = transport(lp, l.vertices, lc);
  return rep;
}

MonodromyRep monodromy_rep(const LameParams& lp) { return monodromy_rep(lp, default_basepoint(lp.tau)); }

double winding_number(const std::vector<cplx>& loop, cplx point) {
  double total = 0;
  for (size_t k = 0; k + 1 < loop.size(); ++k) total += std::arg((loop[k + 1] - point) / (loop[k] - point));
  return total / (2.0 * kPi);
}

double isomonodromy_drift(const Trajectory& traj, int samples, const LoopConstants& lc) {
  if (traj.size() == 0) throw ValidationError("empty trajectory");
  if (traj.size() == 1 || samples < 2) return 0.0;
  samples = std::min<int>(samples, int(traj.size()));
  std::map<std::string, cplx> start;
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    size_t i = size_t(std::llround(double(k) * (traj.size() - 1) / (samples - 1)));
    LameParams lp = make_apparent(traj.n, traj.p[i], traj.A[i], traj.tau[i]);
    MonodromyRep rep = monodromy_rep(lp, default_basepoint(lp.tau), lc);
    for (const auto& [label, M] : rep.matrices) {
      cplx tr = M.trace();
      if (k == 0)
        start[label] = tr;
      else
        worst = std::max(worst, std::abs(tr - start[label]));
    }
  }
  return worst;
}

}  // namespace isl
