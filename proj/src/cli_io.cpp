#include "isl/cli_io.hpp"

#include <yaml-cpp/yaml.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "isl/collapse.hpp"
#include "isl/correspondence.hpp"
#include "isl/errors.hpp"
#include "isl/hitchin.hpp"
#include "isl/monodromy.hpp"

namespace isl {

using nlohmann::json;

// ---------------------------------------------------------------- parsing

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double parse_real(const std::string& s, const std::string& whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  double v = 0;
  const char* b = s.data();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError("parse", "cannot parse complex number '" + whole + "'");
  return v;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ValidationError("parse", "empty complex number");
  char last = s.back();
  if (last != 'i' && last != 'j' && last != 'I' && last != 'J') {
    if (s == "inf" || s == "nan") throw ValidationError("parse", "non-finite value '" + text + "'");
    return {parse_real(s, text), 0.0};
  }
  std::string body = s.substr(0, s.size() - 1);
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(body, text)};
  return {parse_real(body.substr(0, split), text), parse_real(body.substr(split), text)};
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_complex(cplx z) {
  std::string im = format_real(z.imag());
  if (im[0] != '-') im = "+" + im;
  return format_real(z.real()) + im + "j";
}

std::vector<cplx> parse_complex_list(const std::string& text, char sep) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(parse_complex(item));
  return out;
}

// ---------------------------------------------------------------- config

namespace {

void flatten(const YAML::Node& node, const std::string& prefix, std::map<std::string, std::string>& scalars,
             std::map<std::string, std::vector<std::string>>& lists) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      std::string key = kv.first.as<std::string>();
      flatten(kv.second, prefix.empty() ? key : prefix + "." + key, scalars, lists);
    }
  } else if (node.IsSequence()) {
    std::vector<std::string> items;
    bool all_scalar = true;
    for (const auto& it : node) all_scalar = all_scalar && it.IsScalar();
    if (all_scalar) {
      for (const auto& it : node) items.push_back(it.as<std::string>());
      lists[prefix] = items;
    } else {
      int i = 0;
      for (const auto& it : node) flatten(it, prefix + "." + std::to_string(i++), scalars, lists);
    }
  } else if (node.IsScalar()) {
    scalars[prefix] = node.as<std::string>();
  }
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config c;
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsNull() && !root.IsMap()) throw ValidationError("config", "configuration must be a mapping");
    flatten(root, "", c.scalars_, c.lists_);
  } catch (const YAML::Exception& e) {
    throw ValidationError("config", std::string("configuration parse error: ") + e.what());
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read configuration '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void Config::set(const std::string& key, const std::string& value) {
  lists_.erase(key);
  scalars_[key] = value;
}

void Config::set_list(const std::string& key, const std::vector<std::string>& values) {
  scalars_.erase(key);
  lists_[key] = values;
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.scalars_) set(k, v);
  for (const auto& [k, v] : other.lists_) set_list(k, v);
}

std::optional<std::string> Config::find(const std::string& key, const std::vector<std::string>& sections) const {
  if (auto it = scalars_.find(key); it != scalars_.end()) return it->second;
  for (const auto& s : sections)
    if (auto it = scalars_.find(s + "." + key); it != scalars_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::vector<std::string>> Config::find_list(const std::string& key,
                                                          const std::vector<std::string>& sections) const {
  if (auto it = lists_.find(key); it != lists_.end()) return it->second;
  for (const auto& s : sections)
    if (auto it = lists_.find(s + "." + key); it != lists_.end()) return it->second;
  return std::nullopt;
}

bool Config::has(const std::string& key, const std::vector<std::string>& sections) const {
  return find(key, sections).has_value() || find_list(key, sections).has_value();
}

cplx Config::get_complex(const std::string& key, const std::vector<std::string>& sections) const {
  auto v = find(key, sections);
  if (!v) throw ValidationError("missing_parameter", "missing parameter '" + key + "'");
  return parse_complex(*v);
}

cplx Config::get_complex(const std::string& key, cplx fallback, const std::vector<std::string>& sections) const {
  auto v = find(key, sections);
  return v ? parse_complex(*v) : fallback;
}

double Config::get_double(const std::string& key, double fallback, const std::vector<std::string>& sections) const {
  auto v = find(key, sections);
  if (!v) return fallback;
  cplx z = parse_complex(*v);
  if (z.imag() != 0.0) throw ValidationError("parse", "parameter '" + key + "' must be real");
  return z.real();
}

int Config::get_int(const std::string& key, int fallback, const std::vector<std::string>& sections) const {
  double d = get_double(key, fallback, sections);
  if (d != std::floor(d)) throw ValidationError("parse", "parameter '" + key + "' must be an integer");
  return int(d);
}

std::string Config::get_string(const std::string& key, const std::string& fallback,
                               const std::vector<std::string>& sections) const {
  auto v = find(key, sections);
  return v ? *v : fallback;
}

std::vector<cplx> Config::get_complex_list(const std::string& key, const std::vector<std::string>& sections) const {
  if (auto l = find_list(key, sections)) {
    std::vector<cplx> out;
    for (const auto& s : *l) out.push_back(parse_complex(s));
    return out;
  }
  auto v = find(key, sections);
  if (!v) throw ValidationError("missing_parameter", "missing parameter '" + key + "'");
  std::string s = *v;
  for (char& ch : s)
    if (ch == ':' || ch == ';') ch = ',';
  return parse_complex_list(s, ',');
}

Vec4 Config::get_n(const std::string& key, const std::vector<std::string>& sections) const {
  if (!has(key, sections)) return Vec4::Zero();
  auto v = get_complex_list(key, sections);
  if (v.size() != 4) throw ValidationError("parse", "n needs four entries n0,n1,n2,n3");
  Vec4 n;
  for (int k = 0; k < 4; ++k) n[k] = v[k];
  return n;
}

// ---------------------------------------------------------------- tables

Metadata convention_metadata(const LoopConstants& lc) {
  return {
      {"e_ordering", "e1=wp(1/2) e2=wp(tau/2) e3=wp((1+tau)/2)"},
      {"lattice", "omega1=1 omega2=tau omega3=1+tau"},
      {"p_representative", "fundamental cell of +-p with Im>=0, Re>=0 on ties; trajectories lifted continuously"},
      {"loop_constants", "radius=" + format_real(lc.radius) + " segments=" + std::to_string(lc.segments) +
                             " detour=" + format_real(lc.detour) + " clearance=" + format_real(lc.clearance) +
                             " basepoint=0.11+0.13tau"},
      {"complex_format", "re+imj"},
  };
}

Table trajectory_table(const Trajectory& traj) {
  Table t;
  t.columns = {"tau_re", "tau_im", "p_re", "p_im", "A_re", "A_im", "wp_p_re", "wp_p_im"};
  for (size_t i = 0; i < traj.size(); ++i) {
    cplx w = wp(traj.p[i], lattice_invariants(traj.tau[i]));
    t.rows.push_back({format_real(traj.tau[i].real()), format_real(traj.tau[i].imag()), format_real(traj.p[i].real()),
                      format_real(traj.p[i].imag()), format_real(traj.A[i].real()), format_real(traj.A[i].imag()),
                      format_real(w.real()), format_real(w.imag())});
  }
  return t;
}

void write_csv(std::ostream& os, const Table& table, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

json table_to_json(const Table& table) {
  json j;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j;
}

json metadata_to_json(const Metadata& meta) {
  json j = json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

// ---------------------------------------------------------------- scenarios

namespace {

std::string cx(cplx z) { return format_complex(z); }

json cx4(const Vec4& n) {
  json j = json::array();
  for (int k = 0; k < 4; ++k) j.push_back(cx(n[k]));
  return j;
}

json check(const std::string& name, double value, double threshold, bool pass) {
  return json{{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}};
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> checks_of(const Config& c, const std::vector<std::string>& sec) {
  if (auto l = c.find_list("check", sec)) return *l;
  return split_words(c.get_string("check", "", sec));
}

LoopConstants loop_constants(const Config& c, const std::vector<std::string>& sec) {
  LoopConstants lc;
  lc.radius = c.get_double("radius", lc.radius, sec);
  lc.segments = c.get_int("segments", lc.segments, sec);
  lc.detour = c.get_double("detour", lc.detour, sec);
  lc.clearance = c.get_double("clearance", lc.clearance, sec);
  if (lc.radius <= 0 || lc.segments < 8 || lc.detour <= 0 || lc.clearance <= 0)
    throw ValidationError("loop constants must be positive (segments >= 8)");
  return lc;
}

std::vector<cplx> tau_path(const Config& c, const std::vector<std::string>& sec) {
  std::string key = c.has("tau-path", sec) ? "tau-path" : "path";
  auto path = c.get_complex_list(key, sec);
  if (path.size() < 2) throw ValidationError("tau path needs at least two vertices");
  for (cplx t : path) check_tau(t);
  return path;
}

std::vector<cplx> default_z_samples(cplx tau) {
  return {0.13 + 0.27 * tau, -0.31 + 0.4 * tau, 0.2 - 0.15 * tau, 0.41 + 0.05 * tau, -0.17 - 0.33 * tau};
}

std::vector<cplx> z_samples(const Config& c, const std::vector<std::string>& sec, cplx tau) {
  return c.has("z", sec) ? c.get_complex_list("z", sec) : default_z_samples(tau);
}

json lattice_json(const LatticeData& lat) {
  CurveMap cm = curve_map(lat);
  return json{{"tau", cx(lat.tau)},   {"eta1", cx(lat.eta1)}, {"eta2", cx(lat.eta2)},
              {"e1", cx(lat.e1)},     {"e2", cx(lat.e2)},     {"e3", cx(lat.e3)},
              {"g2", cx(lat.g2)},     {"g3", cx(lat.g3)},     {"t", cx(cm.t)},
              {"dt_dtau", cx(cm.dt_dtau)}, {"theta1_prime", cx(lat.theta1_prime)},
              {"dedekind_eta", cx(lat.dedekind_eta)}};
}

LameParams lame_from(const Config& c, const std::vector<std::string>& sec, cplx tau) {
  Vec4 n = c.get_n("n", sec);
  cplx p = c.get_complex("p", sec);
  cplx A = c.get_complex("A", sec);
  if (c.has("B", sec)) {
    LameParams lp = make_non_apparent(n, p, A, c.get_complex("B", sec), tau);
    return lp;
  }
  return make_apparent(n, p, A, tau);
}

json lame_json(const LameParams& lp) {
  return json{{"n", cx4(lp.n)}, {"p", cx(lp.p)}, {"A", cx(lp.A)}, {"B", cx(lp.B)}, {"tau", cx(lp.tau)},
              {"apparent", lp.apparent}};
}

json fuchsian_json(const FuchsianParams& fp) {
  return json{{"t", cx(fp.t)},           {"lambda", cx(fp.lambda)},     {"mu", cx(fp.mu)},
              {"K", cx(fp.K)},           {"theta0", cx(fp.theta0)},     {"theta1", cx(fp.theta1)},
              {"theta_t", cx(fp.theta_t)}, {"theta_inf", cx(fp.theta_inf)}, {"kappa_hat", cx(fp.kappa_hat)},
              {"alpha_hat", cx(fp.alpha_hat)}};
}

json scheme_json(const RiemannScheme& rs) {
  json j = json::array();
  for (int k = 0; k < 5; ++k)
    j.push_back(json{{"point", rs.points[k]}, {"exponents", {cx(rs.exponents[k][0]), cx(rs.exponents[k][1])}}});
  return j;
}

Table flat_table(const json& report) {
  Table t;
  t.columns = {"key", "value"};
  std::function<void(const json&, const std::string&)> walk = [&](const json& j, const std::string& prefix) {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    } else if (j.is_array()) {
      for (size_t i = 0; i < j.size(); ++i) walk(j[i], prefix + "." + std::to_string(i));
    } else if (j.is_string()) {
      t.rows.push_back({prefix, j.get<std::string>()});
    } else {
      t.rows.push_back({prefix, j.dump()});
    }
  };
  walk(report, "");
  return t;
}

FlowOptions flow_options(const Scenario& sc, int per_segment) {
  FlowOptions fo;
  fo.rel_tol = sc.tol;
  fo.abs_tol = std::max(1e-13, sc.tol * 1e-1);
  fo.per_segment = per_segment;
  return fo;
}

double lmnc_max(const Trajectory& tr) {
  double worst = 0;
  for (size_t i = 0; i < tr.size(); ++i) {
    LatticeData lat = lattice_invariants(tr.tau[i]);
    FlowRhs r = flow_rhs({tr.p[i], tr.A[i]}, lat, tr.n);
    worst = std::max(worst, deformation_coeffs(tr.p[i], tr.A[i], r.p_dot, r.A_dot, tr.n, lat).max_abs());
  }
  return worst;
}

void finish_checks(RunResult& rr, const json& checks) {
  rr.report["checks"] = checks;
  for (const auto& c : checks) rr.checks_passed = rr.checks_passed && c["pass"].get<bool>();
}

RunResult run_eval(const Scenario& sc) {
  const std::vector<std::string> sec{"eval", "lame"};
  const Config& c = sc.params;
  cplx tau = c.get_complex("tau", sec);
  check_tau(tau);
  LatticeData lat = lattice_invariants(tau);
  RunResult rr;
  rr.report["lattice"] = lattice_json(lat);
  std::optional<LameParams> lp;
  if (c.has("p", sec)) {
    lp = lame_from(c, sec, tau);
    validate_lame(*lp);
    rr.report["lame"] = lame_json(*lp);
    rr.report["K"] = cx(hamiltonian_K(lp->p, lp->A, lp->n, lat));
    rr.report["frobenius_obstruction"] = cx(frobenius_log_coefficient(*lp));
  }
  Table t;
  t.columns = {"z_re", "z_im", "sigma_re", "sigma_im", "zeta_re", "zeta_im", "wp_re", "wp_im", "wp_prime_re",
               "wp_prime_im"};
  if (lp) {
    t.columns.push_back("I_re");
    t.columns.push_back("I_im");
  }
  if (c.has("z", sec)) {
    for (cplx z : c.get_complex_list("z", sec)) {
      if (lattice_distance(z, tau) < kPoleTol) throw PoleError("z lies on the lattice");
      WeierstrassValues w = weierstrass_suite(z, lat);
      std::vector<std::string> row{format_real(z.real()),     format_real(z.imag()),     format_real(w.sigma.real()),
                                   format_real(w.sigma.imag()), format_real(w.zeta.real()), format_real(w.zeta.imag()),
                                   format_real(w.wp.real()),    format_real(w.wp.imag()),  format_real(w.wp_prime.real()),
                                   format_real(w.wp_prime.imag())};
      if (lp) {
        cplx I = potential_I(z, *lp, lat);
        row.push_back(format_real(I.real()));
        row.push_back(format_real(I.imag()));
      }
      t.rows.push_back(row);
    }
    rr.table = t;
  }
  return rr;
}

RunResult run_flow(const Scenario& sc) {
  const std::vector<std::string> sec{"flow", "lame"};
  const Config& c = sc.params;
  Vec4 n = c.get_n("n", sec);
  auto path = tau_path(c, sec);
  FlowState s0{c.get_complex("p", sec), c.get_complex("A", sec)};
  validate_lame(make_apparent(n, s0.p, s0.A, path.front()));
  int samples = c.get_int("samples", 200, sec);
  OdeStats stats;
  Trajectory tr = integrate_flow(s0, path, n, flow_options(sc, samples), &stats);
  RunResult rr;
  rr.table = trajectory_table(tr);
  LatticeData le = lattice_invariants(tr.tau.back());
  rr.report["n"] = cx4(n);
  rr.report["end"] = json{{"tau", cx(tr.tau.back())}, {"p", cx(tr.p.back())}, {"A", cx(tr.A.back())},
                          {"wp_p", cx(wp(tr.p.back(), le))}};
  rr.report["steps"] = json{{"accepted", stats.accepted}, {"rejected", stats.rejected}};
  json checks = json::array();
  for (const auto& name : checks_of(c, sec)) {
    if (name == "pvi") {
      double r = elliptic_pvi_residual(tr, painleve_params_from_n(n));
      checks.push_back(check("pvi", r, 1e-6, r < 1e-6));
    } else if (name == "lmnc") {
      double r = lmnc_max(tr);
      checks.push_back(check("lmnc", r, 1e-8, r < 1e-8));
    } else if (name == "F") {
      double r = F_log_derivative_residual(tr);
      checks.push_back(check("F", r, 1e-6, r < 1e-6));
    } else if (name == "drift") {
      double r = isomonodromy_drift(tr, 5, loop_constants(c, sec));
      checks.push_back(check("drift", r, 1e-6, r < 1e-6));
    } else {
      throw ValidationError("unknown check '" + name + "' (pvi, lmnc, F, drift)");
    }
  }
  finish_checks(rr, checks);
  return rr;
}

RunResult run_hitchin(const Scenario& sc) {
  const std::vector<std::string> sec{"hitchin", "seed"};
  const Config& c = sc.params;
  HitchinSeed seed{c.get_complex("r", sec), c.get_complex("s", sec)};
  validate_seed(seed);
  auto path = tau_path(c, sec);
  int samples = c.get_int("samples", 200, sec);
  Trajectory tr = hitchin_trajectory(seed, path, samples);
  RunResult rr;
  rr.table = trajectory_table(tr);
  HitchinLame h0 = hitchin_lame_data(seed, path.front());
  rr.report["seed"] = json{{"r", cx(seed.r)}, {"s", cx(seed.s)}};
  rr.report["start"] = lame_json(h0.params);
  rr.report["constraint_residual"] = std::abs(h0.constraint_residual);
  json checks = json::array();
  for (const auto& name : checks_of(c, sec)) {
    if (name == "pvi") {
      double r = elliptic_pvi_residual(tr, painleve_params_from_n(Vec4::Zero()));
      checks.push_back(check("pvi", r, 1e-6, r < 1e-6));
    } else if (name == "flow") {
      FlowOptions fo = flow_options(sc, samples);
      Trajectory f = integrate_flow({tr.p.front(), tr.A.front()}, path, Vec4::Zero(), fo);
      double worst = 0;
      for (size_t i = 0; i < f.size(); ++i) {
        LatticeData lat = lattice_invariants(f.tau[i]);
        worst = std::max(worst, std::abs(wp(f.p[i], lat) - wp(tr.p[i], lat)) / (1.0 + std::abs(wp(tr.p[i], lat))));
      }
      checks.push_back(check("flow", worst, 1e-8, worst < 1e-8));
    } else if (name == "monodromy") {
      MonodromyRep rep = monodromy_rep(h0.params);
      double worst = std::abs(rep.matrices["gamma_plus"].trace() + 2.0);
      worst = std::max(worst, std::abs(rep.matrices["gamma_minus"].trace() + 2.0));
      for (const auto& l : rep.loops) {
        if (l.kind != LoopKind::Ell1 && l.kind != LoopKind::Ell2) continue;
        auto f = hitchin_translation_factors(h0, l.vertices);
        worst = std::max(worst, std::abs(rep.matrices[l.label].trace() - (f[0] + f[1])));
      }
      checks.push_back(check("monodromy", worst, 1e-5, worst < 1e-5));
    } else if (name == "schwarzian") {
      double r = schwarzian_residual(seed, path.front(), default_z_samples(path.front()));
      checks.push_back(check("schwarzian", r, 1e-7, r < 1e-7));
    } else {
      throw ValidationError("unknown check '" + name + "' (pvi, flow, monodromy, schwarzian)");
    }
  }
  finish_checks(rr, checks);
  return rr;
}

RunResult run_monodromy(const Scenario& sc) {
  const std::vector<std::string> sec{"monodromy", "lame", "seed"};
  const Config& c = sc.params;
  cplx tau = c.get_complex("tau", sec);
  check_tau(tau);
  LoopConstants lc = loop_constants(c, sec);
  std::optional<HitchinLame> h;
  LameParams lp;
  if (c.has("r", sec)) {
    h = hitchin_lame_data({c.get_complex("r", sec), c.get_complex("s", sec)}, tau);
    lp = h->params;
  } else {
    lp = lame_from(c, sec, tau);
  }
  validate_lame(lp);
  cplx q0 = c.get_complex("basepoint", default_basepoint(tau), sec);
  MonodromyRep rep = monodromy_rep(lp, q0, lc);
  RunResult rr;
  rr.report["lame"] = lame_json(lp);
  rr.report["basepoint"] = cx(q0);
  Table t;
  t.columns = {"label", "trace_re", "trace_im", "det_error", "m00_re", "m00_im", "m01_re", "m01_im",
               "m10_re", "m10_im", "m11_re", "m11_im"};
  json traces = json::object();
  for (const auto& [label, M] : rep.matrices) {
    std::vector<std::string> row{label, format_real(M.trace().real()), format_real(M.trace().imag()),
                                 format_real(std::abs(M.determinant() - 1.0))};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        row.push_back(format_real(M(i, j).real()));
        row.push_back(format_real(M(i, j).imag()));
      }
    t.rows.push_back(row);
    traces[label] = cx(M.trace());
  }
  rr.report["traces"] = traces;
  if (h) {
    json expected = json::object();
    expected["gamma_plus"] = cx(-2.0);
    expected["gamma_minus"] = cx(-2.0);
    for (const auto& l : rep.loops) {
      if (l.kind != LoopKind::Ell1 && l.kind != LoopKind::Ell2) continue;
      auto f = hitchin_translation_factors(*h, l.vertices);
      expected[l.label] = cx(f[0] + f[1]);
    }
    rr.report["expected_traces"] = expected;
  }
  rr.table = t;
  return rr;
}

RunResult run_convert(const Scenario& sc) {
  const Config& c = sc.params;
  std::string dir = c.get_string("direction", "lame2fuchs", {"convert"});
  RunResult rr;
  rr.report["direction"] = dir;
  if (dir == "lame2fuchs") {
    const std::vector<std::string> sec{"convert", "lame"};
    cplx tau = c.get_complex("tau", sec);
    check_tau(tau);
    LameParams lp = lame_from(c, sec, tau);
    FuchsianParams fp = lame_to_fuchsian(lp);
    LameParams back = fuchsian_to_lame(fp, tau);
    LameParams ref = canonicalize(make_apparent(lp.n, lp.p, lp.A, tau), lattice_invariants(tau));
    double err = std::max({std::abs(back.p - ref.p), std::abs(back.A - ref.A), std::abs(back.B - ref.B),
                           (back.n - ref.n).norm()});
    double scale = 1.0 + std::max({std::abs(ref.A), std::abs(ref.B)});
    rr.report["lame"] = lame_json(ref);
    rr.report["fuchsian"] = fuchsian_json(fp);
    rr.report["schemes"] = json{{"fuchsian", scheme_json(scheme_fuchsian(fp))},
                                {"lame_cp1", scheme_json(scheme_lame_cp1(lp.n))},
                                {"gauged", scheme_json(scheme_gauged(lp.n))}};
    rr.report["round_trip"] = json{{"max_error", err / scale}, {"tolerance", 1e-10}, {"pass", err / scale < 1e-10}};
    rr.checks_passed = err / scale < 1e-10;
  } else if (dir == "fuchs2lame") {
    const std::vector<std::string> sec{"convert", "fuchsian"};
    cplx tau = c.get_complex("tau", sec);
    check_tau(tau);
    LatticeData lat = lattice_invariants(tau);
    FuchsianParams fp;
    fp.t = c.get_complex("t", curve_map(lat).t, sec);
    fp.lambda = c.get_complex("lambda", sec);
    fp.mu = c.get_complex("mu", sec);
    if (c.has("n", sec)) {
      auto th = thetas_from_n(c.get_n("n", sec));
      fp.theta0 = th[0], fp.theta1 = th[1], fp.theta_t = th[2], fp.theta_inf = th[3];
    } else {
      fp.theta0 = c.get_complex("theta0", sec);
      fp.theta1 = c.get_complex("theta1", sec);
      fp.theta_t = c.get_complex("theta_t", sec);
      fp.theta_inf = c.get_complex("theta_inf", sec);
    }
    fp.alpha_hat = -0.5 * (fp.theta_t + fp.theta0 + fp.theta1 + fp.theta_inf - 1.0);
    fp.kappa_hat = fp.alpha_hat * (fp.alpha_hat + fp.theta_inf);
    fp.K = c.get_complex("K", cp1_K(fp.lambda, fp.mu, fp.t, cp1_params(fp)), sec);
    LameParams lp = fuchsian_to_lame(fp, tau);
    FuchsianParams back = lame_to_fuchsian(lp);
    double err = std::max({std::abs(back.lambda - fp.lambda), std::abs(back.mu - fp.mu), std::abs(back.K - fp.K)});
    double scale = 1.0 + std::max({std::abs(fp.mu), std::abs(fp.K)});
    rr.report["fuchsian"] = fuchsian_json(fp);
    rr.report["lame"] = lame_json(lp);
    rr.report["schemes"] = json{{"fuchsian", scheme_json(scheme_fuchsian(fp))},
                                {"lame_cp1", scheme_json(scheme_lame_cp1(lp.n))},
                                {"gauged", scheme_json(scheme_gauged(lp.n))}};
    rr.report["round_trip"] = json{{"max_error", err / scale}, {"tolerance", 1e-10}, {"pass", err / scale < 1e-10}};
    rr.checks_passed = err / scale < 1e-10;
  } else {
    throw ValidationError("direction must be lame2fuchs or fuchs2lame");
  }
  return rr;
}

RunResult run_collapse(const Scenario& sc) {
  const std::vector<std::string> sec{"collapse", "lame"};
  const Config& c = sc.params;
  Vec4 n = c.has("n", sec) ? c.get_n("n", sec) : Vec4(1.0, 0.0, 0.0, 0.0);
  std::string b = c.get_string("branch", "plus", sec);
  if (b != "plus" && b != "minus") throw ValidationError("branch must be plus or minus");
  Branch br = b == "plus" ? Branch::Plus : Branch::Minus;
  cplx tau0 = c.get_complex("tau0", cplx(0.1, 1.2), sec);
  check_tau(tau0);
  cplx ht = c.get_complex("h_tilde", cplx(0.3, -0.2), sec);
  SteerOptions so;
  so.rel_tol = sc.tol;
  so.seed_perturb = c.get_double("seed_perturb", so.seed_perturb, sec);
  so.samples = c.get_int("samples", so.samples, sec);
  so.delta_min = c.get_double("delta_min", so.delta_min, sec);
  SteeredCollapse st = steer_collapse(n, br, ht, tau0, so);
  CollapseFit fit = fit_collapse(st.traj);
  cplx expected = branch_c0_squared(n[0], br);
  CollapseData cd = collapse_constants_fitted(n, br, fit.c0_squared, fit.h_tilde, fit.tau0);
  LimitReport lr = limit_potential_residual(st.traj, cd, z_samples(c, sec, tau0));
  RunResult rr;
  rr.table = trajectory_table(st.traj);
  double rel = std::abs(fit.c0_squared / expected - 1.0);
  bool mono = true;
  for (size_t i = lr.residual.size() - 4; i + 1 < lr.residual.size(); ++i) mono = mono && lr.residual[i + 1] < lr.residual[i];
  rr.report["fit"] = json{{"tau0", cx(fit.tau0)},   {"tau0_newton", cx(st.tau0_newton)},
                          {"c0_squared", cx(fit.c0_squared)}, {"c0_squared_expected", cx(expected)},
                          {"h_tilde", cx(fit.h_tilde)}, {"residual", fit.residual}, {"samples", fit.samples}};
  rr.report["limit"] = json{{"m", cx(cd.m)},         {"B0", cx(cd.B0)},      {"c", cx(cd.c)},
                            {"beta", cx(cd.beta)},   {"t0", cx(cd.t0)},      {"residual", lr.residual},
                            {"B_minus_B0", lr.b_minus_b0}, {"p_abs", lr.p_abs}, {"slope", lr.slope}};
  json checks = json::array();
  checks.push_back(check("c0_squared_rel", rel, 1e-2, rel < 1e-2));
  checks.push_back(check("slope", lr.slope, 0.2, std::abs(lr.slope - 2.0) <= 0.2));
  checks.push_back(check("monotone_last_4", mono ? 1.0 : 0.0, 1.0, mono));
  finish_checks(rr, checks);
  return rr;
}

RunResult run_verify(const Scenario& sc) {
  const std::vector<std::string> sec{"verify"};
  const Config& c = sc.params;
  std::string suite = c.get_string("suite", "lemma-2.2", sec);
  cplx tau = c.get_complex("tau", cplx(0.0, 1.0), sec);
  check_tau(tau);
  RunResult rr;
  Table t;
  t.columns = {"formula", "z_re", "z_im", "residual", "threshold", "pass"};
  double worst = 0, thr = 0;
  auto add = [&](const std::string& f, cplx z, double r, double threshold) {
    t.rows.push_back({f, format_real(z.real()), format_real(z.imag()), format_real(r), format_real(threshold),
                      r < threshold ? "true" : "false"});
    worst = std::max(worst, r / threshold);
  };
  if (suite == "lemma-2.2") {
    static const char* names[6] = {"dlog_sigma", "dzeta", "dwp", "dwp_prime", "deta1", "dlog_theta1_prime"};
    double h = c.get_double("fd-step", 1e-3, sec);
    thr = 1e-6;
    for (cplx z : z_samples(c, sec, tau)) {
      auto e = tau_derivative_rel_errors(tau_derivative_suite(z, tau), tau_derivative_fd(z, tau, h));
      for (int k = 0; k < 6; ++k) add(names[k], z, e[k], thr);
    }
  } else if (suite == "lattice") {
    thr = 1e-12;
    LatticeData lat = lattice_invariants(tau);
    double sc0 = 1.0 + std::abs(lat.e1) + std::abs(lat.e2) + std::abs(lat.e3);
    add("e1+e2+e3", 0.0, std::abs(lat.e1 + lat.e2 + lat.e3) / sc0, thr);
    add("legendre", 0.0, std::abs(lat.eta1 * tau - lat.eta2 - 2.0 * kPi * kI) / (1.0 + std::abs(lat.eta2)), thr);
    cplx et = lat.dedekind_eta;
    add("theta1_prime=2pi eta^3", 0.0, std::abs(lat.theta1_prime - 2.0 * kPi * et * et * et) / std::abs(lat.theta1_prime), thr);
    cplx t3 = lat.theta3 * lat.theta3;
    add("e1-e2=pi^2 theta3^4", 0.0, std::abs(lat.e1 - lat.e2 - kPi * kPi * t3 * t3) / sc0, thr);
    for (cplx z : z_samples(c, sec, tau)) {
      WeierstrassValues w = weierstrass_suite(z, lat);
      cplx rhs = 4.0 * w.wp * w.wp * w.wp - lat.g2 * w.wp - lat.g3;
      add("wp'^2 cubic", z, std::abs(w.wp_prime * w.wp_prime - rhs) / (1.0 + std::abs(rhs)), thr);
    }
  } else if (suite == "oracle") {
    thr = 1e-8;
    int radius = c.get_int("radius", 200, sec);
    LatticeData lat = lattice_invariants(tau);
    for (cplx z : z_samples(c, sec, tau)) {
      OracleValues o = oracle_lattice_sums(z, tau, radius);
      WeierstrassValues w = weierstrass_suite(z, lat);
      add("wp", z, std::abs(o.wp - w.wp) / (1.0 + std::abs(w.wp)), thr);
      add("zeta", z, std::abs(o.zeta - w.zeta) / (1.0 + std::abs(w.zeta)), thr);
      add("eta1", z, std::abs(o.eta1 - lat.eta1) / (1.0 + std::abs(lat.eta1)), thr);
    }
  } else {
    throw ValidationError("unknown suite '" + suite + "' (lemma-2.2, lattice, oracle)");
  }
  rr.table = t;
  rr.report["suite"] = suite;
  rr.report["tau"] = cx(tau);
  json checks = json::array();
  checks.push_back(check(suite, worst * thr, thr, worst < 1.0));
  finish_checks(rr, checks);
  return rr;
}

}  // namespace

RunResult execute(const Scenario& sc) {
  spdlog::info("running scenario '{}'", sc.kind);
  if (!(sc.tol >= 1e-13 && sc.tol <= 1e-6)) throw ValidationError("tolerance", "--tol must lie in [1e-13, 1e-6]");
  RunResult rr;
  if (sc.kind == "eval") rr = run_eval(sc);
  else if (sc.kind == "flow") rr = run_flow(sc);
  else if (sc.kind == "hitchin") rr = run_hitchin(sc);
  else if (sc.kind == "monodromy") rr = run_monodromy(sc);
  else if (sc.kind == "convert") rr = run_convert(sc);
  else if (sc.kind == "collapse") rr = run_collapse(sc);
  else if (sc.kind == "verify") rr = run_verify(sc);
  else throw ValidationError("unknown scenario kind '" + sc.kind + "'");
  rr.report["kind"] = sc.kind;
  rr.report["all_checks_passed"] = rr.checks_passed;
  return rr;
}

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  return 3;
}

json error_record(const std::exception& e) {
  std::string code = "internal";
  if (auto* ie = dynamic_cast<const Error*>(&e)) code = ie->code();
  return json{{"error", code}, {"message", e.what()}, {"exit_status", exit_status_for(e)}};
}

int run(const Scenario& sc, std::ostream& out, std::ostream& err) {
  RunResult rr;
  try {
    rr = execute(sc);
  } catch (const std::exception& e) {
    spdlog::debug("{}", e.what());
    err << error_record(e).dump() << "\n";
    return exit_status_for(e);
  }
  Metadata meta = convention_metadata(loop_constants(sc.params, {sc.kind}));
  std::ofstream file;
  std::ostream* os = &out;
  if (!sc.out.empty()) {
    file.open(sc.out);
    if (!file) {
      err << json{{"error", "output"}, {"message", "cannot write '" + sc.out + "'"}, {"exit_status", 2}}.dump() << "\n";
      return 2;
    }
    os = &file;
  }
  if (sc.format == Format::Json) {
    json j{{"metadata", metadata_to_json(meta)}, {"report", rr.report}};
    if (rr.table) j["table"] = table_to_json(*rr.table);
    *os << j.dump(2) << "\n";
  } else if (rr.table) {
    write_csv(*os, *rr.table, meta);
    if (!sc.out.empty()) {
      std::ofstream rep(sc.out + ".report.json");
      rep << json{{"metadata", metadata_to_json(meta)}, {"report", rr.report}}.dump(2) << "\n";
    } else {
      err << rr.report.dump() << "\n";
    }
  } else {
    write_csv(*os, flat_table(rr.report), meta);
  }
  if (!rr.checks_passed) {
    err << json{{"error", "check_failed"}, {"message", "one or more checks failed"}, {"exit_status", 3}}.dump() << "\n";
    return 3;
  }
  return 0;
}

void init_logging() {
  const char* v = std::getenv("ISL_LOG");
  std::string lvl = v ? v : "warn";
  spdlog::level::level_enum e = spdlog::level::from_str(lvl);
  if (lvl != "off" && e == spdlog::level::off) e = spdlog::level::warn;
  auto logger = spdlog::get("isl");
  if (!logger) logger = spdlog::stderr_color_mt("isl");
  spdlog::set_default_logger(logger);
  spdlog::set_level(e);
  spdlog::set_pattern("[isl %l] %v");
}

}  // namespace isl
