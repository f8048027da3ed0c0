#include <CLI11.hpp>

#include <iostream>

#include "isl/cli_io.hpp"
#include "isl/errors.hpp"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

// Every subcommand forwards its options into the scenario's key/value map.
void add_flags(CLI::App* sub, std::map<std::string, std::string>& values, std::initializer_list<Flag> flags) {
  for (const auto& f : flags) sub->add_option(std::string("--") + f.name, values[f.name], f.help);
}

}  // namespace

int main(int argc, char** argv) {
  isl::init_logging();
  CLI::App app{"isl: isomonodromy toolkit for the generalized Lame equation"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = 1e-12;
  std::string out, format, config;
  app.add_option("--tol", tol, "relative integration tolerance in [1e-13, 1e-6]");
  app.add_option("--out", out, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config, "scenario file (YAML or JSON)");

  std::map<std::string, std::map<std::string, std::string>> values;
  auto* eval = app.add_subcommand("eval", "elliptic functions and Lame data at one tau");
  add_flags(eval, values["eval"], {{"tau", "modulus"}, {"z", "comma-separated points"}, {"n", "n0,n1,n2,n3"},
                                   {"p", "apparent singularity"}, {"A", "accessory parameter"}, {"B", "B (non-apparent)"}});
  auto* flow = app.add_subcommand("flow", "integrate the Hamiltonian flow along a tau path");
  add_flags(flow, values["flow"], {{"n", "n0,n1,n2,n3"}, {"p", "initial p"}, {"A", "initial A"},
                                   {"tau-path", "vertices a:b:c"}, {"samples", "outputs per segment"},
                                   {"check", "pvi,lmnc,F,drift"}});
  auto* hit = app.add_subcommand("hitchin", "explicit n=0 solutions from a seed (r, s)");
  add_flags(hit, values["hitchin"], {{"r", "seed r"}, {"s", "seed s"}, {"tau-path", "vertices a:b:c"},
                                     {"samples", "outputs per segment"}, {"check", "pvi,flow,monodromy,schwarzian"}});
  auto* mono = app.add_subcommand("monodromy", "monodromy matrices by numerical transport");
  add_flags(mono, values["monodromy"], {{"tau", "modulus"}, {"n", "n0,n1,n2,n3"}, {"p", "p"}, {"A", "A"},
                                        {"B", "B (non-apparent)"}, {"r", "Hitchin seed r"}, {"s", "Hitchin seed s"},
                                        {"basepoint", "loop basepoint"}, {"radius", "loop radius"},
                                        {"segments", "loop segments"}, {"detour", "detour radius"},
                                        {"clearance", "minimum clearance"}});
  auto* conv = app.add_subcommand("convert", "torus <-> CP1 correspondence");
  add_flags(conv, values["convert"], {{"direction", "lame2fuchs or fuchs2lame"}, {"input", "parameter file"},
                                      {"tau", "modulus"}, {"n", "n0,n1,n2,n3"}, {"p", "p"}, {"A", "A"},
                                      {"lambda", "lambda"}, {"mu", "mu"}, {"K", "K"}});
  auto* col = app.add_subcommand("collapse", "steered collapse p -> 0 and limit fit");
  add_flags(col, values["collapse"], {{"n", "n0,n1,n2,n3"}, {"branch", "plus or minus"}, {"h_tilde", "seed h"},
                                      {"tau0", "approximate collapse point"}, {"samples", "inward samples"},
                                      {"seed_perturb", "relative seed perturbation"}, {"z", "limit test points"}});
  auto* ver = app.add_subcommand("verify", "built-in residual suites");
  add_flags(ver, values["verify"], {{"suite", "lemma-2.2, lattice, oracle"}, {"tau", "modulus"},
                                    {"z", "comma-separated points"}, {"fd-step", "finite-difference step"},
                                    {"radius", "oracle radius"}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  isl::Scenario sc;
  sc.kind = app.get_subcommands().front()->get_name();
  sc.tol = tol;
  sc.out = out;
  sc.format = format == "json" || (format.empty() && sc.kind == "convert") ? isl::Format::Json : isl::Format::Csv;
  try {
    if (!config.empty()) sc.params = isl::Config::from_file(config);
    auto& v = values[sc.kind];
    if (auto it = v.find("input"); it != v.end() && !it->second.empty()) {
      sc.params.merge(isl::Config::from_file(it->second));
    }
    for (const auto& [k, val] : v)
      if (!val.empty() && k != "input") sc.params.set(k, val);
  } catch (const std::exception& e) {
    std::cerr << isl::error_record(e).dump() << "\n";
    return isl::exit_status_for(e);
  }
  return isl::run(sc, std::cout, std::cerr);
}
