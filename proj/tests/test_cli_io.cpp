#include <gtest/gtest.h>

#include <sstream>

#include "isl/cli_io.hpp"
#include "isl/errors.hpp"

using namespace isl;
using nlohmann::json;

namespace {

Scenario scenario(const std::string& kind, const std::string& yaml, Format f = Format::Json) {
  Scenario sc;
  sc.kind = kind;
  sc.params = Config::from_string(yaml);
  sc.format = f;
  return sc;
}

}  // namespace

TEST(CliIo, ParseComplexForms) {
  EXPECT_EQ(parse_complex("1.5"), cplx(1.5, 0));
  EXPECT_EQ(parse_complex("2i"), cplx(0, 2));
  EXPECT_EQ(parse_complex("-0.3+0.2j"), cplx(-0.3, 0.2));
  EXPECT_EQ(parse_complex("1e-3-4.5e-1i"), cplx(1e-3, -0.45));
  EXPECT_EQ(parse_complex("i"), cplx(0, 1));
  EXPECT_EQ(parse_complex("-j"), cplx(0, -1));
  EXPECT_EQ(parse_complex(" 0.25 "), cplx(0.25, 0));
  EXPECT_THROW(parse_complex("abc"), ValidationError);
  EXPECT_THROW(parse_complex("1+"), ValidationError);
  EXPECT_THROW(parse_complex(""), ValidationError);
}

TEST(CliIo, FormatRoundTrips) {
  for (cplx z : {cplx(0.1, -0.7), cplx(1.0 / 3.0, 2e-17), cplx(-5e8, 0.0), cplx(0, 1)}) {
    EXPECT_EQ(parse_complex(format_complex(z)), z) << format_complex(z);
  }
  EXPECT_EQ(format_complex(cplx(1.5, -2)), "1.5-2j");
}

TEST(CliIo, ComplexLists) {
  auto v = parse_complex_list("1.0i, 1.5i ,0.2+1j");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[2], cplx(0.2, 1));
  auto w = parse_complex_list("1.0i:1.5i", ':');
  ASSERT_EQ(w.size(), 2u);
}

TEST(CliIo, ConfigSectionsAndLists) {
  Config c = Config::from_string(
      "tol: 1e-10\n"
      "hitchin:\n  r: 0.25\n  s: \"0.1+0.2j\"\n"
      "lame:\n  n: [1, 0, 0, 0]\n  p: \"0.2+0.3j\"\n");
  EXPECT_EQ(c.get_complex("s", {"hitchin"}), cplx(0.1, 0.2));
  EXPECT_EQ(c.get_double("r", 0.0, {"hitchin"}), 0.25);
  EXPECT_EQ(c.get_double("tol", 0.0), 1e-10);
  EXPECT_EQ(c.get_n("n", {"lame"})[0], cplx(1.0));
  EXPECT_FALSE(c.has("r"));
  EXPECT_EQ(c.get_int("missing", 7), 7);
  EXPECT_THROW(c.get_complex("missing"), ValidationError);
  Config o;
  o.set("hitchin.r", "0.3");
  c.merge(o);
  EXPECT_EQ(c.get_double("r", 0.0, {"hitchin"}), 0.3);
  EXPECT_THROW(Config::from_string("[1, 2]"), ValidationError);
  EXPECT_THROW(Config::from_string("a: [1, 2\n"), ValidationError);
}

TEST(CliIo, JsonInputIsAccepted) {
  Config c = Config::from_string(R"({"lame": {"tau": "1.2j", "A": "0.1-0.2j"}})");
  EXPECT_EQ(c.get_complex("A", {"lame"}), cplx(0.1, -0.2));
}

TEST(CliIo, CsvCarriesMetadataAndHeader) {
  Trajectory tr;
  tr.tau = {cplx(0, 1), cplx(0, 1.1)};
  tr.p = {cplx(0.2, 0.3), cplx(0.21, 0.31)};
  tr.A = {cplx(0.1, 0), cplx(0.1, 0.01)};
  std::ostringstream os;
  write_csv(os, trajectory_table(tr), convention_metadata());
  std::string s = os.str();
  EXPECT_EQ(s.rfind("# ", 0), 0u);
  EXPECT_NE(s.find("tau_re,tau_im,p_re,p_im,A_re,A_im,wp_p_re,wp_p_im"), std::string::npos);
  EXPECT_NE(s.find("omega"), std::string::npos);
}

TEST(CliIo, ExitStatusMapping) {
  EXPECT_EQ(exit_status_for(ValidationError("x")), 2);
  EXPECT_EQ(exit_status_for(DomainError("x")), 2);
  EXPECT_EQ(exit_status_for(NumericalError("x")), 3);
  EXPECT_EQ(exit_status_for(PoleError("x")), 3);
  json r = error_record(PoleError("boom"));
  EXPECT_EQ(r["error"], "pole");
  EXPECT_EQ(r["exit_status"], 3);
}

TEST(CliIo, HitchinScenarioRunsChecks) {
  Scenario sc = scenario("hitchin", "r: 0.25\ns: 0.25\ntau-path: \"1.0i:1.5i\"\ncheck: pvi\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(sc, out, err), 0) << err.str();
  json j = json::parse(out.str());
  EXPECT_TRUE(j.contains("metadata"));
  EXPECT_TRUE(j["report"].contains("checks"));
}

TEST(CliIo, RunsAreDeterministic) {
  Scenario sc = scenario("eval", "tau: \"0.1+1.2j\"\nz: \"0.2+0.1j\"\n", Format::Csv);
  std::ostringstream a, b, e1, e2;
  ASSERT_EQ(run(sc, a, e1), 0) << e1.str();
  ASSERT_EQ(run(sc, b, e2), 0);
  EXPECT_EQ(a.str(), b.str());
}

TEST(CliIo, ConvertReportsRoundTrip) {
  Scenario sc = scenario("convert",
                         "direction: lame2fuchs\nlame:\n  tau: \"0.1+1.2j\"\n  n: [0.3, 0.1, -0.2, 0.7]\n"
                         "  p: \"0.23+0.31j\"\n  A: \"0.4-0.2j\"\n");
  RunResult rr = execute(sc);
  EXPECT_TRUE(rr.report["round_trip"]["pass"].get<bool>());
  EXPECT_LT(rr.report["round_trip"]["max_error"].get<double>(), 1e-10);
}

TEST(CliIo, ValidationAndNumericalExits) {
  std::ostringstream out, err;
  EXPECT_EQ(run(scenario("hitchin", "r: 0.5\ns: 0\ntau-path: \"1.0i:1.5i\"\n"), out, err), 2);
  EXPECT_EQ(run(scenario("eval", "tau: \"0.1+1.2j\"\nz: \"1.0\"\n"), out, err), 3);
  EXPECT_EQ(run(scenario("eval", "tau: \"0.1-1.2j\"\n"), out, err), 2);
  EXPECT_EQ(run(scenario("nope", ""), out, err), 2);
  EXPECT_NE(err.str().find("exit_status"), std::string::npos);
}

TEST(CliIo, VerifySuites) {
  for (const char* suite : {"lemma-2.2", "lattice"}) {
    RunResult rr = execute(scenario("verify", std::string("suite: ") + suite + "\ntau: 2i\n"));
    EXPECT_TRUE(rr.checks_passed) << suite;
  }
}
