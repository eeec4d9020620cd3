#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "epscontact/report.hpp"

using namespace epc;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(EPC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) { return std::string(EPC_FIXTURE_DIR) + "/" + name; }

const ReportRow& row(const Report& r, const std::string& name) {
  for (const auto& x : r.rows)
    if (x.name == name) return x;
  throw std::runtime_error("no row " + name);
}

}  // namespace

TEST(Cli, CheckPassesOnRiemannianExample) {
  const CliRun r = run_cli("check " + fixture("su2.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"epsilon\":1"), std::string::npos);
  EXPECT_EQ(r.out.find("NonZero"), std::string::npos);
}

TEST(Cli, ProductReportsFourZeroEquations) {
  const CliRun r = run_cli("--format json product " + fixture("sl2-lor.json") + " " + fixture("su2.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  int zeros = 0;
  for (const auto& c : j["checks"])
    if (c["group"] == "equations of motion" && c["verdict"] == "Zero") ++zeros;
  EXPECT_EQ(zeros, 5);
  EXPECT_EQ(j["results"]["c"], "1");
}

TEST(Cli, NullAnalysisOfMinkowskiExample) {
  RunOptions o;
  const Report r = run_null_analysis(load_input(catalog_source("r3-null"), "r3-null", o), o);
  EXPECT_EQ(r.exit_code(), ExitCode::Pass);
  EXPECT_EQ(r.payload["mu"], "-1");
  EXPECT_EQ(row(r, "Sasaki (h = 0)").verdict, "NonZero");
  EXPECT_EQ(row(r, "K-contact (L_xi g = 0)").verdict, "NonZero");
  EXPECT_EQ(row(r, "N_J = 0").verdict, "NonZero");
  EXPECT_EQ(row(r, "Sasaki iff J integrable").verdict, "Pass");
}

TEST(Cli, UnknownVerdictsExitThree) {
  CliRun r = run_cli("catalog sl2-sasnokc null-analysis");
  EXPECT_EQ(r.code, 3) << r.out;
  r = run_cli("--assume \"a != 0\" catalog sl2-sasnokc null-analysis");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("(NonZero)  K-contact"), std::string::npos) << r.out;
  r = run_cli("--params a=0 catalog sl2-sasnokc null-analysis");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("(Zero)     K-contact"), std::string::npos) << r.out;
}

TEST(Cli, FailuresExitOne) {
  CliRun r = run_cli("check " + fixture("invalid/corrupted-alpha.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  r = run_cli("--orientation +1 catalog su2");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run_cli("--orientation auto catalog su2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("orientation"), std::string::npos);
}

TEST(Cli, InputErrorsExitTwo) {
  const CliRun syntax = run_cli("check " + fixture("invalid/syntax-error.json"));
  EXPECT_EQ(syntax.code, 2);
  EXPECT_NE(syntax.out.find("syntax-error.json:7:"), std::string::npos) << syntax.out;
  const CliRun jacobi = run_cli("check " + fixture("invalid/jacobi-broken.json"));
  EXPECT_EQ(jacobi.code, 2);
  EXPECT_NE(jacobi.out.find("(e1, e2, e3)"), std::string::npos) << jacobi.out;
  EXPECT_EQ(run_cli("null-analysis " + fixture("su2.json")).code, 2);
  EXPECT_EQ(run_cli("product " + fixture("su2.json") + " " + fixture("sl2-lor.json")).code, 2);
  EXPECT_EQ(run_cli("--params lam=2 catalog sl2-lor").code, 2);
  EXPECT_EQ(run_cli("--params mu=1 catalog sl2-lor").code, 2);
  EXPECT_EQ(run_cli("catalog nosuch").code, 2);
  EXPECT_EQ(run_cli("check /nonexistent.json").code, 2);
  EXPECT_EQ(run_cli("--format yaml catalog su2").code, 2);
}

TEST(Cli, TextAndJsonCarryIdenticalVerdicts) {
  for (const std::string name : {"su2", "sl2-null", "sl2-sasnokc"}) {
    const std::string args = "--seed 7 catalog " + name + " " + (name == "su2" ? "classify" : "null-analysis");
    const CliRun text = run_cli(args);
    const CliRun js = run_cli("--format json " + args);
    EXPECT_EQ(text.code, js.code);
    const auto j = nlohmann::json::parse(js.out);
    std::size_t pos = 0;
    for (const auto& c : j["checks"]) {
      const std::string v = c["verdict"];
      std::string shown = c["required"].get<bool>() ? v : "(" + v + ")";
      shown.resize(std::max<std::size_t>(shown.size(), 10), ' ');
      const std::string line = "  " + shown + " " + c["name"].get<std::string>();
      pos = text.out.find(line, pos);
      ASSERT_NE(pos, std::string::npos) << name << ": " << c.dump();
    }
  }
}

TEST(Cli, ReportsAreDeterministic) {
  const std::string args = "--format json --seed 11 catalog sl2-sasnokc null-analysis";
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Cli, CatalogList) {
  const CliRun r = run_cli("catalog --list");
  EXPECT_EQ(r.code, 0);
  for (const auto& n : catalog_names()) EXPECT_NE(r.out.find(n), std::string::npos);
}

TEST(Cli, MonomialSquareRoot) {
  const Scalar lam = Scalar::param("lam");
  EXPECT_EQ(monomial_sqrt(lam * lam).value(), lam);
  EXPECT_EQ(monomial_sqrt(Scalar(Rational(9, 4))).value(), Scalar(Rational(3, 2)));
  EXPECT_FALSE(monomial_sqrt(Scalar(2L)).has_value());
  EXPECT_FALSE(monomial_sqrt(lam).has_value());
  EXPECT_FALSE(monomial_sqrt(lam * lam + Scalar(1L)).has_value());
}
