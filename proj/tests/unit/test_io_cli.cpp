#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dncone/cli.hpp"
#include "dncone/errors.hpp"
#include "dncone/io.hpp"
#include "json.hpp"
#include "test_helpers.hpp"

using namespace dncone;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dncone_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(MatrixIo, ParsesSpecExample) {
  const SymMatrix a = parse_matrix(R"({"n":2,"rows":[[2,1],[1,2]]})");
  EXPECT_EQ(a, SymMatrix(2, {2, 1, 1, 2}));
}

TEST(MatrixIo, RoundTripCorpus) {
  SplitMix64 rng(1000);
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + k % 9;
    SymMatrix a = k % 2 ? testing_support::random_symmetric(n, rng, -1e3, 1e3)
                        : testing_support::sample(n, 3, static_cast<std::uint64_t>(k));
    if (k % 7 == 0) a = std::pow(10.0, rng.uniform(-300, 300)) * a;
    EXPECT_EQ(parse_matrix(serialize_matrix(a)), a);
  }
}

TEST(MatrixIo, ParseErrorsCarryPosition) {
  try {
    parse_matrix("{\"n\":2,\n\"rows\":[[2,1],[1,2]\n");
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 2u);
  }
  try {
    parse_matrix("{\"n\":2, \"rows\": [[2, x]]}");
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 22u);
  }
  EXPECT_THROW(parse_matrix(R"({"n":2,"rows":[[2,1]]})"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"n":2,"rows":[[2,1],[1,"a"]]})"), ParseError);
  EXPECT_THROW(parse_matrix(R"([1,2])"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"n":1,"rows":[[2]]})"), InputError);
}

TEST(MatrixIo, SymmetryHandling) {
  std::vector<std::string> warnings;
  const SymMatrix a = parse_matrix(R"({"n":2,"rows":[[2,1],[1.0000000000001,2]]})", &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(a(0, 1), a(1, 0));
  EXPECT_THROW(parse_matrix(R"({"n":2,"rows":[[2,1],[1.001,2]]})"), SymmetryError);
}

TEST(Reports, CsvHeadersAreFixed) {
  EXPECT_EQ(render(check_dn(SymMatrix::identity(2)), Format::csv).substr(0, csv_header::dn_verdict.size()),
            csv_header::dn_verdict);
  const ProbeReport r = find_violation(3, ScalarFunc::power(0.5), 10000, 0);
  const std::string csv = render(r, Format::csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header::probe_report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Reports, JsonWitnessReparses) {
  const ProbeReport r = find_violation(3, ScalarFunc::power(0.5), 10000, 0);
  ASSERT_TRUE(r.witness);
  const auto j = nlohmann::json::parse(render(r, Format::json));
  const SymMatrix back = parse_matrix(j["witness"]["matrix"].dump());
  EXPECT_EQ(back, r.witness->matrix);
  EXPECT_FALSE(j.contains("elapsed_seconds"));
}

TEST_F(CliFiles, CheckDnExitCodes) {
  const std::string dn = write("dn.json", R"({"n":2,"rows":[[2,1],[1,2]]})");
  const std::string notdn = write("notdn.json", R"({"n":2,"rows":[[1,2],[2,1]]})");
  const std::string bad = write("bad.json", R"({"n":2,"rows":[[1,2],[2,1])");
  const std::string asym = write("asym.json", R"({"n":2,"rows":[[1,0],[0.5,1]]})");
  CliRun r = cli({"check-dn", "--matrix", dn});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"is_dn\": true"), std::string::npos);
  EXPECT_EQ(cli({"check-dn", "--matrix", notdn}).code, 1);
  r = cli({"check-dn", "--matrix", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line"), std::string::npos);
  EXPECT_EQ(cli({"check-dn", "--matrix", asym}).code, 2);
  EXPECT_EQ(cli({"check-dn", "--matrix", path("missing.json")}).code, 2);
  EXPECT_EQ(cli({"check-dn"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliFiles, PowerWritesMatrixAndVerdict) {
  const std::string m = write("m.json", R"({"n":2,"rows":[[2,1],[1,2]]})");
  const CliRun r = cli({"power", "--matrix", m, "--alpha", "2.5", "--out", path("p.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("p.json")));
  EXPECT_EQ(j["func"], "power(alpha=2.5)");
  EXPECT_TRUE(j["dn_verdict"]["is_dn"].get<bool>());
  const SymMatrix fa = parse_matrix(j["matrix"].dump());
  EXPECT_NEAR(fa(0, 1), (std::pow(3.0, 2.5) - 1.0) / 2.0, 1e-12);
  EXPECT_EQ(cli({"power", "--matrix", write("neg.json", R"({"n":2,"rows":[[1,2],[2,1]]})"), "--alpha", "0.5"}).code, 2);
  EXPECT_EQ(cli({"hpower", "--matrix", m, "--alpha", "0.5", "--format", "csv"}).code, 0);
}

TEST_F(CliFiles, AllSubcommandsRun) {
  const std::string m = write("m.json", R"({"n":3,"rows":[[2,1,0.5],[1,2,1],[0.5,1,2]]})");
  const std::vector<std::vector<std::string>> runs = {
      {"divdiff", "--nodes", "0,1,2", "--alpha", "2"},
      {"lemma-deriv", "--alpha", "3", "--beta", "0", "--u", "1", "--order", "2", "--x", "2"},
      {"scan", "--n", "4", "--alpha", "1.5"},
      {"mw", "--n", "3", "--kind", "tabulated", "--tab-nodes", "0,1,2,3", "--tab-values", "0,1,4,9"},
      {"exponent-scan", "--n", "4", "--kind", "power_shift", "--beta", "1"},
      {"exponent-scan", "--n", "4", "--kind", "exp"},
      {"resolvent", "--matrix", m, "--u", "0.5"},
      {"quadpower", "--matrix", m, "--q", "1.5", "--solve-mode", "lu"},
      {"find-violation", "--n", "3", "--alpha", "0.5", "--budget", "2000"},
      {"bracket", "--n", "3", "--resolution", "0.2", "--budget", "2000"},
      {"verify", "--n-max", "2", "--samples", "10"},
  };
  for (const auto& args : runs)
    for (const char* fmt : {"json", "csv"}) {
      auto a = args;
      a.insert(a.end(), {"--format", fmt});
      const CliRun r = cli(a);
      EXPECT_EQ(r.code, 0) << args[0] << " " << fmt << ": " << r.err;
      EXPECT_FALSE(r.out.empty());
    }
  const CliRun lemma = cli({"lemma-deriv", "--alpha", "3", "--beta", "0", "--u", "1", "--order", "2", "--x", "2", "--format", "csv"});
  EXPECT_NE(lemma.out.find(",12\n"), std::string::npos);
}

TEST_F(CliFiles, InvalidInputsExitTwo) {
  EXPECT_EQ(cli({"scan", "--n", "1", "--alpha", "1"}).code, 2);
  EXPECT_EQ(cli({"scan", "--n", "3", "--alpha", "-1"}).code, 2);
  EXPECT_EQ(cli({"scan", "--n", "3", "--kind", "sin"}).code, 2);
  EXPECT_EQ(cli({"scan", "--n", "3", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"find-violation", "--n", "3", "--seed", "-4"}).code, 2);
  EXPECT_EQ(cli({"find-violation", "--n", "3", "--seed", "abc"}).code, 2);
  EXPECT_EQ(cli({"bracket", "--n", "3", "--resolution", "0"}).code, 2);
  EXPECT_EQ(cli({"verify", "--n-max", "9"}).code, 2);
  EXPECT_EQ(cli({"lemma-deriv", "--alpha", "1", "--beta", "1", "--u", "0", "--order", "1", "--x", "1"}).code, 2);
  EXPECT_EQ(cli({"quadpower", "--matrix", write("i.json", R"({"n":2,"rows":[[1,0],[0,1]]})"), "--q", "2"}).code, 2);
}

TEST_F(CliFiles, NumericalFailuresExitThree) {
  EXPECT_EQ(cli({"bracket", "--n", "4", "--upper", "1.5", "--budget", "5000"}).code, 3);
  EXPECT_EQ(cli({"resolvent", "--matrix", write("s.json", R"({"n":2,"rows":[[1,1],[1,1]]})"), "--u", "1", "--p", "1"}).code, 0);
}

TEST_F(CliFiles, VerifyFailureExitsOne) {
  EXPECT_EQ(cli({"verify", "--n-max", "3", "--samples", "10", "--entry-tol", "-1"}).code, 1);
}

TEST_F(CliFiles, ByteIdenticalOutputsAcrossRuns) {
  const std::string m = write("m.json", R"({"n":3,"rows":[[2,1,0.5],[1,2,1],[0.5,1,2]]})");
  const std::vector<std::vector<std::string>> runs = {
      {"find-violation", "--n", "4", "--alpha", "1.7", "--seed", "12"},
      {"bracket", "--n", "3", "--seed", "12", "--format", "csv"},
      {"verify", "--n-max", "3", "--samples", "20", "--seed", "12"},
      {"mw", "--n", "3", "--kind", "tabulated", "--tab-nodes", "0,1,2,3", "--tab-values", "0,1,2,2.5", "--seed", "12"},
      {"quadpower", "--matrix", m, "--q", "2.7"},
  };
  int k = 0;
  for (const auto& args : runs) {
    auto a = args, b = args;
    const std::string pa = path("a" + std::to_string(k)), pb = path("b" + std::to_string(k));
    ++k;
    a.insert(a.end(), {"--out", pa});
    b.insert(b.end(), {"--out", pb, "--jobs", "1"});
    ASSERT_EQ(cli(a).code, 0) << args[0];
    ASSERT_EQ(cli(b).code, 0) << args[0];
    EXPECT_EQ(slurp(pa), slurp(pb)) << args[0];
    EXPECT_FALSE(slurp(pa).empty());
  }
}

TEST_F(CliFiles, SeedFallsBackToEnvironment) {
  const std::vector<std::string> base{"find-violation", "--n", "4", "--alpha", "1.7", "--budget", "300"};
  auto with_seed = base;
  with_seed.insert(with_seed.end(), {"--seed", "77"});
  const std::string explicit_seed = cli(with_seed).out;
  ::setenv("DNCONE_SEED", "77", 1);
  const std::string from_env = cli(base).out;
  ::setenv("DNCONE_SEED", "oops", 1);
  const int bad = cli(base).code;
  ::unsetenv("DNCONE_SEED");
  EXPECT_EQ(explicit_seed, from_env);
  EXPECT_NE(explicit_seed, cli(base).out);
  EXPECT_EQ(bad, 2);
}

TEST_F(CliFiles, BinaryEntryPoint) {
  const std::string m = write("m.json", R"({"n":2,"rows":[[2,1],[1,2]]})");
  const std::string cmd = std::string(DNCONE_CLI_PATH) + " check-dn --matrix " + m + " > " + path("o.txt");
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_NE(slurp(path("o.txt")).find("is_dn"), std::string::npos);
}
