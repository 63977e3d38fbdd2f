// Copyright 2026 The realkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "realkit/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "realkit/io.hpp"
#include "realkit/set_realizer.hpp"

namespace realkit {
namespace {

namespace fs = std::filesystem;
using io::Json;

std::string data(const std::string& name) {
  const char* dir = std::getenv("REALKIT_EXAMPLES");
  return (fs::path(dir ? dir : "tests/data") / name).string();
}

struct Run {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("realkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const Json& content) {
    const std::string path = (dir_ / name).string();
    std::ofstream(path) << content.dump(2);
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

using Cli = ScratchDir;

TEST_F(Cli, RealizeSetDisjointnessIsInfeasibleWithCertificate) {
  const auto result = run({"realize-set", data("disjointness.json")});
  EXPECT_EQ(result.code, 1);
  const Json report = result.report();
  EXPECT_EQ(report["command"], "realize-set");
  EXPECT_EQ(report["status"], "infeasible");
  ASSERT_TRUE(report.contains("certificate"));
  EXPECT_FALSE(report.contains("mixture"));
  EXPECT_EQ(report["certificate"]["kind"], "set");
  EXPECT_TRUE(report["input_digest"].get<std::string>().starts_with("sha256:"));
}

TEST_F(Cli, RealizeSetProductIsFeasibleWithExactMixture) {
  const auto result = run({"realize-set", data("product_n5.json")});
  EXPECT_EQ(result.code, 0);
  const Json report = result.report();
  EXPECT_EQ(report["status"], "feasible");
  EXPECT_FALSE(report.contains("certificate"));
  EXPECT_EQ(report["residual"], "0");
  const SubsetMixture mixture = io::parse_subset_mixture(report["mixture"], 5);
  const MatrixQ p = moments_of_mixture(mixture).p();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_EQ(p(i, j), Rational(i == j ? 1 : 1, i == j ? 2 : 4));
}

TEST_F(Cli, RealizeSetWithGroupSymmetrises) {
  const auto result = run({"realize-set", data("cyclic_c3.json"), "--group", data("c3_group.json")});
  EXPECT_EQ(result.code, 0);
  EXPECT_EQ(result.report()["residual"], "0");
  const auto bad = run({"realize-set", data("product_n2.json"), "--group", data("c3_group.json")});
  EXPECT_EQ(bad.code, 2);
}

TEST_F(Cli, PackingOnEquilateralSpace) {
  const auto result = run({"packing", data("equilateral.json"), "--t", "0.5"});
  EXPECT_EQ(result.code, 0);
  EXPECT_EQ(result.report()["value"], 3);
  EXPECT_EQ(result.report()["status"], "pass");
}

TEST_F(Cli, GammaReportsBounds) {
  const auto result = run({"gamma", data("equilateral.json"), "--n", "5", "--t", "1"});
  EXPECT_EQ(result.code, 0);
  const Json report = result.report();
  EXPECT_EQ(report["value"], 20);
  EXPECT_EQ(report["lower_bound"], "20");
  EXPECT_EQ(report["upper_bound"], "30");
  EXPECT_EQ(run({"gamma", data("equilateral.json"), "--n", "20", "--t", "0.5"}).code, 3);
}

TEST_F(Cli, RangeErrorNamesTheOffendingEntry) {
  const auto result = run({"realize-set", data("bad_range.json")});
  EXPECT_EQ(result.code, 2);
  const Json report = result.report();
  EXPECT_EQ(report["status"], "invalid");
  EXPECT_NE(report["error"].get<std::string>().find("/p/0/1"), std::string::npos) << report["error"];
  EXPECT_NE(result.err.find("/p/0/1"), std::string::npos);
}

TEST_F(Cli, MissingDistIsASchemaError) {
  const auto result = run({"packing", data("missing_dist.json"), "--t", "1"});
  EXPECT_EQ(result.code, 2);
  EXPECT_NE(result.report()["error"].get<std::string>().find("dist"), std::string::npos);
}

TEST_F(Cli, FloatLiteralsAndMalformedJsonAreRejected) {
  const auto floats = write("floats.json", Json::parse(R"({"p": [[0.5]]})"));
  EXPECT_EQ(run({"realize-set", floats}).code, 2);
  const std::string broken = path("broken.json");
  std::ofstream(broken) << "{\"p\": [[";
  EXPECT_EQ(run({"realize-set", broken}).code, 2);
  EXPECT_EQ(run({"realize-set", path("absent.json")}).code, 2);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"packing", data("equilateral.json")}).code, 2);  // --t missing
}

TEST_F(Cli, RandomisedCommandsRequireASeed) {
  EXPECT_EQ(run({"screen-pp", data("pair_pp.json"), "--trials", "10"}).code, 2);
  EXPECT_EQ(run({"contact", "simulate", "--tau1", data("tau_step1.json"), "--tau2", data("tau_step1_5.json"),
                 "--x1", "0,0", "--x2", "1,0"})
                .code,
            2);
  const auto report = write("report.json", run({"realize-set", data("product_n2.json")}).report());
  EXPECT_EQ(run({"sample", report}).code, 2);
  EXPECT_EQ(run({"sample", report, "--seed", "1", "--samples", "5"}).code, 0);
}

TEST_F(Cli, VerifyCertAcceptsGenuineAndRejectsTampered) {
  const Json report = run({"realize-set", data("disjointness.json")}).report();
  const auto genuine = write("genuine.json", report);
  const auto ok = run({"verify-cert", data("disjointness.json"), genuine});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.report()["message"], "certificate valid");

  Json tampered = report["certificate"];
  Rational a01 = parse_rational(tampered["a"][0][1].get<std::string>());
  tampered["a"][0][1] = tampered["a"][1][0] = format_rational(-a01);
  const auto bad = run({"verify-cert", data("disjointness.json"), write("tampered.json", tampered)});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.report()["message"], "certificate invalid");
  EXPECT_NE(bad.err.find("certificate invalid"), std::string::npos);
}

TEST_F(Cli, PointProcessCommands) {
  const auto pair = run({"realize-pp", data("pair_pp.json"), "--objective", "card2"});
  EXPECT_EQ(pair.code, 0);
  EXPECT_EQ(pair.report()["objective"], "4");
  const auto diagonal = run({"realize-pp", data("diagonal_pp.json")});
  EXPECT_EQ(diagonal.code, 1);
  const auto cert = write("pp_report.json", diagonal.report());
  EXPECT_EQ(run({"verify-cert", data("diagonal_pp.json"), cert}).code, 0);
  EXPECT_EQ(run({"realize-pp", data("hardcore_pp.json")}).code, 1);
  EXPECT_EQ(run({"screen-pp", data("pair_pp.json"), "--trials", "200", "--seed", "7"}).code, 0);
  EXPECT_EQ(run({"screen-pp", data("diagonal_pp.json"), "--trials", "200", "--seed", "7"}).code, 1);
  const auto hc = run({"realize-pp", data("pair_pp.json"), "--objective", "chi-hc", "--psi", data("psi_pair.json")});
  EXPECT_EQ(hc.code, 0);
  EXPECT_EQ(hc.report()["objective"], "6");
}

TEST_F(Cli, RegularityChecks) {
  const auto within = run({"regularity", data("pair_pp.json"), "--check", "chi", "--psi", data("psi_pair.json"),
                           "--r", "3"});
  // Atoms are summed as listed: one atom of weight 1 at distance 1.
  EXPECT_EQ(within.code, 0);
  EXPECT_EQ(within.report()["value"], "3");
  EXPECT_EQ(run({"regularity", data("pair_pp.json"), "--check", "chi", "--psi", data("psi_pair.json"), "--r", "2"})
                .code,
            1);
  EXPECT_EQ(run({"regularity", data("pair_pp.json"), "--check", "packing"}).code, 0);
  EXPECT_EQ(run({"regularity", data("pair_pp.json"), "--check", "split", "--psi", data("psi_pair.json"), "--r",
                 "10"})
                .code,
            0);
}

TEST_F(Cli, ContactCommands) {
  const auto bad = run({"contact", "check", "--tau1", data("tau_step1.json"), "--tau2", data("tau_step3.json"),
                        "--l", "1"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.report()["violation"]["r"], "2");
  EXPECT_EQ(run({"contact", "check", "--tau1", data("tau_step1.json"), "--tau2", data("tau_step1_5.json"), "--l",
                 "1"})
                .code,
            0);
  EXPECT_EQ(run({"contact", "check", "--tau1", data("tau_step3.json")}).code, 0);
  const auto sim = run({"contact", "simulate", "--tau1", data("tau_step1.json"), "--tau2", data("tau_step1_5.json"),
                        "--x1", "0,0", "--x2", "1,0", "--samples", "2000", "--seed", "7"});
  EXPECT_EQ(sim.code, 0);
}

TEST_F(Cli, ReportsAreByteIdenticalAcrossReruns) {
  const std::vector<std::vector<std::string>> commands{
      {"realize-set", data("disjointness.json")},
      {"realize-set", data("product_n5.json")},
      {"realize-pp", data("pair_pp.json"), "--objective", "card3"},
      {"screen-pp", data("diagonal_pp.json"), "--trials", "50", "--seed", "3"},
      {"contact", "simulate", "--tau1", data("tau_step1.json"), "--tau2", data("tau_step1_5.json"), "--x1", "0",
       "--x2", "1", "--samples", "1000", "--seed", "11"}};
  for (const auto& args : commands) {
    const auto first = run(args);
    const auto second = run(args);
    EXPECT_EQ(first.out, second.out) << args.front();
    EXPECT_EQ(first.code, second.code);
  }
  auto args = commands.front();
  args.insert(args.end(), {"--out", path("a.json")});
  EXPECT_EQ(run(args).code, 1);
  args.back() = path("b.json");
  run(args);
  std::ifstream a(path("a.json")), b(path("b.json"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str(), run(commands.front()).out);
}

TEST_F(Cli, EveryInfeasibleCertificateRoundTrips) {
  for (const char* instance : {"disjointness.json", "diagonal_pp.json", "hardcore_pp.json"}) {
    const bool set = std::string(instance) == "disjointness.json";
    const auto solved = run({set ? "realize-set" : "realize-pp", data(instance)});
    ASSERT_EQ(solved.code, 1) << instance;
    const auto saved = write("cert.json", solved.report());
    EXPECT_EQ(run({"verify-cert", data(instance), saved}).code, 0) << instance;
  }
}

}  // namespace
}  // namespace realkit
