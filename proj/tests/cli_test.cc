// Copyright 2026 The sparse_ctrb Authors
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

#include "sparse_ctrb/cli.h"

#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/oracle.h"
#include "test_util.h"

namespace sparse_ctrb::cli {
namespace {

std::string Fixture(const std::string& name) {
  return std::string(SPARSE_CTRB_FIXTURE_DIR) + "/" + name + ".json";
}

CommandOptions Options(const std::string& command, const std::string& fixture,
                       int s = 1) {
  CommandOptions o;
  o.command = command;
  o.system_path = Fixture(fixture);
  o.sparsity = s;
  return o;
}

void ExpectSameSystem(const SystemModel& a, const SystemModel& b) {
  EXPECT_EQ(a.D(), b.D());
  EXPECT_EQ(a.H(), b.H());
  ASSERT_EQ(a.has_output(), b.has_output());
  if (a.has_output()) EXPECT_EQ(a.A(), b.A());
}

TEST(SystemFileTest, FixturesMatchTestSystems) {
  ExpectSameSystem(LoadSystemFile(Fixture("example-3c-1")),
                   testing::DiagonalPair());
  ExpectSameSystem(LoadSystemFile(Fixture("example-3c-2")),
                   testing::PermutationInputs());
  ExpectSameSystem(LoadSystemFile(Fixture("example-3c-3")),
                   testing::ShiftChain());
  ExpectSameSystem(LoadSystemFile(Fixture("example-3a-1")),
                   testing::OutputFiveState());
  ExpectSameSystem(LoadSystemFile(Fixture("example-3a-2")),
                   testing::OutputDiagonalPair());
  ExpectSameSystem(LoadSystemFile(Fixture("example-5")),
                   testing::FourStateExample());
}

TEST(SystemFileTest, RoundTripIsIdentity) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const int l = 1 + trial % 3;
    std::optional<Matrix> a;
    if (trial % 2 == 0) a = testing::RandomGaussian(rng, 1 + trial % 3, n);
    const SystemModel sys(testing::RandomGaussian(rng, n, n),
                          testing::RandomGaussian(rng, n, l), a,
                          trial % 3 == 0 ? "" : "sys" + std::to_string(trial));
    const Json first = SerializeSystem(sys);
    const SystemModel parsed = ParseSystem(Json::parse(first.dump()));
    ExpectSameSystem(parsed, sys);
    EXPECT_EQ(parsed.name(), sys.name());
    EXPECT_EQ(SerializeSystem(parsed).dump(), first.dump());
  }
}

TEST(SystemFileTest, RejectsMalformedInput) {
  const auto parse = [](const char* text) {
    return ParseSystem(Json::parse(text));
  };
  EXPECT_THROW(parse(R"({"D": [[1]]})"), InputError);
  EXPECT_THROW(parse(R"({"H": [[1]]})"), InputError);
  EXPECT_THROW(parse(R"([1, 2])"), InputError);
  EXPECT_THROW(parse(R"({"D": [[1, 0], [0]], "H": [[1], [1]]})"), InputError);
  EXPECT_THROW(parse(R"({"D": [[1, "x"], [0, 1]], "H": [[1], [1]]})"),
               InputError);
  EXPECT_THROW(parse(R"({"D": [[1, 0], [0, 1]], "H": [[1]]})"), InputError);
  EXPECT_THROW(parse(R"({"D": [[1, 0]], "H": [[1]]})"), InputError);
  EXPECT_THROW(parse(R"({"D": [[1]], "H": [[1]], "A": [[1, 2]]})"),
               InputError);
  EXPECT_THROW(parse(R"({"D": [[1]], "H": [[1]], "B": [[1]]})"), InputError);
  EXPECT_THROW(parse(R"({"D": [[1]], "H": [[1]], "name": 3})"), InputError);
  EXPECT_THROW(parse(R"({"D": [], "H": [[1]]})"), InputError);
  EXPECT_THROW(LoadSystemFile("/nonexistent/system.json"), InputError);
}

TEST(ToleranceTest, ParsesOneOrThreeValues) {
  const Tolerance one = ParseTolerance("1e-6");
  EXPECT_EQ(one.rank_rel, 1e-6);
  EXPECT_EQ(one.eig_cluster, 1e-6);
  EXPECT_EQ(one.residual_abs, 1e-6);
  const Tolerance three = ParseTolerance("1e-9, 1e-7,1e-5");
  EXPECT_EQ(three.rank_rel, 1e-9);
  EXPECT_EQ(three.eig_cluster, 1e-7);
  EXPECT_EQ(three.residual_abs, 1e-5);
  EXPECT_FALSE(three.exact_rational);
  for (const char* bad : {"", "abc", "1e-6,1e-6", "0", "-1", "1e-6,x,1",
                          "1e-6,1e-6,1e-6,1e-6", "inf"}) {
    EXPECT_THROW(ParseTolerance(bad), InputError) << bad;
  }
}

TEST(VectorArgumentTest, InlineAndErrors) {
  EXPECT_EQ(ParseVectorArgument("[1, -2.5, 0]"),
            testing::Mat(3, 1, {1, -2.5, 0}).col(0));
  EXPECT_THROW(ParseVectorArgument("[1, \"a\"]"), InputError);
  EXPECT_THROW(ParseVectorArgument("[1, 2"), InputError);
  EXPECT_THROW(ParseVectorArgument("/nonexistent/vector.json"), InputError);
}

TEST(CheckCommandTest, FixtureVerdicts) {
  const CommandResult ex1 = RunCommand(Options("check", "example-3c-1"));
  EXPECT_EQ(ex1.exit_code, kExitOk);
  EXPECT_EQ(ex1.report["verdict"], false);
  EXPECT_EQ(ex1.report["details"]["slack"], -1);
  EXPECT_EQ(ex1.report["details"]["controllable"], true);

  const CommandResult ex3 = RunCommand(Options("check", "example-3c-3"));
  EXPECT_EQ(ex3.exit_code, kExitOk);
  EXPECT_EQ(ex3.report["verdict"], true);

  CommandOptions common = Options("check", "example-3c-2", 2);
  common.output_mode = "common-support";
  EXPECT_EQ(RunCommand(common).report["verdict"], false);
  common.output_mode = "state";
  EXPECT_EQ(RunCommand(common).report["verdict"], true);
}

TEST(CheckCommandTest, OutputMode) {
  CommandOptions o = Options("check", "example-3a-1");
  o.output_mode = "output";
  const CommandResult out1 = RunCommand(o);
  EXPECT_EQ(out1.report["verdict"], false);
  EXPECT_EQ(out1.report["details"]["output_controllable"], false);
  EXPECT_EQ(out1.report["details"]["pbh_necessary"], true);

  o.system_path = Fixture("example-3a-2");
  const CommandResult out2 = RunCommand(o);
  EXPECT_EQ(out2.exit_code, kExitOk);
  EXPECT_TRUE(out2.report["verdict"].is_null());
  EXPECT_EQ(out2.report["details"]["sparse_necessary"], true);
  EXPECT_EQ(out2.report["details"]["state_sparse_controllable"], false);

  // No output matrix.
  o.system_path = Fixture("example-3c-1");
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
}

TEST(CheckCommandTest, InputErrorsExitTwo) {
  const std::string dir = ::testing::TempDir();
  const std::string missing_h = dir + "/missing_h.json";
  std::ofstream(missing_h) << R"({"D": [[1, 0], [0, 1]]})";
  CommandOptions o = Options("check", "example-3c-1");
  o.system_path = missing_h;
  CommandResult r = RunCommand(o);
  EXPECT_EQ(r.exit_code, kExitInputError);
  EXPECT_EQ(r.report["error"]["kind"], "input");

  const std::string broken = dir + "/broken.json";
  std::ofstream(broken) << R"({"D": [[1, 0], [0, 1]], "H": )";
  o.system_path = broken;
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);

  o = Options("check", "example-3c-1", 3);
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
  o = Options("check", "example-3c-1", 0);
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);

  o = Options("check", "example-3c-1");
  o.tol_text = "nope";
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
  o.tol_text.reset();
  o.output_mode = "sideways";
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
  o.command = "frobnicate";
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
}

TEST(CheckCommandTest, ToleranceTextAndRationalFlag) {
  CommandOptions o = Options("check", "example-3c-3");
  o.tol_text = "1e-7,1e-6,1e-5";
  o.tol.exact_rational = true;
  const CommandResult r = RunCommand(o);
  EXPECT_EQ(r.report["verdict"], true);
  EXPECT_EQ(r.report["tolerance"]["rank_rel"], 1e-7);
  EXPECT_EQ(r.report["tolerance"]["eig_cluster"], 1e-6);
  EXPECT_EQ(r.report["tolerance"]["residual_abs"], 1e-5);
  EXPECT_EQ(r.report["tolerance"]["exact_rational"], true);
}

TEST(BoundsCommandTest, ShiftChainBoundsMatchOracle) {
  const SystemModel ex3 = testing::ShiftChain();
  const CommandResult r = RunCommand(Options("bounds", "example-3c-3"));
  ASSERT_EQ(r.exit_code, kExitOk);
  // N = 3 and min(rank H, s) = 1 give lower = ceil(3 / 1); S* = 1 and q = 3
  // give upper = min(3 * 1, 3 - 1 + 1).
  EXPECT_EQ(r.report["bounds"]["lower"], 3);
  EXPECT_EQ(r.report["bounds"]["upper"], 3);
  EXPECT_EQ(r.report["bounds"]["q"], 3);
  EXPECT_EQ(r.report["bounds"]["s_star"], 1);
  EXPECT_EQ(testing::RefMinK(ex3.D(), ex3.H(), Matrix::Identity(3, 3), 1, 6),
            3);
}

TEST(BoundsCommandTest, Refusals) {
  EXPECT_EQ(RunCommand(Options("bounds", "example-3c-3", 3)).exit_code,
            kExitInputError);
  const CommandResult r = RunCommand(Options("bounds", "uncontrollable"));
  EXPECT_EQ(r.exit_code, kExitInputError);
  EXPECT_NE(r.report["error"]["message"].get<std::string>().find(
                "S* undefined"),
            std::string::npos);
  CommandOptions o = Options("bounds", "example-3c-3");
  o.variant = "tight";
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
}

TEST(BoundsCommandTest, EveryVariantReports) {
  for (const char* variant : {"sparse", "relaxed", "unconstrained",
                              "common-support"}) {
    CommandOptions o = Options("bounds", "example-3c-2", 2);
    o.variant = variant;
    const CommandResult r = RunCommand(o);
    if (std::string(variant) == "common-support") {
      // No single support of size 2 controls this system.
      EXPECT_EQ(r.exit_code, kExitInputError);
      continue;
    }
    ASSERT_EQ(r.exit_code, kExitOk) << variant;
    EXPECT_LE(r.report["bounds"]["lower"].get<int>(),
              r.report["bounds"]["upper"].get<int>());
  }
  CommandOptions o = Options("bounds", "example-3a-2");
  o.variant = "output";
  const CommandResult r = RunCommand(o);
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_LE(r.report["bounds"]["lower"].get<int>(), 2);
  EXPECT_GE(r.report["bounds"]["upper"].get<int>(), 2);
}

TEST(DecomposeCommandTest, FourStateExample) {
  const CommandResult r = RunCommand(Options("decompose", "example-5"));
  ASSERT_EQ(r.exit_code, kExitOk);
  const Json& d = r.report["decomposition"];
  EXPECT_EQ(d["controllable_dim"], 3);
  EXPECT_EQ(d["core_dim"], 1);
  EXPECT_EQ(d["sparse_dim"], 2);
  EXPECT_EQ(d["verification"]["passed"], true);
  for (const Json& c : d["verification"]["checks"]) {
    EXPECT_LE(c["residual"].get<double>(), 1e-8) << c["name"];
  }
}

TEST(DecomposeCommandTest, ZeroInputMatrix) {
  const CommandResult r = RunCommand(Options("decompose", "zero-input"));
  ASSERT_EQ(r.exit_code, kExitOk);
  for (const Json& c : r.report["decomposition"]["classification"]) {
    EXPECT_EQ(c, "uncontrollable");
  }
}

TEST(DecomposeCommandTest, RandomSystemsReportPassingChecks) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemModel sys(testing::RandomWellConditioned(rng, 4, 20.0),
                          testing::RandomGaussian(rng, 4, 2));
    const CommandResult r = RunCommandOn(sys, Options("decompose", "", 1));
    ASSERT_EQ(r.exit_code, kExitOk);
    for (const Json& c : r.report["decomposition"]["verification"]["checks"]) {
      EXPECT_EQ(c["passed"], true) << c["name"];
    }
  }
}

TEST(OracleCommandTest, Verdicts) {
  CommandOptions o = Options("oracle", "example-3c-1");
  o.max_k = 6;
  const CommandResult ex1 = RunCommand(o);
  EXPECT_EQ(ex1.exit_code, kExitOk);
  EXPECT_EQ(ex1.report["verdict"], false);
  EXPECT_TRUE(ex1.report["witnesses"]["schedule"].is_null());

  const SystemModel ex3 = testing::ShiftChain();
  const CommandResult r = RunCommand(Options("oracle", "example-3c-3"));
  EXPECT_EQ(r.report["verdict"], true);
  EXPECT_EQ(r.report["search"]["k_star"],
            *testing::RefMinK(ex3.D(), ex3.H(), Matrix::Identity(3, 3), 1,
                              6));
  // The witness reaches full rank.
  SupportSchedule witness;
  witness.s = 1;
  for (const Json& support : r.report["witnesses"]["schedule"]) {
    witness.supports.push_back(support.get<std::vector<int>>());
  }
  EXPECT_EQ(testing::RefRank(ScheduleSubmatrix(ex3, witness)), 3);

  o = Options("oracle", "example-3a-2");
  o.output_mode = "output";
  EXPECT_EQ(RunCommand(o).report["search"]["k_star"], 2);
}

TEST(OracleCommandTest, TinyBudgetIsInconclusive) {
  CommandOptions o = Options("oracle", "example-3c-1");
  o.budget = 1;
  const CommandResult r = RunCommand(o);
  EXPECT_EQ(r.exit_code, kExitInconclusive);
  EXPECT_TRUE(r.report["verdict"].is_null());
  EXPECT_EQ(r.report["search"]["outcome"], "inconclusive");
  o.budget = 0;
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
}

TEST(SteerCommandTest, ShiftChainReachesOnes) {
  CommandOptions o = Options("steer", "example-3c-3");
  o.k = 3;
  o.x_final = "[1, 1, 1]";
  const CommandResult r = RunCommand(o);
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_LE(r.report["plan"]["residual"].get<double>(), 1e-8);
  EXPECT_EQ(r.report["plan"]["reached"], true);
  EXPECT_EQ(r.report["plan"]["trajectory"].size(), 4u);

  o.schedule = "oracle";
  o.k.reset();
  const CommandResult oracle = RunCommand(o);
  ASSERT_EQ(oracle.exit_code, kExitOk);
  EXPECT_EQ(oracle.report["plan"]["k"], 3);
  EXPECT_LE(oracle.report["plan"]["residual"].get<double>(), 1e-8);
}

TEST(SteerCommandTest, ZeroHorizon) {
  CommandOptions o = Options("steer", "example-3c-3");
  o.k = 0;
  o.x_init = "[1, 2, 3]";
  o.x_final = "[1, 2, 3]";
  const CommandResult r = RunCommand(o);
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.report["plan"]["inputs"].empty());
  EXPECT_EQ(r.report["plan"]["residual"], 0.0);
}

TEST(SteerCommandTest, InfeasibleTargetStillExitsZero) {
  CommandOptions o = Options("steer", "example-3c-1");
  o.k = 6;
  o.x_final = "[1, 1, 1]";
  const CommandResult r = RunCommand(o);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_GE(r.report["plan"]["residual"].get<double>(), 0.1);
  EXPECT_EQ(r.report["plan"]["reached"], false);

  o.schedule = "oracle";
  o.k.reset();
  o.max_k = 6;
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
}

TEST(SteerCommandTest, OutputTarget) {
  CommandOptions o = Options("steer", "example-3a-2");
  o.schedule = "oracle";
  o.output_target = true;
  o.x_final = "[1, -2]";
  const CommandResult r = RunCommand(o);
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report["plan"]["k"], 2);
  EXPECT_LE(r.report["plan"]["residual"].get<double>(), 1e-8);
}

TEST(SteerCommandTest, BadArguments) {
  CommandOptions o = Options("steer", "example-3c-3");
  o.x_final = "[1, 1, 1]";
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);  // greedy needs --k
  o.k = 3;
  o.x_final = "[1, 1]";
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
  o.x_final.reset();
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
  o.x_final = "[1, 1, 1]";
  o.k = -1;
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
  o.k = 3;
  o.output_target = true;
  EXPECT_EQ(RunCommand(o).exit_code, kExitInputError);
}

TEST(ReportTest, DeterministicAndVersioned) {
  std::vector<CommandOptions> runs;
  runs.push_back(Options("check", "example-3c-1"));
  runs.push_back(Options("bounds", "example-3c-3"));
  runs.push_back(Options("decompose", "example-5"));
  runs.push_back(Options("oracle", "example-3c-3"));
  CommandOptions steer = Options("steer", "example-3c-3");
  steer.k = 3;
  steer.x_final = "[1, 1, 1]";
  runs.push_back(steer);
  for (const CommandOptions& o : runs) {
    const std::string first = RenderReport(RunCommand(o).report);
    const std::string second = RenderReport(RunCommand(o).report);
    EXPECT_EQ(first, second) << o.command;
    const Json report = Json::parse(first);
    EXPECT_EQ(report["schema_version"], kSchemaVersion);
    EXPECT_TRUE(report["elapsed_ms"].is_null());
    EXPECT_EQ(report.begin().key(), "schema_version");
    EXPECT_EQ((--report.end()).key(), "elapsed_ms");
  }
  CommandOptions timed = Options("check", "example-3c-1");
  timed.timing = true;
  EXPECT_TRUE(RunCommand(timed).report["elapsed_ms"].is_number());
}

}  // namespace
}  // namespace sparse_ctrb::cli
