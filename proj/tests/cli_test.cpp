// Copyright 2026 The egpreview Authors
//
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

#include "egpreview/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "test_support.hpp"

namespace egpreview {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command_line(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> base(std::vector<std::string> extra) {
  std::vector<std::string> args{"--input", testing::fixture_path()};
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("egpreview_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

nlohmann::json error_of(const Result& r) {
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  return nlohmann::json::parse(r.err);
}

TEST(Cli, ConciseJsonMatchesBruteForce) {
  const Result dp = invoke(base({"--mode", "concise", "-k", "2", "-n", "6", "--key", "coverage",
                                 "--nonkey", "coverage", "--format", "json"}));
  ASSERT_EQ(dp.code, kExitOk) << dp.err;
  EXPECT_TRUE(dp.err.empty());
  const Result brute = invoke(base({"-k", "2", "-n", "6", "--algorithm", "brute"}));
  ASSERT_EQ(brute.code, kExitOk);
  const auto a = nlohmann::json::parse(dp.out), b = nlohmann::json::parse(brute.out);
  EXPECT_EQ(a["total_score"], b["total_score"]);
  EXPECT_EQ(a["total_score"].get<double>(), 84.0);
  EXPECT_EQ(dp.out, brute.out);
}

TEST(Cli, DiverseMatchesBruteForce) {
  const Result apriori = invoke(base({"-m", "diverse", "-d", "2", "-k", "2", "-n", "6"}));
  const Result brute =
      invoke(base({"-m", "diverse", "-d", "2", "-k", "2", "-n", "6", "-a", "brute"}));
  ASSERT_EQ(apriori.code, kExitOk) << apriori.err;
  EXPECT_EQ(apriori.out, brute.out);
  const auto doc = nlohmann::json::parse(apriori.out);
  EXPECT_EQ(doc["total_score"].get<double>(), 78.0);
  EXPECT_EQ(doc["constraints"]["d"], 2);
}

TEST(Cli, UsageErrors) {
  const Result no_d = invoke(base({"--mode", "tight", "-k", "2", "-n", "6"}));
  EXPECT_EQ(no_d.code, kExitUsage);
  EXPECT_EQ(error_of(no_d)["error"], "usage");
  EXPECT_TRUE(no_d.out.empty());

  const Result dp_diverse =
      invoke(base({"--algorithm", "dp", "--mode", "diverse", "-d", "2", "-k", "2", "-n", "6"}));
  EXPECT_EQ(dp_diverse.code, kExitUsage);
  EXPECT_EQ(error_of(dp_diverse)["exit_code"], kExitUsage);

  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "-a", "apriori"})).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "-d", "1"})).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "3", "-n", "2"})).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "--tuples", "0"})).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "--format", "xml"})).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "--bogus"})).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "-a", "dp", "--gain", "raw"})).code, kExitUsage);
  EXPECT_EQ(invoke({"-k", "2", "-n", "6"}).code, kExitUsage);
  EXPECT_EQ(invoke(base({"-k", "2", "-n", "6", "--key", "randomwalk", "--teleport", "0.5"})).code,
            kExitUsage);
}

TEST(Cli, HelpGoesToStdout) {
  const Result help = invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("--algorithm"), std::string::npos);
}

TEST(Cli, FileAndParseErrors) {
  const Result missing = invoke({"--input", "/nonexistent/x.eg", "-k", "1", "-n", "1"});
  EXPECT_EQ(missing.code, kExitFile);
  EXPECT_EQ(error_of(missing)["error"], "file");

  TempDir dir;
  const fs::path bad = dir.path() / "bad.eg";
  std::ofstream(bad) << "ET a A\nEN x X b\n";
  const Result parse = invoke({"--input", bad.string(), "-k", "1", "-n", "1"});
  EXPECT_EQ(parse.code, kExitParse);
  EXPECT_NE(error_of(parse)["message"].get<std::string>().find("line 2"), std::string::npos);
}

TEST(Cli, InfeasibleConstraints) {
  const Result far = invoke(base({"-m", "diverse", "-d", "4", "-k", "2", "-n", "6"}));
  EXPECT_EQ(far.code, kExitInfeasible);
  EXPECT_EQ(error_of(far)["error"], "infeasible");
  EXPECT_EQ(invoke(base({"-k", "7", "-n", "9"})).code, kExitInfeasible);
}

TEST(Cli, ConvergenceFailure) {
  TempDir dir;
  const fs::path path = dir.path() / "path.eg";
  {
    std::ofstream out(path);
    for (int i = 0; i < 8; ++i) out << "ET t" << i << " T" << i << "\nEN e" << i << " E t" << i << "\n";
    for (int i = 1; i < 8; ++i) {
      out << "RT r" << i << " R t" << i - 1 << " t" << i << "\nED r" << i << " e" << i - 1
          << " e" << i << "\n";
    }
  }
  const Result r = invoke({"--input", path.string(), "-k", "1", "-n", "1", "--key", "randomwalk",
                           "--tolerance", "1e-15", "--max-iterations", "3"});
  EXPECT_EQ(r.code, kExitConvergence);
  EXPECT_EQ(error_of(r)["error"], "convergence");
  EXPECT_EQ(invoke({"--input", path.string(), "-k", "1", "-n", "1", "--key", "randomwalk"}).code,
            kExitOk);
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> configs{
      {"-k", "2", "-n", "6"},
      {"-k", "2", "-n", "6", "-f", "markdown", "-t", "2", "-s", "17"},
      {"-k", "3", "-n", "7", "--key", "randomwalk", "--nonkey", "entropy"},
      {"-m", "tight", "-d", "1", "-k", "2", "-n", "5", "-a", "brute", "-t", "1"},
      {"-m", "diverse", "-d", "3", "-k", "2", "-n", "4", "-f", "md"},
      {"-k", "2", "-n", "6", "--all-optima"},
  };
  for (const auto& config : configs) {
    const Result first = invoke(base(config));
    const Result second = invoke(base(config));
    ASSERT_EQ(first.code, kExitOk) << first.err;
    EXPECT_EQ(first.out, second.out);
  }
}

TEST(Cli, SeedChangesSampleOnly) {
  const Result a = invoke(base({"-k", "1", "-n", "2", "-t", "1", "-s", "1"}));
  const auto doc = nlohmann::json::parse(a.out);
  bool differs = false;
  for (int seed = 2; seed < 20 && !differs; ++seed) {
    const auto other = nlohmann::json::parse(
        invoke(base({"-k", "1", "-n", "2", "-t", "1", "-s", std::to_string(seed)})).out);
    EXPECT_EQ(other["total_score"], doc["total_score"]);
    differs = other["tables"][0]["rows"] != doc["tables"][0]["rows"];
  }
  EXPECT_TRUE(differs);
}

TEST(Cli, AllOptimaPrintsEachPreview) {
  const Result r = invoke(base({"-k", "2", "-n", "6", "--all-optima"}));
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream lines(r.out);
  std::vector<std::string> keys;
  for (std::string line; std::getline(lines, line);) {
    keys.push_back(nlohmann::json::parse(line)["tables"][1]["key_type"]);
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"film_actor", "film_director"}));
}

TEST(Cli, CacheNeverChangesOutput) {
  TempDir dir;
  const auto args = base({"-k", "3", "-n", "7", "--key", "randomwalk", "--nonkey", "entropy",
                          "--cache-dir", (dir.path() / "cache").string()});
  const Result plain = invoke(base({"-k", "3", "-n", "7", "--key", "randomwalk", "--nonkey",
                                    "entropy"}));
  const Result cold = invoke(args);
  ASSERT_EQ(cold.code, kExitOk) << cold.err;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir.path() / "cache")) files.push_back(e.path());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].extension(), ".json");
  const Result warm = invoke(args);
  EXPECT_EQ(cold.out, plain.out);
  EXPECT_EQ(warm.out, plain.out);

  // A different measure gets its own entry.
  invoke(base({"-k", "3", "-n", "7", "--cache-dir", (dir.path() / "cache").string()}));
  EXPECT_EQ(std::distance(fs::directory_iterator(dir.path() / "cache"), fs::directory_iterator()),
            2);

  std::ofstream(files[0], std::ios::trunc) << "{not json";
  const Result corrupt = invoke(args);
  EXPECT_EQ(corrupt.code, kExitOk);
  EXPECT_EQ(corrupt.out, plain.out);
}

TEST(Cli, DiagnosticsStayOnStderr) {
  const Result quiet = invoke(base({"-k", "2", "-n", "6"}));
  const Result loud = invoke(base({"-k", "2", "-n", "6", "--timings"}));
  EXPECT_EQ(quiet.out, loud.out);
  EXPECT_NE(loud.err.find("egpreview: graph: 6 entity types"), std::string::npos);
  EXPECT_NE(loud.err.find("time discovery"), std::string::npos);

  ::setenv("EGPREVIEW_LOG", "1", 1);
  const Result env = invoke(base({"-k", "2", "-n", "6"}));
  ::setenv("EGPREVIEW_LOG", "0", 1);
  const Result off = invoke(base({"-k", "2", "-n", "6"}));
  ::unsetenv("EGPREVIEW_LOG");
  EXPECT_FALSE(env.err.empty());
  EXPECT_TRUE(off.err.empty());
  EXPECT_EQ(env.out, quiet.out);
}

TEST(Cli, ConfigHelpers) {
  CliConfig c;
  c.input = "x";
  EXPECT_EQ(c.resolved_algorithm(), Algorithm::kDynamicProgram);
  c.gain = GainOrder::kRawScore;
  EXPECT_EQ(c.resolved_algorithm(), Algorithm::kBruteForce);
  c.mode = PreviewMode::kTight;
  c.d = 1;
  EXPECT_EQ(c.resolved_algorithm(), Algorithm::kApriori);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(parse_algorithm("apriori"), Algorithm::kApriori);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace egpreview
