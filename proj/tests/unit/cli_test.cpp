#include "perturbench/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "perturbench/checksum.hpp"
#include "perturbench/error.hpp"
#include "test_util.hpp"

namespace perturbench {
namespace {

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string fx(const std::string& rel) { return testing::fixture(rel).string(); }

nlohmann::json read_json(const std::filesystem::path& p) {
  return nlohmann::json::parse(testing::read_text(p));
}

TEST(Cli, PerturbCorpusIsReproducible) {
  testing::TempDir dir;
  const auto out = dir.path().string();
  const auto first = dir.path() / "a.jsonl";
  const auto second = dir.path() / "b.jsonl";
  auto run = cli({"--out", out, "--seed", "3", "perturb", "--method", "C3", "--input",
                  fx("corpus/toy.jsonl"), "--output", first.string()});
  ASSERT_EQ(run.status, 0) << run.err;
  run = cli({"--out", out, "--seed", "3", "perturb", "--method", "C3", "--input",
             fx("corpus/toy.jsonl"), "--output", second.string()});
  ASSERT_EQ(run.status, 0) << run.err;

  EXPECT_EQ(content_checksum(testing::read_text(first)), content_checksum(testing::read_text(second)));
  EXPECT_NE(testing::read_text(first), testing::read_text(fx("corpus/toy.jsonl")));
  EXPECT_FALSE(testing::read_text(dir.path() / "a.trace.jsonl").empty());
  const auto manifest = read_json(dir.path() / "a.manifest.json");
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_TRUE(manifest.contains("config"));
  EXPECT_EQ(parse_instruction_corpus(testing::read_text(first)).size(), 3u);
}

TEST(Cli, PerturbTaskSetKeepsTests) {
  testing::TempDir dir;
  const auto output = dir.path() / "tasks.json";
  const auto run = cli({"--out", dir.path().string(), "perturb", "--method", "mix_all", "--input",
                        fx("toy10/tasks.json"), "--output", output.string()});
  ASSERT_EQ(run.status, 0) << run.err;
  const auto clean = parse_task_set(testing::read_text(fx("toy10/tasks.json")), "");
  const auto perturbed = parse_task_set(testing::read_text(output), "");
  ASSERT_EQ(perturbed.tasks.size(), clean.tasks.size());
  for (std::size_t i = 0; i < clean.tasks.size(); ++i) {
    EXPECT_EQ(perturbed.tasks[i].tests, clean.tasks[i].tests);
  }
}

TEST(Cli, ErrorsExitNonZero) {
  testing::TempDir dir;
  auto run = cli({"--out", dir.path().string(), "perturb", "--method", "C1", "--input",
                  (dir.path() / "missing.jsonl").string()});
  EXPECT_NE(run.status, 0);
  EXPECT_NE(run.err.find("error"), std::string::npos);
  run = cli({"--out", dir.path().string(), "perturb", "--method", "C9", "--input",
             fx("corpus/toy.jsonl")});
  EXPECT_NE(run.status, 0);
  EXPECT_NE(cli({"no-such-command"}).status, 0);
  EXPECT_NE(cli({"stats", "wilcoxon", "--n", "10", "--w", "99"}).status, 0);
}

TEST(Cli, PlanCounts) {
  testing::TempDir dir;
  const auto run = cli({"--out", dir.path().string(), "--seed", "11", "plan", "--corpus-id", "evo",
                        "--benchmarks", "humaneval,mbpp"});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_NE(run.out.find("perturbed train datasets: 32"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("perturbed test datasets:  26"), std::string::npos) << run.out;
  const auto plan = read_json(dir.path() / "plan.json");
  EXPECT_EQ(plan["master_seed"], 11);
}

TEST(Cli, PlanThenBuildFromConfig) {
  testing::TempDir dir;
  const auto config = dir.path() / "config.json";
  {
    std::ofstream o(config);
    o << nlohmann::json{{"corpus", fx("corpus/toy.jsonl")},
                        {"corpus_id", "toy"},
                        {"benchmarks", {{"toy10", fx("toy10/tasks.json")}, {"toy3", fx("toy3/tasks.json")}}},
                        {"output_root", (dir.path() / "out").string()},
                        {"seed", 5}}
             .dump();
  }
  ASSERT_EQ(cli({"--config", config.string(), "plan"}).status, 0);
  const auto run = cli({"--config", config.string(), "build", "--group", "rq1"});
  ASSERT_EQ(run.status, 0) << run.err;
  std::size_t manifests = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "out" / "datasets")) {
    if (entry.path().string().ends_with(".manifest.json")) ++manifests;
  }
  EXPECT_EQ(manifests, 13u);
}

TEST(Cli, EvaluateReplayMatchesGoldenReport) {
  testing::TempDir dir;
  const auto run = cli({"--out", dir.path().string(), "evaluate", "--tasks", fx("toy10/tasks.json"),
                        "--replay", fx("toy10/replay.json"), "--model", "toy-model", "--dataset-id",
                        "toy10", "--timeout-secs", "1", "--parallelism", "4"});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_NE(run.out.find("pass@1 = 50.0%"), std::string::npos) << run.out;
  const auto report = read_json(dir.path() / "reports" / "toy-model--base--toy10.report.json");
  const auto golden = read_json(fx("toy10/golden.report.json"));
  EXPECT_EQ(report["results"], golden["results"]);
  EXPECT_EQ(report["pass_at_1"], golden["pass_at_1"]);
  EXPECT_EQ(report["config"]["sandbox"], golden["config"]["sandbox"]);
  EXPECT_TRUE(report["config"].contains("tasks_checksum"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "reports" / "toy-model--base--toy10.timing.json"));
}

TEST(Cli, StatsRdReproducesPublishedTable) {
  testing::TempDir dir;
  const auto run = cli({"--out", dir.path().string(), "stats", "rd", "--from",
                        fx("tables/table2_3.json"), "--compare", "M_Tr,M_i"});
  ASSERT_EQ(run.status, 0) << run.err;
  for (const char* cell : {"80.39", "15.96", "12.38", "-3.62", "-3.52", "88.85", "12.00", "15.20"}) {
    EXPECT_NE(run.out.find(cell), std::string::npos) << cell;
  }
  const auto rd = read_json(dir.path() / "stats" / "rd.json");
  EXPECT_EQ(rd["rows"].size(), 6u);
}

TEST(Cli, StatsWilcoxonAndSampleSize) {
  auto run = cli({"stats", "wilcoxon", "--n", "120", "--w", "0"});
  ASSERT_EQ(run.status, 0) << run.err;
  const auto j = nlohmann::json::parse(run.out);
  EXPECT_NEAR(j["p_two_sided"].get<double>() / 1.97e-21, 1.0, 0.02);
  EXPECT_EQ(j["mode"], "normal");
  run = cli({"quality", "sample-size", "--population", "31878"});
  ASSERT_EQ(run.status, 0);
  EXPECT_NE(run.out.find("380"), std::string::npos);
}

TEST(Cli, QualityAggregate) {
  testing::TempDir dir;
  const auto run = cli({"--out", dir.path().string(), "quality", "aggregate", "--from",
                        fx("lint/table14")});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_NE(run.out.find("combined exit bits: 22"), std::string::npos) << run.out;
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "quality" / "warnings.json"));
}

TEST(Cli, ConfigFromEnvironmentAndFlagPrecedence) {
  testing::TempDir dir;
  const auto config = dir.path() / "env.json";
  {
    std::ofstream o(config);
    o << R"({"seed": 77, "output_root": "from-config"})";
  }
  ::setenv(kConfigEnv, config.string().c_str(), 1);
  auto run = cli({"plan", "--benchmarks", "a,b"});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_EQ(read_json(dir.path() / "from-config" / "plan.json")["master_seed"], 77);

  run = cli({"--seed", "78", "--out", (dir.path() / "flags").string(), "plan", "--benchmarks", "a,b"});
  ASSERT_EQ(run.status, 0) << run.err;
  EXPECT_EQ(read_json(dir.path() / "flags" / "plan.json")["master_seed"], 78);
  ::unsetenv(kConfigEnv);
}

TEST(Config, RejectsUnknownKeysAndRoundTrips) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"sed": 1})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"provider": {"modle": "x"}})")), ConfigError);
  const auto c = config_from_json(nlohmann::json::parse(
      R"({"seed": 9, "provider": {"model": "m", "samples_per_task": 3}, "stats": {"mode": "exact"},
          "perturb": {"rate": 0.1}})"));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.provider.sampling.n, 3);
  EXPECT_EQ(c.stats.mode, WilcoxonMode::kExact);
  const auto back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(Binary, ExitStatus) {
  const std::string tool = PERTURBENCH_TOOL;
  EXPECT_EQ(std::system((tool + " quality sample-size --population 84546 > /dev/null").c_str()), 0);
  EXPECT_NE(std::system((tool + " perturb --method C1 --input /nonexistent 2> /dev/null").c_str()), 0);
}

}  // namespace
}  // namespace perturbench
