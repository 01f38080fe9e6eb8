#include "perturbench/harness/runner.hpp"

#include <gtest/gtest.h>

#include "perturbench/error.hpp"
#include "test_util.hpp"

namespace perturbench {
namespace {

TaskSet load_tasks(const std::string& rel) {
  return parse_task_set(testing::read_text(testing::fixture(rel)), "fixture");
}

ProviderConfig replay_config() {
  ProviderConfig c;
  c.model = "toy-model";
  c.retry_backoff = std::chrono::milliseconds{0};
  return c;
}

SandboxConfig fast_sandbox(double timeout = 1.0) {
  auto s = SandboxConfig::python_default();
  s.timeout_secs = timeout;
  return s;
}

TaskSpec always_true_task() {
  TaskSpec t;
  t.name = "always_true";
  t.language = "python";
  t.prompt = "def f(x):\n";
  t.tests = "def check(candidate):\n    for x in range(5):\n        assert candidate(x) is True\n\n"
            "def test_check():\n    check(f)\n";
  return t;
}

TEST(ExecuteCandidate, AssembledProgramLayout) {
  const auto task = always_true_task();
  const auto& cmd = SandboxConfig::python_default().command_for("python");
  EXPECT_EQ(assemble_program(task, "    return True", cmd),
            task.prompt + "    return True\n" + task.tests + "\ntest_check()\n");
}

TEST(ExecuteCandidate, Verdicts) {
  const auto task = always_true_task();
  EXPECT_EQ(execute_candidate(task, "    return True", fast_sandbox()).verdict, Verdict::kPass);
  EXPECT_EQ(execute_candidate(task, "    return None", fast_sandbox()).verdict, Verdict::kFail);
  const auto looping = execute_candidate(task, "    while True: pass", fast_sandbox(0.5));
  EXPECT_EQ(looping.verdict, Verdict::kTimeout);
  EXPECT_EQ(looping.detail, "killed after 0.5s");
  const auto crashed = execute_candidate(
      task, "    import os, signal\n    os.kill(os.getpid(), signal.SIGABRT)", fast_sandbox());
  EXPECT_EQ(crashed.verdict, Verdict::kCrash);
}

TEST(RunBenchmark, ToyThreeTasks) {
  const auto tasks = load_tasks("toy3/tasks.json");
  auto replay = ReplayProvider::from_file(testing::fixture("toy3/replay.json").string());
  const auto report = run_benchmark(tasks, replay, replay_config(), fast_sandbox(), {"toy3", "base", 2});
  EXPECT_NEAR(report.pass_at_1, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(report.pass_at_1_percent(), 66.7);
  ASSERT_EQ(report.results.size(), 3u);
  EXPECT_EQ(report.results[1].verdict, Verdict::kFail);
}

TEST(RunBenchmark, HostileCandidatesAndParallelismInvariance) {
  const auto tasks = load_tasks("toy10/tasks.json");
  const auto expected = nlohmann::json::parse(testing::read_text(testing::fixture("toy10/expected.json")));
  std::string reference;
  for (int parallelism : {1, 4, 16}) {
    auto replay = ReplayProvider::from_file(testing::fixture("toy10/replay.json").string());
    const auto report =
        run_benchmark(tasks, replay, replay_config(), fast_sandbox(), {"toy10", "base", parallelism});
    EXPECT_DOUBLE_EQ(report.pass_at_1, expected["pass_at_1"].get<double>());
    ASSERT_EQ(report.results.size(), 10u);
    for (const auto& r : report.results) {
      EXPECT_EQ(verdict_name(r.verdict), expected["verdicts"][r.task].get<std::string>()) << r.task;
    }
    EXPECT_TRUE(std::is_sorted(report.results.begin(), report.results.end(),
                               [](const auto& a, const auto& b) { return a.task < b.task; }));
    const auto bytes = report_to_json(report).dump(2);
    if (reference.empty()) {
      reference = bytes;
    } else {
      EXPECT_EQ(bytes, reference) << "parallelism " << parallelism;
    }
  }
  const auto golden = testing::fixture("toy10/golden.report.json");
  EXPECT_EQ(reference + "\n", testing::read_text(golden));
}

TEST(RunBenchmark, StopTokensTruncateBeforeExecution) {
  const auto tasks = load_tasks("toy10/tasks.json");
  auto replay = ReplayProvider::from_file(testing::fixture("toy10/replay.json").string());
  const auto report = run_benchmark(tasks, replay, replay_config(), fast_sandbox(), {"toy10", "base", 8});
  for (const auto& r : report.results) {
    EXPECT_EQ(r.completion.find("\ndef"), std::string::npos);
    EXPECT_EQ(r.completion.find("\nif"), std::string::npos);
  }
}

TEST(RunBenchmark, AllProviderErrorsGiveZero) {
  const auto tasks = load_tasks("toy3/tasks.json");
  ReplayProvider empty({});
  const auto report = run_benchmark(tasks, empty, replay_config(), fast_sandbox(), {"toy3", "base", 2});
  EXPECT_EQ(report.pass_at_1, 0.0);
  ASSERT_EQ(report.results.size(), 3u);
  for (const auto& r : report.results) EXPECT_EQ(r.verdict, Verdict::kProviderError);
}

TEST(RunBenchmark, FullSizeAllPass) {
  TaskSet set;
  std::map<std::string, std::vector<std::string>> recorded;
  for (int i = 0; i < 161; ++i) {
    auto t = always_true_task();
    t.name = "task_" + std::to_string(1000 + i);
    recorded[t.name] = {"    return True\n"};
    set.tasks.push_back(std::move(t));
  }
  ReplayProvider replay(std::move(recorded));
  const auto report = run_benchmark(set, replay, replay_config(), fast_sandbox(5), {"all", "base", 16});
  EXPECT_EQ(report.pass_at_1_percent(), 100.0);
}

TEST(RunBenchmark, MissingLanguageFailsBeforeRunning) {
  auto tasks = load_tasks("toy3/tasks.json");
  tasks.tasks[2].language = "cobol";
  EchoProvider echo;
  EXPECT_THROW(run_benchmark(tasks, echo, replay_config(), fast_sandbox(), {"x", "base", 1}),
               ConfigError);
  EXPECT_THROW(run_benchmark(tasks, echo, replay_config(), fast_sandbox(), {"x", "base", 0}),
               ConfigError);
}

TEST(RunBenchmark, MultipleSamplesFeedPassAtK) {
  const auto tasks = load_tasks("toy3/tasks.json");
  ReplayProvider replay({{"toy_0_add", {"    return a + b\n", "    return a - b\n"}},
                         {"toy_2_reverse", {"    return s[::-1]\n", "    return s\n"}},
                         {"toy_8_is_palindrome", {"    return False\n", "    return False\n"}}});
  auto config = replay_config();
  config.sampling.n = 2;
  const auto report = run_benchmark(tasks, replay, config, fast_sandbox(), {"toy3", "base", 3});
  EXPECT_EQ(report.results.size(), 6u);
  EXPECT_NEAR(report.pass_at_1, (0.5 + 0.5 + 0.0) / 3.0, 1e-12);
}

TEST(RunReport, JsonRoundTrip) {
  const auto tasks = load_tasks("toy3/tasks.json");
  auto replay = ReplayProvider::from_file(testing::fixture("toy3/replay.json").string());
  const auto report = run_benchmark(tasks, replay, replay_config(), fast_sandbox(), {"toy3", "M_i", 1});
  const auto back = report_from_json(nlohmann::json::parse(report_to_json(report).dump()));
  EXPECT_EQ(back.results.size(), report.results.size());
  EXPECT_EQ(back.variant, "M_i");
  EXPECT_EQ(back.pass_at_1, report.pass_at_1);
  for (std::size_t i = 0; i < back.results.size(); ++i) {
    EXPECT_EQ(back.results[i].verdict, report.results[i].verdict);
  }
  EXPECT_THROW(report_from_json(nlohmann::json::parse("{}")), ParseError);
}

}  // namespace
}  // namespace perturbench
