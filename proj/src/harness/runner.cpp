#include "perturbench/harness/runner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "perturbench/error.hpp"
#include "perturbench/harness/stop_tokens.hpp"
#include "perturbench/stats.hpp"

namespace perturbench {
namespace {

constexpr std::array<std::pair<Verdict, std::string_view>, 5> kVerdicts = {{
    {Verdict::kPass, "pass"},
    {Verdict::kFail, "fail"},
    {Verdict::kTimeout, "timeout"},
    {Verdict::kCrash, "crash"},
    {Verdict::kProviderError, "provider-error"},
}};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  ::gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Scratch directory removed on scope exit.
class ScratchDir {
 public:
  explicit ScratchDir(const std::filesystem::path& root) {
    const auto base = root.empty() ? std::filesystem::temp_directory_path() : root;
    std::random_device rd;
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto candidate = base / ("perturbench-" + std::to_string(rd()) + std::to_string(rd()));
      if (std::filesystem::create_directories(candidate)) {
        path_ = std::move(candidate);
        return;
      }
    }
    throw Error("cannot create scratch directory under " + base.string());
  }
  ~ScratchDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

std::string_view verdict_name(Verdict v) {
  for (const auto& [verdict, name] : kVerdicts) {
    if (verdict == v) return name;
  }
  return "?";
}

Verdict parse_verdict(std::string_view name) {
  for (const auto& [verdict, n] : kVerdicts) {
    if (n == name) return verdict;
  }
  throw ParseError("unknown verdict \"" + std::string(name) + "\"");
}

std::string assemble_program(const TaskSpec& task, std::string_view completion,
                             const LanguageCommand& command) {
  std::string program = task.prompt;
  program += completion;
  program += '\n';
  program += task.tests;
  program += '\n';
  program += command.entry_invocation;
  program += '\n';
  return program;
}

EvalResult execute_candidate(const TaskSpec& task, std::string_view completion,
                             const SandboxConfig& sandbox) {
  const auto& command = sandbox.command_for(task.language);
  EvalResult result;
  result.task = task.name;
  result.completion = std::string(completion);

  ScratchDir scratch(sandbox.work_root);
  const auto file = scratch.path() / ("candidate" + command.file_extension);
  {
    std::ofstream out(file, std::ios::binary);
    const auto program = assemble_program(task, completion, command);
    out.write(program.data(), static_cast<std::streamsize>(program.size()));
    if (!out) throw Error("cannot write candidate program " + file.string());
  }
  std::vector<std::string> argv;
  for (const auto& a : command.argv) {
    argv.push_back(a == "{file}" ? file.string() : a);
  }

  const auto run = run_process(argv, scratch.path(), sandbox);
  result.duration_ms = run.duration_ms;
  if (run.timed_out) {
    result.verdict = Verdict::kTimeout;
    std::ostringstream detail;
    detail << "killed after " << sandbox.timeout_secs << "s";
    result.detail = detail.str();
  } else if (run.signaled) {
    result.verdict = Verdict::kCrash;
    result.detail = "signal " + std::to_string(run.signal);
  } else if (run.exit_code == 0) {
    result.verdict = Verdict::kPass;
    result.detail = "exit 0";
  } else {
    result.verdict = Verdict::kFail;
    result.detail = "exit " + std::to_string(run.exit_code);
  }
  return result;
}

double RunReport::pass_at_1_percent() const {
  return std::round(pass_at_1 * 1000.0) / 10.0;
}

RunReport run_benchmark(const TaskSet& tasks, CompletionProvider& provider,
                        const ProviderConfig& provider_config,
                        const SandboxConfig& sandbox, const RunOptions& options) {
  provider_config.validate();
  if (options.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  for (const auto& task : tasks.tasks) sandbox.command_for(task.language);

  const auto n = static_cast<std::size_t>(tasks.tasks.size());
  std::vector<std::vector<EvalResult>> per_task(n);
  std::atomic<std::size_t> next{0};
  // Infrastructure failures (no interpreter, unwritable scratch space) stop
  // the pool and surface after the join; candidate misbehaviour never does.
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto evaluate_task = [&](std::size_t i) {
    const auto& task = tasks.tasks[i];
    CompletionRequest request{task.name, provider_config.model, task.prompt,
                              normalize_stop_tokens(task), provider_config.sampling};
    const auto outcome = complete(provider, request, provider_config.retry_budget,
                                  provider_config.retry_backoff);
    auto& slot = per_task[i];
    if (outcome.error) {
      EvalResult failed;
      failed.task = task.name;
      failed.verdict = Verdict::kProviderError;
      failed.detail = *outcome.error;
      slot.push_back(std::move(failed));
      return;
    }
    for (std::size_t s = 0; s < outcome.completions.size(); ++s) {
      auto r = execute_candidate(task, outcome.completions[s], sandbox);
      r.sample_index = static_cast<int>(s);
      slot.push_back(std::move(r));
    }
  };
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= n) return;
      try {
        evaluate_task(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.parallelism),
                                             std::max<std::size_t>(n, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RunReport report;
  report.dataset_id = options.dataset_id;
  report.model_id = provider_config.model;
  report.variant = options.variant;
  report.samples_per_task = provider_config.sampling.n;
  report.task_count = n;
  report.timestamp = utc_timestamp();
  report.config["provider"] = provider_config_to_json(provider_config);
  report.config["provider"]["kind"] = provider.describe();
  report.config["sandbox"] = sandbox_config_to_json(sandbox);

  double pass_sum = 0.0;
  for (auto& slot : per_task) {
    std::size_t correct = 0;
    for (const auto& r : slot) correct += r.verdict == Verdict::kPass ? 1 : 0;
    const auto samples = static_cast<std::size_t>(provider_config.sampling.n);
    pass_sum += pass_at_k(samples, std::min(correct, samples), 1);
    for (auto& r : slot) report.results.push_back(std::move(r));
  }
  report.pass_at_1 = n == 0 ? 0.0 : pass_sum / static_cast<double>(n);
  std::stable_sort(report.results.begin(), report.results.end(),
                   [](const EvalResult& a, const EvalResult& b) {
                     return std::tie(a.task, a.sample_index) < std::tie(b.task, b.sample_index);
                   });
  return report;
}

nlohmann::ordered_json report_to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["dataset_id"] = report.dataset_id;
  j["model_id"] = report.model_id;
  j["variant"] = report.variant;
  j["samples_per_task"] = report.samples_per_task;
  j["task_count"] = report.task_count;
  j["pass_at_1"] = report.pass_at_1;
  j["pass_at_1_percent"] = report.pass_at_1_percent();
  auto results = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    results.push_back({{"task", r.task},
                       {"sample_index", r.sample_index},
                       {"verdict", verdict_name(r.verdict)},
                       {"detail", r.detail},
                       {"completion", r.completion}});
  }
  j["results"] = std::move(results);
  j["config"] = report.config;
  return j;
}

nlohmann::ordered_json report_timing_to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["timestamp"] = report.timestamp;
  auto durations = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    durations.push_back({{"task", r.task},
                         {"sample_index", r.sample_index},
                         {"duration_ms", r.duration_ms}});
  }
  j["durations"] = std::move(durations);
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  try {
    RunReport report;
    report.dataset_id = j.at("dataset_id").get<std::string>();
    report.model_id = j.at("model_id").get<std::string>();
    report.variant = j.value("variant", std::string{});
    report.samples_per_task = j.at("samples_per_task").get<int>();
    report.task_count = j.at("task_count").get<std::size_t>();
    report.pass_at_1 = j.at("pass_at_1").get<double>();
    for (const auto& r : j.at("results")) {
      EvalResult e;
      e.task = r.at("task").get<std::string>();
      e.sample_index = r.at("sample_index").get<int>();
      e.verdict = parse_verdict(r.at("verdict").get<std::string>());
      e.detail = r.value("detail", std::string{});
      e.completion = r.value("completion", std::string{});
      report.results.push_back(std::move(e));
    }
    if (j.contains("config")) report.config = j.at("config");
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed run report: ") + e.what());
  }
}

}  // namespace perturbench
