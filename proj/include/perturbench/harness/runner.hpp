#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perturbench/corpus.hpp"
#include "perturbench/harness/provider.hpp"
#include "perturbench/harness/sandbox.hpp"

namespace perturbench {

enum class Verdict { kPass, kFail, kTimeout, kCrash, kProviderError };

std::string_view verdict_name(Verdict v);
Verdict parse_verdict(std::string_view name);

struct EvalResult {
  std::string task;
  int sample_index = 0;
  std::string completion;  // after truncation
  Verdict verdict = Verdict::kFail;
  long long duration_ms = 0;
  std::string detail;  // exit code, signal or provider message

  bool operator==(const EvalResult&) const = default;
};

/// Assembles prompt + completion + "\n" + tests + "\n" + entry invocation
/// + "\n".
std::string assemble_program(const TaskSpec& task, std::string_view completion,
                             const LanguageCommand& command);

/// Runs one candidate. Throws ConfigError when the task's language has no
/// command template; every other failure becomes a verdict.
EvalResult execute_candidate(const TaskSpec& task, std::string_view completion,
                             const SandboxConfig& sandbox);

struct RunOptions {
  std::string dataset_id;
  std::string variant;  // model variant label used by RD tables
  int parallelism = 1;
};

struct RunReport {
  std::string dataset_id;
  std::string model_id;
  std::string variant;
  int samples_per_task = 1;
  std::size_t task_count = 0;
  std::vector<EvalResult> results;  // ordered by (task, sample_index)
  double pass_at_1 = 0.0;           // fraction
  std::string timestamp;            // ISO 8601 UTC
  nlohmann::ordered_json config;    // provider and sandbox snapshot

  /// Percentage rounded to one decimal.
  [[nodiscard]] double pass_at_1_percent() const;
};

/// Every task is evaluated by a pool of `parallelism` workers; per-task
/// failures never abort the run. Throws ConfigError before any work starts
/// if a task's language has no command template.
RunReport run_benchmark(const TaskSet& tasks, CompletionProvider& provider,
                        const ProviderConfig& provider_config,
                        const SandboxConfig& sandbox, const RunOptions& options);

/// Deterministic part of the report: no timestamp, no durations.
nlohmann::ordered_json report_to_json(const RunReport& report);
/// Timestamp and per-result durations.
nlohmann::ordered_json report_timing_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

}  // namespace perturbench
