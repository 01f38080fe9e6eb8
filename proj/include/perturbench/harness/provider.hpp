#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "perturbench/error.hpp"

namespace perturbench {

struct SamplingParams {
  double temperature = 0.0;
  int max_tokens = 512;
  int n = 1;  // samples per task
};

struct ProviderConfig {
  std::string endpoint;  // http://host[:port]/path
  std::string model;
  SamplingParams sampling;
  double timeout_secs = 60.0;
  int retry_budget = 2;  // retries after the first attempt
  std::chrono::milliseconds retry_backoff{200};

  /// Throws ConfigError when n < 1 or timeout <= 0.
  void validate() const;
};

nlohmann::ordered_json provider_config_to_json(const ProviderConfig& c);

struct CompletionRequest {
  std::string task_name;
  std::string model;
  std::string prompt;
  std::vector<std::string> stop;
  SamplingParams sampling;
};

/// Transport failures (connection refused, timeouts, 5xx, 429) are
/// retryable; model errors (4xx, error payloads, missing replay entries)
/// are not.
class CompletionError : public ProviderError {
 public:
  enum class Kind { kTransport, kModel };
  CompletionError(Kind kind, const std::string& message, std::string status = {})
      : ProviderError(message, std::move(status)), kind_(kind) {}
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool retryable() const noexcept { return kind_ == Kind::kTransport; }

 private:
  Kind kind_;
};

class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  /// Raw, untruncated completions. Throws CompletionError.
  virtual std::vector<std::string> fetch(const CompletionRequest& request) = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// Completions-style HTTP endpoint. Request body, keys in this order:
///   {"model", "prompt", "max_tokens", "temperature", "n", "stop"}
/// Response: {"choices": [{"text": ...}, ...]} or {"completions": [...]}.
class HttpCompletionProvider final : public CompletionProvider {
 public:
  explicit HttpCompletionProvider(ProviderConfig config);
  std::vector<std::string> fetch(const CompletionRequest& request) override;
  [[nodiscard]] std::string describe() const override;

  static nlohmann::ordered_json request_body(const CompletionRequest& request);
  /// Throws CompletionError(kModel) when no text array is present.
  static std::vector<std::string> parse_response(std::string_view body);

 private:
  ProviderConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

/// Recorded completions: {"<task name>": ["sample 0", "sample 1", ...]}.
class ReplayProvider final : public CompletionProvider {
 public:
  explicit ReplayProvider(std::map<std::string, std::vector<std::string>> recorded);
  static ReplayProvider from_json(std::string_view text);
  static ReplayProvider from_file(const std::string& path);

  std::vector<std::string> fetch(const CompletionRequest& request) override;
  [[nodiscard]] std::string describe() const override { return "replay"; }

 private:
  std::map<std::string, std::vector<std::string>> recorded_;
};

/// Returns the same canned text for every request.
class EchoProvider final : public CompletionProvider {
 public:
  explicit EchoProvider(std::string text = "    pass\n") : text_(std::move(text)) {}
  std::vector<std::string> fetch(const CompletionRequest& request) override;
  [[nodiscard]] std::string describe() const override { return "echo"; }

 private:
  std::string text_;
};

struct CompletionOutcome {
  std::vector<std::string> completions;  // truncated at stop tokens
  std::optional<std::string> error;      // set when retries ran out
  int attempts = 0;
};

/// Fetches, retries transport errors up to `retry_budget` times, then
/// truncates every completion at the stop tokens. Never throws for
/// provider failures.
CompletionOutcome complete(CompletionProvider& provider,
                           const CompletionRequest& request, int retry_budget,
                           std::chrono::milliseconds backoff = std::chrono::milliseconds{0});

}  // namespace perturbench
