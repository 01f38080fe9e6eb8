#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace perturbench {

/// How a candidate program in one language is run. `argv` may contain the
/// placeholder "{file}", replaced by the path of the assembled program.
struct LanguageCommand {
  std::vector<std::string> argv;
  std::string file_extension;
  /// Appended after the tests to invoke them, e.g. "test_check()".
  std::string entry_invocation;
};

struct SandboxConfig {
  std::map<std::string, LanguageCommand> languages;
  double timeout_secs = 10.0;
  /// Bytes kept per output stream; the rest is drained and dropped.
  std::size_t output_limit_bytes = 64 * 1024;
  /// Each run gets a fresh directory under this root (system temp if empty),
  /// removed afterwards.
  std::filesystem::path work_root;
  /// Only these variables are passed through to the candidate.
  std::vector<std::string> env_allowlist = {"PATH", "LANG", "LC_ALL", "HOME", "TMPDIR"};

  /// python (alias py) -> ["python3", "{file}"], ".py", "test_check()".
  static SandboxConfig python_default();
  /// Throws ConfigError when the language has no command template.
  const LanguageCommand& command_for(const std::string& language) const;
};

nlohmann::ordered_json sandbox_config_to_json(const SandboxConfig& c);

struct ProcessResult {
  int exit_code = -1;    // valid when !signaled && !timed_out
  int signal = 0;        // terminating signal when signaled
  bool signaled = false;
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;
  bool output_truncated = false;
  long long duration_ms = 0;
};

/// Runs argv in its own process group inside `workdir` with a filtered
/// environment; the whole group is killed at the timeout. Throws
/// ConfigError if the program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& workdir,
                          const SandboxConfig& config);

}  // namespace perturbench
