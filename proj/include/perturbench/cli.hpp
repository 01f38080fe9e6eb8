#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "perturbench/harness/provider.hpp"
#include "perturbench/harness/sandbox.hpp"
#include "perturbench/perturb/dispatch.hpp"
#include "perturbench/stats.hpp"

namespace perturbench {

/// Environment variable naming the config file when --config is absent.
inline constexpr const char* kConfigEnv = "PERTURBENCH_CONFIG";

struct WorkbenchConfig {
  std::filesystem::path corpus;  // instruction corpus, JSONL
  std::string corpus_id = "evo";
  std::map<std::string, std::filesystem::path> benchmarks;  // id -> task set
  std::filesystem::path output_root = "perturbench-out";
  std::uint64_t seed = 0;
  ProviderConfig provider;
  SandboxConfig sandbox = SandboxConfig::python_default();
  WilcoxonOptions stats;
  PerturbParams perturb;
};

/// Reads a JSON config document; relative paths resolve against the
/// document's directory. Unknown keys are rejected.
WorkbenchConfig load_config(const std::filesystem::path& path);
WorkbenchConfig config_from_json(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir = {});
nlohmann::ordered_json config_to_json(const WorkbenchConfig& config);

/// Entry point shared by the executable and tests. `args` excludes the
/// program name. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perturbench
