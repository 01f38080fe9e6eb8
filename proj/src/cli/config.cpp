#include <fstream>
#include <set>
#include <sstream>

#include "perturbench/cli.hpp"
#include "perturbench/error.hpp"

namespace perturbench {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key \"" + where + "." + key + "\"");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& target) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) target = it->get<T>();
}

}  // namespace

WorkbenchConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j,
                 {"corpus", "corpus_id", "benchmarks", "output_root", "seed", "provider",
                  "sandbox", "stats", "perturb"},
                 "config");
  WorkbenchConfig c;
  try {
    if (j.contains("corpus")) c.corpus = resolve(base_dir, j.at("corpus").get<std::string>());
    read_if(j, "corpus_id", c.corpus_id);
    if (j.contains("benchmarks")) {
      for (const auto& [id, path] : j.at("benchmarks").items()) {
        c.benchmarks[id] = resolve(base_dir, path.get<std::string>());
      }
    }
    if (j.contains("output_root")) {
      c.output_root = resolve(base_dir, j.at("output_root").get<std::string>());
    }
    read_if(j, "seed", c.seed);

    if (j.contains("provider")) {
      const auto& p = j.at("provider");
      reject_unknown(p,
                     {"endpoint", "model", "temperature", "max_tokens", "samples_per_task",
                      "timeout_secs", "retry_budget", "retry_backoff_ms"},
                     "provider");
      read_if(p, "endpoint", c.provider.endpoint);
      read_if(p, "model", c.provider.model);
      read_if(p, "temperature", c.provider.sampling.temperature);
      read_if(p, "max_tokens", c.provider.sampling.max_tokens);
      read_if(p, "samples_per_task", c.provider.sampling.n);
      read_if(p, "timeout_secs", c.provider.timeout_secs);
      read_if(p, "retry_budget", c.provider.retry_budget);
      if (p.contains("retry_backoff_ms")) {
        c.provider.retry_backoff = std::chrono::milliseconds(p.at("retry_backoff_ms").get<long>());
      }
    }
    if (j.contains("sandbox")) {
      const auto& s = j.at("sandbox");
      reject_unknown(s,
                     {"timeout_secs", "output_limit_bytes", "work_root", "env_allowlist",
                      "languages"},
                     "sandbox");
      read_if(s, "timeout_secs", c.sandbox.timeout_secs);
      read_if(s, "output_limit_bytes", c.sandbox.output_limit_bytes);
      if (s.contains("work_root")) {
        c.sandbox.work_root = resolve(base_dir, s.at("work_root").get<std::string>());
      }
      read_if(s, "env_allowlist", c.sandbox.env_allowlist);
      if (s.contains("languages")) {
        for (const auto& [lang, cmd] : s.at("languages").items()) {
          reject_unknown(cmd, {"argv", "file_extension", "entry_invocation"}, "sandbox.languages");
          LanguageCommand lc;
          lc.argv = cmd.at("argv").get<std::vector<std::string>>();
          read_if(cmd, "file_extension", lc.file_extension);
          read_if(cmd, "entry_invocation", lc.entry_invocation);
          if (lc.argv.empty()) throw ConfigError("sandbox.languages." + lang + ".argv is empty");
          c.sandbox.languages[lang] = std::move(lc);
        }
      }
    }
    if (j.contains("stats")) {
      const auto& s = j.at("stats");
      reject_unknown(s, {"alpha", "exact_cutoff", "corrected", "mode"}, "stats");
      read_if(s, "alpha", c.stats.alpha);
      read_if(s, "exact_cutoff", c.stats.exact_cutoff);
      read_if(s, "corrected", c.stats.corrected);
      if (s.contains("mode")) {
        const auto mode = s.at("mode").get<std::string>();
        if (mode == "exact") {
          c.stats.mode = WilcoxonMode::kExact;
        } else if (mode == "normal") {
          c.stats.mode = WilcoxonMode::kNormal;
        } else if (mode != "auto") {
          throw ConfigError("stats.mode must be exact, normal or auto");
        }
      }
    }
    if (j.contains("perturb")) {
      const auto& p = j.at("perturb");
      reject_unknown(p, {"rate", "target_count"}, "perturb");
      if (p.contains("rate")) c.perturb.rate = p.at("rate").get<double>();
      if (p.contains("target_count")) c.perturb.target_count = p.at("target_count").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

WorkbenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  return config_from_json(j, path.parent_path());
}

nlohmann::ordered_json config_to_json(const WorkbenchConfig& c) {
  nlohmann::ordered_json j;
  j["corpus"] = c.corpus.string();
  j["corpus_id"] = c.corpus_id;
  auto benchmarks = nlohmann::ordered_json::object();
  for (const auto& [id, path] : c.benchmarks) benchmarks[id] = path.string();
  j["benchmarks"] = std::move(benchmarks);
  j["output_root"] = c.output_root.string();
  j["seed"] = c.seed;
  // Same schema as the config file, so a snapshot can be loaded back.
  const auto& p = c.provider;
  j["provider"] = {{"endpoint", p.endpoint},
                   {"model", p.model},
                   {"temperature", p.sampling.temperature},
                   {"max_tokens", p.sampling.max_tokens},
                   {"samples_per_task", p.sampling.n},
                   {"timeout_secs", p.timeout_secs},
                   {"retry_budget", p.retry_budget},
                   {"retry_backoff_ms", p.retry_backoff.count()}};
  auto sandbox = sandbox_config_to_json(c.sandbox);
  if (!c.sandbox.work_root.empty()) sandbox["work_root"] = c.sandbox.work_root.string();
  j["sandbox"] = std::move(sandbox);
  nlohmann::ordered_json stats;
  stats["alpha"] = c.stats.alpha;
  stats["exact_cutoff"] = c.stats.exact_cutoff;
  stats["corrected"] = c.stats.corrected;
  stats["mode"] = !c.stats.mode                            ? "auto"
                  : *c.stats.mode == WilcoxonMode::kExact ? "exact"
                                                          : "normal";
  j["stats"] = std::move(stats);
  nlohmann::ordered_json perturb = nlohmann::ordered_json::object();
  if (c.perturb.rate) perturb["rate"] = *c.perturb.rate;
  if (c.perturb.target_count) perturb["target_count"] = *c.perturb.target_count;
  j["perturb"] = std::move(perturb);
  return j;
}

}  // namespace perturbench
