#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "perturbench/checksum.hpp"
#include "perturbench/cli.hpp"
#include "perturbench/corpus.hpp"
#include "perturbench/datasets.hpp"
#include "perturbench/error.hpp"
#include "perturbench/harness/runner.hpp"
#include "perturbench/quality.hpp"

namespace perturbench {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw Error("cannot write " + path.string());
}

nlohmann::json parse_json_file(const fs::path& path) {
  auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ParseError(path.string() + " is not valid JSON");
  return j;
}

bool looks_like_task_set(std::string_view bytes) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  return first != std::string_view::npos && bytes[first] == '[';
}

std::string format_percent(double value, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

// Values given on the command line, applied over the config file.
struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

WorkbenchConfig resolve_config(const GlobalFlags& flags) {
  WorkbenchConfig config;
  if (!flags.config.empty()) {
    config = load_config(flags.config);
  } else if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
    config = load_config(env);
  }
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output_root = flags.out;
  return config;
}

// ---------------------------------------------------------------------------
// perturb

struct PerturbFlags {
  std::string method;
  std::string input;
  std::string output;
  std::string benchmark;
  std::optional<double> rate;
  std::optional<std::size_t> target_count;
};

int cmd_perturb(const WorkbenchConfig& config, const PerturbFlags& f, std::ostream& out) {
  const fs::path input(f.input);
  const auto bytes = read_file(input);
  const MethodId method = parse_method(f.method);
  PerturbParams params = config.perturb;
  if (f.rate) params.rate = f.rate;
  if (f.target_count) params.target_count = f.target_count;

  DatasetManifest m;
  m.method = std::string(method_name(method));
  m.ratio_percent = 100;
  m.seed = config.seed;
  m.params = params;
  m.group = "adhoc";

  std::vector<InstructionSample> corpus;
  TaskSet tasks;
  BuildInputs inputs;
  std::string ext;
  if (looks_like_task_set(bytes)) {
    const std::string id = f.benchmark.empty() ? input.stem().string() : f.benchmark;
    tasks = parse_task_set(bytes, id);
    m.role = DatasetRole::kTest;
    m.benchmark_id = id;
    inputs.benchmarks[id] = &tasks;
    ext = ".json";
  } else {
    corpus = parse_instruction_corpus(bytes);
    m.role = DatasetRole::kTrain;
    m.corpus_id = input.stem().string();
    inputs.corpus = &corpus;
    ext = ".jsonl";
  }
  m.id = manifest_id(m);

  std::string traces;
  const auto data = materialize(m, inputs, &traces);
  m.checksum = content_checksum(data);
  m.sample_count = m.role == DatasetRole::kTrain ? corpus.size() : tasks.tasks.size();

  const fs::path data_path = f.output.empty()
                                 ? config.output_root / "perturbed" / (m.id + ext)
                                 : fs::path(f.output);
  fs::path stem = data_path;
  stem.replace_extension();
  const fs::path trace_path = stem.string() + ".trace.jsonl";
  const fs::path manifest_path = stem.string() + ".manifest.json";

  auto manifest = manifest_to_json(m);
  manifest["input"] = input.string();
  manifest["input_checksum"] = content_checksum(bytes);
  manifest["config"] = config_to_json(config);
  write_file(data_path, data);
  write_file(trace_path, traces);
  write_file(manifest_path, manifest.dump(2) + "\n");

  out << "perturbed " << *m.sample_count << " samples with " << m.method << " (seed " << m.seed
      << ")\n"
      << "  data:     " << data_path.string() << "\n"
      << "  trace:    " << trace_path.string() << "\n"
      << "  manifest: " << manifest_path.string() << "\n"
      << "  checksum: " << *m.checksum << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// plan / build

struct PlanFlags {
  std::string corpus_id;
  std::vector<std::string> benchmarks;
};

std::vector<std::string> benchmark_ids(const WorkbenchConfig& config,
                                       const std::vector<std::string>& override_ids) {
  if (!override_ids.empty()) return override_ids;
  if (!config.benchmarks.empty()) {
    std::vector<std::string> ids;
    for (const auto& [id, path] : config.benchmarks) ids.push_back(id);
    return ids;
  }
  return {"humaneval", "mbpp"};
}

int cmd_plan(const WorkbenchConfig& config, const PlanFlags& f, std::ostream& out) {
  const auto corpus_id = f.corpus_id.empty() ? config.corpus_id : f.corpus_id;
  const auto plan = enumerate_plan(corpus_id, benchmark_ids(config, f.benchmarks), config.seed);
  auto j = plan_to_json(plan);
  j["config"] = config_to_json(config);
  const auto path = config.output_root / "plan.json";
  write_file(path, j.dump(2) + "\n");

  const auto train = plan.select(DatasetRole::kTrain, true);
  const auto test = plan.select(DatasetRole::kTest, true);
  out << "experiment plan (master seed " << plan.master_seed << ")\n"
      << "  perturbed train datasets: " << train.size() << " (rq1 " << plan.group("rq1").size()
      << ", rq2 " << plan.group("rq2").size() << ", rq3 " << plan.group("rq3").size() << ")\n"
      << "  perturbed test datasets:  " << test.size() << "\n"
      << "  clean datasets:           "
      << plan.select(DatasetRole::kTrain, false).size() + plan.select(DatasetRole::kTest, false).size()
      << "\n";
  for (const auto& m : plan.manifests) out << "    " << m.group << "  " << m.id << "\n";
  out << "written: " << path.string() << "\n";
  return 0;
}

struct BuildFlags {
  std::string plan;
  std::vector<std::string> ids;
  std::vector<std::string> groups;
};

int cmd_build(const WorkbenchConfig& config, const BuildFlags& f, std::ostream& out) {
  ExperimentPlan plan;
  if (!f.plan.empty()) {
    plan = plan_from_json(parse_json_file(f.plan));
  } else if (fs::exists(config.output_root / "plan.json")) {
    plan = plan_from_json(parse_json_file(config.output_root / "plan.json"));
  } else {
    plan = enumerate_plan(config.corpus_id, benchmark_ids(config, {}), config.seed);
  }

  std::vector<const DatasetManifest*> selected;
  for (const auto& m : plan.manifests) {
    const bool by_id = std::find(f.ids.begin(), f.ids.end(), m.id) != f.ids.end();
    const bool by_group = std::find(f.groups.begin(), f.groups.end(), m.group) != f.groups.end();
    if ((f.ids.empty() && f.groups.empty()) || by_id || by_group) selected.push_back(&m);
  }
  for (const auto& id : f.ids) {
    if (plan.find(id) == nullptr) throw ConfigError("no manifest with id " + id + " in the plan");
  }

  const bool need_corpus = std::any_of(selected.begin(), selected.end(), [](const auto* m) {
    return m->role == DatasetRole::kTrain;
  });
  std::vector<InstructionSample> corpus;
  std::map<std::string, TaskSet> task_sets;
  BuildInputs inputs;
  inputs.out_dir = config.output_root / "datasets";
  if (need_corpus) {
    if (config.corpus.empty()) throw ConfigError("config has no corpus path");
    corpus = parse_instruction_corpus(read_file(config.corpus));
    inputs.corpus = &corpus;
  }
  for (const auto* m : selected) {
    if (m->role != DatasetRole::kTest || task_sets.count(m->benchmark_id)) continue;
    auto it = config.benchmarks.find(m->benchmark_id);
    if (it == config.benchmarks.end()) {
      throw ConfigError("config has no task set for benchmark " + m->benchmark_id);
    }
    task_sets[m->benchmark_id] = parse_task_set(read_file(it->second), m->benchmark_id);
  }
  for (const auto& [id, set] : task_sets) inputs.benchmarks[id] = &set;

  for (const auto* m : selected) {
    const auto result = build_dataset(*m, inputs);
    out << result.manifest.id << "  " << *result.manifest.sample_count << " samples  "
        << *result.manifest.checksum << "\n";
  }
  out << "built " << selected.size() << " datasets under " << inputs.out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateFlags {
  std::string tasks;
  std::string benchmark;
  std::string replay;
  std::string provider_url;
  std::string model;
  std::string variant = "base";
  std::string dataset_id;
  std::string report;
  int parallelism = 1;
  std::optional<double> timeout_secs;
  std::optional<int> samples_per_task;
};

int cmd_evaluate(WorkbenchConfig config, const EvaluateFlags& f, std::ostream& out) {
  const fs::path tasks_path(f.tasks);
  const auto bytes = read_file(tasks_path);
  const auto tasks = parse_task_set(bytes, f.benchmark);

  if (f.timeout_secs) config.sandbox.timeout_secs = *f.timeout_secs;
  if (f.samples_per_task) config.provider.sampling.n = *f.samples_per_task;
  if (!f.model.empty()) config.provider.model = f.model;
  if (!f.provider_url.empty()) config.provider.endpoint = f.provider_url;
  if (f.parallelism < 1) throw ConfigError("--parallelism must be at least 1");

  std::unique_ptr<CompletionProvider> provider;
  if (!f.replay.empty()) {
    provider = std::make_unique<ReplayProvider>(ReplayProvider::from_file(f.replay));
    if (config.provider.model.empty()) config.provider.model = "replay";
  } else if (!config.provider.endpoint.empty()) {
    provider = std::make_unique<HttpCompletionProvider>(config.provider);
  } else {
    throw ConfigError("evaluate needs --replay or a provider endpoint");
  }

  RunOptions options;
  options.dataset_id = f.dataset_id.empty() ? tasks_path.stem().string() : f.dataset_id;
  options.variant = f.variant;
  options.parallelism = f.parallelism;
  auto report = run_benchmark(tasks, *provider, config.provider, config.sandbox, options);
  report.config["seed"] = config.seed;
  report.config["tasks_checksum"] = content_checksum(bytes);

  const fs::path report_path =
      f.report.empty() ? config.output_root / "reports" /
                             (sanitize(report.model_id) + "--" + sanitize(options.variant) + "--" +
                              sanitize(options.dataset_id) + ".report.json")
                       : fs::path(f.report);
  std::string timing = report_path.string();
  const std::string suffix = ".report.json";
  if (timing.size() > suffix.size() &&
      timing.compare(timing.size() - suffix.size(), suffix.size(), suffix) == 0) {
    timing.replace(timing.size() - suffix.size(), suffix.size(), ".timing.json");
  } else {
    timing += ".timing.json";
  }
  write_file(report_path, report_to_json(report).dump(2) + "\n");
  write_file(timing, report_timing_to_json(report).dump(2) + "\n");

  std::map<std::string, std::size_t> verdicts;
  for (const auto& r : report.results) ++verdicts[std::string(verdict_name(r.verdict))];
  out << report.dataset_id << " [" << report.model_id << "/" << report.variant
      << "]: pass@1 = " << format_percent(report.pass_at_1_percent(), 1) << "% over "
      << report.task_count << " tasks\n";
  for (const auto& [name, n] : verdicts) out << "  " << name << ": " << n << "\n";
  out << "written: " << report_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stats

std::optional<WilcoxonMode> parse_mode(const std::string& mode) {
  if (mode == "exact") return WilcoxonMode::kExact;
  if (mode == "normal") return WilcoxonMode::kNormal;
  if (mode == "auto") return std::nullopt;
  throw ConfigError("--mode must be exact, normal or auto");
}

std::vector<std::pair<double, double>> pairs_from_json(const nlohmann::json& j) {
  const auto& rows = j.is_object() && j.contains("pairs") ? j.at("pairs") : j;
  if (!rows.is_array()) throw ParseError("pairs must be an array of [a, b]");
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 2) throw ParseError("each pair must be [a, b]");
    pairs.emplace_back(row[0].get<double>(), row[1].get<double>());
  }
  return pairs;
}

struct RdFlags {
  std::string from;
  std::vector<std::string> compare;  // two column names
};

int cmd_stats_rd(const WorkbenchConfig& config, const RdFlags& f, std::ostream& out) {
  const auto table = rd_table(pass_records_from_json(parse_json_file(f.from)));
  out << render_rd_table(table);
  auto j = rd_table_to_json(table);
  if (!f.compare.empty()) {
    if (f.compare.size() != 2) throw ConfigError("--compare takes two column names");
    const auto pairs = table.paired(f.compare[0], f.compare[1]);
    const auto result = wilcoxon_signed_rank(pairs, config.stats);
    const auto effect = effect_size(result);
    j["wilcoxon"] = wilcoxon_to_json(result, effect);
    j["wilcoxon"]["columns"] = f.compare;
    out << "wilcoxon " << f.compare[0] << " vs " << f.compare[1] << ": n=" << result.n
        << " W=" << result.w << " p=" << result.p_two_sided << " r=" << effect.r_z << "\n";
  }
  const auto path = config.output_root / "stats" / "rd.json";
  write_file(path, j.dump(2) + "\n");
  return 0;
}

struct WilcoxonFlags {
  std::optional<std::size_t> n;
  std::optional<double> w;
  std::string pairs;
  std::string mode = "auto";
  bool corrected = false;
};

int cmd_stats_wilcoxon(const WorkbenchConfig& config, const WilcoxonFlags& f, std::ostream& out) {
  WilcoxonOptions options = config.stats;
  if (f.mode != "auto" || !options.mode) options.mode = parse_mode(f.mode);
  options.corrected = options.corrected || f.corrected;
  WilcoxonResult result;
  if (!f.pairs.empty()) {
    const auto pairs = pairs_from_json(parse_json_file(f.pairs));
    result = wilcoxon_signed_rank(pairs, options);
  } else if (f.n && f.w) {
    result = wilcoxon_from_statistic(*f.n, *f.w, options);
  } else {
    throw ConfigError("wilcoxon needs --pairs or both --n and --w");
  }
  out << wilcoxon_to_json(result, effect_size(result)).dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// quality

struct SampleSizeFlags {
  std::optional<std::uint64_t> population;
  double confidence = 0.95;
  double margin = 0.05;
  double proportion = 0.5;
};

int cmd_sample_size(const SampleSizeFlags& f, std::ostream& out) {
  SampleSizeQuery q;
  q.population = f.population;
  q.confidence = f.confidence;
  q.margin = f.margin;
  q.proportion = f.proportion;
  out << required_sample_size(q) << "\n";
  return 0;
}

int cmd_aggregate(const WorkbenchConfig& config, const std::string& from, std::ostream& out) {
  const fs::path root(from);
  if (!fs::exists(root)) throw ConfigError("no such file or directory: " + from);
  std::vector<fs::path> files;
  if (fs::is_directory(root)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(root);
  }
  std::vector<std::pair<std::string, std::string>> streams;
  for (const auto& file : files) streams.emplace_back(file.stem().string(), read_file(file));
  const auto counts = aggregate_warnings(streams);
  out << render_warning_table(counts);
  out << "combined exit bits: " << counts.combined_exit_bits() << "\n";
  write_file(config.output_root / "quality" / "warnings.json", warnings_to_json(counts).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportFlags {
  std::string from;
  std::string clean;
};

int cmd_report(const WorkbenchConfig& config, const ReportFlags& f, std::ostream& out) {
  const fs::path dir = f.from.empty() ? config.output_root / "reports" : fs::path(f.from);
  if (!fs::is_directory(dir)) throw ConfigError("no report directory " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.size() > 12 && name.ends_with(".report.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no *.report.json files in " + dir.string());

  std::vector<PassRecord> records;
  std::vector<std::array<std::string, 4>> rows = {{"model", "variant", "dataset", "pass@1 (%)"}};
  ordered_json summary = ordered_json::array();
  for (const auto& file : files) {
    const auto report = report_from_json(parse_json_file(file));
    PassRecord r;
    r.model = report.model_id;
    r.variant = report.variant;
    r.dataset = report.dataset_id;
    r.perturbed = report.dataset_id != f.clean;
    r.pass_at_1 = report.pass_at_1;
    records.push_back(r);
    rows.push_back({report.model_id, report.variant, report.dataset_id,
                    format_percent(report.pass_at_1_percent(), 1)});
    ordered_json row;
    row["model"] = r.model;
    row["variant"] = r.variant;
    row["dataset"] = r.dataset;
    row["pass_at_1_percent"] = report.pass_at_1_percent();
    summary.push_back(std::move(row));
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << line << "\n";
  }

  ordered_json j;
  j["reports"] = std::move(summary);
  if (!f.clean.empty()) {
    const auto table = rd_table(records);
    out << "\nRelative Degradation (%)\n" << render_rd_table(table);
    j["rd"] = rd_table_to_json(table);
  }
  write_file(config.output_root / "summary.json", j.dump(2) + "\n");
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness evaluation workbench for code generation models", "perturbench"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags globals;
  app.add_option("--config", globals.config, "Config file (JSON); defaults to $PERTURBENCH_CONFIG");
  app.add_option("--seed", globals.seed, "Master seed");
  app.add_option("--out", globals.out, "Output root");

  PerturbFlags perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "Perturb a corpus or task set");
  perturb_cmd->add_option("--method", perturb.method, "C1..S3, C_mix, W_mix, S_mix, mix_all")->required();
  perturb_cmd->add_option("--input", perturb.input, "Corpus (JSONL) or task set (JSON)")->required();
  perturb_cmd->add_option("--output", perturb.output, "Output data file");
  perturb_cmd->add_option("--benchmark", perturb.benchmark, "Benchmark id of a task set");
  perturb_cmd->add_option("--rate", perturb.rate, "Fraction of eligible sites to edit");
  perturb_cmd->add_option("--target-count", perturb.target_count, "Exact number of sites to edit");

  PlanFlags plan;
  auto* plan_cmd = app.add_subcommand("plan", "Enumerate the experiment plan");
  plan_cmd->add_option("--corpus-id", plan.corpus_id);
  plan_cmd->add_option("--benchmarks", plan.benchmarks)->delimiter(',');

  BuildFlags build;
  auto* build_cmd = app.add_subcommand("build", "Materialize datasets of the plan");
  build_cmd->add_option("--plan", build.plan, "Plan index (default <out>/plan.json)");
  build_cmd->add_option("--id", build.ids, "Manifest id (repeatable)");
  build_cmd->add_option("--group", build.groups, "base, rq1, rq2, rq3 or test (repeatable)");

  EvaluateFlags evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run a task set against a model");
  evaluate_cmd->add_option("--tasks", evaluate.tasks, "Task set (JSON)")->required();
  evaluate_cmd->add_option("--benchmark", evaluate.benchmark, "Benchmark id for count checks");
  auto* replay_opt = evaluate_cmd->add_option("--replay", evaluate.replay, "Recorded completions");
  evaluate_cmd->add_option("--provider-url", evaluate.provider_url, "Completion endpoint")
      ->excludes(replay_opt);
  evaluate_cmd->add_option("--model", evaluate.model);
  evaluate_cmd->add_option("--variant", evaluate.variant, "Model variant label")->capture_default_str();
  evaluate_cmd->add_option("--dataset-id", evaluate.dataset_id);
  evaluate_cmd->add_option("--report", evaluate.report, "Report path");
  evaluate_cmd->add_option("--parallelism", evaluate.parallelism)->capture_default_str();
  evaluate_cmd->add_option("--timeout-secs", evaluate.timeout_secs, "Per-candidate time limit");
  evaluate_cmd->add_option("--samples-per-task", evaluate.samples_per_task);

  auto* stats_cmd = app.add_subcommand("stats", "Relative Degradation and significance tests");
  stats_cmd->require_subcommand(1);
  RdFlags rd;
  auto* rd_cmd = stats_cmd->add_subcommand("rd", "Relative Degradation table from pass@1 records");
  rd_cmd->add_option("--from", rd.from, "Pass@1 records (JSON)")->required();
  rd_cmd->add_option("--compare", rd.compare, "Two columns to test")->delimiter(',');
  WilcoxonFlags wilcoxon;
  auto* wilcoxon_cmd = stats_cmd->add_subcommand("wilcoxon", "Wilcoxon signed-rank test");
  wilcoxon_cmd->add_option("--n", wilcoxon.n, "Number of nonzero pairs");
  wilcoxon_cmd->add_option("--w", wilcoxon.w, "Statistic W = min(T+, T-)");
  wilcoxon_cmd->add_option("--pairs", wilcoxon.pairs, "JSON array of [a, b]");
  wilcoxon_cmd->add_option("--mode", wilcoxon.mode, "exact, normal or auto")->capture_default_str();
  wilcoxon_cmd->add_flag("--corrected", wilcoxon.corrected, "Continuity and tie corrections");

  auto* quality_cmd = app.add_subcommand("quality", "Sampling and lint aggregation");
  quality_cmd->require_subcommand(1);
  SampleSizeFlags sample;
  auto* sample_cmd = quality_cmd->add_subcommand("sample-size", "Required review sample size");
  sample_cmd->add_option("--population", sample.population, "Population size (omit: unbounded)");
  sample_cmd->add_option("--confidence", sample.confidence)->capture_default_str();
  sample_cmd->add_option("--margin", sample.margin)->capture_default_str();
  sample_cmd->add_option("--proportion", sample.proportion)->capture_default_str();
  std::string aggregate_from;
  auto* aggregate_cmd = quality_cmd->add_subcommand("aggregate", "Aggregate linter diagnostics");
  aggregate_cmd->add_option("--from", aggregate_from, "Directory of per-run diagnostic files")->required();

  ReportFlags report;
  auto* report_cmd = app.add_subcommand("report", "Summarize run reports");
  report_cmd->add_option("--from", report.from, "Report directory (default <out>/reports)");
  report_cmd->add_option("--clean", report.clean, "Dataset id of the unperturbed test set");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const auto config = resolve_config(globals);
    if (perturb_cmd->parsed()) return cmd_perturb(config, perturb, out);
    if (plan_cmd->parsed()) return cmd_plan(config, plan, out);
    if (build_cmd->parsed()) return cmd_build(config, build, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config, evaluate, out);
    if (rd_cmd->parsed()) return cmd_stats_rd(config, rd, out);
    if (wilcoxon_cmd->parsed()) return cmd_stats_wilcoxon(config, wilcoxon, out);
    if (sample_cmd->parsed()) return cmd_sample_size(sample, out);
    if (aggregate_cmd->parsed()) return cmd_aggregate(config, aggregate_from, out);
    if (report_cmd->parsed()) return cmd_report(config, report, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace perturbench
