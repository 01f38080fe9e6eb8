#include "perturbench/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "perturbench/checksum.hpp"
#include "perturbench/error.hpp"
#include "perturbench/rng.hpp"

namespace perturbench {
namespace {

using nlohmann::ordered_json;

// Sub-streams of a dataset seed.
constexpr std::uint64_t kSelectionStream = 0;
constexpr std::uint64_t kSubsampleStream = 1ULL << 40;
constexpr std::uint64_t kMixStream = (1ULL << 40) + 1;

std::string scale_label(double factor) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", factor);
  return buf;
}

std::string role_name(DatasetRole role) {
  return role == DatasetRole::kTrain ? "train" : "test";
}

DatasetRole parse_role(const std::string& s) {
  if (s == "train") return DatasetRole::kTrain;
  if (s == "test") return DatasetRole::kTest;
  throw ParseError("unknown dataset role \"" + s + "\"");
}

bool valid_ratio(int r) {
  return r == 0 || r == 100 || r == kScaledRatio ||
         std::find(kIntermediateRatios.begin(), kIntermediateRatios.end(), r) !=
             kIntermediateRatios.end();
}

std::string serialize(const std::vector<InstructionSample>& samples) {
  return write_instruction_corpus(samples);
}

std::string serialize(const std::vector<TaskSpec>& tasks) {
  TaskSet set;
  set.tasks = tasks;
  return write_task_set(set);
}

template <typename Sample>
std::string traces_jsonl(const MixedDataset<Sample>& data) {
  std::string out;
  for (const auto i : data.perturbed_indices) {
    auto j = trace_to_json(*data.traces[i]);
    ordered_json line;
    line["index"] = i;
    for (auto& [k, v] : j.items()) line[k] = v;
    out += line.dump();
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

std::string manifest_id(const DatasetManifest& m) {
  char buf[256];
  const auto& source = m.role == DatasetRole::kTrain ? m.corpus_id : m.benchmark_id;
  std::snprintf(buf, sizeof buf, "%s-%s-%s-r%03d-x%s-rep%d-%016llx",
                role_name(m.role).c_str(), source.c_str(), m.method.c_str(),
                m.ratio_percent, scale_label(m.scale_factor).c_str(),
                m.replication, static_cast<unsigned long long>(m.seed));
  return buf;
}

ordered_json manifest_to_json(const DatasetManifest& m) {
  ordered_json j;
  j["id"] = m.id;
  j["role"] = role_name(m.role);
  j["corpus_id"] = m.corpus_id;
  j["benchmark_id"] = m.benchmark_id;
  j["method"] = m.method;
  j["ratio_percent"] = m.ratio_percent;
  j["scale_factor"] = m.scale_factor;
  j["replication"] = m.replication;
  j["seed"] = m.seed;
  j["parent_id"] = m.parent_id;
  j["group"] = m.group;
  ordered_json params = ordered_json::object();
  if (m.params.rate) params["rate"] = *m.params.rate;
  if (m.params.target_count) params["target_count"] = *m.params.target_count;
  j["params"] = params;
  j["sample_count"] = m.sample_count ? ordered_json(*m.sample_count) : ordered_json();
  j["checksum"] = m.checksum ? ordered_json(*m.checksum) : ordered_json();
  return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.id = j.at("id").get<std::string>();
    m.role = parse_role(j.at("role").get<std::string>());
    m.corpus_id = j.value("corpus_id", std::string{});
    m.benchmark_id = j.value("benchmark_id", std::string{});
    m.method = j.at("method").get<std::string>();
    m.ratio_percent = j.at("ratio_percent").get<int>();
    m.scale_factor = j.at("scale_factor").get<double>();
    m.replication = j.at("replication").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.parent_id = j.value("parent_id", std::string{});
    m.group = j.value("group", std::string{});
    if (j.contains("params")) {
      const auto& p = j.at("params");
      if (p.contains("rate")) m.params.rate = p.at("rate").get<double>();
      if (p.contains("target_count")) {
        m.params.target_count = p.at("target_count").get<std::size_t>();
      }
    }
    if (j.contains("sample_count") && !j.at("sample_count").is_null()) {
      m.sample_count = j.at("sample_count").get<std::size_t>();
    }
    if (j.contains("checksum") && !j.at("checksum").is_null()) {
      m.checksum = j.at("checksum").get<std::string>();
    }
    if (!valid_ratio(m.ratio_percent)) {
      throw ParseError("ratio_percent " + std::to_string(m.ratio_percent) +
                       " is not part of the plan");
    }
    if ((m.ratio_percent == 0) != (m.method == "none")) {
      throw ParseError("manifest " + m.id +
                       ": ratio 0 must pair with method \"none\"");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed manifest: ") + e.what());
  }
}

std::vector<const DatasetManifest*> ExperimentPlan::select(DatasetRole role,
                                                           bool perturbed) const {
  std::vector<const DatasetManifest*> out;
  for (const auto& m : manifests) {
    if (m.role == role && m.perturbed() == perturbed) out.push_back(&m);
  }
  return out;
}

std::vector<const DatasetManifest*> ExperimentPlan::group(std::string_view name) const {
  std::vector<const DatasetManifest*> out;
  for (const auto& m : manifests) {
    if (m.group == name) out.push_back(&m);
  }
  return out;
}

std::vector<std::string> ExperimentPlan::rq2_references() const {
  std::vector<std::string> ids;
  for (const auto* m : group("rq2")) ids.push_back(m->id);
  for (const auto* m : group("rq1")) {
    if (m->method == method_name(MethodId::kMixAll)) ids.push_back(m->id);
  }
  return ids;
}

const DatasetManifest* ExperimentPlan::find(std::string_view id) const {
  for (const auto& m : manifests) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

ExperimentPlan enumerate_plan(const std::string& corpus_id,
                              const std::vector<std::string>& benchmark_ids,
                              std::uint64_t master_seed) {
  ExperimentPlan plan;
  plan.corpus_id = corpus_id;
  plan.benchmark_ids = benchmark_ids;
  plan.master_seed = master_seed;
  Rng seeds(master_seed);

  auto add = [&](DatasetManifest m) {
    m.id = manifest_id(m);
    plan.manifests.push_back(std::move(m));
    return plan.manifests.back().id;
  };

  DatasetManifest clean_train;
  clean_train.role = DatasetRole::kTrain;
  clean_train.corpus_id = corpus_id;
  clean_train.group = "base";
  const auto clean_train_id = add(clean_train);

  std::map<std::string, std::string> clean_test_ids;
  for (const auto& b : benchmark_ids) {
    DatasetManifest clean_test;
    clean_test.role = DatasetRole::kTest;
    clean_test.benchmark_id = b;
    clean_test.group = "base";
    clean_test_ids[b] = add(clean_test);
  }

  const auto mix_all = std::string(method_name(MethodId::kMixAll));
  auto train = [&](std::string method, int ratio, double scale, int rep,
                   std::string group) {
    DatasetManifest m;
    m.role = DatasetRole::kTrain;
    m.corpus_id = corpus_id;
    m.method = std::move(method);
    m.ratio_percent = ratio;
    m.scale_factor = scale;
    m.replication = rep;
    m.seed = seeds.next();
    m.parent_id = clean_train_id;
    m.group = std::move(group);
    add(std::move(m));
  };

  for (const auto method : all_methods()) {
    train(std::string(method_name(method)), 100, 1.0, 0, "rq1");
  }
  for (const int ratio : kIntermediateRatios) {
    for (int rep = 0; rep < kReplications; ++rep) {
      train(mix_all, ratio, 1.0, rep, "rq2");
    }
  }
  for (const double factor : kScaleFactors) {
    train(mix_all, kScaledRatio, factor, 0, "rq3");
  }
  for (const auto& b : benchmark_ids) {
    for (const auto method : all_methods()) {
      DatasetManifest m;
      m.role = DatasetRole::kTest;
      m.benchmark_id = b;
      m.method = std::string(method_name(method));
      m.ratio_percent = 100;
      m.seed = seeds.next();
      m.parent_id = clean_test_ids[b];
      m.group = "test";
      add(std::move(m));
    }
  }
  return plan;
}

ordered_json plan_to_json(const ExperimentPlan& plan) {
  ordered_json j;
  j["corpus_id"] = plan.corpus_id;
  j["benchmark_ids"] = plan.benchmark_ids;
  j["master_seed"] = plan.master_seed;
  j["perturbed_train"] = plan.select(DatasetRole::kTrain, true).size();
  j["perturbed_test"] = plan.select(DatasetRole::kTest, true).size();
  auto list = ordered_json::array();
  for (const auto& m : plan.manifests) list.push_back(manifest_to_json(m));
  j["manifests"] = std::move(list);
  return j;
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
  try {
    ExperimentPlan plan;
    plan.corpus_id = j.at("corpus_id").get<std::string>();
    plan.benchmark_ids = j.at("benchmark_ids").get<std::vector<std::string>>();
    plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& m : j.at("manifests")) {
      plan.manifests.push_back(manifest_from_json(m));
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed plan index: ") + e.what());
  }
}

std::size_t perturbed_count(std::size_t n, int ratio_percent) {
  return (static_cast<std::size_t>(ratio_percent) * n + 50) / 100;
}

std::vector<std::size_t> perturbed_indices(std::size_t n, int ratio_percent,
                                           std::uint64_t seed) {
  Rng rng(derive_seed(seed, kSelectionStream));
  auto picked = rng.sample_without_replacement(n, perturbed_count(n, ratio_percent));
  std::sort(picked.begin(), picked.end());
  return picked;
}

template <typename Sample>
MixedDataset<Sample> mix_with_ratio(const std::vector<Sample>& clean,
                                    MethodId method, int ratio_percent,
                                    std::uint64_t seed,
                                    const PerturbParams& params,
                                    const PerturbResources& resources) {
  if (ratio_percent < 0 || ratio_percent > 100) {
    throw ConfigError("ratio_percent must be within 0..100");
  }
  MixedDataset<Sample> out;
  out.samples = clean;
  out.traces.resize(clean.size());
  out.perturbed_indices = perturbed_indices(clean.size(), ratio_percent, seed);
  for (const auto i : out.perturbed_indices) {
    auto result = perturb_sample(clean[i], method, params,
                                 derive_seed(seed, i + 1), resources);
    out.samples[i] = std::move(result.sample);
    out.traces[i] = std::move(result.trace);
  }
  return out;
}

template <typename Sample>
MixedDataset<Sample> scale_perturbed(const std::vector<Sample>& clean,
                                     double factor, MethodId method,
                                     std::uint64_t seed, int ratio_percent,
                                     const PerturbParams& params,
                                     const PerturbResources& resources) {
  if (std::find(kScaleFactors.begin(), kScaleFactors.end(), factor) ==
      kScaleFactors.end()) {
    throw ConfigError("scale factor " + scale_label(factor) +
                      " is not one of 0.25, 0.5, 2, 3");
  }
  const auto n = clean.size();
  const auto target =
      static_cast<std::size_t>(std::floor(factor * static_cast<double>(n) + 0.5));

  std::vector<Sample> pool;
  pool.reserve(target);
  if (factor < 1.0) {
    Rng rng(derive_seed(seed, kSubsampleStream));
    auto keep = rng.sample_without_replacement(n, target);
    std::sort(keep.begin(), keep.end());
    for (const auto i : keep) pool.push_back(clean[i]);
  } else {
    for (std::size_t i = 0; i < target; ++i) pool.push_back(clean[i % n]);
  }
  return mix_with_ratio(pool, method, ratio_percent,
                        derive_seed(seed, kMixStream), params, resources);
}

template MixedDataset<InstructionSample> mix_with_ratio(
    const std::vector<InstructionSample>&, MethodId, int, std::uint64_t,
    const PerturbParams&, const PerturbResources&);
template MixedDataset<TaskSpec> mix_with_ratio(const std::vector<TaskSpec>&,
                                               MethodId, int, std::uint64_t,
                                               const PerturbParams&,
                                               const PerturbResources&);
template MixedDataset<InstructionSample> scale_perturbed(
    const std::vector<InstructionSample>&, double, MethodId, std::uint64_t, int,
    const PerturbParams&, const PerturbResources&);
template MixedDataset<TaskSpec> scale_perturbed(const std::vector<TaskSpec>&,
                                                double, MethodId, std::uint64_t,
                                                int, const PerturbParams&,
                                                const PerturbResources&);

std::string materialize(const DatasetManifest& manifest,
                        const BuildInputs& inputs, std::string* traces) {
  auto emit = [&](const auto& data) {
    if (traces != nullptr) *traces = traces_jsonl(data);
    return serialize(data.samples);
  };

  if (manifest.role == DatasetRole::kTrain) {
    if (inputs.corpus == nullptr) {
      throw ConfigError("manifest " + manifest.id + " needs a training corpus");
    }
    const auto& corpus = *inputs.corpus;
    if (!manifest.perturbed()) {
      if (traces != nullptr) traces->clear();
      return serialize(corpus);
    }
    const auto method = parse_method(manifest.method);
    if (manifest.scale_factor != 1.0) {
      return emit(scale_perturbed(corpus, manifest.scale_factor, method,
                                  manifest.seed, manifest.ratio_percent,
                                  manifest.params, inputs.resources));
    }
    return emit(mix_with_ratio(corpus, method, manifest.ratio_percent,
                               manifest.seed, manifest.params, inputs.resources));
  }

  const auto it = inputs.benchmarks.find(manifest.benchmark_id);
  if (it == inputs.benchmarks.end() || it->second == nullptr) {
    throw ConfigError("manifest " + manifest.id + " needs benchmark \"" +
                      manifest.benchmark_id + "\"");
  }
  const auto& tasks = it->second->tasks;
  if (!manifest.perturbed()) {
    if (traces != nullptr) traces->clear();
    return serialize(tasks);
  }
  return emit(mix_with_ratio(tasks, parse_method(manifest.method),
                             manifest.ratio_percent, manifest.seed,
                             manifest.params, inputs.resources));
}

BuildResult build_dataset(const DatasetManifest& manifest,
                          const BuildInputs& inputs) {
  std::string traces;
  const auto bytes = materialize(manifest, inputs, &traces);
  const auto checksum = content_checksum(bytes);
  if (manifest.checksum && *manifest.checksum != checksum) {
    throw Error("checksum mismatch rebuilding " + manifest.id + ": recorded " +
                *manifest.checksum + ", rebuilt " + checksum +
                " (non-deterministic build)");
  }

  BuildResult result;
  result.manifest = manifest;
  result.manifest.checksum = checksum;
  if (manifest.role == DatasetRole::kTrain) {
    result.manifest.sample_count = parse_instruction_corpus(bytes).size();
  } else {
    result.manifest.sample_count =
        parse_task_set(bytes, "").tasks.size();
  }

  std::filesystem::create_directories(inputs.out_dir);
  const auto ext = manifest.role == DatasetRole::kTrain ? ".jsonl" : ".json";
  result.data_path = inputs.out_dir / (manifest.id + ext);
  result.trace_path = inputs.out_dir / (manifest.id + ".trace.jsonl");
  result.manifest_path = inputs.out_dir / (manifest.id + ".manifest.json");
  write_file(result.data_path, bytes);
  write_file(result.trace_path, traces);
  write_file(result.manifest_path, manifest_to_json(result.manifest).dump(2) + "\n");
  return result;
}

}  // namespace perturbench
