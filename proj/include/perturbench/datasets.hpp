#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "perturbench/corpus.hpp"
#include "perturbench/perturb/dispatch.hpp"

namespace perturbench {

enum class DatasetRole { kTrain, kTest };

/// Reproducibility record of one dataset.
struct DatasetManifest {
  std::string id;
  DatasetRole role = DatasetRole::kTrain;
  std::string corpus_id;     // train only
  std::string benchmark_id;  // test only
  std::string method = "none";
  int ratio_percent = 0;
  double scale_factor = 1.0;
  int replication = 0;
  std::uint64_t seed = 0;
  std::string parent_id;
  /// "base", "rq1", "rq2", "rq3" or "test".
  std::string group;
  PerturbParams params;
  std::optional<std::size_t> sample_count;
  std::optional<std::string> checksum;

  [[nodiscard]] bool perturbed() const { return method != "none"; }
  bool operator==(const DatasetManifest&) const = default;
};

/// Id as a pure function of role, source, method, ratio, scale, replication
/// and seed, e.g. "train-evo-mix_all-r060-x2-rep0-00000000000004d2".
std::string manifest_id(const DatasetManifest& m);

nlohmann::ordered_json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

inline constexpr std::array<int, 5> kIntermediateRatios = {10, 30, 50, 70, 90};
inline constexpr std::array<double, 4> kScaleFactors = {0.25, 0.5, 2.0, 3.0};
inline constexpr int kReplications = 3;
inline constexpr int kScaledRatio = 60;

struct ExperimentPlan {
  std::string corpus_id;
  std::vector<std::string> benchmark_ids;
  std::uint64_t master_seed = 0;
  /// Clean base datasets first, then RQ1, RQ2, RQ3 and test manifests.
  std::vector<DatasetManifest> manifests;

  [[nodiscard]] std::vector<const DatasetManifest*> select(DatasetRole role,
                                                           bool perturbed) const;
  [[nodiscard]] std::vector<const DatasetManifest*> group(std::string_view name) const;
  /// The RQ2 sweep: 15 intermediate-ratio sets plus the shared 100% set.
  [[nodiscard]] std::vector<std::string> rq2_references() const;
  [[nodiscard]] const DatasetManifest* find(std::string_view id) const;
};

/// RQ1: 13 methods at 100%. RQ2: mix_all at 10..90% x 3 replications (100%
/// is RQ1's mix_all). RQ3: mix_all at 60% scaled by 1/4, 1/2, 2, 3. Test:
/// 13 methods per benchmark. Seeds come from one Rng(master_seed) stream.
ExperimentPlan enumerate_plan(const std::string& corpus_id,
                              const std::vector<std::string>& benchmark_ids,
                              std::uint64_t master_seed);

nlohmann::ordered_json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);

template <typename Sample>
struct MixedDataset {
  std::vector<Sample> samples;
  /// Parallel to samples; set for every perturbed index.
  std::vector<std::optional<PerturbationTrace>> traces;
  /// Ascending.
  std::vector<std::size_t> perturbed_indices;
};

/// round-half-up(ratio_percent * n / 100).
std::size_t perturbed_count(std::size_t n, int ratio_percent);

/// Indices to perturb. The set at a lower ratio is a subset of the set at a
/// higher ratio for the same seed. Ascending order.
std::vector<std::size_t> perturbed_indices(std::size_t n, int ratio_percent,
                                           std::uint64_t seed);

template <typename Sample>
MixedDataset<Sample> mix_with_ratio(
    const std::vector<Sample>& clean, MethodId method, int ratio_percent,
    std::uint64_t seed, const PerturbParams& params = {},
    const PerturbResources& resources = PerturbResources::defaults());

/// factor < 1 subsamples without replacement, factor > 1 appends copies;
/// either way the ratio is then applied over the whole result, whose size
/// is round(factor * n).
template <typename Sample>
MixedDataset<Sample> scale_perturbed(
    const std::vector<Sample>& clean, double factor, MethodId method,
    std::uint64_t seed, int ratio_percent = kScaledRatio,
    const PerturbParams& params = {},
    const PerturbResources& resources = PerturbResources::defaults());

struct BuildInputs {
  const std::vector<InstructionSample>* corpus = nullptr;
  std::map<std::string, const TaskSet*> benchmarks;
  PerturbResources resources = PerturbResources::defaults();
  std::filesystem::path out_dir;
};

struct BuildResult {
  DatasetManifest manifest;  // with sample_count and checksum filled
  std::filesystem::path data_path;
  std::filesystem::path trace_path;
  std::filesystem::path manifest_path;
};

/// Materializes the dataset in canonical corpus format with a trace file and
/// a manifest file. When the manifest already carries a checksum, a
/// differing rebuild throws Error.
BuildResult build_dataset(const DatasetManifest& manifest,
                          const BuildInputs& inputs);

/// Canonical bytes of a materialized dataset, without writing files.
std::string materialize(const DatasetManifest& manifest, const BuildInputs& inputs,
                        std::string* traces_jsonl = nullptr);

}  // namespace perturbench
