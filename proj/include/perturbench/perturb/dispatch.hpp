#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perturbench/corpus.hpp"
#include "perturbench/perturb/resources.hpp"
#include "perturbench/perturb/translate.hpp"

namespace perturbench {

enum class MethodId {
  kC1, kC2, kC3,  // typo, adjacent swap, case flip
  kW1, kW2, kW3,  // synonym insertion, synonym substitution, inflection
  kS1, kS2, kS3,  // back-translation, past tense, future tense
  kCMix, kWMix, kSMix, kMixAll,
};

enum class MethodLevel { kCharacter, kWord, kSentence };

/// "C1".."S3", "C_mix", "W_mix", "S_mix", "mix_all".
std::string_view method_name(MethodId id);
/// Accepts the canonical names above. Throws ConfigError otherwise.
MethodId parse_method(std::string_view name);
bool is_aggregate(MethodId id);
/// Constituents of an aggregate; a concrete method expands to itself.
std::vector<MethodId> expand_method(MethodId id);
MethodLevel method_level(MethodId concrete);
/// The nine concrete methods followed by the four aggregates.
const std::vector<MethodId>& all_methods();

/// How many sites to perturb. Unset fields take the level defaults: a rate
/// of 0.05 of eligible characters (at least one) for character methods, one
/// word for word methods, every editable range for sentence methods. An
/// explicit target_count wins over rate.
struct PerturbParams {
  std::optional<double> rate;
  std::optional<std::size_t> target_count;

  bool operator==(const PerturbParams&) const = default;
};

/// Immutable lookup tables plus the back-translation backend. Defaults to
/// the bundled tables and the dictionary-pivot translator.
struct PerturbResources {
  const KeyboardLayout* keyboard = &KeyboardLayout::bundled();
  const SynonymLexicon* lexicon = &SynonymLexicon::bundled();
  const VerbTable* verbs = &VerbTable::bundled();
  TranslationProvider* translator = nullptr;

  static PerturbResources defaults();
};

struct TraceEdit {
  std::size_t begin = 0;  // byte range in the original text
  std::size_t end = 0;
  std::string before;
  std::string after;

  bool operator==(const TraceEdit&) const = default;
};

struct PerturbationTrace {
  std::string method;   // as requested, possibly an aggregate
  std::string applied;  // concrete method that ran
  std::uint64_t seed = 0;
  std::string field;    // "instruction", "prompt" or empty for raw text
  std::vector<TraceEdit> edits;  // sorted, non-overlapping
  bool no_op = false;
  std::map<std::string, std::string> metadata;

  bool operator==(const PerturbationTrace&) const = default;
};

nlohmann::ordered_json trace_to_json(const PerturbationTrace& trace);
PerturbationTrace trace_from_json(const nlohmann::json& j);

/// Applies the trace's edits to `original`. Throws PerturbError when an
/// edit's `before` text does not match.
std::string replay_trace(std::string_view original,
                         const PerturbationTrace& trace);

struct PerturbedText {
  std::string text;
  PerturbationTrace trace;
};

/// Perturbs only bytes inside `regions` (sorted, non-overlapping). Sites are
/// drawn uniformly without replacement from Rng(seed); aggregates first
/// draw their constituent. Pure in (text, regions, method, params, seed).
PerturbedText perturb_regions(std::string_view text,
                              std::span<const ByteRange> regions,
                              MethodId method, const PerturbParams& params,
                              std::uint64_t seed,
                              const PerturbResources& resources = PerturbResources::defaults());

PerturbedText perturb_text(std::string_view text, MethodId method,
                           const PerturbParams& params, std::uint64_t seed,
                           const PerturbResources& resources = PerturbResources::defaults());

template <typename Sample>
struct PerturbedSample {
  Sample sample;
  PerturbationTrace trace;
};

/// Perturbs the instruction prose; the output field is never touched.
PerturbedSample<InstructionSample> perturb_sample(
    const InstructionSample& sample, MethodId method,
    const PerturbParams& params, std::uint64_t seed,
    const PerturbResources& resources = PerturbResources::defaults());

/// Perturbs docstring prose of the prompt outside doctest lines. Name,
/// language, tests, completions and stop tokens are copied unchanged.
PerturbedSample<TaskSpec> perturb_sample(
    const TaskSpec& task, MethodId method, const PerturbParams& params,
    std::uint64_t seed,
    const PerturbResources& resources = PerturbResources::defaults());

}  // namespace perturbench
