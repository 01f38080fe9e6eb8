#include "perturbench/perturb/dispatch.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "perturbench/error.hpp"
#include "perturbench/perturb/kernels.hpp"
#include "perturbench/rng.hpp"

namespace perturbench {
namespace {

constexpr double kDefaultCharRate = 0.05;

constexpr std::array<std::pair<MethodId, std::string_view>, 13> kNames = {{
    {MethodId::kC1, "C1"},
    {MethodId::kC2, "C2"},
    {MethodId::kC3, "C3"},
    {MethodId::kW1, "W1"},
    {MethodId::kW2, "W2"},
    {MethodId::kW3, "W3"},
    {MethodId::kS1, "S1"},
    {MethodId::kS2, "S2"},
    {MethodId::kS3, "S3"},
    {MethodId::kCMix, "C_mix"},
    {MethodId::kWMix, "W_mix"},
    {MethodId::kSMix, "S_mix"},
    {MethodId::kMixAll, "mix_all"},
}};

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool is_alpha_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

// Closed-class words; inflection only targets content words.
constexpr std::array<std::string_view, 48> kFunctionWords = {
    "about", "after", "all", "and", "any", "are", "because", "before", "both",
    "but", "can", "could", "each", "every", "for", "from", "has", "have",
    "his", "her", "into", "its", "may", "might", "must", "not", "one", "only",
    "our", "over", "should", "some", "than", "that", "the", "their", "them",
    "then", "these", "they", "this", "those", "under", "was", "were",
    "whether", "which", "with"};

bool is_function_word(std::string_view lower) {
  return std::find(kFunctionWords.begin(), kFunctionWords.end(), lower) != kFunctionWords.end();
}

std::string lowercase(std::string_view w) {
  std::string out(w);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// A candidate edit site: byte range plus, for inflection, the variants that
// change the word.
struct Site {
  ByteRange range;
  std::vector<Inflection> variants;
};

std::vector<Site> eligible_sites(std::string_view text,
                                 std::span<const ByteRange> regions,
                                 MethodId method,
                                 const PerturbResources& res) {
  std::vector<Site> sites;
  for (const auto& region : regions) {
    const auto chunk = text.substr(region.begin, region.size());
    switch (method) {
      case MethodId::kC1:
        for (std::size_t i = 0; i < chunk.size(); ++i) {
          if (is_cased_letter(chunk[i]) && res.keyboard->contains(chunk[i])) {
            sites.push_back({{region.begin + i, region.begin + i + 1}, {}});
          }
        }
        break;
      case MethodId::kC2:
        for (std::size_t i = 0; i + 1 < chunk.size(); ++i) {
          if (is_alnum(chunk[i]) && is_alnum(chunk[i + 1]) &&
              chunk[i] != chunk[i + 1]) {
            sites.push_back({{region.begin + i, region.begin + i + 2}, {}});
          }
        }
        break;
      case MethodId::kC3:
        for (std::size_t i = 0; i < chunk.size(); ++i) {
          if (is_cased_letter(chunk[i])) {
            sites.push_back({{region.begin + i, region.begin + i + 1}, {}});
          }
        }
        break;
      case MethodId::kW1:
      case MethodId::kW2:
        for (const auto& w : word_tokens(chunk)) {
          if (res.lexicon->find(chunk.substr(w.begin, w.size())) != nullptr) {
            sites.push_back({{region.begin + w.begin, region.begin + w.end}, {}});
          }
        }
        break;
      case MethodId::kW3:
        for (const auto& w : word_tokens(chunk)) {
          const auto word = chunk.substr(w.begin, w.size());
          if (word.size() < 3 || !is_alpha_word(word)) continue;
          const auto lower = lowercase(word);
          if (is_function_word(lower)) continue;
          // Capitalized words are mostly names; inflect them only when they
          // are recognizably verbs ("Return", "Checks"). Stripping a suffix
          // likewise needs a known verb, or "string" would become "str".
          const bool known_verb = res.verbs->is_known_base(res.verbs->base_of(lower));
          if (word[0] >= 'A' && word[0] <= 'Z' && !known_verb) continue;
          Site site{{region.begin + w.begin, region.begin + w.end}, {}};
          for (auto v : {Inflection::kThirdPersonOrPlural, Inflection::kIng,
                         Inflection::kEd, Inflection::kStrip}) {
            if (v == Inflection::kStrip && !known_verb) continue;
            if (apply_inflection(word, 0, v, *res.verbs) != word) {
              site.variants.push_back(v);
            }
          }
          if (!site.variants.empty()) sites.push_back(std::move(site));
        }
        break;
      case MethodId::kS1:
      case MethodId::kS2:
      case MethodId::kS3:
        if (std::any_of(chunk.begin(), chunk.end(), is_alnum)) {
          sites.push_back({region, {}});
        }
        break;
      default:
        throw PerturbError("aggregate method reached site enumeration");
    }
  }
  return sites;
}

std::size_t site_budget(MethodLevel level, const PerturbParams& params,
                        std::size_t eligible) {
  if (eligible == 0) return 0;
  if (params.target_count) return std::min(*params.target_count, eligible);
  if (params.rate) {
    if (*params.rate <= 0.0) return 0;
    const auto n = static_cast<std::size_t>(
        std::floor(*params.rate * static_cast<double>(eligible) + 0.5));
    return std::clamp<std::size_t>(n, 1, eligible);
  }
  switch (level) {
    case MethodLevel::kCharacter: {
      const auto n = static_cast<std::size_t>(
          std::floor(kDefaultCharRate * static_cast<double>(eligible) + 0.5));
      return std::clamp<std::size_t>(n, 1, eligible);
    }
    case MethodLevel::kWord:
      return 1;
    case MethodLevel::kSentence:
      return eligible;
  }
  return 0;
}

TraceEdit edit_at(std::string_view text, ByteRange range, std::string after) {
  return {range.begin, range.end, std::string(text.substr(range.begin, range.size())),
          std::move(after)};
}

}  // namespace

std::string_view method_name(MethodId id) {
  for (const auto& [m, name] : kNames) {
    if (m == id) return name;
  }
  return "?";
}

MethodId parse_method(std::string_view name) {
  for (const auto& [m, n] : kNames) {
    if (n == name) return m;
  }
  throw ConfigError("unknown perturbation method \"" + std::string(name) + "\"");
}

bool is_aggregate(MethodId id) {
  return id == MethodId::kCMix || id == MethodId::kWMix ||
         id == MethodId::kSMix || id == MethodId::kMixAll;
}

std::vector<MethodId> expand_method(MethodId id) {
  using M = MethodId;
  switch (id) {
    case M::kCMix: return {M::kC1, M::kC2, M::kC3};
    case M::kWMix: return {M::kW1, M::kW2, M::kW3};
    case M::kSMix: return {M::kS1, M::kS2, M::kS3};
    case M::kMixAll:
      return {M::kC1, M::kC2, M::kC3, M::kW1, M::kW2,
              M::kW3, M::kS1, M::kS2, M::kS3};
    default: return {id};
  }
}

MethodLevel method_level(MethodId concrete) {
  using M = MethodId;
  switch (concrete) {
    case M::kC1: case M::kC2: case M::kC3: case M::kCMix:
      return MethodLevel::kCharacter;
    case M::kW1: case M::kW2: case M::kW3: case M::kWMix:
      return MethodLevel::kWord;
    default:
      return MethodLevel::kSentence;
  }
}

const std::vector<MethodId>& all_methods() {
  static const std::vector<MethodId> methods = [] {
    std::vector<MethodId> out;
    for (const auto& [m, name] : kNames) out.push_back(m);
    return out;
  }();
  return methods;
}

PerturbResources PerturbResources::defaults() {
  static DictionaryPivotTranslator pivot;
  PerturbResources res;
  res.translator = &pivot;
  return res;
}

nlohmann::ordered_json trace_to_json(const PerturbationTrace& trace) {
  nlohmann::ordered_json j;
  j["method"] = trace.method;
  j["applied"] = trace.applied;
  j["seed"] = trace.seed;
  j["field"] = trace.field;
  j["no_op"] = trace.no_op;
  auto edits = nlohmann::ordered_json::array();
  for (const auto& e : trace.edits) {
    nlohmann::ordered_json ej;
    ej["begin"] = e.begin;
    ej["end"] = e.end;
    ej["before"] = e.before;
    ej["after"] = e.after;
    edits.push_back(std::move(ej));
  }
  j["edits"] = std::move(edits);
  j["metadata"] = trace.metadata;
  return j;
}

PerturbationTrace trace_from_json(const nlohmann::json& j) {
  try {
    PerturbationTrace t;
    t.method = j.at("method").get<std::string>();
    t.applied = j.at("applied").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.field = j.value("field", std::string{});
    t.no_op = j.at("no_op").get<bool>();
    for (const auto& ej : j.at("edits")) {
      t.edits.push_back({ej.at("begin").get<std::size_t>(),
                         ej.at("end").get<std::size_t>(),
                         ej.at("before").get<std::string>(),
                         ej.at("after").get<std::string>()});
    }
    if (j.contains("metadata")) {
      t.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  }
}

std::string replay_trace(std::string_view original,
                         const PerturbationTrace& trace) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& e : trace.edits) {
    if (e.begin < cursor || e.end < e.begin || e.end > original.size() ||
        original.substr(e.begin, e.end - e.begin) != e.before) {
      throw PerturbError("trace edit at byte " + std::to_string(e.begin) +
                         " does not match the original text");
    }
    out += original.substr(cursor, e.begin - cursor);
    out += e.after;
    cursor = e.end;
  }
  out += original.substr(cursor);
  return out;
}

PerturbedText perturb_regions(std::string_view text,
                              std::span<const ByteRange> regions,
                              MethodId method, const PerturbParams& params,
                              std::uint64_t seed,
                              const PerturbResources& res) {
  Rng rng(seed);
  PerturbationTrace trace;
  trace.method = std::string(method_name(method));
  trace.seed = seed;

  MethodId applied = method;
  if (is_aggregate(method)) {
    const auto constituents = expand_method(method);
    applied = constituents[rng.below(constituents.size())];
  }
  trace.applied = std::string(method_name(applied));

  const auto sites = eligible_sites(text, regions, applied, res);
  const auto budget = site_budget(method_level(applied), params, sites.size());

  // Walk a seeded permutation of the sites, skipping any that would overlap
  // an accepted one (adjacent swaps share a byte).
  std::vector<std::size_t> chosen;
  if (budget > 0) {
    for (const auto i : rng.sample_without_replacement(sites.size(), sites.size())) {
      const auto& r = sites[i].range;
      const bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](auto k) {
        const auto& o = sites[k].range;
        return r.begin < o.end && o.begin < r.end;
      });
      if (overlaps) continue;
      chosen.push_back(i);
      if (chosen.size() == budget) break;
    }
  }

  for (const auto i : chosen) {
    const auto& site = sites[i];
    const auto local = text.substr(site.range.begin, site.range.size());
    std::string after;
    switch (applied) {
      case MethodId::kC1: {
        const auto mode = rng.below(2) == 0 ? TypoMode::kSubstitute : TypoMode::kInsert;
        const auto degree = res.keyboard->neighbors(local[0]).size();
        after = apply_typo(local, 0, mode, rng.below(degree), *res.keyboard);
        break;
      }
      case MethodId::kC2:
        after = apply_adjacent_swap(local, 0);
        break;
      case MethodId::kC3:
        after = apply_case_flip(local, {0});
        break;
      case MethodId::kW1:
      case MethodId::kW2: {
        const auto count = res.lexicon->find(local)->size();
        const auto rank = rng.below(count);
        after = applied == MethodId::kW1
                    ? apply_synonym_insert(local, 0, *res.lexicon, rank)
                    : apply_synonym_substitute(local, 0, *res.lexicon, rank);
        break;
      }
      case MethodId::kW3: {
        const auto v = site.variants[rng.below(site.variants.size())];
        after = apply_inflection(local, 0, v, *res.verbs);
        break;
      }
      case MethodId::kS1: {
        if (res.translator == nullptr) {
          throw ConfigError("back-translation requested without a provider");
        }
        auto result = back_translate(local, *res.translator);
        after = std::move(result.text);
        for (auto& [k, v] : result.metadata) trace.metadata[k] = std::move(v);
        break;
      }
      case MethodId::kS2:
        after = apply_tense_transform(local, Tense::kPast, *res.verbs);
        break;
      case MethodId::kS3:
        after = apply_tense_transform(local, Tense::kFuture, *res.verbs);
        break;
      default:
        break;
    }
    if (after != local) trace.edits.push_back(edit_at(text, site.range, std::move(after)));
  }

  std::sort(trace.edits.begin(), trace.edits.end(),
            [](const TraceEdit& a, const TraceEdit& b) { return a.begin < b.begin; });
  trace.no_op = trace.edits.empty();
  auto perturbed = replay_trace(text, trace);
  return {std::move(perturbed), std::move(trace)};
}

PerturbedText perturb_text(std::string_view text, MethodId method,
                           const PerturbParams& params, std::uint64_t seed,
                           const PerturbResources& resources) {
  const ByteRange whole{0, text.size()};
  return perturb_regions(text, std::span<const ByteRange>(&whole, 1), method,
                         params, seed, resources);
}

PerturbedSample<InstructionSample> perturb_sample(
    const InstructionSample& sample, MethodId method,
    const PerturbParams& params, std::uint64_t seed,
    const PerturbResources& resources) {
  const auto regions = editable_ranges(sample.instruction, TextKind::kInstruction);
  auto result = perturb_regions(sample.instruction, regions, method, params,
                                seed, resources);
  result.trace.field = "instruction";
  return {{std::move(result.text), sample.output}, std::move(result.trace)};
}

PerturbedSample<TaskSpec> perturb_sample(const TaskSpec& task, MethodId method,
                                         const PerturbParams& params,
                                         std::uint64_t seed,
                                         const PerturbResources& resources) {
  const auto regions = editable_ranges(task.prompt, TextKind::kPrompt);
  auto result =
      perturb_regions(task.prompt, regions, method, params, seed, resources);
  result.trace.field = "prompt";
  TaskSpec out = task;
  out.prompt = std::move(result.text);
  return {std::move(out), std::move(result.trace)};
}

}  // namespace perturbench
