#include "perturbench/perturb/kernels.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "perturbench/error.hpp"

namespace perturbench {
namespace {

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_alnum(char c) {
  return is_letter(c) || (c >= '0' && c <= '9');
}

char to_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

char to_upper(char c) {
  return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), to_lower);
  return out;
}

bool is_alpha(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_letter);
}

ByteRange word_at(std::string_view text, std::size_t word_index) {
  const auto words = word_tokens(text);
  if (word_index >= words.size()) {
    throw PerturbError("word index " + std::to_string(word_index) +
                       " out of range (" + std::to_string(words.size()) +
                       " words)");
  }
  return words[word_index];
}

const std::string& synonym_for(std::string_view word,
                               const SynonymLexicon& lexicon,
                               std::size_t rank) {
  const auto* synonyms = lexicon.find(word);
  if (synonyms == nullptr) {
    throw PerturbError("\"" + std::string(word) + "\" is not substitutable");
  }
  if (rank >= synonyms->size()) {
    throw PerturbError("synonym rank " + std::to_string(rank) +
                       " out of range for \"" + std::string(word) + "\"");
  }
  return (*synonyms)[rank];
}

// Casing of `like` carried onto `word`: all-caps stays all-caps, a leading
// capital stays a leading capital.
std::string match_case(std::string_view word, std::string_view like) {
  std::string out(word);
  if (like.empty() || out.empty()) return out;
  const bool all_upper =
      like.size() > 1 && std::all_of(like.begin(), like.end(), [](char c) {
        return !is_letter(c) || (c >= 'A' && c <= 'Z');
      });
  if (all_upper) {
    std::transform(out.begin(), out.end(), out.begin(), to_upper);
  } else if (like[0] >= 'A' && like[0] <= 'Z') {
    out[0] = to_upper(out[0]);
  }
  return out;
}

constexpr std::array<std::string_view, 27> kTenseBlockers = {
    "to",    "will",  "would", "can",   "could", "should", "shall",
    "may",   "might", "must",  "not",   "the",   "a",      "an",
    "this",  "that",  "these", "those", "each",  "every",  "any",
    "some",  "its",   "their", "your",  "our",   "no"};

}  // namespace

bool is_word_char(char c) { return is_alnum(c) || c == '_'; }

bool is_cased_letter(char c) { return is_letter(c); }

std::vector<ByteRange> word_tokens(std::string_view text) {
  std::vector<ByteRange> words;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && is_word_char(text[i])) ++i;
    words.push_back({start, i});
  }
  return words;
}

std::string apply_case_flip(std::string_view text,
                            const std::set<std::size_t>& positions) {
  std::string out(text);
  for (const auto p : positions) {
    if (p >= out.size()) {
      throw PerturbError("case flip position " + std::to_string(p) +
                         " out of range");
    }
    if (!is_cased_letter(out[p])) {
      throw PerturbError("case flip position " + std::to_string(p) +
                         " is not a cased letter");
    }
    out[p] = (out[p] >= 'a' && out[p] <= 'z') ? to_upper(out[p])
                                              : to_lower(out[p]);
  }
  return out;
}

std::string apply_adjacent_swap(std::string_view text, std::size_t index) {
  if (index + 1 >= text.size()) {
    throw PerturbError("swap index " + std::to_string(index) + " out of range");
  }
  if (!is_alnum(text[index]) || !is_alnum(text[index + 1])) {
    throw PerturbError("swap index " + std::to_string(index) +
                       " is at a word boundary");
  }
  std::string out(text);
  std::swap(out[index], out[index + 1]);
  return out;
}

std::string apply_typo(std::string_view text, std::size_t index, TypoMode mode,
                       std::size_t neighbor_rank,
                       const KeyboardLayout& keyboard) {
  if (index >= text.size()) {
    throw PerturbError("typo index " + std::to_string(index) + " out of range");
  }
  const char original = text[index];
  const auto neighbors = is_letter(original) ? keyboard.neighbors(original)
                                             : std::string_view{};
  if (neighbors.empty()) {
    throw PerturbError(std::string("'") + original +
                       "' is not in the keyboard table");
  }
  if (neighbor_rank >= neighbors.size()) {
    throw PerturbError("neighbor rank " + std::to_string(neighbor_rank) +
                       " out of range for '" + original + "'");
  }
  char replacement = neighbors[neighbor_rank];
  if (original >= 'A' && original <= 'Z') replacement = to_upper(replacement);

  std::string out(text);
  if (mode == TypoMode::kSubstitute) {
    out[index] = replacement;
  } else {
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(index) + 1, replacement);
  }
  return out;
}

std::string apply_synonym_substitute(std::string_view text,
                                     std::size_t word_index,
                                     const SynonymLexicon& lexicon,
                                     std::size_t synonym_rank) {
  const auto range = word_at(text, word_index);
  const auto word = text.substr(range.begin, range.size());
  const auto& synonym = synonym_for(word, lexicon, synonym_rank);
  std::string out(text.substr(0, range.begin));
  out += match_case(synonym, word);
  out += text.substr(range.end);
  return out;
}

std::string apply_synonym_insert(std::string_view text, std::size_t word_index,
                                 const SynonymLexicon& lexicon,
                                 std::size_t synonym_rank) {
  const auto range = word_at(text, word_index);
  const auto word = text.substr(range.begin, range.size());
  const auto& synonym = synonym_for(word, lexicon, synonym_rank);
  std::string out(text.substr(0, range.end));
  out += ' ';
  out += synonym;
  out += text.substr(range.end);
  return out;
}

std::string apply_inflection(std::string_view text, std::size_t word_index,
                             Inflection variant, const VerbTable& verbs) {
  const auto range = word_at(text, word_index);
  const auto word = text.substr(range.begin, range.size());
  if (!is_alpha(word)) {
    throw PerturbError("\"" + std::string(word) + "\" is not alphabetic");
  }
  const auto base = verbs.base_of(lowered(word));
  const auto forms = verbs.conjugate(base);
  std::string target;
  switch (variant) {
    case Inflection::kThirdPersonOrPlural: target = forms.third_person; break;
    case Inflection::kIng: target = forms.gerund; break;
    case Inflection::kEd: target = forms.past; break;
    case Inflection::kStrip: target = forms.base; break;
  }
  if (target == lowered(word)) return std::string(text);
  std::string out(text.substr(0, range.begin));
  out += match_case(target, word);
  out += text.substr(range.end);
  return out;
}

std::string apply_tense_transform(std::string_view text, Tense target,
                                  const VerbTable& verbs) {
  std::string out;
  std::size_t cursor = 0;
  std::string previous;
  for (const auto& range : word_tokens(text)) {
    const auto word = text.substr(range.begin, range.size());
    const auto lower = lowered(word);
    const bool blocked =
        std::find(kTenseBlockers.begin(), kTenseBlockers.end(), previous) !=
        kTenseBlockers.end();
    previous = lower;
    if (blocked || !is_alpha(word)) continue;
    const auto present = verbs.present_form(lower);
    if (!present) continue;

    std::string replacement = target == Tense::kPast
                                  ? present->past
                                  : "will " + present->base;
    out += text.substr(cursor, range.begin - cursor);
    out += match_case(replacement, word);
    cursor = range.end;
  }
  out += text.substr(cursor);
  return out;
}

}  // namespace perturbench
