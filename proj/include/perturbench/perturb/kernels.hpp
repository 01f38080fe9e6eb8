#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "perturbench/corpus.hpp"
#include "perturbench/perturb/resources.hpp"

// Site-application kernels. Each applies one perturbation at an explicitly
// chosen site and throws PerturbError when the site is ineligible. Indices
// are byte offsets; only ASCII letters and digits are ever edited.
namespace perturbench {

/// Words are maximal runs of ASCII letters, digits and underscores.
std::vector<ByteRange> word_tokens(std::string_view text);

bool is_word_char(char c);
bool is_cased_letter(char c);

/// Toggles the case of the letter at each position.
std::string apply_case_flip(std::string_view text,
                            const std::set<std::size_t>& positions);

/// Exchanges text[index] and text[index + 1].
std::string apply_adjacent_swap(std::string_view text, std::size_t index);

enum class TypoMode { kSubstitute, kInsert };

std::string apply_typo(std::string_view text, std::size_t index, TypoMode mode,
                       std::size_t neighbor_rank,
                       const KeyboardLayout& keyboard = KeyboardLayout::bundled());

/// Replaces word `word_index` by its `synonym_rank`-th synonym, keeping a
/// leading capital.
std::string apply_synonym_substitute(std::string_view text,
                                     std::size_t word_index,
                                     const SynonymLexicon& lexicon,
                                     std::size_t synonym_rank);

/// Inserts the synonym after word `word_index`, separated by one space.
std::string apply_synonym_insert(std::string_view text, std::size_t word_index,
                                 const SynonymLexicon& lexicon,
                                 std::size_t synonym_rank);

enum class Inflection { kThirdPersonOrPlural, kIng, kEd, kStrip };

std::string apply_inflection(std::string_view text, std::size_t word_index,
                             Inflection variant,
                             const VerbTable& verbs = VerbTable::bundled());

enum class Tense { kPast, kFuture };

/// Rewrites every recognized present-tense verb to the past, or to
/// "will <base>". Tokens after modals, "to", "not" or a determiner are
/// left alone.
std::string apply_tense_transform(std::string_view text, Tense target,
                                  const VerbTable& verbs = VerbTable::bundled());

}  // namespace perturbench
