#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perturbench {

/// Key adjacency for typo simulation. Neighbors of each lowercase key are
/// kept in the row-major order of the source table.
class KeyboardLayout {
 public:
  /// `<key>\t<neighbors>` lines; '#' comments. Throws ParseError.
  static KeyboardLayout parse(std::string_view text);
  static const KeyboardLayout& bundled();

  /// Empty when the (case-folded) letter is not in the table.
  [[nodiscard]] std::string_view neighbors(char letter) const;
  [[nodiscard]] bool contains(char letter) const;
  [[nodiscard]] bool is_symmetric() const;
  [[nodiscard]] const std::map<char, std::string>& table() const {
    return table_;
  }

 private:
  std::map<char, std::string> table_;
};

/// Lowercase word -> ordered synonyms. Lookup is case-insensitive.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  explicit SynonymLexicon(std::map<std::string, std::vector<std::string>> entries);

  /// `word\tsyn1,syn2,...` lines; '#' comments. Rejects self-mappings and
  /// multi-word synonyms.
  static SynonymLexicon parse(std::string_view text);
  static const SynonymLexicon& bundled();

  [[nodiscard]] const std::vector<std::string>* find(std::string_view word) const;
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const auto& entries() const { return entries_; }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct VerbForms {
  std::string base;
  std::string past;
  std::string third_person;
  std::string participle;
  std::string gerund;
};

/// Verb conjugation: irregular entries from the table override the ordered
/// suffix rules, which are total on ASCII alphabetic words.
class VerbTable {
 public:
  static VerbTable parse(std::string_view text);
  static const VerbTable& bundled();

  /// Forms of `base`, from the table when listed and by rule otherwise.
  [[nodiscard]] VerbForms conjugate(std::string_view base) const;
  /// Best-effort base form of any inflected word (lowercase input).
  [[nodiscard]] std::string base_of(std::string_view word) const;
  [[nodiscard]] bool is_known_base(std::string_view base) const;

  /// If `word` (lowercase) is a present-tense form of a listed verb, the
  /// base and the past tense to use for it.
  struct PresentForm {
    std::string base;
    std::string past;
  };
  [[nodiscard]] std::optional<PresentForm> present_form(std::string_view word) const;

 private:
  std::map<std::string, VerbForms, std::less<>> irregular_;
  std::map<std::string, std::string, std::less<>> regular_;  // base -> base
  std::map<std::string, std::string, std::less<>> form_to_base_;
  std::map<std::string, PresentForm, std::less<>> extra_present_;
};

namespace inflect {
// Suffix rules, exposed for tests.
std::string third_person(std::string_view base);
std::string past(std::string_view base);
std::string gerund(std::string_view base);
}  // namespace inflect

}  // namespace perturbench
