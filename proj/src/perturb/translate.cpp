#include "perturbench/perturb/translate.hpp"

#include "perturbench/perturb/kernels.hpp"

namespace perturbench {

TranslationResult IdentityTranslator::round_trip(std::string_view text) {
  return {std::string(text), {{"provider", "identity"}}};
}

TranslationResult DictionaryPivotTranslator::round_trip(std::string_view text) {
  std::string out(text);
  // Synonyms are single words, so word indices stay valid across edits.
  const auto words = word_tokens(text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto word = text.substr(words[i].begin, words[i].size());
    if (lexicon_.find(word) != nullptr) {
      out = apply_synonym_substitute(out, i, lexicon_, 0);
    }
  }
  return {std::move(out), {{"provider", "dictionary-pivot"}, {"pivot", "lexicon"}}};
}

TranslationResult back_translate(std::string_view text,
                                 TranslationProvider& provider) {
  if (provider.serial()) {
    std::lock_guard lock(provider.serial_mutex_);
    return provider.round_trip(text);
  }
  return provider.round_trip(text);
}

}  // namespace perturbench
