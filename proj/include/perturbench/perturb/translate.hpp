#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "perturbench/perturb/resources.hpp"

namespace perturbench {

struct TranslationResult {
  std::string text;
  /// Pivot language, backend name and similar, copied into the trace.
  std::map<std::string, std::string> metadata;
};

/// Round-trip translation backend. Implementations that cannot take
/// concurrent calls return true from serial(); back_translate then
/// serializes calls on the provider.
class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;

  /// Throws ProviderError on failure.
  virtual TranslationResult round_trip(std::string_view text) = 0;
  [[nodiscard]] virtual bool serial() const { return false; }

 private:
  friend TranslationResult back_translate(std::string_view, TranslationProvider&);
  std::mutex serial_mutex_;
};

class IdentityTranslator final : public TranslationProvider {
 public:
  TranslationResult round_trip(std::string_view text) override;
};

/// Word-for-word pivot through the lexicon and back: every word with an
/// entry comes back as its first synonym.
class DictionaryPivotTranslator final : public TranslationProvider {
 public:
  explicit DictionaryPivotTranslator(
      const SynonymLexicon& lexicon = SynonymLexicon::bundled())
      : lexicon_(lexicon) {}

  TranslationResult round_trip(std::string_view text) override;

 private:
  const SynonymLexicon& lexicon_;
};

/// Provider output verbatim. ProviderError propagates to the caller.
TranslationResult back_translate(std::string_view text,
                                 TranslationProvider& provider);

}  // namespace perturbench
