#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace perturbench {

struct SampleSizeQuery {
  std::optional<std::uint64_t> population;  // unset: unbounded
  double confidence = 0.95;
  double margin = 0.05;
  double proportion = 0.5;
};

/// Two-sided normal quantile for `confidence`, rounded to six decimals
/// (1.959964 at 95%).
double confidence_z(double confidence);

/// Cochran's n0 = z^2 p (1 - p) / e^2, finite-population corrected and
/// rounded up. Throws StatsError on an invalid query.
std::uint64_t required_sample_size(const SampleSizeQuery& query);

struct SeverityEntry {
  std::string code;
  char category = 'C';
  std::optional<int> exit_bit;  // none for informational messages
  std::string tier;

  bool operator==(const SeverityEntry&) const = default;
};

/// Fixed category -> exit bit mapping: F 1, E 2, W 4, R 8, C 16, I none.
std::optional<int> category_exit_bit(char category);

class LintTaxonomy {
 public:
  /// Lines: <category>\t<tier label>\t<code>,<code>,...; tiers of a
  /// category from most to least severe.
  static LintTaxonomy parse(std::string_view text);
  static const LintTaxonomy& bundled();

  /// Throws ParseError for a code outside the letter-plus-digits grammar.
  [[nodiscard]] SeverityEntry classify(std::string_view code) const;
  [[nodiscard]] const std::vector<std::string>& tiers(char category) const;

 private:
  std::map<char, std::vector<std::string>> tiers_;
  std::map<std::string, std::string, std::less<>> code_tier_;
};

SeverityEntry classify_diagnostic(std::string_view code);

struct Diagnostic {
  std::string path;
  std::string code;
  std::string message;
};

inline constexpr std::string_view kMalformedBucket = "malformed";

struct WarningCounts {
  /// run label -> code -> count; unparseable records land under
  /// kMalformedBucket.
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  /// run label -> category letter -> count
  std::map<std::string, std::map<char, std::size_t>> by_category;
  /// run label -> "<category> <tier>" -> count
  std::map<std::string, std::map<std::string, std::size_t>> by_tier;
  std::map<std::string, int> exit_bits;  // per run label
  std::vector<std::string> labels;       // first-seen order; sorted by merge()
  std::size_t consumed = 0;              // well-formed diagnostics
  std::size_t malformed = 0;

  [[nodiscard]] int combined_exit_bits() const;
  [[nodiscard]] std::size_t count(const std::string& label, const std::string& code) const;
  /// Commutative: merging streams in any order gives the same counts.
  void merge(const WarningCounts& other);
};

/// Folds one record into `counts`.
void add_diagnostic(WarningCounts& counts, const std::string& label, const Diagnostic& d,
                    const LintTaxonomy& taxonomy = LintTaxonomy::bundled());

/// Parses a linter stream (a JSON array of records, or one record per line)
/// and aggregates it under `label`. Records carry the code as "code" or
/// "message-id"; anything unusable is counted as malformed.
void aggregate_stream(WarningCounts& counts, const std::string& label, std::string_view stream,
                      const LintTaxonomy& taxonomy = LintTaxonomy::bundled());

WarningCounts aggregate_warnings(
    const std::vector<std::pair<std::string, std::string>>& labelled_streams,
    const LintTaxonomy& taxonomy = LintTaxonomy::bundled());

/// Codes as rows (by descending total, then code), run labels as columns.
std::string render_warning_table(const WarningCounts& counts);
nlohmann::ordered_json warnings_to_json(const WarningCounts& counts);

}  // namespace perturbench
