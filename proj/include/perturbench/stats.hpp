#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace perturbench {

/// Unbiased pass@k: 1 - C(n - c, k) / C(n, k), evaluated as a running
/// product so it stays finite for large n.
double pass_at_k(std::size_t n_samples, std::size_t n_correct, std::size_t k);

struct RdInput {
  double pass_original = 0.0;   // fraction in [0, 1]
  double pass_perturbed = 0.0;  // fraction in [0, 1]
};

/// (original - perturbed) / original. Negative when the perturbed score is
/// higher. Throws StatsError("RD undefined") for a zero original score.
double relative_degradation(const RdInput& input);

enum class WilcoxonMode { kExact, kNormal };

struct WilcoxonOptions {
  /// Unset: exact when n <= exact_cutoff, normal otherwise.
  std::optional<WilcoxonMode> mode;
  std::size_t exact_cutoff = 25;
  /// Continuity and tie-variance corrections in normal mode. Off by
  /// default; the uncorrected statistic matches published tables.
  bool corrected = false;
  double alpha = 0.05;
};

struct WilcoxonResult {
  std::size_t n = 0;       // pairs with a nonzero difference
  double w = 0.0;          // min(T+, T-)
  double t_plus = 0.0;
  double t_minus = 0.0;
  double z = 0.0;          // normal deviate of W, <= 0
  double p_two_sided = 1.0;
  WilcoxonMode mode = WilcoxonMode::kNormal;

  [[nodiscard]] bool significant(double alpha) const { return p_two_sided < alpha; }
};

/// Paired signed-rank test on a - b. Zero differences are dropped; tied
/// magnitudes get midranks. Throws StatsError when every difference is 0.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    const WilcoxonOptions& options = {});

/// Same test from a published (n, W) with untied ranks 1..n. The direction
/// is unknown, so W is reported as T+.
WilcoxonResult wilcoxon_from_statistic(std::size_t n, double w,
                                       const WilcoxonOptions& options = {});

/// Two-sided tail 2 * Phi(-|z|).
double normal_two_sided_p(double z);

/// Number of sign assignments (out of 2^n) whose positive rank sum is at
/// most `limit`. Ranks are given doubled so midranks stay integral.
std::uint64_t count_rank_sums_at_most(std::span<const std::uint32_t> doubled_ranks,
                                      std::uint64_t doubled_limit);

/// Midranks (1-based) of |values|, doubled.
std::vector<std::uint32_t> doubled_midranks(std::span<const double> magnitudes);

struct EffectSizes {
  double r_z = 0.0;   // |z| / sqrt(n), the commonly reported "r"
  double r_rb = 0.0;  // (T+ - T-) / (T+ + T-)
};

EffectSizes effect_size(const WilcoxonResult& result);

nlohmann::ordered_json wilcoxon_to_json(const WilcoxonResult& result,
                                        const EffectSizes& effect);

// ---------------------------------------------------------------------------
// Relative Degradation tables

/// pass@1 of one model variant on one test dataset.
struct PassRecord {
  std::string model;
  std::string variant;   // e.g. "base", "M_Tr", "M_i"
  std::string dataset;   // test dataset label
  bool perturbed = false;
  double pass_at_1 = 0.0;  // fraction
};

std::vector<PassRecord> pass_records_from_json(const nlohmann::json& j);

struct RdTable {
  std::vector<std::string> models;   // row order of first appearance
  std::vector<std::string> columns;  // column order of first appearance
  /// RD as a fraction, keyed by (model, column).
  std::map<std::pair<std::string, std::string>, double> cells;

  [[nodiscard]] std::optional<double> cell(const std::string& model,
                                           const std::string& column) const;
  /// (column_a, column_b) RD pairs over models that have both, in row order.
  [[nodiscard]] std::vector<std::pair<double, double>> paired(
      const std::string& column_a, const std::string& column_b) const;
};

/// One row per model, one column per (variant, perturbed dataset). Columns
/// are named by variant when a single perturbed dataset is present, else
/// "variant/dataset". Throws StatsError naming the model when a variant has
/// no unperturbed record.
RdTable rd_table(const std::vector<PassRecord>& records);

/// Aligned text, RD in percent with two decimals.
std::string render_rd_table(const RdTable& table);
nlohmann::ordered_json rd_table_to_json(const RdTable& table);

/// Round half away from zero to `decimals` places.
double round_to(double value, int decimals);

}  // namespace perturbench
