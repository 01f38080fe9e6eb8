#include "perturbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "perturbench/error.hpp"

namespace perturbench {

double pass_at_k(std::size_t n_samples, std::size_t n_correct, std::size_t k) {
  if (n_samples == 0) throw StatsError("pass@k: n must be positive");
  if (n_correct > n_samples) throw StatsError("pass@k: c exceeds n");
  if (k == 0 || k > n_samples) throw StatsError("pass@k: k must be in [1, n]");
  if (n_samples - n_correct < k) return 1.0;
  double keep = 1.0;
  for (std::size_t i = n_samples - n_correct + 1; i <= n_samples; ++i) {
    keep *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  }
  return 1.0 - keep;
}

double relative_degradation(const RdInput& input) {
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(input.pass_original) || !in_unit(input.pass_perturbed)) {
    throw StatsError("RD inputs must be fractions in [0, 1]");
  }
  if (input.pass_original == 0.0) throw StatsError("RD undefined: original pass@1 is 0");
  return (input.pass_original - input.pass_perturbed) / input.pass_original;
}

double normal_two_sided_p(double z) {
  return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

std::vector<std::uint32_t> doubled_midranks(std::span<const double> magnitudes) {
  const std::size_t n = magnitudes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });
  std::vector<std::uint32_t> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
    // positions i..j share rank ((i+1) + (j+1)) / 2; doubled it is i + j + 2
    auto doubled = static_cast<std::uint32_t>(i + j + 2);
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = doubled;
    i = j + 1;
  }
  return ranks;
}

std::uint64_t count_rank_sums_at_most(std::span<const std::uint32_t> doubled_ranks,
                                      std::uint64_t doubled_limit) {
  if (doubled_ranks.size() > 62) throw StatsError("exact Wilcoxon supports at most 62 pairs");
  std::uint64_t total = 0;
  for (auto r : doubled_ranks) total += r;
  std::vector<std::uint64_t> ways(total + 1, 0);
  ways[0] = 1;
  std::uint64_t reach = 0;
  for (auto r : doubled_ranks) {
    for (std::uint64_t s = reach + 1; s-- > 0;) {
      if (ways[s] != 0) ways[s + r] += ways[s];
    }
    reach += r;
  }
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s <= std::min(doubled_limit, total); ++s) count += ways[s];
  return count;
}

namespace {

WilcoxonMode choose_mode(std::size_t n, const WilcoxonOptions& options) {
  if (options.mode) return *options.mode;
  return n <= options.exact_cutoff ? WilcoxonMode::kExact : WilcoxonMode::kNormal;
}

WilcoxonResult finish(const std::vector<std::uint32_t>& doubled, std::uint64_t t_plus2,
                      const WilcoxonOptions& options) {
  WilcoxonResult r;
  r.n = doubled.size();
  std::uint64_t total2 = 0;
  for (auto d : doubled) total2 += d;
  const std::uint64_t t_minus2 = total2 - t_plus2;
  const std::uint64_t w2 = std::min(t_plus2, t_minus2);
  r.t_plus = static_cast<double>(t_plus2) / 2.0;
  r.t_minus = static_cast<double>(t_minus2) / 2.0;
  r.w = static_cast<double>(w2) / 2.0;

  const double n = static_cast<double>(r.n);
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  double diff = r.w - mean;
  if (options.corrected) {
    std::map<std::uint32_t, std::size_t> ties;
    for (auto d : doubled) ++ties[d];
    for (const auto& [rank, t] : ties) {
      const double tt = static_cast<double>(t);
      var -= (tt * tt * tt - tt) / 48.0;
    }
    diff = std::fabs(diff) <= 0.5 ? 0.0 : diff + 0.5;
  }
  r.z = var > 0.0 ? diff / std::sqrt(var) : 0.0;

  r.mode = choose_mode(r.n, options);
  if (r.mode == WilcoxonMode::kExact) {
    const std::uint64_t count = count_rank_sums_at_most(doubled, w2);
    const double space = std::ldexp(1.0, static_cast<int>(r.n));
    r.p_two_sided = std::min(1.0, 2.0 * static_cast<double>(count) / space);
  } else {
    r.p_two_sided = normal_two_sided_p(r.z);
  }
  return r;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    const WilcoxonOptions& options) {
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (const auto& [a, b] : pairs) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw StatsError("Wilcoxon: non-finite value");
    const double d = a - b;
    if (d == 0.0) continue;
    magnitudes.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  if (magnitudes.empty()) throw StatsError("Wilcoxon: all paired differences are zero");
  const auto doubled = doubled_midranks(magnitudes);
  std::uint64_t t_plus2 = 0;
  for (std::size_t i = 0; i < doubled.size(); ++i) {
    if (positive[i]) t_plus2 += doubled[i];
  }
  return finish(doubled, t_plus2, options);
}

WilcoxonResult wilcoxon_from_statistic(std::size_t n, double w, const WilcoxonOptions& options) {
  if (n == 0) throw StatsError("Wilcoxon: n must be positive");
  const double total = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  if (!(w >= 0.0) || w > total || std::floor(w * 2.0) != w * 2.0) {
    throw StatsError("Wilcoxon: W out of range for n");
  }
  std::vector<std::uint32_t> doubled(n);
  for (std::size_t i = 0; i < n; ++i) doubled[i] = static_cast<std::uint32_t>(2 * (i + 1));
  return finish(doubled, static_cast<std::uint64_t>(w * 2.0), options);
}

EffectSizes effect_size(const WilcoxonResult& result) {
  EffectSizes e;
  if (result.n > 0) e.r_z = std::fabs(result.z) / std::sqrt(static_cast<double>(result.n));
  const double sum = result.t_plus + result.t_minus;
  if (sum > 0.0) e.r_rb = (result.t_plus - result.t_minus) / sum;
  return e;
}

nlohmann::ordered_json wilcoxon_to_json(const WilcoxonResult& result, const EffectSizes& effect) {
  nlohmann::ordered_json j;
  j["n"] = result.n;
  j["W"] = result.w;
  j["T_plus"] = result.t_plus;
  j["T_minus"] = result.t_minus;
  j["z"] = result.z;
  j["p_two_sided"] = result.p_two_sided;
  j["mode"] = result.mode == WilcoxonMode::kExact ? "exact" : "normal";
  j["r"] = effect.r_z;
  j["r_rank_biserial"] = effect.r_rb;
  return j;
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace perturbench
