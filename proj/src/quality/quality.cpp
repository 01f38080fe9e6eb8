#include "perturbench/quality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "bundled_data.hpp"
#include "perturbench/error.hpp"

namespace perturbench {

double confidence_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw StatsError("confidence must be in (0, 1)");
  const boost::math::normal_distribution<double> standard;
  const double z = boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
  return std::round(z * 1e6) / 1e6;
}

std::uint64_t required_sample_size(const SampleSizeQuery& query) {
  if (!(query.margin > 0.0 && query.margin < 1.0)) throw StatsError("margin must be in (0, 1)");
  if (!(query.proportion >= 0.0 && query.proportion <= 1.0)) {
    throw StatsError("proportion must be in [0, 1]");
  }
  if (query.population && *query.population == 0) throw StatsError("population must be positive");
  const double z = confidence_z(query.confidence);
  const double n0 =
      z * z * query.proportion * (1.0 - query.proportion) / (query.margin * query.margin);
  double n = n0;
  if (query.population) {
    n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(*query.population));
  }
  return static_cast<std::uint64_t>(std::ceil(n));
}

std::optional<int> category_exit_bit(char category) {
  switch (category) {
    case 'F': return 1;
    case 'E': return 2;
    case 'W': return 4;
    case 'R': return 8;
    case 'C': return 16;
    case 'I': return std::nullopt;
    default: throw ParseError(std::string("unknown lint category '") + category + "'", 0);
  }
}

namespace {

constexpr std::string_view kCategories = "FEWRCI";

bool well_formed_code(std::string_view code) {
  if (code.size() < 2 || kCategories.find(code[0]) == std::string_view::npos) return false;
  return std::all_of(code.begin() + 1, code.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

LintTaxonomy LintTaxonomy::parse(std::string_view text) {
  LintTaxonomy t;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab1 != 1 || tab2 == std::string::npos) throw ParseError("expected category, tier, codes", number);
    const char category = line[0];
    if (kCategories.find(category) == std::string_view::npos) {
      throw ParseError(std::string("unknown lint category '") + category + "'", number);
    }
    const std::string tier = line.substr(tab1 + 1, tab2 - tab1 - 1);
    t.tiers_[category].push_back(tier);
    std::istringstream codes(line.substr(tab2 + 1));
    std::string code;
    while (std::getline(codes, code, ',')) {
      if (code.empty()) continue;
      if (!well_formed_code(code) || code[0] != category) {
        throw ParseError("bad code " + code + " for category " + category, number);
      }
      if (!t.code_tier_.emplace(code, tier).second) throw ParseError("duplicate code " + code, number);
    }
  }
  for (char c : kCategories) {
    if (t.tiers_[c].empty()) throw ParseError(std::string("no tier for category ") + c);
  }
  return t;
}

const LintTaxonomy& LintTaxonomy::bundled() {
  static const LintTaxonomy taxonomy = parse(bundled::lint_tiers());
  return taxonomy;
}

const std::vector<std::string>& LintTaxonomy::tiers(char category) const {
  auto it = tiers_.find(category);
  if (it == tiers_.end()) throw ParseError(std::string("unknown lint category '") + category + "'", 0);
  return it->second;
}

SeverityEntry LintTaxonomy::classify(std::string_view code) const {
  if (!well_formed_code(code)) throw ParseError("malformed message code \"" + std::string(code) + "\"", 0);
  SeverityEntry e;
  e.code = std::string(code);
  e.category = code[0];
  e.exit_bit = category_exit_bit(e.category);
  auto it = code_tier_.find(code);
  e.tier = it != code_tier_.end() ? it->second : tiers(e.category).back();
  return e;
}

SeverityEntry classify_diagnostic(std::string_view code) {
  return LintTaxonomy::bundled().classify(code);
}

int WarningCounts::combined_exit_bits() const {
  int bits = 0;
  for (const auto& [label, b] : exit_bits) bits |= b;
  return bits;
}

std::size_t WarningCounts::count(const std::string& label, const std::string& code) const {
  auto run = counts.find(label);
  if (run == counts.end()) return 0;
  auto it = run->second.find(code);
  return it == run->second.end() ? 0 : it->second;
}

namespace {

void touch(WarningCounts& counts, const std::string& label) {
  if (counts.counts.emplace(label, std::map<std::string, std::size_t>{}).second) {
    counts.labels.push_back(label);
    counts.exit_bits.emplace(label, 0);
  }
}

void add_malformed(WarningCounts& counts, const std::string& label) {
  touch(counts, label);
  ++counts.counts[label][std::string(kMalformedBucket)];
  ++counts.malformed;
}

}  // namespace

void WarningCounts::merge(const WarningCounts& other) {
  for (const auto& label : other.labels) touch(*this, label);
  for (const auto& [label, codes] : other.counts) {
    for (const auto& [code, n] : codes) counts[label][code] += n;
  }
  for (const auto& [label, cats] : other.by_category) {
    for (const auto& [c, n] : cats) by_category[label][c] += n;
  }
  for (const auto& [label, tiers] : other.by_tier) {
    for (const auto& [t, n] : tiers) by_tier[label][t] += n;
  }
  for (const auto& [label, bits] : other.exit_bits) exit_bits[label] |= bits;
  consumed += other.consumed;
  malformed += other.malformed;
  std::sort(labels.begin(), labels.end());
}

void add_diagnostic(WarningCounts& counts, const std::string& label, const Diagnostic& d,
                    const LintTaxonomy& taxonomy) {
  if (!well_formed_code(d.code)) {
    add_malformed(counts, label);
    return;
  }
  touch(counts, label);
  const SeverityEntry e = taxonomy.classify(d.code);
  ++counts.counts[label][e.code];
  ++counts.by_category[label][e.category];
  ++counts.by_tier[label][std::string(1, e.category) + " " + e.tier];
  if (e.exit_bit) counts.exit_bits[label] |= *e.exit_bit;
  ++counts.consumed;
}

namespace {

void add_record(WarningCounts& counts, const std::string& label, const nlohmann::json& record,
                const LintTaxonomy& taxonomy) {
  if (!record.is_object()) {
    add_malformed(counts, label);
    return;
  }
  const char* key = record.contains("code") ? "code" : "message-id";
  if (!record.contains(key) || !record.at(key).is_string()) {
    add_malformed(counts, label);
    return;
  }
  Diagnostic d;
  d.code = record.at(key).get<std::string>();
  if (auto p = record.find("path"); p != record.end() && p->is_string()) d.path = p->get<std::string>();
  if (auto m = record.find("message"); m != record.end() && m->is_string()) {
    d.message = m->get<std::string>();
  }
  add_diagnostic(counts, label, d, taxonomy);
}

}  // namespace

void aggregate_stream(WarningCounts& counts, const std::string& label, std::string_view stream,
                      const LintTaxonomy& taxonomy) {
  touch(counts, label);
  const auto first = stream.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return;
  if (stream[first] == '[') {
    auto doc = nlohmann::json::parse(stream, nullptr, false);
    if (!doc.is_discarded()) {
      for (const auto& record : doc) add_record(counts, label, record, taxonomy);
      return;
    }
  }
  std::istringstream in{std::string(stream)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded()) {
      add_malformed(counts, label);
    } else {
      add_record(counts, label, record, taxonomy);
    }
  }
}

WarningCounts aggregate_warnings(
    const std::vector<std::pair<std::string, std::string>>& labelled_streams,
    const LintTaxonomy& taxonomy) {
  WarningCounts counts;
  for (const auto& [label, stream] : labelled_streams) {
    aggregate_stream(counts, label, stream, taxonomy);
  }
  return counts;
}

namespace {

std::vector<std::pair<std::string, std::size_t>> rows_by_total(const WarningCounts& counts) {
  std::map<std::string, std::size_t> totals;
  for (const auto& [label, codes] : counts.counts) {
    for (const auto& [code, n] : codes) totals[code] += n;
  }
  std::vector<std::pair<std::string, std::size_t>> rows(totals.begin(), totals.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return rows;
}

}  // namespace

std::string render_warning_table(const WarningCounts& counts) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"code", "category", "tier"};
  header.insert(header.end(), counts.labels.begin(), counts.labels.end());
  grid.push_back(header);
  const auto& taxonomy = LintTaxonomy::bundled();
  for (const auto& [code, total] : rows_by_total(counts)) {
    std::vector<std::string> row{code};
    if (code == kMalformedBucket) {
      row.insert(row.end(), {"-", "-"});
    } else {
      const auto e = taxonomy.classify(code);
      row.push_back(std::string(1, e.category));
      row.push_back(e.tier);
    }
    for (const auto& label : counts.labels) row.push_back(std::to_string(counts.count(label, code)));
    grid.push_back(std::move(row));
  }
  std::vector<std::string> bits{"exit bits", "", ""};
  for (const auto& label : counts.labels) bits.push_back(std::to_string(counts.exit_bits.at(label)));
  grid.push_back(std::move(bits));

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string pad(width[i] - row[i].size(), ' ');
      if (i < 3) {
        line += row[i] + pad + "  ";
      } else {
        line += pad + row[i] + "  ";
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

nlohmann::ordered_json warnings_to_json(const WarningCounts& counts) {
  nlohmann::ordered_json j;
  j["labels"] = counts.labels;
  j["consumed"] = counts.consumed;
  j["malformed"] = counts.malformed;
  j["combined_exit_bits"] = counts.combined_exit_bits();
  auto runs = nlohmann::ordered_json::object();
  for (const auto& label : counts.labels) {
    nlohmann::ordered_json run;
    auto codes = nlohmann::ordered_json::object();
    for (const auto& [code, n] : counts.counts.at(label)) codes[code] = n;
    run["counts"] = std::move(codes);
    auto cats = nlohmann::ordered_json::object();
    if (auto it = counts.by_category.find(label); it != counts.by_category.end()) {
      for (const auto& [c, n] : it->second) cats[std::string(1, c)] = n;
    }
    run["by_category"] = std::move(cats);
    auto tiers = nlohmann::ordered_json::object();
    if (auto it = counts.by_tier.find(label); it != counts.by_tier.end()) {
      for (const auto& [t, n] : it->second) tiers[t] = n;
    }
    run["by_tier"] = std::move(tiers);
    run["exit_bits"] = counts.exit_bits.at(label);
    runs[label] = std::move(run);
  }
  j["runs"] = std::move(runs);
  return j;
}

}  // namespace perturbench
