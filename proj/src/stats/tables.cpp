#include <algorithm>
#include <cstdio>
#include <set>

#include "perturbench/error.hpp"
#include "perturbench/stats.hpp"

namespace perturbench {

namespace {

void remember(std::vector<std::string>& order, const std::string& value) {
  if (std::find(order.begin(), order.end(), value) == order.end()) order.push_back(value);
}

std::string format_percent(double fraction) {
  char buf[32];
  double v = round_to(fraction * 100.0, 2);
  if (v == 0.0) v = 0.0;  // no "-0.00"
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<PassRecord> pass_records_from_json(const nlohmann::json& j) {
  const nlohmann::json& rows = j.is_object() && j.contains("records") ? j.at("records") : j;
  if (!rows.is_array()) throw ParseError("pass records must be an array", 1);
  std::vector<PassRecord> out;
  for (const auto& row : rows) {
    if (!row.is_object() || !row.contains("model") || !row.at("model").is_string()) {
      throw ParseError("pass record " + std::to_string(out.size()) + " has no model name");
    }
    PassRecord r;
    try {
      r.model = row.at("model").get<std::string>();
      r.variant = row.value("variant", std::string("base"));
      r.dataset = row.value("dataset", std::string());
      r.perturbed = row.value("perturbed", false);
      if (row.contains("pass_at_1")) {
        r.pass_at_1 = row.at("pass_at_1").get<double>();
      } else if (row.contains("pass_at_1_percent")) {
        r.pass_at_1 = row.at("pass_at_1_percent").get<double>() / 100.0;
      } else {
        throw ParseError("pass record for " + r.model + " has no pass_at_1");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("malformed pass record for " + r.model + ": " + e.what());
    }
    if (!(r.pass_at_1 >= 0.0 && r.pass_at_1 <= 1.0)) {
      throw ParseError("pass record for " + r.model + " is outside [0, 100]%");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<double> RdTable::cell(const std::string& model, const std::string& column) const {
  auto it = cells.find({model, column});
  if (it == cells.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<double, double>> RdTable::paired(const std::string& column_a,
                                                       const std::string& column_b) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& m : models) {
    auto a = cell(m, column_a);
    auto b = cell(m, column_b);
    if (a && b) out.emplace_back(*a, *b);
  }
  return out;
}

RdTable rd_table(const std::vector<PassRecord>& records) {
  std::set<std::string> perturbed_datasets;
  for (const auto& r : records) {
    if (r.perturbed) perturbed_datasets.insert(r.dataset);
  }
  const bool qualify = perturbed_datasets.size() > 1;

  RdTable table;
  for (const auto& r : records) remember(table.models, r.model);
  for (const auto& r : records) {
    if (!r.perturbed) continue;
    const PassRecord* clean = nullptr;
    for (const auto& c : records) {
      if (!c.perturbed && c.model == r.model && c.variant == r.variant) {
        clean = &c;
        break;
      }
    }
    if (clean == nullptr) {
      throw StatsError("no unperturbed report for model " + r.model + " (variant " + r.variant +
                       ")");
    }
    const std::string column = qualify ? r.variant + "/" + r.dataset : r.variant;
    remember(table.columns, column);
    table.cells[{r.model, column}] = relative_degradation({clean->pass_at_1, r.pass_at_1});
  }
  for (const auto& m : table.models) {
    bool any = false;
    for (const auto& c : table.columns) any = any || table.cell(m, c).has_value();
    if (!any) throw StatsError("no perturbed report for model " + m);
  }
  return table;
}

std::string render_rd_table(const RdTable& table) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"model"};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  grid.push_back(header);
  for (const auto& m : table.models) {
    std::vector<std::string> row{m};
    for (const auto& c : table.columns) {
      auto v = table.cell(m, c);
      row.push_back(v ? format_percent(*v) : "-");
    }
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string pad(width[i] - row[i].size(), ' ');
      if (i == 0) {
        out += row[i] + pad;
      } else {
        out += "  " + pad + row[i];
      }
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json rd_table_to_json(const RdTable& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& m : table.models) {
    nlohmann::ordered_json row;
    row["model"] = m;
    nlohmann::ordered_json rd = nlohmann::ordered_json::object();
    for (const auto& c : table.columns) {
      auto v = table.cell(m, c);
      rd[c] = v ? nlohmann::ordered_json(round_to(*v * 100.0, 2)) : nlohmann::ordered_json();
    }
    row["rd_percent"] = std::move(rd);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

}  // namespace perturbench
