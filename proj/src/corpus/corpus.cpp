#include "perturbench/corpus.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "perturbench/error.hpp"

namespace perturbench {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& object, const char* field,
                           std::size_t line) {
  const auto it = object.find(field);
  if (it == object.end()) {
    throw ParseError(std::string("missing field \"") + field + "\"", line);
  }
  if (!it->is_string()) {
    throw ParseError(std::string("field \"") + field + "\" is not a string",
                     line);
  }
  return it->get<std::string>();
}

std::vector<std::string> optional_string_list(const json& object,
                                              const char* field,
                                              std::size_t index) {
  std::vector<std::string> values;
  const auto it = object.find(field);
  if (it == object.end() || it->is_null()) return values;
  if (!it->is_array()) {
    throw ParseError("task " + std::to_string(index) + ": field \"" + field +
                     "\" is not a list");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError("task " + std::to_string(index) + ": field \"" +
                       field + "\" holds a non-string entry");
    }
    values.push_back(v.get<std::string>());
  }
  return values;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

std::string_view strip_leading(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t");
  return pos == std::string_view::npos ? std::string_view{} : line.substr(pos);
}

// Doctest lines, their "..." continuations, the line of expected output
// that follows, and blank lines lying between two protected lines.
std::vector<ByteRange> protected_lines(std::string_view text, ByteRange span) {
  std::vector<ByteRange> lines;
  for (std::size_t pos = span.begin; pos < span.end;) {
    auto nl = text.find('\n', pos);
    const std::size_t end =
        (nl == std::string_view::npos || nl >= span.end) ? span.end : nl + 1;
    lines.push_back({pos, end});
    pos = end;
  }

  std::vector<bool> marked(lines.size(), false);
  auto body = [&](std::size_t i) {
    return text.substr(lines[i].begin, lines[i].size());
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!strip_leading(body(i)).starts_with(">>>")) continue;
    marked[i] = true;
    std::size_t j = i + 1;
    while (j < lines.size() && strip_leading(body(j)).starts_with("...")) {
      marked[j++] = true;
    }
    if (j < lines.size() && !is_blank(body(j)) &&
        !strip_leading(body(j)).starts_with(">>>")) {
      marked[j] = true;
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (marked[i] || !is_blank(body(i))) continue;
    std::size_t j = i;
    while (j < lines.size() && !marked[j] && is_blank(body(j))) ++j;
    const bool before = i > 0 && marked[i - 1];
    const bool after = j < lines.size() && marked[j];
    if (before && after) {
      for (std::size_t k = i; k < j; ++k) marked[k] = true;
    }
    i = j - 1;
  }

  std::vector<ByteRange> ranges;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!marked[i]) continue;
    if (!ranges.empty() && ranges.back().end == lines[i].begin) {
      ranges.back().end = lines[i].end;
    } else {
      ranges.push_back(lines[i]);
    }
  }
  return ranges;
}

}  // namespace

std::vector<ByteRange> NlSegment::editable_ranges() const {
  std::vector<ByteRange> out;
  std::size_t cursor = span.begin;
  for (const auto& p : protected_subranges) {
    if (p.begin > cursor) out.push_back({cursor, p.begin});
    cursor = std::max(cursor, p.end);
  }
  if (cursor < span.end) out.push_back({cursor, span.end});
  return out;
}

std::optional<std::size_t> expected_task_count(std::string_view benchmark_id) {
  if (benchmark_id == "humaneval") return 161;
  if (benchmark_id == "mbpp") return 427;
  return std::nullopt;
}

std::vector<InstructionSample> parse_instruction_corpus(std::string_view bytes) {
  std::vector<InstructionSample> samples;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < bytes.size();) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    const auto line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (is_blank(line)) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line_no);
    }
    if (!record.is_object()) {
      throw ParseError("record is not an object", line_no);
    }
    InstructionSample sample{require_string(record, "instruction", line_no),
                             require_string(record, "output", line_no)};
    if (sample.instruction.empty()) {
      throw ParseError("empty \"instruction\"", line_no);
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::string write_instruction_corpus(
    const std::vector<InstructionSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    ordered_json record;
    record["instruction"] = s.instruction;
    record["output"] = s.output;
    out += record.dump();
    out += '\n';
  }
  return out;
}

TaskSet parse_task_set(std::string_view bytes, std::string_view benchmark_id) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed task document: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("task document is not an array");

  TaskSet set;
  set.benchmark_id = std::string(benchmark_id);
  set.expected_count = expected_task_count(benchmark_id);

  std::map<std::string, int> seen;
  std::size_t index = 0;
  for (const auto& item : doc) {
    const std::string where = "task " + std::to_string(index);
    if (!item.is_object()) throw ParseError(where + " is not an object");
    auto field = [&](const char* name) {
      const auto it = item.find(name);
      if (it == item.end()) {
        throw ParseError(where + ": missing field \"" + name + "\"");
      }
      if (!it->is_string()) {
        throw ParseError(where + ": field \"" + name + "\" is not a string");
      }
      return it->get<std::string>();
    };
    TaskSpec task;
    task.name = field("name");
    task.language = field("language");
    task.prompt = field("prompt");
    if (!item.contains("tests")) {
      throw ParseError(where + " (" + task.name + "): missing tests");
    }
    task.tests = field("tests");
    if (task.tests.empty()) {
      throw ParseError(where + " (" + task.name + "): empty tests");
    }
    task.completions = optional_string_list(item, "completions", index);
    task.stop_tokens = optional_string_list(item, "stop_tokens", index);
    ++seen[task.name];
    set.tasks.push_back(std::move(task));
    ++index;
  }

  std::string duplicates;
  for (const auto& [name, count] : seen) {
    if (count < 2) continue;
    if (!duplicates.empty()) duplicates += ", ";
    duplicates += name;
  }
  if (!duplicates.empty()) {
    throw ParseError("duplicate task names: " + duplicates);
  }
  if (set.expected_count && *set.expected_count != set.tasks.size()) {
    throw ParseError("benchmark " + set.benchmark_id + " expects " +
                     std::to_string(*set.expected_count) + " tasks, found " +
                     std::to_string(set.tasks.size()));
  }
  return set;
}

std::string write_task_set(const TaskSet& set) {
  ordered_json doc = ordered_json::array();
  for (const auto& t : set.tasks) {
    ordered_json item;
    item["name"] = t.name;
    item["language"] = t.language;
    item["prompt"] = t.prompt;
    item["tests"] = t.tests;
    item["completions"] = t.completions;
    item["stop_tokens"] = t.stop_tokens;
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::vector<NlSegment> segment_natural_language(std::string_view text,
                                                TextKind kind) {
  std::vector<NlSegment> segments;
  if (kind == TextKind::kInstruction) {
    segments.push_back({{0, text.size()}, SegmentKind::kInstructionProse, {}});
    return segments;
  }

  std::size_t pos = 0;
  for (;;) {
    const auto dq = text.find(R"(""")", pos);
    const auto sq = text.find("'''", pos);
    const auto open = std::min(dq, sq);
    if (open == std::string_view::npos) break;
    const std::string_view delimiter = text.substr(open, 3);
    const auto close = text.find(delimiter, open + 3);
    if (close == std::string_view::npos) {
      throw SegmentationError("unterminated docstring", open);
    }
    NlSegment segment;
    segment.span = {open + 3, close};
    segment.kind = SegmentKind::kDocstringProse;
    segment.protected_subranges = protected_lines(text, segment.span);
    segments.push_back(std::move(segment));
    pos = close + 3;
  }
  return segments;
}

std::vector<ByteRange> editable_ranges(std::string_view text, TextKind kind) {
  std::vector<ByteRange> out;
  for (const auto& segment : segment_natural_language(text, kind)) {
    for (const auto& r : segment.editable_ranges()) {
      if (r.size() > 0) out.push_back(r);
    }
  }
  return out;
}

}  // namespace perturbench
