#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perturbench {

/// One instruction/output training pair.
struct InstructionSample {
  std::string instruction;
  std::string output;

  bool operator==(const InstructionSample&) const = default;
};

/// One executable benchmark problem. `completions` is the output slot
/// filled during evaluation.
struct TaskSpec {
  std::string name;
  std::string language;
  std::string prompt;
  std::string tests;
  std::vector<std::string> completions;
  std::vector<std::string> stop_tokens;

  bool operator==(const TaskSpec&) const = default;
};

struct TaskSet {
  std::string benchmark_id;
  std::vector<TaskSpec> tasks;
  std::optional<std::size_t> expected_count;

  bool operator==(const TaskSet&) const = default;
};

/// Half-open byte range [begin, end).
struct ByteRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
  [[nodiscard]] bool contains(std::size_t offset) const noexcept {
    return offset >= begin && offset < end;
  }
  bool operator==(const ByteRange&) const = default;
};

enum class SegmentKind { kDocstringProse, kInstructionProse };
enum class TextKind { kPrompt, kInstruction };

struct NlSegment {
  ByteRange span;
  SegmentKind kind = SegmentKind::kInstructionProse;
  /// Sorted, non-overlapping, each inside `span`.
  std::vector<ByteRange> protected_subranges;

  /// The span minus protected subranges, in order.
  [[nodiscard]] std::vector<ByteRange> editable_ranges() const;

  bool operator==(const NlSegment&) const = default;
};

/// Known subset sizes, keyed by benchmark id ("humaneval" -> 161,
/// "mbpp" -> 427). Unknown ids have no expected count.
std::optional<std::size_t> expected_task_count(std::string_view benchmark_id);

/// Newline-delimited JSON records with "instruction" and "output".
/// Blank lines are skipped. Throws ParseError carrying the 1-based line.
std::vector<InstructionSample> parse_instruction_corpus(std::string_view bytes);
std::string write_instruction_corpus(const std::vector<InstructionSample>& samples);

/// JSON array of task objects. Throws ParseError on duplicate names,
/// missing or empty tests, or a count mismatch for known benchmarks.
TaskSet parse_task_set(std::string_view bytes, std::string_view benchmark_id);

/// Canonical serialization: keys in name, language, prompt, tests,
/// completions, stop_tokens order, two-space indent, trailing newline.
std::string write_task_set(const TaskSet& set);

/// Natural-language spans of `text`. Prompts yield one segment per
/// triple-quoted docstring with doctest lines protected; instructions yield
/// a single unprotected segment. Throws SegmentationError on an
/// unterminated docstring.
std::vector<NlSegment> segment_natural_language(std::string_view text,
                                                TextKind kind);

/// All editable byte ranges across the segments of `text`.
std::vector<ByteRange> editable_ranges(std::string_view text, TextKind kind);

}  // namespace perturbench
