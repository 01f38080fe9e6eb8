#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "perturbench/corpus.hpp"

namespace perturbench {

/// Appended to every task's stop list, in this order, when absent.
inline const std::vector<std::string>& extra_stop_tokens() {
  static const std::vector<std::string> tokens = {"\ndef", "\n#", "\nif", "\nclass"};
  return tokens;
}

/// Task tokens first, then the extra tokens; duplicates dropped keeping the
/// first occurrence.
std::vector<std::string> normalize_stop_tokens(const TaskSpec& task);

/// Cuts at the earliest byte where any stop token begins. Always returns a
/// prefix of `completion`.
std::string truncate_at_stop(std::string_view completion,
                             const std::vector<std::string>& stop_tokens);

}  // namespace perturbench
