#include "perturbench/harness/stop_tokens.hpp"

#include <algorithm>

namespace perturbench {

std::vector<std::string> normalize_stop_tokens(const TaskSpec& task) {
  std::vector<std::string> out;
  auto push = [&](const std::string& token) {
    if (std::find(out.begin(), out.end(), token) == out.end()) {
      out.push_back(token);
    }
  };
  for (const auto& t : task.stop_tokens) push(t);
  for (const auto& t : extra_stop_tokens()) push(t);
  return out;
}

std::string truncate_at_stop(std::string_view completion,
                             const std::vector<std::string>& stop_tokens) {
  std::size_t cut = completion.size();
  for (const auto& token : stop_tokens) {
    if (token.empty()) continue;
    const auto at = completion.find(token);
    if (at != std::string_view::npos) cut = std::min(cut, at);
  }
  return std::string(completion.substr(0, cut));
}

}  // namespace perturbench
