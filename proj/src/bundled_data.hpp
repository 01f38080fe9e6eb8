#pragma once

#include <string_view>

// Contents of data/*.tsv, compiled in at build time.
namespace perturbench::bundled {
std::string_view keyboard_qwerty();
std::string_view synonyms();
std::string_view verbs();
std::string_view lint_tiers();
}  // namespace perturbench::bundled
