#pragma once

#include <string>
#include <string_view>

namespace perturbench {

/// Lowercase hex SHA-256 of `bytes`, prefixed "sha256:".
std::string content_checksum(std::string_view bytes);

}  // namespace perturbench
