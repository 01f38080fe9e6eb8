#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perturbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed corpus, task file, lexicon or manifest input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  /// 1-based line number, 0 when the error is not line-addressable.
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SegmentationError : public Error {
 public:
  SegmentationError(const std::string& message, std::size_t offset)
      : Error(message + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A perturbation kernel was asked to edit an ineligible site.
class PerturbError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Completion or translation backend failure. `status` carries the
/// transport or HTTP status as reported by the backend.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& message, std::string status = {})
      : Error(message), status_(std::move(status)) {}

  [[nodiscard]] const std::string& status() const noexcept { return status_; }

 private:
  std::string status_;
};

class StatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace perturbench
