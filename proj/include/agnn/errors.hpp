#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agnn {

/// Machine-readable error category. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  kInvalidArgument = 3,
  kInvalidState = 4,
  kDegenerateGeometry = 5,
  kDivergence = 6,
  kMissingArtifact = 7,
  kConfig = 8,
  kIo = 9,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCategory::kInvalidArgument, what) {}
};

class InvalidState : public Error {
 public:
  explicit InvalidState(const std::string& what) : Error(ErrorCategory::kInvalidState, what) {}
};

class DegenerateGeometry : public Error {
 public:
  explicit DegenerateGeometry(const std::string& what)
      : Error(ErrorCategory::kDegenerateGeometry, what) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error(ErrorCategory::kDivergence, what) {}
};

class MissingArtifact : public Error {
 public:
  explicit MissingArtifact(const std::string& what) : Error(ErrorCategory::kMissingArtifact, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kIo, what) {}
};

}  // namespace agnn
