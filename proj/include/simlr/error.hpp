#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace simlr {

// Broad failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind { config, data, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

// A least-squares window carries no information about one or both rates.
class UnidentifiableError : public DataError {
 public:
  UnidentifiableError(std::string parameter, std::optional<int> week = std::nullopt)
      : DataError(describe(parameter, week)), parameter_(std::move(parameter)), week_(week) {}

  const std::string& parameter() const noexcept { return parameter_; }
  std::optional<int> week() const noexcept { return week_; }

 private:
  static std::string describe(const std::string& parameter, std::optional<int> week) {
    std::string msg = "unidentifiable: window carries no information about " + parameter;
    if (week) msg += " (week " + std::to_string(*week) + ")";
    return msg;
  }

  std::string parameter_;
  std::optional<int> week_;
};

class ColdStartError : public DataError {
 public:
  ColdStartError(const std::string& what) : DataError(what) {}
};

}  // namespace simlr
