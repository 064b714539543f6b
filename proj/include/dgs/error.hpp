#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgs {

// Root of every exception thrown by the library. The C API maps each subclass
// onto one dgs_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised when the objective returns a non-finite value or its callback fails.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::vector<double> point,
                  std::optional<std::size_t> direction = std::nullopt,
                  std::optional<std::size_t> node = std::nullopt);

  const std::vector<double>& point() const noexcept { return point_; }
  std::optional<std::size_t> direction() const noexcept { return direction_; }
  std::optional<std::size_t> node() const noexcept { return node_; }

  // Same failure with stencil coordinates attached.
  EvaluationError with_location(std::optional<std::size_t> direction,
                                std::optional<std::size_t> node) const;

 private:
  std::vector<double> point_;
  std::optional<std::size_t> direction_;
  std::optional<std::size_t> node_;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// Iterate became non-finite after an update (learning rate overshoot).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class MetricError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(field), message_(message) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace dgs
