#pragma once

#include <stdexcept>
#include <string>

namespace vecmtk {

// Broad failure classes. The CLI maps each onto its own exit code.
enum class ErrorKind { config, data, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

// Malformed or inconsistent input data: parse failures, gaps, missing columns.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

// Too few usable observations for the requested model.
class InsufficientSampleError : public NumericalError {
 public:
  explicit InsufficientSampleError(const std::string& what)
      : NumericalError("insufficient sample: " + what) {}
};

// Design matrix without full column rank.
class SingularDesignError : public NumericalError {
 public:
  explicit SingularDesignError(const std::string& what)
      : NumericalError("singular design: " + what) {}
};

// Moment or covariance matrix that cannot be factorized.
class ConditioningError : public NumericalError {
 public:
  explicit ConditioningError(const std::string& what)
      : NumericalError("conditioning: " + what) {}
};

}  // namespace vecmtk
