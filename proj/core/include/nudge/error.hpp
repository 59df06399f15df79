#pragma once

#include <stdexcept>
#include <string>

namespace nudge {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data failed a field-level check. `field()` names the offending field
/// when one can be identified.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(message), field_(std::move(field)) {}
  explicit ValidationError(const std::string& message) : Error(message) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A user falls outside the range the physiological tables cover.
class OutOfModelError : public Error {
 public:
  using Error::Error;
};

/// A score cannot be computed for the given data (zero energy, no topics...).
class ScoringError : public Error {
 public:
  using Error::Error;
};

/// A lookup table or override file is missing a required entry.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Fatal I/O or parse failure on a whole file.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// A study or API call arrived in a state that does not permit it.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent arguments passed to a payload builder.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace nudge
