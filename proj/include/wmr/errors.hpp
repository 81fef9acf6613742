#pragma once

#include <stdexcept>
#include <string>

namespace wmr {

/// Raised when the flat-output inverse is evaluated at a speed below the
/// singularity guard (the input matrix N is singular at v = 0).
class SingularFlatPoint : public std::runtime_error {
 public:
  explicit SingularFlatPoint(double speed)
      : std::runtime_error("singular flat point: |v| = " + std::to_string(speed)), speed_(speed) {}
  double speed() const noexcept { return speed_; }

 private:
  double speed_;
};

/// Scenario or gain validation failure. `field()` names the offending key.
class ScenarioInvalid : public std::runtime_error {
 public:
  ScenarioInvalid(std::string field, const std::string& why)
      : std::runtime_error(field + ": " + why), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Scenario/sweep file could not be read or is not well-formed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyTrace : public std::runtime_error {
 public:
  EmptyTrace() : std::runtime_error("trace is empty") {}
};

class ScenarioMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wmr
