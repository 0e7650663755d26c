#pragma once

#include <stdexcept>
#include <string>

namespace phasekit {

// Bad arguments or configuration: non-positive parameters, D < 2,
// dimension mismatches, malformed input files.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A precondition on the *state* of the inputs does not hold
// (e.g. weight above the trusted block, mixed state where a pure one is required).
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The phase-space grid does not cover the support of the frame.
class InadequateGridError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class RankDeficiencyError : public std::runtime_error {
public:
  RankDeficiencyError(const std::string& what, int rank, int required)
      : std::runtime_error(what), rank_(rank), required_(required) {}
  int rank() const noexcept { return rank_; }
  int required() const noexcept { return required_; }

private:
  int rank_;
  int required_;
};

} // namespace phasekit
