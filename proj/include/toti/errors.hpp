#pragma once

#include <stdexcept>
#include <string>

namespace toti {

// Raised when two partial maps that must be disjoint share domain or range.
struct OverlapError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MeasureMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InsufficientRoom : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPeriodic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LevelMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotDyadic : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Disconnected : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoMissingEdge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AlreadyComplete : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid build parameters; the message names the violated constraint.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or non-canonical serialized input.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace toti
