#pragma once

#include <stdexcept>
#include <string>

namespace sphereflow {

// Rejected constructor/operation arguments (bad L, nonpositive radius, ...).
class InvalidParameterError : public std::runtime_error {
 public:
  explicit InvalidParameterError(const std::string& what)
      : std::runtime_error(what) {}
};

// A mean-zero gauge was required but the (0,0) coefficient was not zero.
// Carries the offending magnitude so callers can report it.
class GaugeError : public std::runtime_error {
 public:
  GaugeError(const std::string& what, double magnitude)
      : std::runtime_error(what), magnitude(magnitude) {}
  double magnitude;
};

// Advective stability bound rejected the requested dt.  Carries the largest
// admissible step for the current state so callers can retry.
class StepSizeError : public std::runtime_error {
 public:
  StepSizeError(const std::string& what, double admissible_dt)
      : std::runtime_error(what), admissible_dt(admissible_dt) {}
  double admissible_dt;
};

// A non-finite value appeared in the state.  Carries the last time at which
// the state was still finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time(last_good_time) {}
  double last_good_time;
};

// An operation's mathematical precondition failed (e.g. a projection input
// was not orthogonal to the required subspace).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Least-squares fit had no usable data (nonpositive values under a log, or
// fewer than two samples in the window).
class DegenerateFitError : public std::runtime_error {
 public:
  explicit DegenerateFitError(const std::string& what)
      : std::runtime_error(what) {}
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sphereflow
