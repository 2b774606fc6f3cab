#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace banditlab {

// Malformed input to a pure function (non-finite vector, size mismatch, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A schedule produced a non-finite or nonpositive value, or its spec is invalid.
class ScheduleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An operation was called outside its precondition (e.g. gap == 0).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The preference vector left the admissible region during training.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::uint64_t step, double h_norm)
      : std::runtime_error("preference vector diverged at step " +
                           std::to_string(step) + " (|H|=" +
                           std::to_string(h_norm) + ")"),
        step_(step),
        h_norm_(h_norm) {}

  std::uint64_t step() const noexcept { return step_; }
  double h_norm() const noexcept { return h_norm_; }

 private:
  std::uint64_t step_;
  double h_norm_;
};

// Schema violation in a JSON document. `pointer` is an RFC 6901 JSON pointer.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer.empty() ? what : pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace banditlab
