#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace v2x {

/// Invalid or inconsistent configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The interferer pathloss integral does not converge (pathloss exponent < 2).
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No power pair satisfies the per-slot latency constraint for the requested load.
class InfeasibleSlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration limit before meeting its stop test.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation aborted because the per-slot controller failed.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(std::int64_t slot, const std::string& what)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}

  std::int64_t slot() const noexcept { return slot_; }

 private:
  std::int64_t slot_;
};

}  // namespace v2x
