#pragma once

#include <stdexcept>
#include <string>

namespace eb {

// Argument outside the mathematical domain of an operation (singular time change, E <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation requested outside the range covered by a sampled object.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid configuration: unknown key, unreachable phase cap, bad test-function support.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called in a regime where it is not defined (e.g. reading B(inf) for beta <= 2).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite state met during SDE integration; carries the time of failure.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Structural identity violated by a numerical object (e.g. sin of the phase gap <= 0).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coupling covariance Sigma_j singular; carries the interval index.
class CouplingError : public std::runtime_error {
 public:
  CouplingError(const std::string& what, std::size_t interval)
      : std::runtime_error(what + " (interval " + std::to_string(interval) + ")"),
        interval_(interval) {}
  std::size_t interval() const noexcept { return interval_; }

 private:
  std::size_t interval_;
};

// Eigenvalue scan too coarse to separate roots.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Boundary Wronskians at the chosen horizon are too degenerate to fix a direction.
class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateBoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eb
