#pragma once

#include <stdexcept>
#include <string>

namespace ctap {

/// Requested coupling magnitude exceeds what any lateral position on the
/// slab can provide (|target| > omega_max).
class UnreachableCouplingError : public std::runtime_error {
 public:
  explicit UnreachableCouplingError(const std::string& what)
      : std::runtime_error(what) {}
};

/// The propagator detected norm drift beyond its tolerance; the caller
/// should retry with a smaller step (larger step_count).
class IntegrationFailure : public std::runtime_error {
 public:
  explicit IntegrationFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// A gate or network was started from a state that violates the adiabatic
/// protocol (e.g. photons already present in the bus or auxiliary mode).
class ProtocolViolation : public std::runtime_error {
 public:
  explicit ProtocolViolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// A closed-form expression was evaluated at a parameter point where it is
/// singular (e.g. a coupling appearing in a denominator is zero).
class SingularFormula : public std::runtime_error {
 public:
  explicit SingularFormula(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace ctap
