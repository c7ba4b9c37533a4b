#pragma once

#include <stdexcept>
#include <string>

namespace llab {

// Point or sample outside the coordinate chart of the current model.
struct ChartDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Quantity requested on the zero-section where the Liouville form is singular.
struct SingularLocusError : std::domain_error {
  using std::domain_error::domain_error;
};

// Trajectory left the chart before the requested time or integral was reached.
struct EscapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Orbit data requested for an axis ratio that is an exact integer.
struct DegenerateOrbitError : std::domain_error {
  using std::domain_error::domain_error;
};

// Named hypothesis of an operation is violated; `inequality` says which one.
struct PreconditionError : std::invalid_argument {
  PreconditionError(const std::string& what, const std::string& ineq)
      : std::invalid_argument(what), inequality(ineq) {}
  std::string inequality;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace llab
