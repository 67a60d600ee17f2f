#pragma once

#include <stdexcept>
#include <string>

namespace conal {

// Input failed a structural invariant (asymmetry, dimension mismatch,
// out-of-range parameter).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Input is structurally fine but outside the mathematical domain of the
// operation (log of a non-SPD matrix, barrier coupling past the pole).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A simulation could not be continued; carries the failing time and,
// for network dynamics, the offending edge.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time, int edge_from = -1,
                   int edge_to = -1)
      : std::runtime_error(what), time(time), edge_from(edge_from), edge_to(edge_to) {}

  double time;
  int edge_from;
  int edge_to;
};

}  // namespace conal
