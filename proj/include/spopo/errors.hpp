#pragma once

#include <stdexcept>
#include <string>

namespace spopo {

// Invalid user input is reported with std::invalid_argument throughout the
// library. The two types below mark failures that callers (the CLI in
// particular) need to tell apart from bad input.

/// Requested analysis is only defined below threshold (r < 1).
class AboveThresholdError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Numerical solver failed (eigensolver non-convergence, singular system).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace spopo
