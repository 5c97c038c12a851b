#pragma once

#include <stdexcept>
#include <string>

namespace harperlab {

// Raised when an interval enclosure can no longer certify the next
// continued-fraction coefficient, including exact rational termination.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a transfer-matrix step or discriminant hits a phase where
// some |b_n(theta)| falls below the singular threshold.
struct SingularPhase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when adaptive refinement cannot reach the requested tolerance
// within its interval-count budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when R acts on a half-integer Fourier mode.
struct HalfIntegerMode : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonsimpleZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CLI flag / argument problems; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace harperlab
