#pragma once

#include <stdexcept>
#include <string>

namespace drlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A constructed (m, g) exits [0,1] or is otherwise not a valid probability model.
struct ConstructionInvalid : Error {
  using Error::Error;
};

// Requested perturbation amplitude would push an estimate outside [c, 1-c].
struct BudgetInfeasible : Error {
  using Error::Error;
};

// E[m(X)] is (numerically) zero, so ATT-style ratios are undefined.
struct DegeneratePropensity : Error {
  using Error::Error;
};

struct NoTreatedUnits : Error {
  using Error::Error;
};

struct OverlapViolation : Error {
  using Error::Error;
};

// A feasibility inequality required by the selected construction fails at the
// given budgets; the message carries the failed inequality.
struct NTooSmall : Error {
  using Error::Error;
};

struct CaseMismatch : Error {
  using Error::Error;
};

struct Nonconvergence : Error {
  using Error::Error;
};

struct InvalidDensity : Error {
  using Error::Error;
};

struct DegenerateConstruction : Error {
  using Error::Error;
};

}  // namespace drlab
