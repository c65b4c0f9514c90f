#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Bad arguments: index out of range, dimension above a cap, malformed config.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of a check does not hold (e.g. an event that
/// must be increasing is not).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The integrand of a log-derivative integral vanishes on the interval.
class SingularIntegrandError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Monte Carlo run would exceed its configured cost budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcorr
