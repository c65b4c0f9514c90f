#pragma once

// Randomized drivers for the exact identity checks on the cube.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcorr/witness.hpp"

namespace qcorr {

struct CheckSummary {
  std::string name;
  long instances = 0;
  long failures = 0;
  std::string first_failure;    // empty when everything passed
  long double max_quadrature_error = 0;  // only for checks that integrate
  long quadrature_instances = 0;
  double seconds = 0;

  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  std::string suite = "all";  // cube, reimer, noise or all
  int n_max = 10;             // largest dimension drawn; each check also applies its own cap
  std::uint64_t seed = 1;
  double scale = 1.0;         // multiplies every instance count (at least one instance each)
  DOperator d_impl = d_op;    // replaced only by mutation tests
};

const std::vector<std::string>& verify_suites();

/// Runs the selected suite. `progress` sees each summary as it completes.
/// Throws UsageError for an unknown suite or n_max outside [1, 10].
std::vector<CheckSummary> run_verify(const VerifyOptions& options,
                                     const std::function<void(const CheckSummary&)>& progress = {});

/// D_i with the sign of the second-argument term flipped.
Rational mutant_d_op(const BiFunction& F, int i, const BitConfig& x, const BitConfig& y);

}  // namespace qcorr
