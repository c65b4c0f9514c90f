#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <string>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/perco.hpp"
#include "qcorr/rational.hpp"
#include "qcorr/stats.hpp"
#include "qcorr/store.hpp"

namespace qcorr {

/// Stable 64-bit tag of a string (FNV-1a), used to salt sample streams.
std::uint64_t salt_of(const std::string& tag);

/// Runs `samples` independent samples split into `replicas` contiguous blocks
/// on separate threads. Sample i always uses Rng(seed, stream_id(salt, i)), so
/// the merged accumulator does not depend on the replica count as long as
/// Acc::merge is exact.
template <class Acc>
Acc run_samples(long samples, std::uint64_t seed, std::uint64_t salt, int replicas,
                const std::function<Acc()>& make, const std::function<void(Rng&, Acc&)>& body);

/// P[spec] with a Wilson interval.
Record estimate(const Lattice& lat, const ArmSpec& spec, long samples, std::uint64_t seed, int replicas = 1);
/// P[omega in spec0, omega_t in spec1] with a Wilson interval.
Record estimate_dynamic(const Lattice& lat, const ArmSpec& spec0, const ArmSpec& spec1, double t, long samples,
                        std::uint64_t seed, int replicas = 1);

/// Hexagons an event reads.
std::vector<int> support(const Lattice& lat, const ArmSpec& spec);
/// Exact probability by enumerating every colouring of the support. Throws
/// UsageError when the support has more than `cap` hexagons.
Rational oracle_exact(const Lattice& lat, const ArmSpec& spec, int cap = 22);

/// Geometric interpolation of alpha at scale i from measured (scale, value)
/// points sorted by scale; constant extrapolation outside.
double interpolate_geometric(const std::vector<std::pair<int, double>>& points, double i);

/// min(1 / (2 n^2 alpha), 1/4), with n counted in hexagon pitches.
double noise_scale(double n_lattice_units, double alpha);

struct RunOptions {
  std::uint64_t seed = 1;
  int replicas = 1;
  Rational pitch = 1;
  int lattice_n = 0;          // largest lattice extent allowed; 0 for no cap
  double budget_seconds = 0;  // wall-clock cap; 0 for none
  Json params = Json::object();  // overrides of the experiment defaults
};

struct ExperimentOutput {
  std::vector<Record> records;     // config record first
  std::vector<std::string> table;  // human-readable summary
  bool valid = true;               // false when too many Unknown outcomes
};

const std::vector<std::string>& experiment_names();
/// Default parameters (the desk profile). Throws UsageError for unknown names.
Json default_params(const std::string& name);

/// Runs a named experiment. Every record is passed to `sink` as soon as it is
/// known, the config record before any sampling. Throws UsageError on bad
/// parameters and BudgetError when the time or cost budget is exceeded.
ExperimentOutput run_experiment(const std::string& name, const RunOptions& options,
                                const std::function<void(const Record&)>& sink = {});

template <class Acc>
Acc run_samples(long samples, std::uint64_t seed, std::uint64_t salt, int replicas,
                const std::function<Acc()>& make, const std::function<void(Rng&, Acc&)>& body) {
  if (samples < 1) throw UsageError("need at least one sample");
  if (replicas < 1) throw UsageError("need at least one replica");
  const long blocks = std::min<long>(replicas, samples);
  std::vector<Acc> parts;
  for (long b = 0; b < blocks; ++b) parts.push_back(make());
  std::vector<std::exception_ptr> errors(blocks);
  auto work = [&](long b) {
    try {
      const long lo = samples * b / blocks, hi = samples * (b + 1) / blocks;
      for (long i = lo; i < hi; ++i) {
        Rng rng(seed, stream_id(salt, static_cast<std::uint64_t>(i)));
        body(rng, parts[b]);
      }
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  if (blocks == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (long b = 0; b < blocks; ++b) threads.emplace_back(work, b);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (long b = 1; b < blocks; ++b) parts[0].merge(parts[b]);
  return std::move(parts[0]);
}

}  // namespace qcorr
