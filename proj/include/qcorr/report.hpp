#pragma once

// Aggregation of stored records into power-law fits per experiment and seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/stats.hpp"
#include "qcorr/store.hpp"

namespace qcorr {

struct ReportRow {
  std::string experiment;  // record name up to the first '/'
  std::uint64_t seed = 0;
  std::string series;      // record name plus the non-scale params
  std::string scale_key;   // "n" or "k"
  FitResult fit;
  std::optional<double> anchor;  // reference exponent, when there is one
  bool gap = false;              // slope of a correlation ratio
};

/// Groups records by (experiment, seed, series) and refits log p against log
/// scale for every series with at least three distinct scales and positive
/// estimates. Config and stored fit records are skipped; later records replace
/// earlier ones at the same scale.
std::vector<ReportRow> build_report(const std::vector<Record>& records);

/// Plain-text table, one line per row; empty input gives an empty string.
std::string format_report(const std::vector<ReportRow>& rows);

}  // namespace qcorr
