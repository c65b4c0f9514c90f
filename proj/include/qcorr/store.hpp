#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qcorr {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// One line of the results store. Estimates carry counts and a Wilson
/// interval; derived values (ratios, fits, means) put the value in p_hat and
/// its interval in wilson_lo/wilson_hi with zero counts.
struct Record {
  std::string name;
  Json params = Json::object();
  long successes = 0;
  long samples = 0;
  double p_hat = 0;
  double wilson_lo = 0;
  double wilson_hi = 0;
  long unknown = 0;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string timestamp;
};

Json to_json(const Record& r);
/// Throws UsageError when a field is missing or has the wrong type.
Record record_from_json(const Json& j);

/// Column names shared by the JSONL fields and the CSV export.
const std::vector<std::string>& store_columns();
std::string csv_header();
std::string csv_row(const Record& r);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Append-only JSONL writer; each append is flushed so that a crash keeps
/// every record already written.
class ResultsStore {
 public:
  explicit ResultsStore(std::filesystem::path jsonl);
  /// Stamps the record (unless it already has a timestamp) and appends it.
  void append(Record r);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// All records of a JSONL store. Throws UsageError when unreadable or malformed.
std::vector<Record> read_store(const std::filesystem::path& jsonl);

/// Writes records as CSV with the store columns, replacing the file.
void write_csv(const std::filesystem::path& csv, const std::vector<Record>& records);

/// Copy of a JSONL line or CSV row with the timestamp field blanked, for
/// byte comparisons across runs.
std::string without_timestamp(const std::string& line);

}  // namespace qcorr
