#include "qcorr/store.hpp"

#include <ctime>
#include <fstream>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& store_columns() {
  static const std::vector<std::string> cols = {"name",      "params",    "successes", "samples", "p_hat", "wilson_lo",
                                                "wilson_hi", "unknown",   "seed",      "version", "timestamp"};
  return cols;
}

Json to_json(const Record& r) {
  Json j;
  j["name"] = r.name;
  j["params"] = r.params;
  j["successes"] = r.successes;
  j["samples"] = r.samples;
  j["p_hat"] = r.p_hat;
  j["wilson_lo"] = r.wilson_lo;
  j["wilson_hi"] = r.wilson_hi;
  j["unknown"] = r.unknown;
  j["seed"] = r.seed;
  j["version"] = r.version;
  j["timestamp"] = r.timestamp;
  return j;
}

Record record_from_json(const Json& j) {
  try {
    Record r;
    r.name = j.at("name").get<std::string>();
    r.params = j.at("params");
    r.successes = j.at("successes").get<long>();
    r.samples = j.at("samples").get<long>();
    r.p_hat = j.at("p_hat").is_null() ? 0.0 : j.at("p_hat").get<double>();
    r.wilson_lo = j.at("wilson_lo").is_null() ? 0.0 : j.at("wilson_lo").get<double>();
    r.wilson_hi = j.at("wilson_hi").is_null() ? 0.0 : j.at("wilson_hi").get<double>();
    r.unknown = j.at("unknown").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed record: ") + e.what());
  }
}

std::string csv_header() {
  std::string out;
  for (const auto& c : store_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string csv_row(const Record& r) {
  const Json j = to_json(r);
  std::string out;
  bool first = true;
  for (const auto& c : store_columns()) {
    const auto& v = j.at(c);
    out += first ? "" : ",";
    first = false;
    out += csv_quote(v.is_string() ? v.get<std::string>() : v.dump());
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ResultsStore::ResultsStore(std::filesystem::path jsonl) : path_(std::move(jsonl)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream probe(path_, std::ios::app);
  if (!probe) throw UsageError("cannot open results store " + path_.string());
}

void ResultsStore::append(Record r) {
  if (r.timestamp.empty()) r.timestamp = utc_timestamp();
  std::ofstream out(path_, std::ios::app);
  out << to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw UsageError("write failed on " + path_.string());
}

std::vector<Record> read_store(const std::filesystem::path& jsonl) {
  std::ifstream in(jsonl);
  if (!in) throw UsageError("cannot read results store " + jsonl.string());
  std::vector<Record> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

void write_csv(const std::filesystem::path& csv, const std::vector<Record>& records) {
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw UsageError("cannot write " + csv.string());
  out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

std::string without_timestamp(const std::string& line) {
  if (!line.empty() && line.front() == '{') {
    Json j = Json::parse(line);
    if (j.contains("timestamp")) j["timestamp"] = "";
    return j.dump();
  }
  const auto comma = line.rfind(',');
  return comma == std::string::npos ? line : line.substr(0, comma + 1);
}

}  // namespace qcorr
