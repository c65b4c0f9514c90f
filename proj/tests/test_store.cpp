#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/store.hpp"

using namespace qcorr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qcorr_store_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Record sample_record() {
  Record r;
  r.name = "demo/one_arm";
  r.params = Json{{"n", 8}, {"colour", "black"}};
  r.successes = 3;
  r.samples = 10;
  r.p_hat = 0.3;
  r.wilson_lo = 0.1;
  r.wilson_hi = 0.6;
  r.seed = 42;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("json round trip keeps field order") {
  const auto r = sample_record();
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == store_columns());
  const auto back = record_from_json(j);
  CHECK(to_json(back) == j);
  Json broken = j;
  broken.erase("samples");
  CHECK_THROWS_AS(record_from_json(broken), UsageError);
}

TEST_CASE("append and read back") {
  const auto dir = scratch("append");
  ResultsStore store(dir / "sub" / "results.jsonl");
  auto r = sample_record();
  store.append(r);
  r.timestamp = "fixed";
  store.append(r);
  const auto all = read_store(store.path());
  REQUIRE(all.size() == 2);
  CHECK_FALSE(all[0].timestamp.empty());
  CHECK(all[1].timestamp == "fixed");
  CHECK(all[0].params == r.params);
  CHECK_THROWS_AS(read_store(dir / "missing.jsonl"), UsageError);
  std::ofstream(dir / "bad.jsonl") << "{not json\n";
  CHECK_THROWS_AS(read_store(dir / "bad.jsonl"), UsageError);
}

TEST_CASE("csv export and timestamp stripping") {
  const auto dir = scratch("csv");
  auto a = sample_record(), b = sample_record();
  a.timestamp = "2020-01-01T00:00:00Z";
  b.timestamp = "2021-06-01T12:00:00Z";
  write_csv(dir / "a.csv", {a});
  write_csv(dir / "b.csv", {b});
  const auto ca = slurp(dir / "a.csv"), cb = slurp(dir / "b.csv");
  CHECK(ca != cb);
  CHECK(ca.substr(0, ca.find('\n')) == csv_header());
  const auto row_a = ca.substr(ca.find('\n') + 1), row_b = cb.substr(cb.find('\n') + 1);
  CHECK(without_timestamp(row_a) == without_timestamp(row_b));
  CHECK(row_a.find("\"{\"\"n\"\":8,\"\"colour\"\":\"\"black\"\"}\"") != std::string::npos);
  CHECK(without_timestamp(to_json(a).dump()) == without_timestamp(to_json(b).dump()));
}
