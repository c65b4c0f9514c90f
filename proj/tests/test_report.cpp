#include <cmath>

#include "doctest.h"
#include "qcorr/report.hpp"

using namespace qcorr;

namespace {

Record rec(const std::string& name, Json params, double p, std::uint64_t seed = 1) {
  Record r;
  r.name = name;
  r.params = std::move(params);
  r.p_hat = p;
  r.seed = seed;
  return r;
}

}  // namespace

TEST_CASE("empty store") {
  CHECK(build_report({}).empty());
  CHECK(format_report({}).empty());
}

TEST_CASE("power laws are recovered exactly") {
  std::vector<Record> rs;
  for (int n : {8, 16, 32, 64}) {
    rs.push_back(rec("theorem1/one_arm_black", {{"n", n}}, 0.7 * std::pow(n, -5.0 / 48)));
    rs.push_back(rec("theorem1/ratio", {{"n", n}}, std::pow(n, -1.0 / 24)));
    rs.push_back(rec("rsw/crossing", {{"lambda", 2}, {"n", n}}, 0.2 * std::pow(n, -0.5)));
  }
  rs.push_back(rec("theorem1/config", {{"seed", 1}}, 0));
  rs.push_back(rec("theorem1/fit_ratio", {{"n", {8, 16}}, {"slope", -1}}, -1));
  const auto rows = build_report(rs);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.fit.points == 4);
    CHECK(r.fit.stderr_slope == doctest::Approx(0).epsilon(1e-9));
  }
  CHECK(rows[0].series == "rsw/crossing {\"lambda\":2}");
  CHECK(rows[0].fit.slope == doctest::Approx(-0.5));
  CHECK_FALSE(rows[0].anchor);
  CHECK(rows[1].series == "theorem1/one_arm_black");
  CHECK(rows[1].fit.slope == doctest::Approx(-5.0 / 48));
  CHECK(*rows[1].anchor == doctest::Approx(-5.0 / 48));
  CHECK(rows[2].gap);
  CHECK(rows[2].fit.slope == doctest::Approx(-1.0 / 24));
  const auto text = format_report(rows);
  CHECK(text.find("anchor -0.1042") != std::string::npos);
  CHECK(text.find("gap") != std::string::npos);
}

TEST_CASE("seeds stay apart and derived params do not split series") {
  std::vector<Record> rs;
  for (std::uint64_t seed : {1u, 2u}) {
    for (int n : {4, 8, 16}) {
      rs.push_back(rec("noise_stability/both", {{"n", n}, {"t", 0.01 * n}, {"t_factor", 1}}, 1.0 / n, seed));
    }
  }
  rs.push_back(rec("separation/ratio", {{"k", 8}}, 0.1));
  rs.push_back(rec("separation/ratio", {{"k", 16}}, 0.1));
  const auto rows = build_report(rs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].seed == 2);
  CHECK(rows[0].fit.slope == doctest::Approx(-1));
  CHECK(rows[0].scale_key == "n");
}

TEST_CASE("later records replace earlier ones at the same scale") {
  std::vector<Record> rs;
  for (int n : {2, 4, 8}) rs.push_back(rec("x/p", {{"n", n}}, 1.0));
  rs.push_back(rec("x/p", {{"n", 8}}, 1.0 / 8));
  const auto rows = build_report(rs);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].fit.points == 3);
  CHECK(rows[0].fit.slope < 0);
}
