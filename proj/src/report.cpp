#include "qcorr/report.hpp"

#include <cstdio>
#include <map>
#include <tuple>

namespace qcorr {

namespace {

// Params that are computed from the data rather than chosen.
bool derived(const std::string& key) { return key == "t" || key == "alpha"; }

std::optional<double> anchor_of(const std::string& name) {
  static const std::map<std::string, double> anchors = {
      {"theorem1/one_arm_black", -5.0 / 48}, {"theorem1/one_arm_white", -5.0 / 48},
      {"theorem1/two_arm_poly", -0.25},      {"theorem2/two_arm_poly", -0.25},
      {"four_arm/alpha", -1.25},
  };
  const auto it = anchors.find(name);
  if (it == anchors.end()) return std::nullopt;
  return it->second;
}

bool is_gap(const std::string& name) { return name == "theorem1/ratio" || name == "theorem2/ratio"; }

struct Series {
  std::string name, scale_key;
  std::map<double, double> points;  // scale -> estimate
};

}  // namespace

std::vector<ReportRow> build_report(const std::vector<Record>& records) {
  using Key = std::tuple<std::string, std::uint64_t, std::string>;
  std::map<Key, Series> groups;
  for (const auto& r : records) {
    const auto slash = r.name.find('/');
    if (slash == std::string::npos) continue;
    const std::string experiment = r.name.substr(0, slash), quantity = r.name.substr(slash + 1);
    if (quantity == "config" || quantity.rfind("fit_", 0) == 0) continue;
    if (!r.params.is_object() || !(r.p_hat > 0)) continue;
    std::string scale_key;
    for (const char* k : {"n", "k"}) {
      if (r.params.contains(k) && r.params[k].is_number()) {
        scale_key = k;
        break;
      }
    }
    if (scale_key.empty()) continue;
    Json rest = Json::object();
    for (auto it = r.params.begin(); it != r.params.end(); ++it) {
      if (it.key() != scale_key && !derived(it.key())) rest[it.key()] = it.value();
    }
    const std::string series = rest.empty() ? r.name : r.name + " " + rest.dump();
    auto& s = groups[{experiment, r.seed, series}];
    s.name = r.name;
    s.scale_key = scale_key;
    s.points[r.params[scale_key].get<double>()] = r.p_hat;
  }
  std::vector<ReportRow> rows;
  for (const auto& [key, s] : groups) {
    if (s.points.size() < 3) continue;
    std::vector<double> n, p;
    for (const auto& [x, y] : s.points) {
      n.push_back(x);
      p.push_back(y);
    }
    ReportRow row;
    std::tie(row.experiment, row.seed, row.series) = key;
    row.scale_key = s.scale_key;
    row.fit = fit_exponent(n, p);
    row.anchor = anchor_of(s.name);
    row.gap = is_gap(s.name);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::string out;
  std::string current;
  char buf[512];
  for (const auto& r : rows) {
    const std::string head = r.experiment + " (seed " + std::to_string(r.seed) + ")";
    if (head != current) {
      out += head + "\n";
      current = head;
    }
    std::snprintf(buf, sizeof buf, "  %-48s %d pts  slope %+.4f  95%% CI [%+.4f, %+.4f]", r.series.c_str(),
                  r.fit.points, r.fit.slope, r.fit.ci.lo, r.fit.ci.hi);
    out += buf;
    if (r.anchor) {
      std::snprintf(buf, sizeof buf, "  anchor %+.4f  diff %+.4f", *r.anchor, r.fit.slope - *r.anchor);
      out += buf;
    }
    if (r.gap) out += r.fit.ci.hi < 0 ? "  gap: negative" : "  gap: not significant";
    out += "\n";
  }
  return out;
}

}  // namespace qcorr
