// Command-line front end: verify, experiment, report, oracle.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/experiments.hpp"
#include "qcorr/report.hpp"
#include "qcorr/verify.hpp"

using namespace qcorr;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2, kBudget = 3;

Rational parse_rational(const std::string& text) {
  try {
    Rational q(text);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw UsageError("not a rational number: '" + text + "'");
  }
}

std::vector<Rational> parse_list(const std::string& text, std::size_t min, std::size_t max, const char* what) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_rational(part));
  if (out.size() < min || out.size() > max) throw UsageError(std::string("bad ") + what + ": '" + text + "'");
  return out;
}

Json read_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  return cfg;
}

// Settings shared by the subcommands. Each has a config-file key of the same
// name; flags given on the command line win.
struct Common {
  std::string config;
  std::uint64_t seed = 1;
  int replicas = 1;
  int lattice_n = 0;
  std::string pitch = "1";
  std::string out = "results";
  double budget_seconds = 0;
  std::vector<std::string> params;  // key=json
};

void add_common(CLI::App* app, Common& c, bool with_run) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--seed", c.seed, "Master seed");
  if (!with_run) return;
  app->add_option("--replicas", c.replicas, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--lattice-n", c.lattice_n, "Largest lattice extent allowed (0: no cap)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--pitch", c.pitch, "Hexagon pitch as a rational, e.g. 1 or 1/2");
  app->add_option("--out", c.out, "Output directory for the results store and CSV tables");
  app->add_option("--budget-seconds", c.budget_seconds, "Wall-clock budget (0: none)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--param", c.params, "Experiment parameter override key=<json>, repeatable");
}

template <class T>
void take(const Json& cfg, const char* key, T& value, const CLI::App* app, const std::string& flag) {
  if (!cfg.contains(key) || app->count(flag) > 0) return;
  try {
    value = cfg.at(key).get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

RunOptions resolve(const Common& c, const CLI::App* app, std::string& out_dir) {
  const Json cfg = read_config(c.config);
  static const std::vector<std::string> known = {"seed", "replicas", "lattice_n", "pitch", "out",
                                                 "budget_seconds", "params"};
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw UsageError("unknown config key '" + it.key() + "'");
    }
  }
  Common r = c;
  take(cfg, "seed", r.seed, app, "--seed");
  take(cfg, "replicas", r.replicas, app, "--replicas");
  take(cfg, "lattice_n", r.lattice_n, app, "--lattice-n");
  take(cfg, "out", r.out, app, "--out");
  take(cfg, "budget_seconds", r.budget_seconds, app, "--budget-seconds");
  if (cfg.contains("pitch") && app->count("--pitch") == 0) {
    const auto& p = cfg["pitch"];
    r.pitch = p.is_string() ? p.get<std::string>() : p.dump();
  }
  if (r.replicas < 1 || r.lattice_n < 0 || r.budget_seconds < 0) throw UsageError("negative setting in config");
  RunOptions o;
  o.seed = r.seed;
  o.replicas = r.replicas;
  o.lattice_n = r.lattice_n;
  o.pitch = parse_rational(r.pitch);
  o.budget_seconds = r.budget_seconds;
  if (cfg.contains("params")) {
    if (!cfg["params"].is_object()) throw UsageError("config key 'params' must be an object");
    o.params = cfg["params"];
  }
  for (const auto& kv : c.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=<json>, got '" + kv + "'");
    try {
      o.params[kv.substr(0, eq)] = Json::parse(kv.substr(eq + 1));
    } catch (const Json::exception&) {
      o.params[kv.substr(0, eq)] = kv.substr(eq + 1);  // bare words are strings
    }
  }
  out_dir = r.out;
  return o;
}

int cmd_verify(const std::string& suite, int n_max, double scale, std::uint64_t seed, bool mutant) {
  VerifyOptions o;
  o.suite = suite;
  o.n_max = n_max;
  o.seed = seed;
  o.scale = scale;
  if (mutant) o.d_impl = mutant_d_op;
  bool ok = true;
  run_verify(o, [&](const CheckSummary& s) {
    ok = ok && s.passed();
    std::printf("%s  %-38s %ld/%ld  %.2fs", s.passed() ? "PASS" : "FAIL", s.name.c_str(), s.instances - s.failures,
                s.instances, s.seconds);
    if (s.quadrature_instances > 0) std::printf("  max quadrature error %.2e", static_cast<double>(s.max_quadrature_error));
    if (!s.passed()) std::printf("\n      %s", s.first_failure.c_str());
    std::printf("\n");
    std::fflush(stdout);
  });
  return ok ? kOk : kFailed;
}

int cmd_experiment(const std::string& name, const RunOptions& o, const std::string& out_dir) {
  default_params(name);  // rejects unknown names before touching the disk
  fs::create_directories(out_dir);
  ResultsStore store(fs::path(out_dir) / "results.jsonl");
  std::vector<Record> written;
  const auto out = run_experiment(name, o, [&](const Record& r) {
    Record stamped = r;
    stamped.timestamp = utc_timestamp();
    store.append(stamped);
    written.push_back(std::move(stamped));
  });
  write_csv(fs::path(out_dir) / (name + ".csv"), written);
  for (const auto& line : out.table) std::cout << line << "\n";
  if (!out.valid) {
    std::cerr << name << ": too many Unknown outcomes; results marked invalid\n";
    return kFailed;
  }
  return kOk;
}

int cmd_report(const std::string& store_path, const std::string& csv) {
  if (!fs::exists(store_path)) throw UsageError("no results store at " + store_path);
  const auto rows = build_report(read_store(store_path));
  std::cout << format_report(rows);
  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw UsageError("cannot write " + csv);
    f << "experiment,seed,series,scale,points,slope,ci_lo,ci_hi,anchor\n";
    for (const auto& r : rows) {
      std::string series;
      for (char ch : r.series) series += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      f << r.experiment << ',' << r.seed << ",\"" << series << "\"," << r.scale_key << ',' << r.fit.points << ','
        << r.fit.slope << ',' << r.fit.ci.lo << ',' << r.fit.ci.hi << ',' << (r.anchor ? std::to_string(*r.anchor) : "")
        << '\n';
    }
  }
  return kOk;
}

struct OracleArgs {
  std::string event;
  std::string colour = "black";
  int n = 1, k = 0;
  std::string rect, annulus, direction = "lr", pitch = "1";
  int lattice_n = 0;
  int cap = 22;
};

int cmd_oracle(const OracleArgs& a) {
  static const std::map<std::string, Colour> colours = {
      {"black", Colour::Black}, {"b", Colour::Black}, {"white", Colour::White}, {"w", Colour::White}};
  if (!colours.count(a.colour)) throw UsageError("colour must be black or white");
  const Colour c = colours.at(a.colour);
  int extent = a.n;
  auto need = [&](const std::vector<Rational>& xs) {
    for (const auto& x : xs) extent = std::max<int>(extent, static_cast<int>(std::ceil(std::fabs(x.get_d()))));
  };
  ArmSpec spec;
  if (a.event == "origin") {
    spec = ArmSpec::origin_colour(c);
  } else if (a.event == "one-arm") {
    spec = ArmSpec::one_arm(c, a.n);
  } else if (a.event == "two-arm") {
    spec = ArmSpec::two_arm_poly(a.n);
  } else if (a.event == "four-arm") {
    spec = ArmSpec::four_arm(a.k, a.n);
  } else if (a.event == "disjoint-two-black") {
    spec = ArmSpec::disjoint_two_black(a.n);
  } else if (a.event == "separated-long" || a.event == "separated-short") {
    spec = a.event == "separated-long" ? ArmSpec::separated_long(c, a.k, a.n) : ArmSpec::separated_short(c, a.k, a.n);
  } else if (a.event == "crossing") {
    const auto r = parse_list(a.rect, 4, 4, "--rect (x0,x1,y0,y1)");
    need(r);
    if (a.direction != "lr" && a.direction != "bt") throw UsageError("direction must be lr or bt");
    spec = ArmSpec::crossing(Region::rect(r[0], r[1], r[2], r[3]),
                             a.direction == "lr" ? Direction::LeftRight : Direction::BottomTop, c);
    extent = 0;
    need(r);
  } else if (a.event == "circuit") {
    const auto r = parse_list(a.annulus, 2, 4, "--annulus (inner,outer[,cx,cy])");
    const Rational cx = r.size() > 2 ? r[2] : Rational(0), cy = r.size() > 3 ? r[3] : Rational(0);
    extent = 0;
    need({r[1] + abs(cx), r[1] + abs(cy)});
    spec = ArmSpec::circuit(Region::annulus(r[0], r[1], cx, cy), c);
  } else {
    throw UsageError("unknown event '" + a.event +
                     "' (origin, one-arm, two-arm, four-arm, crossing, circuit, disjoint-two-black, "
                     "separated-long, separated-short)");
  }
  const Rational pitch = parse_rational(a.pitch);
  if (pitch <= 0) throw UsageError("pitch must be positive");
  const Lattice lat(a.lattice_n > 0 ? a.lattice_n : std::max(extent, 1), pitch);
  const auto hexes = support(lat, spec).size();
  const Rational p = oracle_exact(lat, spec, a.cap);
  std::printf("P[%s] = %s = %.12g over %zu hexagons\n", spec.describe().c_str(), p.get_str().c_str(), p.get_d(),
              hexes);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo checks of quantitative correlation inequalities"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run the exact identity suites on the Boolean cube");
  std::string suite = "all";
  int n_max = 10;
  double scale = 1;
  bool mutant = false;
  Common vc;
  verify->add_option("--suite", suite, "cube, reimer, noise or all");
  verify->add_option("--n-max", n_max, "Largest dimension drawn");
  verify->add_option("--scale", scale, "Multiplier on the instance counts");
  verify->add_option("--seed", vc.seed, "Seed of the random instances");
  verify->add_flag("--inject-mutant", mutant)->group("");  // sign-flipped D operator, for mutation tests

  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  std::string name;
  Common ec;
  experiment->add_option("name", name, "Experiment name")->required();
  add_common(experiment, ec, true);

  auto* report = app.add_subcommand("report", "Refit power laws from a results store");
  std::string store_path, report_csv;
  report->add_option("store", store_path, "JSONL results store")->required();
  report->add_option("--csv", report_csv, "Also write the table as CSV");

  auto* oracle = app.add_subcommand("oracle", "Exact event probability by enumeration");
  OracleArgs oa;
  oracle->add_option("event", oa.event, "origin, one-arm, two-arm, four-arm, crossing, circuit, ...")->required();
  oracle->add_option("--colour", oa.colour);
  oracle->add_option("--n", oa.n);
  oracle->add_option("--k", oa.k);
  oracle->add_option("--rect", oa.rect, "x0,x1,y0,y1");
  oracle->add_option("--annulus", oa.annulus, "inner,outer[,cx,cy]");
  oracle->add_option("--direction", oa.direction, "lr or bt");
  oracle->add_option("--lattice-n", oa.lattice_n);
  oracle->add_option("--pitch", oa.pitch);
  oracle->add_option("--cap", oa.cap, "Largest support enumerated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(suite, n_max, scale, vc.seed, mutant);
    if (*experiment) {
      std::string out_dir;
      const RunOptions o = resolve(ec, experiment, out_dir);
      return cmd_experiment(name, o, out_dir);
    }
    if (*report) return cmd_report(store_path, report_csv);
    if (*oracle) return cmd_oracle(oa);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}
