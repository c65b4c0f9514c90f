#include "qcorr/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <memory>

namespace qcorr {

std::uint64_t salt_of(const std::string& tag) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

Record proportion_record(const std::string& name, const Json& params, long successes, long samples, long unknown,
                         std::uint64_t seed) {
  Record r;
  r.name = name;
  r.params = params;
  r.successes = successes;
  r.samples = samples;
  r.unknown = unknown;
  r.seed = seed;
  r.p_hat = samples > 0 ? static_cast<double>(successes) / static_cast<double>(samples) : 0.0;
  if (samples > 0) {
    const auto w = wilson(successes, samples);
    r.wilson_lo = w.lo;
    r.wilson_hi = w.hi;
  }
  return r;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

}  // namespace

Record estimate(const Lattice& lat, const ArmSpec& spec, long samples, std::uint64_t seed, int replicas) {
  const auto event = make_event(lat, spec);
  const auto acc = run_samples<JointCounts>(
      samples, seed, salt_of("estimate/" + spec.describe()), replicas, [] { return JointCounts(1); },
      [&](Rng& rng, JointCounts& a) { a.add({event(sample(lat, rng))}); });
  return proportion_record("estimate", Json{{"spec", spec.describe()}}, acc.hits(0), acc.samples(), 0, seed);
}

Record estimate_dynamic(const Lattice& lat, const ArmSpec& spec0, const ArmSpec& spec1, double t, long samples,
                        std::uint64_t seed, int replicas) {
  if (!(t >= 0 && t <= 1)) throw UsageError("estimate_dynamic: t must lie in [0, 1]");
  const auto e0 = make_event(lat, spec0), e1 = make_event(lat, spec1);
  const Json params = {{"spec0", spec0.describe()}, {"spec1", spec1.describe()}, {"t", t}};
  const auto acc = run_samples<JointCounts>(
      samples, seed, salt_of("estimate_dynamic/" + params.dump()), replicas, [] { return JointCounts(1); },
      [&](Rng& rng, JointCounts& a) {
        const auto w = sample(lat, rng);
        a.add({e0(w) && e1(apply_noise(w, t, rng))});
      });
  return proportion_record("estimate_dynamic", params, acc.hits(0), acc.samples(), 0, seed);
}

std::vector<int> support(const Lattice& lat, const ArmSpec& spec) {
  switch (spec.kind) {
    case ArmSpec::Kind::OriginColour:
      return {lat.origin()};
    case ArmSpec::Kind::OneArm:
    case ArmSpec::Kind::TwoArmPoly:
    case ArmSpec::Kind::FourArm:
    case ArmSpec::Kind::DisjointTwoBlack:
    case ArmSpec::Kind::SeparatedLong:
      return lat.hexes_meeting(Region::box(spec.n));
    case ArmSpec::Kind::Crossing:
    case ArmSpec::Kind::Circuit:
      return lat.hexes_meeting(spec.region);
    case ArmSpec::Kind::SeparatedShort: {
      const auto s = standard_regions(spec.k, 10 * spec.k);
      return lat.hexes_meeting(Region::unite({s.r, s.r_reflected}));
    }
  }
  throw UsageError("support: unknown kind");
}

Rational oracle_exact(const Lattice& lat, const ArmSpec& spec, int cap) {
  const auto free = support(lat, spec);
  if (static_cast<int>(free.size()) > cap) {
    throw UsageError("oracle_exact: " + std::to_string(free.size()) + " hexagons exceed the cap of " +
                     std::to_string(cap));
  }
  const auto event = make_event(lat, spec);
  Config c(lat.size(), Colour::White);
  long hits = 0;
  const long total = 1L << free.size();
  for (long m = 0; m < total; ++m) {
    for (std::size_t j = 0; j < free.size(); ++j) c.set(free[j], ((m >> j) & 1) ? Colour::Black : Colour::White);
    hits += event(c);
  }
  return make_rational(hits, total);
}

double interpolate_geometric(const std::vector<std::pair<int, double>>& points, double i) {
  if (points.empty()) throw UsageError("interpolate_geometric: no points");
  if (i <= points.front().first) return points.front().second;
  if (i >= points.back().first) return points.back().second;
  for (std::size_t j = 0; j + 1 < points.size(); ++j) {
    const auto [s0, a0] = points[j];
    const auto [s1, a1] = points[j + 1];
    if (i <= s1) {
      if (!(a0 > 0) || !(a1 > 0)) throw UsageError("interpolate_geometric: zero estimate");
      const double u = (std::log(i) - std::log(s0)) / (std::log(s1) - std::log(s0));
      return std::exp((1 - u) * std::log(a0) + u * std::log(a1));
    }
  }
  return points.back().second;
}

double noise_scale(double n_lattice_units, double alpha) {
  if (!(alpha > 0)) throw UsageError("noise_scale: alpha must be positive");
  return std::min(1.0 / (2.0 * n_lattice_units * n_lattice_units * alpha), 0.25);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"theorem1",   "theorem2",    "rsw",        "four_arm",
                                                 "noise_stability", "separation", "pivotal_sum", "interlaced",
                                                 "dynamic_disjoint"};
  return names;
}

Json default_params(const std::string& name) {
  if (name == "theorem1" || name == "theorem2") return Json{{"n", {8, 16, 32, 64}}, {"samples", 100000}};
  if (name == "rsw") return Json{{"n", {8, 16, 32, 64}}, {"lambda", {1, 2}}, {"samples", 20000}};
  if (name == "four_arm") {
    return Json{{"scales", {1, 2, 4, 8, 16, 32, 64}},
                {"pairs", {{4, 32}, {8, 32}, {8, 64}}},
                {"sum_n", {16, 32, 64}},
                {"samples", 100000}};
  }
  if (name == "noise_stability") {
    return Json{{"n", {16, 32, 64}}, {"t_factors", {1, 2}}, {"samples", 100000}, {"alpha_samples", 100000}};
  }
  if (name == "separation") {
    return Json{{"k", {8, 16, 32}}, {"t", "hat"}, {"samples", 100000}, {"alpha_samples", 100000}};
  }
  if (name == "pivotal_sum") {
    return Json{{"pairs", {{4, 40}, {8, 80}}},
                {"t_factor", 1.0},
                {"samples", 20000},
                {"alpha_samples", 100000},
                {"max_cost", 2e13}};
  }
  if (name == "interlaced") {
    return Json{{"k", {2, 4}}, {"t_factor", 1.0}, {"samples", 5000}, {"alpha_samples", 50000}, {"max_cost", 1e12}};
  }
  if (name == "dynamic_disjoint") {
    return Json{{"n", {4, 8}}, {"t", 0.05}, {"samples", 2000}, {"budget_nodes", 200000}, {"max_unknown_rate", 0.01}};
  }
  std::string valid;
  for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw UsageError("unknown experiment '" + name + "'; valid names: " + valid);
}

namespace {

using Clock = std::chrono::steady_clock;

class Runner {
 public:
  Runner(const std::string& name, const RunOptions& options, const std::function<void(const Record&)>& sink)
      : name_(name), options_(options), sink_(sink), start_(Clock::now()) {
    if (options.replicas < 1) throw UsageError("replicas must be at least 1");
    if (options.pitch <= 0) throw UsageError("pitch must be positive");
    if (options.budget_seconds < 0) throw UsageError("budget must be non-negative");
    params_ = default_params(name);
    if (!options.params.is_object()) throw UsageError("experiment parameters must be a JSON object");
    for (auto it = options.params.begin(); it != options.params.end(); ++it) {
      if (!params_.contains(it.key())) {
        throw UsageError("unknown parameter '" + it.key() + "' for " + name + "; defaults: " + params_.dump());
      }
      params_[it.key()] = it.value();
    }
    Record config;
    config.name = name + "/config";
    config.seed = options.seed;
    config.params = Json{{"seed", options.seed},
                         {"replicas", options.replicas},
                         {"pitch", options.pitch.get_str()},
                         {"lattice_n", options.lattice_n},
                         {"budget_seconds", options.budget_seconds},
                         {"params", params_}};
    emit(config);
  }

  const Json& params() const { return params_; }
  double pitch() const { return options_.pitch.get_d(); }
  ExperimentOutput& out() { return out_; }

  long get_long(const char* key) const {
    const auto& v = params_.at(key);
    if (!v.is_number()) throw UsageError(std::string("parameter '") + key + "' must be a number");
    const double d = v.get<double>();
    if (d < 1 || d != std::floor(d)) throw UsageError(std::string("parameter '") + key + "' must be a positive integer");
    return static_cast<long>(d);
  }

  double get_double(const char* key) const {
    const auto& v = params_.at(key);
    if (!v.is_number()) throw UsageError(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
  }

  std::vector<int> get_ints(const char* key) const {
    const auto& v = params_.at(key);
    if (!v.is_array() || v.empty()) throw UsageError(std::string("parameter '") + key + "' must be a non-empty list");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer() || x.get<int>() < 1) {
        throw UsageError(std::string("parameter '") + key + "' must hold positive integers");
      }
      out.push_back(x.get<int>());
    }
    return out;
  }

  std::vector<std::pair<int, int>> get_pairs(const char* key) const {
    const auto& v = params_.at(key);
    if (!v.is_array() || v.empty()) throw UsageError(std::string("parameter '") + key + "' must be a non-empty list");
    std::vector<std::pair<int, int>> out;
    for (const auto& x : v) {
      if (!x.is_array() || x.size() != 2 || !x[0].is_number_integer() || !x[1].is_number_integer() ||
          x[0].get<int>() < 1 || x[1].get<int>() <= x[0].get<int>()) {
        throw UsageError(std::string("parameter '") + key + "' must hold pairs [k, n] with 1 <= k < n");
      }
      out.emplace_back(x[0].get<int>(), x[1].get<int>());
    }
    return out;
  }

  const Lattice& lattice(int extent) {
    if (options_.lattice_n > 0 && extent > options_.lattice_n) {
      throw UsageError("scale " + std::to_string(extent) + " exceeds the lattice cap " +
                       std::to_string(options_.lattice_n));
    }
    auto& slot = lattices_[extent];
    if (!slot) slot = std::make_unique<Lattice>(extent, options_.pitch);
    return *slot;
  }

  template <class Acc>
  Acc run(const std::string& tag, long samples, const std::function<Acc()>& make,
          const std::function<void(Rng&, Acc&)>& body) {
    check_budget();
    Acc acc = run_samples<Acc>(samples, options_.seed, salt_of(name_ + "/" + tag), options_.replicas, make, body);
    check_budget();
    return acc;
  }

  JointCounts joint(const std::string& tag, int events, long samples,
                    const std::function<void(Rng&, JointCounts&)>& body) {
    return run<JointCounts>(tag, samples, [events] { return JointCounts(events); }, body);
  }

  void emit(Record r) {
    r.seed = options_.seed;
    out_.records.push_back(r);
    if (sink_) sink_(out_.records.back());
  }

  void proportion(const std::string& quantity, const Json& params, const JointCounts& c, int i) {
    emit(proportion_record(name_ + "/" + quantity, params, c.hits(i), c.samples(), c.unknown(), options_.seed));
  }

  void value(const std::string& quantity, const Json& params, double v, Interval ci) {
    Record r;
    r.name = name_ + "/" + quantity;
    r.params = params;
    r.p_hat = v;
    r.wilson_lo = ci.lo;
    r.wilson_hi = ci.hi;
    r.seed = options_.seed;
    emit(r);
  }

  void fit(const std::string& quantity, const std::vector<double>& n, const std::vector<double>& p, double anchor) {
    const auto f = fit_exponent(n, p);
    Json params = {{"slope", f.slope},       {"intercept", f.intercept}, {"stderr_slope", f.stderr_slope},
                   {"points", f.points},     {"n", n}};
    if (!std::isnan(anchor)) params["anchor"] = anchor;
    value(quantity, params, f.slope, f.ci);
    line(fmt("%-22s slope %+.4f  95%% CI [%+.4f, %+.4f]%s", quantity.c_str(), f.slope, f.ci.lo, f.ci.hi,
             std::isnan(anchor) ? "" : fmt("  anchor %+.4f", anchor).c_str()));
  }

  /// Estimate of the four-arm probability from the origin at scale n.
  double alpha(int n, long samples, const std::string& tag) {
    const Lattice& lat = lattice(n);
    const FourArm four(lat, 0, n);
    const auto c = joint(tag + "/" + std::to_string(n), 1, samples,
                         [&](Rng& rng, JointCounts& a) { a.add({four(sample(lat, rng))}); });
    proportion("alpha", Json{{"n", n}}, c, 0);
    if (c.hits(0) == 0) throw UsageError("zero four-arm estimate at n = " + std::to_string(n) + "; raise samples");
    return c.p(0);
  }

  void line(const std::string& s) { out_.table.push_back(s); }

 private:
  void check_budget() const {
    if (options_.budget_seconds <= 0) return;
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    if (elapsed > options_.budget_seconds) {
      throw BudgetError(fmt("%s: time budget of %.0f s exceeded after %.0f s", name_.c_str(), options_.budget_seconds,
                            elapsed));
    }
  }

  std::string name_;
  RunOptions options_;
  std::function<void(const Record&)> sink_;
  Clock::time_point start_;
  Json params_;
  std::map<int, std::unique_ptr<Lattice>> lattices_;
  ExperimentOutput out_;
};

void theorem1(Runner& run) {
  const auto grid = run.get_ints("n");
  const long samples = run.get_long("samples");
  std::vector<double> ns, pb, rn;
  run.line("     n   P[black arm]  P[white arm]  P[both]       r_n      95% CI");
  for (int n : grid) {
    const Lattice& lat = run.lattice(n);
    const OneArm arm(lat, n);
    const auto c = run.joint("arms/" + std::to_string(n), 3, samples, [&](Rng& rng, JointCounts& a) {
      const auto w = sample(lat, rng);
      const bool b = arm(w, Colour::Black), wh = arm(w, Colour::White);
      a.add({b, wh, b && wh});
    });
    const Json p = {{"n", n}};
    run.proportion("one_arm_black", p, c, 0);
    run.proportion("one_arm_white", p, c, 1);
    run.proportion("two_arm_poly", p, c, 2);
    const auto r = c.log_linear({-1, -1, 1});
    run.value("ratio", p, r.value, r.ci);
    run.line(fmt("%6d   %.6f      %.6f      %.6f   %.4f   [%.4f, %.4f]", n, c.p(0), c.p(1), c.p(2), r.value, r.ci.lo,
                 r.ci.hi));
    ns.push_back(n);
    pb.push_back(c.p(0));
    rn.push_back(r.value);
  }
  if (ns.size() >= 3) {
    run.fit("fit_one_arm", ns, pb, -5.0 / 48);
    run.fit("fit_ratio", ns, rn, std::nan(""));
  }
}

void theorem2(Runner& run) {
  const auto grid = run.get_ints("n");
  const long samples = run.get_long("samples");
  std::vector<double> ns, poly, sn;
  run.line("     n   P[2 disjoint black]  P[black and white]   s_n      95% CI");
  for (int n : grid) {
    const Lattice& lat = run.lattice(n);
    const OneArm arm(lat, n);
    const DisjointArms two(lat, n);
    const auto c = run.joint("arms/" + std::to_string(n), 2, samples, [&](Rng& rng, JointCounts& a) {
      const auto w = sample(lat, rng);
      a.add({two.static_two_black(w), arm(w, Colour::Black) && arm(w, Colour::White)});
    });
    const Json p = {{"n", n}};
    run.proportion("disjoint_two_black", p, c, 0);
    run.proportion("two_arm_poly", p, c, 1);
    const auto s = c.log_linear({1, -1});
    run.value("ratio", p, s.value, s.ci);
    run.line(fmt("%6d   %.6f             %.6f             %.4f   [%.4f, %.4f]", n, c.p(0), c.p(1), s.value, s.ci.lo,
                 s.ci.hi));
    ns.push_back(n);
    poly.push_back(c.p(1));
    sn.push_back(s.value);
  }
  if (ns.size() >= 3) {
    run.fit("fit_two_arm_poly", ns, poly, -0.25);
    run.fit("fit_ratio", ns, sn, std::nan(""));
  }
}

void rsw(Runner& run) {
  const auto grid = run.get_ints("n");
  const auto lambdas = run.get_ints("lambda");
  const long samples = run.get_long("samples");
  run.line("  lambda      n   P[black left-right crossing]   95% CI");
  for (int lambda : lambdas) {
    for (int n : grid) {
      // [0, lambda n] x [0, n], translated to be centred at the origin.
      const Rational half_w = make_rational(static_cast<long>(lambda) * n, 2), half_h = make_rational(n, 2);
      const int extent = (lambda * n + 1) / 2;
      const Lattice& lat = run.lattice(extent);
      const Crossing cross(lat, Region::rect(-half_w, half_w, -half_h, half_h), Direction::LeftRight);
      const auto c = run.joint("crossing/" + std::to_string(lambda) + "/" + std::to_string(n), 1, samples,
                               [&](Rng& rng, JointCounts& a) { a.add({cross(sample(lat, rng), Colour::Black)}); });
      run.proportion("crossing", Json{{"lambda", lambda}, {"n", n}}, c, 0);
      const auto w = wilson(c.hits(0), c.samples());
      run.line(fmt("  %6d %6d   %.4f                         [%.4f, %.4f]", lambda, n, c.p(0), w.lo, w.hi));
    }
  }
}

void four_arm(Runner& run) {
  const auto scales = run.get_ints("scales");
  const auto pairs = run.get_pairs("pairs");
  const auto sum_scales = run.get_ints("sum_n");
  const long samples = run.get_long("samples");
  std::map<int, std::pair<double, long>> alpha;
  run.line("     n   alpha_n");
  for (int n : scales) {
    alpha[n] = {run.alpha(n, samples, "alpha"), samples};
    run.line(fmt("%6d   %.6f", n, alpha[n].first));
  }
  run.line("     k      n   alpha_{k,n}   alpha_k alpha_{k,n} / alpha_n   95% CI");
  for (auto [k, n] : pairs) {
    if (!alpha.count(k) || !alpha.count(n)) {
      throw UsageError("four_arm: pair scales must appear in 'scales'");
    }
    const Lattice& lat = run.lattice(n);
    const FourArm four(lat, k, n);
    const auto c = run.joint("annulus/" + std::to_string(k) + "/" + std::to_string(n), 1, samples,
                             [&](Rng& rng, JointCounts& a) { a.add({four(sample(lat, rng))}); });
    const Json p = {{"k", k}, {"n", n}};
    run.proportion("alpha_annulus", p, c, 0);
    const auto r = independent_log_linear({alpha[k].first, c.p(0), alpha[n].first},
                                          {alpha[k].second, c.samples(), alpha[n].second}, {1, 1, -1});
    run.value("quasi_ratio", p, r.value, r.ci);
    run.line(fmt("%6d %6d   %.6f      %.4f                        [%.4f, %.4f]", k, n, c.p(0), r.value, r.ci.lo,
                 r.ci.hi));
  }
  std::vector<std::pair<int, double>> points;
  for (const auto& [s, v] : alpha) points.emplace_back(s, v.first);
  run.line("     n   sum_{i<=n} i alpha_i / (n^2 alpha_n)");
  for (int n : sum_scales) {
    if (!alpha.count(n)) throw UsageError("four_arm: sum_n scales must appear in 'scales'");
    double sum = 0;
    for (int i = 1; i <= n; ++i) sum += i * interpolate_geometric(points, i);
    const double v = sum / (static_cast<double>(n) * n * alpha[n].first);
    run.value("scale_sum_ratio", Json{{"n", n}, {"interpolation", "geometric"}}, v, {v, v});
    run.line(fmt("%6d   %.4f", n, v));
  }
  std::vector<double> ns, as;
  for (const auto& [s, v] : alpha) {
    if (s >= 8) {
      ns.push_back(s);
      as.push_back(v.first);
    }
  }
  if (ns.size() >= 3) run.fit("fit_alpha", ns, as, -1.25);
}

void noise_stability(Runner& run) {
  const auto grid = run.get_ints("n");
  const long samples = run.get_long("samples"), alpha_samples = run.get_long("alpha_samples");
  std::vector<double> factors;
  for (const auto& f : run.params().at("t_factors")) {
    if (!f.is_number() || f.get<double>() < 0) throw UsageError("t_factors must be non-negative numbers");
    factors.push_back(f.get<double>());
  }
  run.line("     n   alpha_n    t_hat      t          P[both]     ratio    95% CI");
  for (int n : grid) {
    const double a = run.alpha(n, alpha_samples, "alpha");
    const double t_hat = noise_scale(n / run.pitch(), a);
    run.value("t_hat", Json{{"n", n}, {"alpha", a}}, t_hat, {t_hat, t_hat});
    const Lattice& lat = run.lattice(n);
    const FourArm four(lat, 0, n);
    for (double f : factors) {
      const double t = std::min(1.0, f * t_hat);
      const auto c = run.joint(fmt("dynamic/%d/%.17g", n, f), 2, samples, [&](Rng& rng, JointCounts& acc) {
        const auto w = sample(lat, rng);
        const bool now = four(w);
        // The noised copy only matters when the first one has four arms, but
        // the noise is always drawn so that streams stay aligned.
        const auto wt = apply_noise(w, t, rng);
        acc.add({now, now && four(wt)});
      });
      const Json p = {{"n", n}, {"t", t}, {"t_factor", f}};
      run.proportion("both", p, c, 1);
      if (c.hits(1) == 0) throw UsageError("noise_stability: no joint four-arm sample; raise samples");
      const auto r = c.log_linear({-1, 1});
      run.value("ratio", p, r.value, r.ci);
      run.line(fmt("%6d   %.6f   %.6f   %.6f   %.6f   %.4f   [%.4f, %.4f]", n, a, t_hat, t, c.p(1), r.value, r.ci.lo,
                   r.ci.hi));
    }
  }
}

void separation(Runner& run) {
  const auto grid = run.get_ints("k");
  const long samples = run.get_long("samples"), alpha_samples = run.get_long("alpha_samples");
  const auto& t_param = run.params().at("t");
  if (!(t_param.is_number() || (t_param.is_string() && t_param.get<std::string>() == "hat"))) {
    throw UsageError("separation: t must be a number or \"hat\"");
  }
  std::vector<double> ks, ratios;
  run.line("     k   t          phi_k      phi_k^sep   ratio    95% CI");
  for (int k : grid) {
    double t = 0;
    if (t_param.is_number()) {
      t = t_param.get<double>();
      if (!(t >= 0 && t <= 1)) throw UsageError("separation: t must lie in [0, 1]");
    } else {
      t = noise_scale(k / run.pitch(), run.alpha(k, alpha_samples, "alpha"));
    }
    const Lattice& lat = run.lattice(3 * k);
    const OneArm arm(lat, k);
    const SeparatedArm sep(lat, k, 3 * k, SeparatedVariant::Short);
    const auto c = run.joint(fmt("phi/%d/%.17g", k, t), 2, samples, [&](Rng& rng, JointCounts& a) {
      const auto w = sample(lat, rng);
      const auto wt = apply_noise(w, t, rng);
      a.add({arm(w, Colour::Black) && arm(wt, Colour::White), sep(w, Colour::Black) && sep(wt, Colour::White)});
    });
    const Json p = {{"k", k}, {"t", t}, {"variant", "short"}};
    run.proportion("phi", p, c, 0);
    run.proportion("phi_sep", p, c, 1);
    if (c.hits(1) == 0) throw UsageError("separation: no separated sample; raise samples");
    const auto r = c.log_linear({-1, 1});
    run.value("ratio", p, r.value, r.ci);
    run.line(fmt("%6d   %.6f   %.6f   %.6f    %.4f   [%.4f, %.4f]", k, t, c.p(0), c.p(1), r.value, r.ci.lo, r.ci.hi));
    ks.push_back(k);
    ratios.push_back(r.value);
  }
  if (ks.size() >= 3) run.fit("fit_ratio", ks, ratios, std::nan(""));
}

struct PivotalAcc {
  JointCounts phi{1};
  MeanAccumulator sum;
  std::vector<long> per_x;
  long negative = 0;
  long mask_mismatch = 0;

  void merge(const PivotalAcc& o) {
    phi.merge(o.phi);
    sum.merge(o.sum);
    for (std::size_t i = 0; i < per_x.size(); ++i) per_x[i] += o.per_x[i];
    negative += o.negative;
    mask_mismatch += o.mask_mismatch;
  }
};

void pivotal_sum(Runner& run) {
  const auto pairs = run.get_pairs("pairs");
  const long samples = run.get_long("samples"), alpha_samples = run.get_long("alpha_samples");
  const double t_factor = run.get_double("t_factor"), max_cost = run.get_double("max_cost");
  if (t_factor < 1 || t_factor > 2) throw UsageError("pivotal_sum: t_factor must lie in [1, 2]");
  run.line("     k      n   t          phi_n(t)   sum        ratio to k^2 alpha_k phi_n(t)   95% CI");
  for (auto [k, n] : pairs) {
    if (10 * k > n) throw UsageError("pivotal_sum: need 10k <= n");
    const Lattice& lat = run.lattice(n);
    const auto ring = lat.hexes_meeting(Region::annulus(k, 3 * k));
    const double cost = static_cast<double>(samples) * static_cast<double>(ring.size()) * lat.size();
    if (cost > max_cost) {
      throw BudgetError(fmt("pivotal_sum: estimated cost %.3g exceeds max_cost %.3g", cost, max_cost));
    }
    const double a = run.alpha(k, alpha_samples, "alpha");
    const double t = t_factor * noise_scale(k / run.pitch(), a);
    const OneArm arm(lat, n);
    const auto f = make_event(lat, ArmSpec::one_arm(Colour::Black, n));
    const auto g = make_event(lat, ArmSpec::one_arm(Colour::White, n));
    const auto acc = run.run<PivotalAcc>(
        fmt("sum/%d/%d/%.17g", k, n, t), samples,
        [&] {
          PivotalAcc p;
          p.per_x.assign(ring.size(), 0);
          return p;
        },
        [&](Rng& rng, PivotalAcc& p) {
          const auto w = sample(lat, rng);
          const auto wt = apply_noise(w, t, rng);
          p.phi.add({arm(w, Colour::Black) && arm(wt, Colour::White)});
          const auto mf = arm.pivotal_mask(w, Colour::Black);
          const auto mg = arm.pivotal_mask(wt, Colour::White);
          long total = 0;
          for (std::size_t j = 0; j < ring.size(); ++j) {
            const int x = ring[j];
            if (!mf[x] || !mg[x]) continue;
            // Summand -grad f(w) grad g(wt), evaluated by forcing the bit.
            const int gf = pivotal_grad(f, w, x), gg = pivotal_grad(g, wt, x);
            const long s = -static_cast<long>(gf) * gg;
            p.mask_mismatch += gf == 0 || gg == 0;
            p.negative += s < 0;
            p.per_x[j] += s;
            total += s;
          }
          p.sum.add(static_cast<double>(total));
        });
    const Json p = {{"k", k}, {"n", n}, {"t", t}};
    run.proportion("phi", p, acc.phi, 0);
    Record sum;
    sum.name = "pivotal_sum/sum";
    sum.params = p;
    sum.params["annulus_hexagons"] = ring.size();
    sum.params["negative_summands"] = acc.negative;
    sum.params["mask_mismatch"] = acc.mask_mismatch;
    sum.successes = static_cast<long>(acc.sum.sum());
    sum.samples = acc.sum.samples();
    sum.p_hat = acc.sum.mean();
    sum.wilson_lo = acc.sum.ci().lo;
    sum.wilson_hi = acc.sum.ci().hi;
    run.emit(sum);
    long min_x = acc.per_x.empty() ? 0 : acc.per_x[0];
    for (long v : acc.per_x) min_x = std::min(min_x, v);
    run.value("min_summand", p, static_cast<double>(min_x) / samples, {static_cast<double>(min_x) / samples,
                                                                        static_cast<double>(min_x) / samples});
    const double phi = acc.phi.p(0), mean = acc.sum.mean();
    if (!(phi > 0) || !(mean > 0)) throw UsageError("pivotal_sum: zero estimate; raise samples");
    const double kk = k / run.pitch();
    const double value = mean / (kk * kk * a * phi);
    // Delta method treating the three estimates as independent.
    const double se_mean = (acc.sum.ci().hi - acc.sum.ci().lo) / (2 * kZ95);
    const double var = std::pow(se_mean / mean, 2) + (1 - a) / (alpha_samples * a) + (1 - phi) / (samples * phi);
    const double sd = std::sqrt(var);
    run.value("ratio", p, value, {value * std::exp(-kZ95 * sd), value * std::exp(kZ95 * sd)});
    run.line(fmt("%6d %6d   %.6f   %.6f   %.4f     %.4f                           [%.4f, %.4f]", k, n, t, phi, mean,
                 value, value * std::exp(-kZ95 * sd), value * std::exp(kZ95 * sd)));
  }
}

void interlaced(Runner& run) {
  const auto grid = run.get_ints("k");
  const long samples = run.get_long("samples"), alpha_samples = run.get_long("alpha_samples");
  const double t_factor = run.get_double("t_factor"), max_cost = run.get_double("max_cost");
  if (t_factor < 1 || t_factor > 2) throw UsageError("interlaced: t_factor must lie in [1, 2]");
  run.line("     k   t          P[E_k(x,y) twice]  / alpha_k^2   P[noised event]  / alpha_k");
  for (int k : grid) {
    const Lattice& lat = run.lattice(7 * k);
    const Interlaced il(lat, k);
    const double cost = static_cast<double>(samples) * static_cast<double>(il.b_box_prime().size()) * lat.size();
    if (cost > max_cost) {
      throw BudgetError(fmt("interlaced: estimated cost %.3g exceeds max_cost %.3g", cost, max_cost));
    }
    const double a = run.alpha(k, alpha_samples, "alpha");
    const double t = t_factor * noise_scale(k / run.pitch(), a);
    const int x = il.x_centre(), y = il.y_centre();
    const auto c = run.joint(fmt("events/%d/%.17g", k, t), 2, samples, [&](Rng& rng, JointCounts& acc) {
      const auto w = sample(lat, rng);
      const auto wt = apply_noise(w, t, rng);
      acc.add({il.event(w, x, y) && il.event(wt, x, y), il.noised_event(w, wt, x)});
    });
    const Json p = {{"k", k}, {"t", t}, {"x", to_string(lat.hex(x))}, {"y", to_string(lat.hex(y))}};
    run.proportion("both", p, c, 0);
    run.proportion("noised", p, c, 1);
    double r1 = 0, r2 = 0;
    if (c.hits(0) > 0) {
      const auto r = independent_log_linear({c.p(0), a}, {samples, alpha_samples}, {1, -2});
      run.value("ratio_both", p, r.value, r.ci);
      r1 = r.value;
    }
    if (c.hits(1) > 0) {
      const auto r = independent_log_linear({c.p(1), a}, {samples, alpha_samples}, {1, -1});
      run.value("ratio_noised", p, r.value, r.ci);
      r2 = r.value;
    }
    run.line(fmt("%6d   %.6f   %.6f           %.4f        %.6f         %.4f", k, t, c.p(0), r1, c.p(1), r2));
  }
}

void dynamic_disjoint(Runner& run) {
  const auto grid = run.get_ints("n");
  const long samples = run.get_long("samples"), budget = run.get_long("budget_nodes");
  const double t = run.get_double("t"), max_unknown = run.get_double("max_unknown_rate");
  if (!(t >= 0 && t <= 1)) throw UsageError("dynamic_disjoint: t must lie in [0, 1]");
  run.line("     n   t          P[disjoint arms in omega and omega_t]   unknown");
  for (int n : grid) {
    const Lattice& lat = run.lattice(n);
    const DisjointArms d(lat, n);
    const auto c = run.joint(fmt("psi/%d/%.17g", n, t), 1, samples, [&](Rng& rng, JointCounts& acc) {
      const auto w = sample(lat, rng);
      const auto wt = apply_noise(w, t, rng);
      const auto r = d.dynamic(w, wt, budget);
      if (r == Ternary::Unknown) {
        acc.add_unknown();
      } else {
        acc.add({r == Ternary::Yes});
      }
    });
    run.proportion("psi", Json{{"n", n}, {"t", t}}, c, 0);
    const double rate = static_cast<double>(c.unknown()) / static_cast<double>(samples);
    if (rate > max_unknown) run.out().valid = false;
    run.line(fmt("%6d   %.6f   %.6f                                %ld%s", n, t, c.p(0), c.unknown(),
                 rate > max_unknown ? "  (invalid: too many Unknown)" : ""));
  }
}

}  // namespace

ExperimentOutput run_experiment(const std::string& name, const RunOptions& options,
                                const std::function<void(const Record&)>& sink) {
  Runner run(name, options, sink);
  try {
    if (name == "theorem1") theorem1(run);
    if (name == "theorem2") theorem2(run);
    if (name == "rsw") rsw(run);
    if (name == "four_arm") four_arm(run);
    if (name == "noise_stability") noise_stability(run);
    if (name == "separation") separation(run);
    if (name == "pivotal_sum") pivotal_sum(run);
    if (name == "interlaced") interlaced(run);
    if (name == "dynamic_disjoint") dynamic_disjoint(run);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(name + ": bad parameter: " + e.what());
  }
  return std::move(run.out());
}

}  // namespace qcorr
