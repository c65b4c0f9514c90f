#include "qcorr/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "qcorr/errors.hpp"
#include "qcorr/noise_poly.hpp"

namespace qcorr {

namespace {

constexpr long double kQuadratureTol = 1e-9;

struct Instance {
  int n;
  std::uint64_t seed;
};

// Draws instance i of a check: a dimension in [lo, hi] and a fresh seed.
class Draws {
 public:
  Draws(std::uint64_t seed, const std::string& check) : rng_(seed ^ std::hash<std::string>{}(check)) {}
  Instance next(int lo, int hi) {
    const int n = std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng_);
    return {n, rng_()};
  }

 private:
  std::mt19937_64 rng_;
};

CubeFunction complement_arg(const CubeFunction& f) {
  const std::uint64_t mask = f.size() - 1;
  return CubeFunction::from(f.n(), [&](std::uint64_t x) { return f(x ^ mask); });
}

// Non-negative increasing function: a weighted sum of increasing events.
CubeFunction random_increasing(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rational> values(std::uint64_t{1} << n, Rational(0));
  for (int j = 0; j < 3; ++j) {
    const auto e = random_monotone(n, rng());
    const int w = std::uniform_int_distribution<int>(1, 3)(rng);
    for (std::uint64_t x = 0; x < values.size(); ++x) values[x] += w * e(x);
  }
  return CubeFunction(n, std::move(values));
}

CubeFunction random_kind(int n, std::uint64_t seed, int kind) {
  switch (kind) {
    case 0: return random_increasing(n, seed);
    case 1: return complement_arg(random_increasing(n, seed));
    default: return random_nonnegative(n, seed);
  }
}

BiFunction as_bi(int n, const CubeFunction& doubled) {
  return BiFunction(n, doubled.values());
}

// F(x, y) = M_a(z): z packs the S∪T bits of x and y with T bits flipped, a
// packs the private bits, and each M_a is an increasing event.
BiFunction random_measurable(int n, const std::vector<int>& priv, const std::vector<int>& s,
                             const std::vector<int>& t, std::mt19937_64& rng) {
  std::vector<int> shared = s;
  shared.insert(shared.end(), t.begin(), t.end());
  const int dz = 2 * static_cast<int>(shared.size());
  const int da = 2 * static_cast<int>(priv.size());
  // With no shared coordinates each M_a is a constant.
  std::vector<std::vector<Rational>> tables;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << da); ++a) {
    tables.push_back(dz > 0 ? random_monotone(dz, rng()).values() : std::vector<Rational>{Rational(rng() & 1)});
  }
  const std::uint64_t flip_x = [&] {
    std::uint64_t m = 0;
    for (std::size_t j = s.size(); j < shared.size(); ++j) m |= std::uint64_t{1} << j;
    return m;
  }();
  const std::uint64_t flip = flip_x | (flip_x << shared.size());
  auto pack = [](const std::vector<int>& coords, std::uint64_t x, std::uint64_t y) {
    std::uint64_t out = 0;
    const std::size_t k = coords.size();
    for (std::size_t j = 0; j < k; ++j) {
      out |= ((x >> (coords[j] - 1)) & 1) << j;
      out |= ((y >> (coords[j] - 1)) & 1) << (j + k);
    }
    return out;
  };
  return BiFunction::from(n, [&](std::uint64_t x, std::uint64_t y) {
    return tables[pack(priv, x, y)][pack(shared, x, y) ^ flip];
  });
}

std::string where(int i, const Instance& inst) {
  std::ostringstream os;
  os << "instance " << i << " (n=" << inst.n << ", seed=" << inst.seed << ")";
  return os.str();
}

class Suite {
 public:
  Suite(const VerifyOptions& o, const std::function<void(const CheckSummary&)>& progress)
      : o_(o), progress_(progress) {}

  long count(long base) const { return std::max(1L, std::lround(base * o_.scale)); }
  int cap(int c) const { return std::min(c, o_.n_max); }

  // body returns an empty string on success, otherwise what failed.
  void run(const std::string& name, long instances, int lo, int hi,
           const std::function<std::string(const Instance&, CheckSummary&)>& body) {
    CheckSummary s;
    s.name = name;
    const auto start = std::chrono::steady_clock::now();
    Draws draws(o_.seed, name);
    for (long i = 0; i < instances; ++i) {
      const Instance inst = draws.next(std::min(lo, hi), hi);
      std::string failure;
      try {
        failure = body(inst, s);
      } catch (const std::exception& e) {
        failure = e.what();
      }
      ++s.instances;
      if (!failure.empty()) {
        if (s.failures++ == 0) s.first_failure = failure + " at " + where(static_cast<int>(i), inst);
      }
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (progress_) progress_(s);
    out_.push_back(std::move(s));
  }

  std::vector<CheckSummary> take() { return std::move(out_); }

 private:
  const VerifyOptions& o_;
  const std::function<void(const CheckSummary&)>& progress_;
  std::vector<CheckSummary> out_;
};

void note_quadrature(CheckSummary& s, long double err) {
  ++s.quadrature_instances;
  s.max_quadrature_error = std::max(s.max_quadrature_error, err);
}

void cube_suite(Suite& suite) {
  suite.run("uniform_marginals", suite.cap(8), 1, suite.cap(8), [](const Instance& in, CheckSummary&) {
    return check_lemma1(in.n) ? "" : std::string("marginal of the noised copy is not uniform");
  });
  suite.run("interpolation_identity", suite.count(100), 1, suite.cap(6), [](const Instance& in, CheckSummary&) {
    const auto raw = random_nonnegative(2 * in.n, in.seed, 6);
    const auto F = BiFunction::from(in.n, [&](std::uint64_t x, std::uint64_t y) -> Rational {
      return raw(x | (y << in.n)) - Rational(3);
    });
    return check_interpolation_identity(F) ? "" : std::string("derivative differs from the Laplacian sum");
  });
  suite.run("self_correlation_decreasing", suite.count(100), 1, suite.cap(8),
            [](const Instance& in, CheckSummary&) {
              return check_remark4(random_nonnegative(in.n, in.seed)) ? ""
                                                                      : std::string("E[f(ω)f(ω_t)] increases in t");
            });
}

void noise_suite(Suite& suite) {
  suite.run("harris_interpolation", suite.count(200), 1, suite.cap(8), [](const Instance& in, CheckSummary& s) {
    std::mt19937_64 rng(in.seed);
    const int kf = static_cast<int>(rng() % 3), kg = static_cast<int>(rng() % 3);
    for (;;) {
      const auto f = random_kind(in.n, rng(), kf);
      const auto g = random_kind(in.n, rng(), kg);
      if (expectation(f) == 0 || expectation(g) == 0) continue;
      const auto rep = verify_prop1(f, g, 129, static_cast<double>(kQuadratureTol));
      if (!rep.endpoint_zero) return std::string("phi(0) differs from E[fg]");
      if (!rep.endpoint_half) return std::string("phi(1/2) differs from E[f]E[g]");
      if (!rep.ode_identity) return std::string("phi' differs from the gradient sum");
      if (rep.quadrature_applicable) {
        note_quadrature(s, rep.quadrature_error);
        if (!rep.quadrature_ok) return std::string("quadrature of the log-derivative misses log(E[fg]/(E[f]E[g]))");
      }
      return std::string();
    }
  });
  suite.run("holley_noised", suite.count(100), 1, suite.cap(5), [](const Instance& in, CheckSummary&) {
    std::mt19937_64 rng(in.seed);
    auto F = as_bi(in.n, random_monotone(2 * in.n, rng()));
    auto G = as_bi(in.n, random_monotone(2 * in.n, rng()));
    if (rng() & 1) {
      F = as_bi(in.n, complement_arg(CubeFunction(2 * in.n, F.values())));
      G = as_bi(in.n, complement_arg(CubeFunction(2 * in.n, G.values())));
    }
    return check_holley_noised(F, G) ? "" : std::string("E[FG] < E[F]E[G] under the noised pair");
  });
  suite.run("dynamical_fkg", suite.count(100), 2, suite.cap(5), [](const Instance& in, CheckSummary&) {
    std::mt19937_64 rng(in.seed);
    CoordinatePartition part;
    for (int i = 1; i <= in.n; ++i) {
      switch (rng() % 5) {
        case 0: if (part.a.empty()) part.a.push_back(i); break;
        case 1: if (part.b.empty()) part.b.push_back(i); break;
        case 2: part.s.push_back(i); break;
        case 3: part.t.push_back(i); break;
        default: break;
      }
    }
    const auto F = random_measurable(in.n, part.a, part.s, part.t, rng);
    const auto G = random_measurable(in.n, part.b, part.s, part.t, rng);
    return check_prop3(part, F, G) ? "" : std::string("E[FG] < E[F]E[G] for the constrained pair");
  });
}

void reimer_suite(Suite& suite, const DOperator& d_impl) {
  suite.run("disjoint_witness", suite.count(200), 1, suite.cap(10), [](const Instance& in, CheckSummary&) {
    std::mt19937_64 rng(in.seed);
    const auto a = random_monotone(in.n, rng()), b = random_monotone(in.n, rng());
    return check_lemma2(a, b) ? "" : std::string("disjoint occurrence on (x, x̄) differs from x ∈ A ∩ B̄");
  });
  suite.run("reimer_inequality", suite.count(500), 1, suite.cap(10), [](const Instance& in, CheckSummary&) {
    std::mt19937_64 rng(in.seed);
    const auto a = random_event(in.n, rng()), b = random_event(in.n, rng());
    return check_reimer(a, b) ? "" : std::string("P[A∘B] > P[A ∩ B̄]");
  });
  suite.run("strong_bk", suite.count(100), 1, suite.cap(6), [](const Instance& in, CheckSummary&) {
    std::mt19937_64 rng(in.seed);
    const auto a = random_monotone(in.n, rng()), b = random_monotone(in.n, rng());
    return check_strong_bk(a, b) ? "" : std::string("P[A∘B] <= psi(1/2) <= P[A]P[B] fails");
  });
  suite.run("dual_reimer", suite.count(100), 1, suite.cap(6), [](const Instance& in, CheckSummary&) {
    std::mt19937_64 rng(in.seed);
    const auto a = random_event(in.n, rng()), b = random_event(in.n, rng());
    return check_dual_reimer(a, b) ? "" : std::string("psi(1/2) > P[A ∩ B̄]");
  });
  suite.run("reimer_interpolation", suite.count(100), 1, suite.cap(6),
            [&d_impl](const Instance& in, CheckSummary& s) {
              std::mt19937_64 rng(in.seed);
              for (;;) {
                const auto a = random_monotone(in.n, rng()), b = random_monotone(in.n, rng());
                if (expectation(box_event(a, b)) == 0) continue;
                const auto rep = check_prop2(a, b, 129, static_cast<double>(kQuadratureTol), d_impl);
                if (!rep.pointwise_identity) {
                  return "pointwise identity -∇_ii F = D_i F fails at coordinate " +
                         std::to_string(rep.failing_coordinate);
                }
                if (!rep.endpoint_zero) return std::string("psi(0) differs from P[A∘B]");
                if (!rep.endpoint_one) return std::string("psi(1) differs from P[A ∩ B̄]");
                if (!rep.ode_identity) return std::string("psi' differs from the D_i sum");
                if (!rep.j_nonnegative) return std::string("J < 0");
                note_quadrature(s, rep.quadrature_error);
                if (!rep.quadrature_ok) return std::string("quadrature of J misses log(psi(1)/psi(0))");
                return std::string();
              }
            });
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"cube", "reimer", "noise", "all"};
  return names;
}

Rational mutant_d_op(const BiFunction& F, int i, const BitConfig& x, const BitConfig& y) {
  return -d_op(F, i, x, y);
}

std::vector<CheckSummary> run_verify(const VerifyOptions& options,
                                     const std::function<void(const CheckSummary&)>& progress) {
  const auto& names = verify_suites();
  if (std::find(names.begin(), names.end(), options.suite) == names.end()) {
    throw UsageError("unknown suite '" + options.suite + "' (expected cube, reimer, noise or all)");
  }
  if (options.n_max < 1 || options.n_max > kMaxBiDim) {
    throw UsageError("n_max must be in [1, " + std::to_string(kMaxBiDim) + "]");
  }
  if (!(options.scale > 0)) throw UsageError("scale must be positive");
  Suite suite(options, progress);
  const bool all = options.suite == "all";
  if (all || options.suite == "cube") cube_suite(suite);
  if (all || options.suite == "noise") noise_suite(suite);
  if (all || options.suite == "reimer") reimer_suite(suite, options.d_impl);
  return suite.take();
}

}  // namespace qcorr
