#include <cmath>
#include <random>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/stats.hpp"

using namespace qcorr;

TEST_CASE("wilson interval") {
  const auto half = wilson(5, 10);
  CHECK(half.lo == doctest::Approx(0.236593).epsilon(1e-5));
  CHECK(half.hi == doctest::Approx(0.763407).epsilon(1e-5));
  const auto none = wilson(0, 100);
  CHECK(none.lo == 0);
  CHECK(none.hi == doctest::Approx(0.036995).epsilon(1e-4));
  CHECK(wilson(100, 100).hi == 1);
  for (long s = 0; s <= 50; ++s) {
    const auto w = wilson(s, 50);
    const double p = s / 50.0;
    CHECK(w.lo <= p);
    CHECK(p <= w.hi);
  }
  CHECK_THROWS_AS(wilson(1, 0), UsageError);
  CHECK_THROWS_AS(wilson(3, 2), UsageError);
}

TEST_CASE("wilson coverage") {
  std::mt19937_64 gen(4);
  std::bernoulli_distribution coin(0.03);
  int covered = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    long s = 0;
    for (int i = 0; i < 400; ++i) s += coin(gen);
    const auto w = wilson(s, 400);
    covered += w.lo <= 0.03 && 0.03 <= w.hi;
  }
  CHECK(covered >= 1860);
}

TEST_CASE("exponent fits") {
  const std::vector<double> n = {8, 16, 32, 64};
  std::vector<double> p;
  for (double x : n) p.push_back(std::pow(x, -0.5));
  const auto f = fit_exponent(n, p);
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(f.stderr_slope == doctest::Approx(0).epsilon(1e-12));
  CHECK(f.points == 4);
  const auto flat = fit_exponent(n, {0.3, 0.3, 0.3, 0.3});
  CHECK(flat.slope == doctest::Approx(0).epsilon(1e-12));
  // Noisy data: the interval uses Student's t with two degrees of freedom.
  const auto noisy = fit_exponent(n, {1.0, 0.5, 0.3, 0.1});
  CHECK(noisy.ci.hi - noisy.slope == doctest::Approx(4.303 * noisy.stderr_slope));
  CHECK_THROWS_AS(fit_exponent({1, 2}, {0.5, 0.4}), UsageError);
  CHECK_THROWS_AS(fit_exponent(n, {0.1, 0, 0.1, 0.1}), UsageError);
  CHECK(student_t975(1) == doctest::Approx(12.706));
  CHECK(student_t975(200) == doctest::Approx(1.972).epsilon(1e-3));
}

TEST_CASE("joint counts and delta method") {
  std::mt19937_64 gen(11);
  std::bernoulli_distribution a(0.4), b(0.5);
  JointCounts all(3), first(3), second(3);
  for (int i = 0; i < 20000; ++i) {
    const bool x = a(gen), y = b(gen);
    const std::vector<bool> o = {x, y, x && y};
    all.add(o);
    (i < 7000 ? first : second).add(o);
  }
  first.merge(second);
  for (int i = 0; i < 3; ++i) {
    CHECK(first.hits(i) == all.hits(i));
    for (int j = 0; j < 3; ++j) CHECK(first.joint(i, j) == all.joint(i, j));
  }
  CHECK(all.joint(0, 1) == all.hits(2));
  // P[A and B] / (P[A] P[B]) = 1 for independent events.
  const auto r = all.log_linear({-1, -1, 1});
  CHECK(r.ci.lo < 1);
  CHECK(r.ci.hi > 1);
  CHECK(r.ci.hi - r.ci.lo < 0.1);
  // Positive correlation between a subset and its superset shrinks the interval.
  const auto sub = all.log_linear({-1, 0, 1});
  const auto ind = independent_log_linear({all.p(0), all.p(2)}, {all.samples(), all.samples()}, {-1, 1});
  CHECK(sub.value == doctest::Approx(ind.value));
  CHECK(sub.ci.hi - sub.ci.lo < ind.ci.hi - ind.ci.lo);
  JointCounts empty(1);
  empty.add({false});
  CHECK_THROWS_AS(empty.log_linear({1}), UsageError);
}

TEST_CASE("mean accumulator") {
  MeanAccumulator m, a, b;
  for (int i = 0; i < 100; ++i) {
    m.add(i % 4);
    (i < 30 ? a : b).add(i % 4);
  }
  a.merge(b);
  CHECK(a.sum() == m.sum());
  CHECK(m.mean() == doctest::Approx(1.5));
  CHECK(m.ci().lo < 1.5);
  CHECK(m.ci().hi > 1.5);
}
