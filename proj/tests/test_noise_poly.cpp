#include <cmath>
#include <random>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/noise_poly.hpp"

using namespace qcorr;

namespace {

BiFunction random_bifunction(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-3, 5);
  return BiFunction::from(n, [&](auto, auto) { return make_rational(dist(rng), 1 + (dist(rng) & 3)); });
}

CubeFunction first_coordinate(int n) {
  return CubeFunction::from(n, [](std::uint64_t x) { return Rational(x & 1); });
}

// Expectation of F(ω, ω_t) at a fixed rational t by summing over (ω, η).
Rational coupled_expectation(const BiFunction& F, const Rational& t) {
  const int n = F.n();
  Rational acc = 0;
  for (std::uint64_t x = 0; x < F.side(); ++x) {
    for (std::uint64_t m = 0; m < F.side(); ++m) {
      Rational w = inv_pow2(n);
      for (int j = 0; j < n; ++j) w *= ((m >> j) & 1) ? t : Rational(1 - t);
      acc += w * F(x, x ^ m);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("RationalPoly arithmetic") {
  const RationalPoly p({1, -2, 1});  // (1 - t)^2
  CHECK(p(Rational(1)) == 0);
  CHECK(p.derivative() == RationalPoly({-2, 2}));
  CHECK((p - p).is_zero());
  CHECK(RationalPoly({1, 0, 0}).degree() == 0);
  CHECK(RationalPoly::linear(1, -1) * RationalPoly::linear(1, -1) == p);
}

TEST_CASE("joint_poly n = 1 corner") {
  const auto F = BiFunction::from(1, [](auto x, auto y) { return Rational(x == 1 && y == 1 ? 1 : 0); });
  // (1/2)(1 - t)
  CHECK(joint_poly(F) == RationalPoly({Rational(1, 2), Rational(-1, 2)}));
}

TEST_CASE("joint_poly matches the coupling enumeration") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto F = random_bifunction(1 + seed % 4, seed);
    const auto p = joint_poly(F);
    for (const auto& t : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(5, 7), Rational(1)}) {
      CHECK(p(t) == coupled_expectation(F, t));
    }
    // t = 0: diagonal mean.
    Rational diag = 0;
    for (std::uint64_t x = 0; x < F.side(); ++x) diag += F(x, x);
    CHECK(p(Rational(0)) == diag * inv_pow2(F.n()));
  }
}

TEST_CASE("joint_poly invariants") {
  const auto F = random_bifunction(3, 7), G = random_bifunction(3, 8);
  const auto sum = BiFunction::from(3, [&](auto x, auto y) { return Rational(2 * F(x, y) - G(x, y)); });
  CHECK(joint_poly(sum) == joint_poly(F) * Rational(2) - joint_poly(G));
  CHECK(joint_poly(BiFunction::from(3, [](auto, auto) { return Rational(1); })) == RationalPoly::constant(1));
  CHECK(joint_poly(F) == joint_poly(F.swapped()));
  // Evaluating at 1 - t is the same as complementing the second argument.
  const auto p = joint_poly(F), q = joint_poly(F.complement_second());
  for (int k = 0; k <= 8; ++k) {
    const Rational t = make_rational(k, 8);
    CHECK(p(1 - t) == q(t));
  }
}

TEST_CASE("functions of the first argument have constant joint polynomial") {
  const auto f = random_nonnegative(4, 3);
  const auto F = BiFunction::from(4, [&](auto x, auto) { return f(x); });
  CHECK(joint_poly(F) == RationalPoly::constant(expectation(f)));
}

TEST_CASE("product route agrees with the Hamming closed form") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + seed % 5;
    const auto f = random_nonnegative(n, seed), g = random_nonnegative(n, seed + 99);
    CHECK(joint_poly_product(f, g) == joint_poly(BiFunction::product(f, g)));
  }
}

TEST_CASE("check_lemma1") {
  for (int n = 1; n <= 4; ++n) CHECK(check_lemma1(n));
  CHECK(check_lemma1(3, {Rational(1, 3)}));
  CHECK(check_lemma1(2, {Rational(0), Rational(1)}));
  // t = 0: law of (ω, ω_0) is the diagonal.
  const auto diag = BiFunction::from(3, [](auto x, auto y) { return Rational(x == y ? 1 : 0); });
  CHECK(joint_poly(diag)(Rational(0)) == 1);
}

TEST_CASE("interpolation identity") {
  CHECK(check_interpolation_identity(BiFunction::from(3, [](auto, auto) { return Rational(4); })));
  const auto f = first_coordinate(1);
  const auto F = BiFunction::product(f, f);
  CHECK(check_interpolation_identity(F));
  CHECK(joint_poly(F).derivative() == RationalPoly::constant(Rational(-1, 2)));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CHECK(check_interpolation_identity(random_bifunction(1 + seed % 6, seed)));
  }
}

TEST_CASE("verify_prop1 one-dimensional closed form") {
  const auto f = first_coordinate(1);
  const auto rep = verify_prop1(f, f);
  CHECK(rep.phi0 == Rational(1, 2));
  CHECK(rep.phi_half == Rational(1, 4));
  CHECK(rep.exact_ok());
  CHECK(rep.quadrature_ok);
  CHECK(std::fabs(static_cast<double>(rep.integral) - std::log(2.0)) < 1e-9);

  const auto one = CubeFunction::constant(3, 1);
  const auto r1 = verify_prop1(one, one);
  CHECK(r1.passed());
  CHECK(std::fabs(static_cast<double>(r1.integral)) < 1e-12);
}

TEST_CASE("verify_prop1 sign for increasing/decreasing pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_monotone(4, seed);
    const auto up = random_monotone(4, seed + 500);
    const auto g = CubeFunction::from(4, [&](auto x) { return Rational(1 - up(x)); });
    if (expectation(f) == 0 || expectation(g) == 0) continue;
    const auto rep = verify_prop1(f, g);
    CHECK(rep.exact_ok());
    CHECK(rep.phi0 <= rep.phi_half);
    if (rep.quadrature_applicable) CHECK(rep.integral <= 1e-12L);
  }
}

TEST_CASE("verify_prop1 errors") {
  const auto zero = CubeFunction::constant(2, 0);
  CHECK_THROWS_AS(verify_prop1(zero, first_coordinate(2)), PreconditionError);
  const auto neg = CubeFunction::constant(2, -1);
  CHECK_THROWS_AS(verify_prop1(neg, first_coordinate(2)), PreconditionError);
  CHECK_THROWS_AS(verify_prop1(first_coordinate(2), first_coordinate(2), 64), UsageError);
}

TEST_CASE("check_remark4") {
  CHECK(check_remark4(first_coordinate(1)));
  CHECK(joint_poly_product(first_coordinate(1), first_coordinate(1)).derivative() ==
        RationalPoly::constant(Rational(-1, 2)));
  CHECK(joint_poly_product(CubeFunction::constant(3, 2), CubeFunction::constant(3, 2)).derivative().is_zero());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-4, 4);
    const auto f = CubeFunction::from(1 + seed % 6, [&](auto) { return Rational(dist(rng)); });
    CHECK(check_remark4(f));
  }
  CHECK_THROWS_AS(check_remark4(first_coordinate(2), {Rational(3, 4)}), UsageError);
}

TEST_CASE("check_holley_noised") {
  const auto F = BiFunction::from(2, [](auto x, auto) { return Rational(x & 1); });
  CHECK(check_holley_noised(F, F));
  const auto G = BiFunction::from(2, [](auto, auto y) { return Rational(y & 1); });
  CHECK(check_holley_noised(F, G));
  // At t = 1/2 the two arguments are independent: equality.
  const auto half = Rational(1, 2);
  CHECK(joint_poly(F.times(G))(half) == joint_poly(F)(half) * joint_poly(G)(half));

  const auto inc = BiFunction::from(2, [](auto x, auto) { return Rational(x & 1); });
  const auto dec = BiFunction::from(2, [](auto x, auto) { return Rational(1 - (x & 1)); });
  CHECK_THROWS_AS(check_holley_noised(inc, dec), PreconditionError);
}

TEST_CASE("check_prop3") {
  const int n = 4;
  const auto F = BiFunction::from(n, [](auto x, auto y) { return Rational(((x | y) >> 2) & 1); });
  const auto G = BiFunction::from(n, [](auto x, auto y) { return Rational(((x & y) >> 2) & 1); });
  CHECK(check_prop3({{}, {}, {1, 2, 3, 4}, {}}, F, G));
  // Independent supports: equality at every t.
  const auto Fa = BiFunction::from(n, [](auto x, auto y) { return Rational((x ^ y) & 1); });
  const auto Gb = BiFunction::from(n, [](auto x, auto) { return Rational((x >> 1) & 1); });
  CHECK(check_prop3({{1}, {2}, {}, {}}, Fa, Gb));
  for (const auto& t : default_half_grid()) {
    CHECK(joint_poly(Fa.times(Gb))(t) == joint_poly(Fa)(t) * joint_poly(Gb)(t));
  }
  // Violations name the coordinate.
  try {
    check_prop3({{1}, {2}, {}, {}}, Gb, Fa);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
  CHECK_THROWS_AS(check_prop3({{}, {}, {}, {3}}, F, G), PreconditionError);
  CHECK_THROWS_AS(check_prop3({{1}, {1}, {}, {}}, F, G), PreconditionError);
}
