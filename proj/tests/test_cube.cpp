#include <bit>
#include <set>

#include "doctest.h"
#include "qcorr/cube.hpp"
#include "qcorr/errors.hpp"

using namespace qcorr;

namespace {

// Bits written most significant first would be confusing; build from coordinate list.
BitConfig cfg(int n, std::initializer_list<int> ones) {
  std::uint64_t bits = 0;
  for (int i : ones) bits |= std::uint64_t{1} << (i - 1);
  return BitConfig(n, bits);
}

CubeFunction coordinate(int n, int i) {
  return CubeFunction::from(n, [i](std::uint64_t x) { return Rational(((x >> (i - 1)) & 1) ? 1 : 0); });
}

}  // namespace

TEST_CASE("bit_flips on x = 101") {
  // x(1)=1, x(2)=0, x(3)=1
  const BitConfig x = cfg(3, {1, 3});
  const auto [up, down, bar] = bit_flips(x, 2);
  CHECK(up == cfg(3, {1, 2, 3}));
  CHECK(down == x);
  CHECK(bar == cfg(3, {2}));

  const auto [up1, down1, bar1] = bit_flips(BitConfig(1, 0), 1);
  CHECK(up1 == BitConfig(1, 1));
  CHECK(down1 == BitConfig(1, 0));
  CHECK(bar1 == BitConfig(1, 1));
}

TEST_CASE("bit_flips idempotence and involution") {
  for (std::uint64_t b = 0; b < 16; ++b) {
    const BitConfig x(4, b);
    for (int i = 1; i <= 4; ++i) {
      const auto up = std::get<0>(bit_flips(x, i));
      CHECK(std::get<0>(bit_flips(up, i)) == up);
    }
    CHECK(x.complement().complement() == x);
  }
}

TEST_CASE("index errors") {
  const BitConfig x(3, 0);
  CHECK_THROWS_AS(bit_flips(x, 0), UsageError);
  CHECK_THROWS_AS(bit_flips(x, 4), UsageError);
  CHECK_THROWS_AS(grad(CubeFunction::constant(3, 1), 5, x), UsageError);
  CHECK_THROWS_AS(CubeFunction::constant(kMaxCubeDim + 1, 0), UsageError);
  CHECK_THROWS_AS(BiFunction::from(kMaxBiDim + 1, [](auto, auto) { return Rational(0); }), UsageError);
}

TEST_CASE("grad examples") {
  const auto f = coordinate(2, 1);
  const auto both = CubeFunction::from(2, [](std::uint64_t x) { return Rational(x == 3 ? 1 : 0); });
  for (std::uint64_t b = 0; b < 4; ++b) {
    const BitConfig x(2, b);
    CHECK(grad(f, 1, x) == 1);
    CHECK(grad(f, 2, x) == 0);
    CHECK(grad(both, 1, x) == (x.at(2) ? 1 : 0));
  }
}

TEST_CASE("grad does not depend on bit i") {
  const auto f = random_nonnegative(5, 11, 7);
  for (std::uint64_t b = 0; b < 32; ++b) {
    const BitConfig x(5, b);
    for (int i = 1; i <= 5; ++i) {
      const auto [up, down, bar] = bit_flips(x, i);
      CHECK(grad(f, i, x) == grad(f, i, up));
      CHECK(grad(f, i, x) == grad(f, i, down));
    }
  }
}

TEST_CASE("increasing functions have same-sign gradients") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_monotone(5, seed);
    const auto g = random_monotone(5, seed + 1000);
    for (std::uint64_t b = 0; b < 32; ++b) {
      for (int i = 1; i <= 5; ++i) {
        CHECK(grad(f, i, BitConfig(5, b)) >= 0);
        CHECK(grad(f, i, BitConfig(5, b)) * grad(g, i, BitConfig(5, b)) >= 0);
      }
    }
  }
}

TEST_CASE("grad2 examples") {
  const auto f = random_nonnegative(3, 5);
  const auto g = random_nonnegative(3, 6);
  const auto F = BiFunction::product(f, g);
  for (std::uint64_t x = 0; x < 8; ++x) {
    for (std::uint64_t y = 0; y < 8; ++y) {
      for (int i = 1; i <= 3; ++i) {
        CHECK(grad2(F, i, BitConfig(3, x), BitConfig(3, y)) ==
              grad(f, i, BitConfig(3, x)) * grad(g, i, BitConfig(3, y)));
      }
    }
  }
  const auto C = BiFunction::from(2, [](auto, auto) { return Rational(3, 7); });
  CHECK(grad2(C, 1, BitConfig(2, 1), BitConfig(2, 2)) == 0);
  // n = 1, F = 1{x=1, y=1}: only the F(x^1, y^1) term survives.
  const auto corner = BiFunction::from(1, [](auto x, auto y) { return Rational(x == 1 && y == 1 ? 1 : 0); });
  for (std::uint64_t x = 0; x < 2; ++x) {
    for (std::uint64_t y = 0; y < 2; ++y) CHECK(grad2(corner, 1, BitConfig(1, x), BitConfig(1, y)) == 1);
  }
}

TEST_CASE("grad2 factors as two first-order derivatives in either order") {
  const int n = 3;
  const auto F = BiFunction::from(n, [](std::uint64_t x, std::uint64_t y) {
    return make_rational(static_cast<long>((x * 7 + y * 13 + x * y) % 11), 3);
  });
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t b = std::uint64_t{1} << (i - 1);
    // ∇^1_i then ∇^2_i, and the reverse.
    const auto d1 = BiFunction::from(n, [&](auto x, auto y) { return Rational(F(x | b, y) - F(x & ~b, y)); });
    const auto d12 = BiFunction::from(n, [&](auto x, auto y) { return Rational(d1(x, y | b) - d1(x, y & ~b)); });
    const auto d2 = BiFunction::from(n, [&](auto x, auto y) { return Rational(F(x, y | b) - F(x, y & ~b)); });
    const auto d21 = BiFunction::from(n, [&](auto x, auto y) { return Rational(d2(x | b, y) - d2(x & ~b, y)); });
    const auto direct = grad2_function(F, i);
    CHECK(direct.values() == d12.values());
    CHECK(direct.values() == d21.values());
  }
}

TEST_CASE("d_op on constant and increasing functions") {
  const auto C = BiFunction::from(2, [](auto, auto) { return Rational(1); });
  CHECK(d_op(C, 2, BitConfig(2, 1), BitConfig(2, 3)) == 0);
  const auto a = random_monotone(3, 3);
  const auto F = BiFunction::from(3, [&](auto x, auto y) { return Rational(a(x) * a(y)); });
  REQUIRE(F.is_increasing());
  for (std::uint64_t x = 0; x < 8; ++x) {
    for (std::uint64_t y = 0; y < 8; ++y) {
      for (int i = 1; i <= 3; ++i) {
        const auto v = d_op(F, i, BitConfig(3, x), BitConfig(3, y));
        CHECK((v == 0 || v == 1));
      }
    }
  }
}

TEST_CASE("is_increasing") {
  CHECK(is_increasing(coordinate(3, 1)));
  CHECK(is_increasing(CubeFunction::constant(4, 2)));
  for (int n = 2; n <= 4; ++n) {
    const auto parity = CubeFunction::from(n, [](std::uint64_t x) { return Rational(std::popcount(x) % 2); });
    CHECK_FALSE(is_increasing(parity));
  }
  // Edge criterion agrees with the full order definition on random functions.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto f = random_nonnegative(4, seed, 2);
    bool full = true;
    for (std::uint64_t x = 0; x < 16; ++x) {
      for (std::uint64_t y = 0; y < 16; ++y) {
        if ((x & ~y) == 0 && f(x) > f(y)) full = false;
      }
    }
    CHECK(is_increasing(f) == full);
  }
}

TEST_CASE("expectation") {
  for (int n = 1; n <= 6; ++n) CHECK(expectation(coordinate(n, 1)) == Rational(1, 2));
  CHECK(expectation(CubeFunction::constant(5, 1)) == 1);
  CHECK(expectation(CubeFunction::from(2, [](auto x) { return Rational(x == 3 ? 1 : 0); })) == Rational(1, 4));
  // Linear and monotone.
  const auto f = random_nonnegative(4, 1), g = random_nonnegative(4, 2);
  const auto sum = CubeFunction::from(4, [&](auto x) { return Rational(2 * f(x) + g(x)); });
  CHECK(expectation(sum) == 2 * expectation(f) + expectation(g));
  const auto bigger = CubeFunction::from(4, [&](auto x) { return Rational(f(x) + (x % 3 == 0 ? 1 : 0)); });
  CHECK(expectation(bigger) >= expectation(f));
}

TEST_CASE("random_monotone") {
  CHECK(random_monotone(6, 42).values() == random_monotone(6, 42).values());
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto f = random_monotone(1 + seed % 8, seed);
    CHECK(f.is_event());
    CHECK(is_increasing(f));
  }
  // n = 1: enumerate all 0/1 functions and keep the increasing ones.
  std::set<std::vector<int>> increasing;
  for (int code = 0; code < 4; ++code) {
    const auto f = CubeFunction::from(1, [code](auto x) { return Rational((code >> x) & 1); });
    if (is_increasing(f)) increasing.insert({static_cast<int>(f(0).get_num().get_si()), static_cast<int>(f(1).get_num().get_si())});
  }
  CHECK(increasing.size() == 3);
  std::set<std::vector<int>> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto f = random_monotone(1, seed);
    const std::vector<int> table{static_cast<int>(f(0).get_num().get_si()), static_cast<int>(f(1).get_num().get_si())};
    CHECK(increasing.count(table) == 1);
    seen.insert(table);
  }
  CHECK(seen == increasing);
  CHECK_THROWS_AS(random_monotone(kMaxCubeDim + 1, 0), UsageError);
}
