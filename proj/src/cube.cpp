#include "qcorr/cube.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace detail {

void check_index(int n, int i) {
  if (i < 1 || i > n) {
    throw UsageError("coordinate " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
}

void check_dim(int n, int cap, const char* what) {
  if (n < 1 || n > cap) {
    throw UsageError(std::string(what) + ": dimension " + std::to_string(n) +
                     " outside 1.." + std::to_string(cap));
  }
}

}  // namespace detail

namespace {

inline std::uint64_t bit(int i) { return std::uint64_t{1} << (i - 1); }

}  // namespace

BitConfig::BitConfig(int n, std::uint64_t bits) : n_(n), bits_(bits) {
  detail::check_dim(n, 64, "BitConfig");
  if (n < 64 && (bits >> n) != 0) throw UsageError("BitConfig: bits beyond dimension");
}

bool BitConfig::at(int i) const {
  detail::check_index(n_, i);
  return (bits_ & bit(i)) != 0;
}

BitConfig BitConfig::with(int i, bool value) const {
  detail::check_index(n_, i);
  return BitConfig(n_, value ? (bits_ | bit(i)) : (bits_ & ~bit(i)));
}

BitConfig BitConfig::complement() const {
  const std::uint64_t mask = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  return BitConfig(n_, ~bits_ & mask);
}

std::tuple<BitConfig, BitConfig, BitConfig> bit_flips(const BitConfig& x, int i) {
  return {x.with(i, true), x.with(i, false), x.complement()};
}

CubeFunction::CubeFunction(int n, std::vector<Rational> values) : n_(n), values_(std::move(values)) {
  detail::check_dim(n, kMaxCubeDim, "CubeFunction");
  if (values_.size() != size()) throw UsageError("CubeFunction: table length must be 2^n");
}

CubeFunction CubeFunction::constant(int n, const Rational& c) {
  detail::check_dim(n, kMaxCubeDim, "CubeFunction");
  return CubeFunction(n, std::vector<Rational>(std::uint64_t{1} << n, c));
}

CubeFunction CubeFunction::from(int n, const std::function<Rational(std::uint64_t)>& fn) {
  detail::check_dim(n, kMaxCubeDim, "CubeFunction");
  std::vector<Rational> v(std::uint64_t{1} << n);
  for (std::uint64_t x = 0; x < v.size(); ++x) v[x] = fn(x);
  return CubeFunction(n, std::move(v));
}

const Rational& CubeFunction::operator()(const BitConfig& x) const {
  if (x.n() != n_) throw UsageError("CubeFunction: configuration dimension mismatch");
  return values_[x.bits()];
}

bool CubeFunction::is_event() const {
  for (const auto& v : values_) {
    if (v != 0 && v != 1) return false;
  }
  return true;
}

BiFunction::BiFunction(int n, std::vector<Rational> values) : n_(n), values_(std::move(values)) {
  detail::check_dim(n, kMaxBiDim, "BiFunction");
  if (values_.size() != (std::uint64_t{1} << (2 * n))) {
    throw UsageError("BiFunction: table length must be 4^n");
  }
}

BiFunction BiFunction::from(int n, const std::function<Rational(std::uint64_t, std::uint64_t)>& fn) {
  detail::check_dim(n, kMaxBiDim, "BiFunction");
  const std::uint64_t side = std::uint64_t{1} << n;
  std::vector<Rational> v(side * side);
  for (std::uint64_t y = 0; y < side; ++y) {
    for (std::uint64_t x = 0; x < side; ++x) v[x | (y << n)] = fn(x, y);
  }
  return BiFunction(n, std::move(v));
}

BiFunction BiFunction::product(const CubeFunction& f, const CubeFunction& g) {
  if (f.n() != g.n()) throw UsageError("BiFunction::product: dimension mismatch");
  return from(f.n(), [&](std::uint64_t x, std::uint64_t y) { return Rational(f(x) * g(y)); });
}

BiFunction BiFunction::times(const BiFunction& other) const {
  if (other.n_ != n_) throw UsageError("BiFunction::times: dimension mismatch");
  std::vector<Rational> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] * other.values_[k];
  return BiFunction(n_, std::move(v));
}

BiFunction BiFunction::complement_second() const {
  const std::uint64_t mask = side() - 1;
  return from(n_, [&](std::uint64_t x, std::uint64_t y) { return (*this)(x, ~y & mask); });
}

BiFunction BiFunction::swapped() const {
  return from(n_, [&](std::uint64_t x, std::uint64_t y) { return (*this)(y, x); });
}

bool BiFunction::is_increasing() const {
  const int m = 2 * n_;
  for (std::uint64_t z = 0; z < values_.size(); ++z) {
    for (int j = 0; j < m; ++j) {
      const std::uint64_t b = std::uint64_t{1} << j;
      if ((z & b) == 0 && values_[z] > values_[z | b]) return false;
    }
  }
  return true;
}

bool BiFunction::is_decreasing() const {
  const int m = 2 * n_;
  for (std::uint64_t z = 0; z < values_.size(); ++z) {
    for (int j = 0; j < m; ++j) {
      const std::uint64_t b = std::uint64_t{1} << j;
      if ((z & b) == 0 && values_[z] < values_[z | b]) return false;
    }
  }
  return true;
}

Rational grad(const CubeFunction& f, int i, const BitConfig& x) {
  detail::check_index(f.n(), i);
  return f(x.bits() | bit(i)) - f(x.bits() & ~bit(i));
}

CubeFunction grad_function(const CubeFunction& f, int i) {
  detail::check_index(f.n(), i);
  const std::uint64_t b = bit(i);
  return CubeFunction::from(f.n(), [&](std::uint64_t x) { return Rational(f(x | b) - f(x & ~b)); });
}

Rational grad2(const BiFunction& F, int i, const BitConfig& x, const BitConfig& y) {
  detail::check_index(F.n(), i);
  const std::uint64_t b = bit(i);
  const std::uint64_t xu = x.bits() | b, xd = x.bits() & ~b;
  const std::uint64_t yu = y.bits() | b, yd = y.bits() & ~b;
  return F(xu, yu) + F(xd, yd) - F(xu, yd) - F(xd, yu);
}

BiFunction grad2_function(const BiFunction& F, int i) {
  detail::check_index(F.n(), i);
  const std::uint64_t b = bit(i);
  return BiFunction::from(F.n(), [&](std::uint64_t x, std::uint64_t y) {
    const std::uint64_t xu = x | b, xd = x & ~b, yu = y | b, yd = y & ~b;
    return Rational(F(xu, yu) + F(xd, yd) - F(xu, yd) - F(xd, yu));
  });
}

Rational d_op(const BiFunction& F, int i, const BitConfig& x, const BitConfig& y) {
  detail::check_index(F.n(), i);
  const std::uint64_t b = bit(i);
  const std::uint64_t xu = x.bits() | b, xd = x.bits() & ~b;
  const std::uint64_t yu = y.bits() | b, yd = y.bits() & ~b;
  return (F(xu, yd) - F(xd, yd)) * (F(xd, yu) - F(xd, yd));
}

BiFunction d_op_function(const BiFunction& F, int i) {
  detail::check_index(F.n(), i);
  const std::uint64_t b = bit(i);
  return BiFunction::from(F.n(), [&](std::uint64_t x, std::uint64_t y) {
    const std::uint64_t xu = x | b, xd = x & ~b, yu = y | b, yd = y & ~b;
    return Rational((F(xu, yd) - F(xd, yd)) * (F(xd, yu) - F(xd, yd)));
  });
}

bool is_increasing(const CubeFunction& f) {
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (int i = 1; i <= f.n(); ++i) {
      if ((x & bit(i)) == 0 && f(x) > f(x | bit(i))) return false;
    }
  }
  return true;
}

bool is_decreasing(const CubeFunction& f) {
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (int i = 1; i <= f.n(); ++i) {
      if ((x & bit(i)) == 0 && f(x) < f(x | bit(i))) return false;
    }
  }
  return true;
}

Rational expectation(const CubeFunction& f) {
  Rational sum = 0;
  for (const auto& v : f.values()) sum += v;
  return sum * inv_pow2(static_cast<unsigned>(f.n()));
}

CubeEvent random_monotone(int n, std::uint64_t seed) {
  detail::check_dim(n, kMaxCubeDim, "random_monotone");
  std::mt19937_64 rng(seed);
  const std::uint64_t size = std::uint64_t{1} << n;
  // A random generating set; its minimal elements are the antichain whose
  // up-closure is returned.
  const std::uint64_t max_gens = std::min<std::uint64_t>(size, 2 * static_cast<std::uint64_t>(n) + 2);
  const std::uint64_t gens = std::uniform_int_distribution<std::uint64_t>(0, max_gens)(rng);
  const double density = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  std::bernoulli_distribution coin(density);
  std::vector<char> up(size, 0);
  for (std::uint64_t g = 0; g < gens; ++g) {
    std::uint64_t x = 0;
    for (int j = 0; j < n; ++j) {
      if (coin(rng)) x |= std::uint64_t{1} << j;
    }
    up[x] = 1;
  }
  for (std::uint64_t x = 0; x < size; ++x) {
    if (up[x]) continue;
    for (int j = 0; j < n && !up[x]; ++j) {
      const std::uint64_t b = std::uint64_t{1} << j;
      if ((x & b) && up[x & ~b]) up[x] = 1;
    }
  }
  return CubeFunction::from(n, [&](std::uint64_t x) { return Rational(up[x] ? 1 : 0); });
}

CubeEvent random_event(int n, std::uint64_t seed) {
  detail::check_dim(n, kMaxCubeDim, "random_event");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  return CubeFunction::from(n, [&](std::uint64_t) { return Rational(coin(rng) ? 1 : 0); });
}

CubeFunction random_nonnegative(int n, std::uint64_t seed, int max_value) {
  detail::check_dim(n, kMaxCubeDim, "random_nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, max_value);
  return CubeFunction::from(n, [&](std::uint64_t) { return Rational(dist(rng)); });
}

}  // namespace qcorr
