#pragma once

// Exact functions on the Boolean cube {0,1}^n and the discrete derivative
// operators used by the interpolation identities.
//
// Bit order: coordinate i (1-based) is bit i-1 of the packed index, so the
// table of a CubeFunction is indexed by the configuration read as an integer.

#include <cstdint>
#include <functional>
#include <tuple>
#include <vector>

#include "qcorr/rational.hpp"

namespace qcorr {

inline constexpr int kMaxCubeDim = 14;   // CubeFunction tables
inline constexpr int kMaxBiDim = 10;     // BiFunction tables (2^{2n} entries)

/// A point of {0,1}^n.
class BitConfig {
 public:
  BitConfig(int n, std::uint64_t bits);

  int n() const { return n_; }
  std::uint64_t bits() const { return bits_; }

  /// Coordinate i in 1..n.
  bool at(int i) const;
  BitConfig with(int i, bool value) const;
  BitConfig complement() const;

  friend bool operator==(const BitConfig&, const BitConfig&) = default;

 private:
  int n_;
  std::uint64_t bits_;
};

/// (x^i, x_i, x̄): bit i set to 1, bit i set to 0, all bits complemented.
std::tuple<BitConfig, BitConfig, BitConfig> bit_flips(const BitConfig& x, int i);

class CubeFunction {
 public:
  CubeFunction(int n, std::vector<Rational> values);
  static CubeFunction constant(int n, const Rational& c);
  static CubeFunction from(int n, const std::function<Rational(std::uint64_t)>& fn);

  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }
  const Rational& operator()(std::uint64_t x) const { return values_[x]; }
  const Rational& operator()(const BitConfig& x) const;
  const std::vector<Rational>& values() const { return values_; }

  /// True iff every value is 0 or 1.
  bool is_event() const;
  /// Membership test for events (value == 1).
  bool contains(std::uint64_t x) const { return values_[x] == 1; }

 private:
  int n_;
  std::vector<Rational> values_;
};

using CubeEvent = CubeFunction;

/// Function on pairs of configurations; entry (x, y) lives at x | (y << n).
class BiFunction {
 public:
  BiFunction(int n, std::vector<Rational> values);
  static BiFunction from(int n, const std::function<Rational(std::uint64_t, std::uint64_t)>& fn);
  /// F(x, y) = f(x) g(y).
  static BiFunction product(const CubeFunction& f, const CubeFunction& g);

  int n() const { return n_; }
  std::uint64_t side() const { return std::uint64_t{1} << n_; }
  const Rational& operator()(std::uint64_t x, std::uint64_t y) const {
    return values_[x | (y << n_)];
  }
  const std::vector<Rational>& values() const { return values_; }

  /// Pointwise product F·G.
  BiFunction times(const BiFunction& other) const;
  /// (x, y) -> F(x, ȳ).
  BiFunction complement_second() const;
  /// (x, y) -> F(y, x).
  BiFunction swapped() const;
  /// Monotone as a function on the doubled cube {0,1}^{2n}.
  bool is_increasing() const;
  bool is_decreasing() const;

 private:
  int n_;
  std::vector<Rational> values_;
};

/// ∇_i f(x) = f(x^i) - f(x_i).
Rational grad(const CubeFunction& f, int i, const BitConfig& x);
/// Whole table of ∇_i f.
CubeFunction grad_function(const CubeFunction& f, int i);

/// ∇_ii F(x,y) = F(x^i,y^i) + F(x_i,y_i) - F(x^i,y_i) - F(x_i,y^i).
Rational grad2(const BiFunction& F, int i, const BitConfig& x, const BitConfig& y);
BiFunction grad2_function(const BiFunction& F, int i);

/// D_i F(x,y) = [F(x^i,y_i) - F(x_i,y_i)] · [F(x_i,y^i) - F(x_i,y_i)].
Rational d_op(const BiFunction& F, int i, const BitConfig& x, const BitConfig& y);
BiFunction d_op_function(const BiFunction& F, int i);

/// Edge criterion: f(x_i) <= f(x^i) for every x and i.
bool is_increasing(const CubeFunction& f);
bool is_decreasing(const CubeFunction& f);

/// 2^-n Σ_x f(x).
Rational expectation(const CubeFunction& f);

/// Increasing 0/1 function: up-set closure of a random antichain. The
/// generator is std::mt19937_64 seeded with `seed`.
CubeEvent random_monotone(int n, std::uint64_t seed);

/// Random event with each point included independently with probability 1/2.
CubeEvent random_event(int n, std::uint64_t seed);

/// Random non-negative function with integer values in [0, max_value].
CubeFunction random_nonnegative(int n, std::uint64_t seed, int max_value = 4);

namespace detail {
void check_index(int n, int i);
void check_dim(int n, int cap, const char* what);
}  // namespace detail

}  // namespace qcorr
