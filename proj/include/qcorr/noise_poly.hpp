#pragma once

// Exact law of the noise coupling (ω, ω_t): ω uniform on {0,1}^n and ω_t
// obtained by flipping each coordinate independently with probability t.
// Joint expectations E[F(ω, ω_t)] are polynomials in t with rational
// coefficients, so the differential identities reduce to coefficient checks.

#include <cstdint>
#include <string>
#include <vector>

#include "qcorr/cube.hpp"
#include "qcorr/rational.hpp"

namespace qcorr {

/// Polynomial in t; coefficient k multiplies t^k. Trailing zeros are trimmed.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  static RationalPoly constant(const Rational& c);
  /// (a + b t)
  static RationalPoly linear(const Rational& a, const Rational& b);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return coeffs_.empty(); }

  Rational operator()(const Rational& t) const;
  long double eval(long double t) const;
  RationalPoly derivative() const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  RationalPoly& operator*=(const Rational& c);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& c) { return a *= c; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// One draw of the coupling: ω_t(i) = ω(i) XOR η(i).
struct NoiseCoupling {
  Rational t;
  BitConfig base;
  BitConfig mask;
  BitConfig noised() const { return BitConfig(base.n(), base.bits() ^ mask.bits()); }
};

/// E[F(ω, ω_t)] = 2^-n Σ_{x,y} F(x,y) t^{d(x,y)} (1-t)^{n-d(x,y)}, d = Hamming distance.
RationalPoly joint_poly(const BiFunction& F);

/// E[f(ω) g(ω_t)] computed by applying the noise operator coordinate by
/// coordinate to g; agrees with joint_poly(BiFunction::product(f, g)).
RationalPoly joint_poly_product(const CubeFunction& f, const CubeFunction& g);

/// 33 equispaced rationals 0, 1/64, ..., 1/2.
std::vector<Rational> default_half_grid(int points = 33);

/// Marginal of ω_t is uniform for every t in `grid`, and ω, ω_{1/2} are independent.
bool check_lemma1(int n, const std::vector<Rational>& grid = default_half_grid());

/// d/dt E[F(ω,ω_t)] == -1/2 Σ_i E[∇_ii F(ω,ω_t)] coefficient by coefficient.
bool check_interpolation_identity(const BiFunction& F);

/// Composite Simpson for ∫_a^b num(t)/den(t) dt, doubling the panel count from
/// `points` until successive estimates differ by less than tol/16.
struct QuadratureResult {
  long double value = 0;
  int points = 0;
  bool converged = false;
};
QuadratureResult simpson_ratio(const RationalPoly& num, const RationalPoly& den, long double a,
                               long double b, int points, long double tol);

struct Prop1Report {
  Rational phi0;                // E[fg]
  Rational phi_half;            // E[f]E[g]
  bool endpoint_zero = false;   // φ(0) == E[fg]
  bool endpoint_half = false;   // φ(1/2) == E[f]E[g]
  bool ode_identity = false;    // φ' == -1/2 Σ_i E[∇_i f(ω) ∇_i g(ω_t)]
  bool quadrature_applicable = false;  // false when E[fg] = 0 (log diverges)
  long double integral = 0;     // I by quadrature
  long double log_ratio = 0;    // log(E[fg] / (E[f]E[g]))
  long double quadrature_error = 0;
  bool quadrature_ok = false;
  int quadrature_points = 0;

  bool exact_ok() const { return endpoint_zero && endpoint_half && ode_identity; }
  bool passed() const { return exact_ok() && (!quadrature_applicable || quadrature_ok); }
};

/// Quantitative Harris-FKG identity E[fg] = E[f]E[g] e^I for non-negative f, g.
Prop1Report verify_prop1(const CubeFunction& f, const CubeFunction& g, int quad_points = 129,
                         double tol = 1e-9);

/// d/dt E[f(ω) f(ω_t)] <= 0 at every grid point of [0, 1/2].
bool check_remark4(const CubeFunction& f, const std::vector<Rational>& grid = default_half_grid());

/// E[FG] >= E[F]E[G] under the noised pair for F, G both increasing or both
/// decreasing on the doubled cube.
bool check_holley_noised(const BiFunction& F, const BiFunction& G,
                         const std::vector<Rational>& grid = default_half_grid());

/// Pairwise disjoint coordinate sets (1-based) for the product-space FKG check.
struct CoordinatePartition {
  std::vector<int> a, b, s, t;
};

/// Dynamical FKG with support constraints: F measurable w.r.t. A∪S∪T, G w.r.t.
/// B∪S∪T, both S-increasing and T-decreasing.
bool check_prop3(const CoordinatePartition& part, const BiFunction& F, const BiFunction& G,
                 const std::vector<Rational>& grid = default_half_grid());

}  // namespace qcorr
