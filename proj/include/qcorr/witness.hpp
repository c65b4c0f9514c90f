#pragma once

// Witnesses, generalized disjoint occurrence on a pair of configurations, and
// the Reimer family of inequalities on small cubes.

#include <cstdint>
#include <functional>
#include <vector>

#include "qcorr/cube.hpp"
#include "qcorr/noise_poly.hpp"

namespace qcorr {

inline constexpr int kMaxWitnessDim = 12;

/// Index set I ⊆ [n] as a bitmask (coordinate i is bit i-1).
using IndexMask = std::uint64_t;

struct Witness {
  BitConfig anchor;
  IndexMask support;
};

/// Every y agreeing with x on I lies in A. Naive cylinder enumeration.
bool is_witness(const BitConfig& x, IndexMask support, const CubeEvent& a);
inline bool is_witness(const Witness& w, const CubeEvent& a) { return is_witness(w.anchor, w.support, a); }

/// ∃ I: (x, I) witnesses A and (y, [n]∖I) witnesses B. Naive search over I.
bool occurs_disjointly(const CubeEvent& a, const CubeEvent& b, const BitConfig& x, const BitConfig& y);

/// Memo of which cylinders {y : y|_I = x|_I} lie inside an event. Cylinders
/// are coded in base 3 (digit 0 free, 1 fixed to 0, 2 fixed to 1).
class CylinderTable {
 public:
  explicit CylinderTable(const CubeEvent& a);
  bool witnesses(std::uint64_t x, IndexMask support) const {
    return inside_[ternary_[support] + ternary_[support & x]] != 0;
  }

 private:
  std::vector<std::uint32_t> ternary_;  // Σ_{j∈m} 3^j
  std::vector<char> inside_;
};

/// F(x, y) = 1 iff (A, B) occurs disjointly on (x, y).
class DisjointOccurrence {
 public:
  DisjointOccurrence(const CubeEvent& a, const CubeEvent& b);
  int n() const { return n_; }
  bool operator()(std::uint64_t x, std::uint64_t y) const;
  BiFunction to_bifunction() const;

 private:
  int n_;
  CylinderTable a_, b_;
};

/// A∘B, the diagonal of the disjoint-occurrence indicator.
CubeEvent box_event(const CubeEvent& a, const CubeEvent& b);

/// B̄ = {x̄ : x ∈ B}.
CubeEvent reflect(const CubeEvent& b);
/// Indicator of A ∩ B.
CubeEvent intersect(const CubeEvent& a, const CubeEvent& b);

/// For increasing A, B: (A,B) occurs disjointly on (x, x̄) iff x ∈ A ∩ B̄, for all x.
bool check_lemma2(const CubeEvent& a, const CubeEvent& b);

/// P[A∘B] <= P[A ∩ B̄]; any events.
bool check_reimer(const CubeEvent& a, const CubeEvent& b);

using DOperator = std::function<Rational(const BiFunction&, int, const BitConfig&, const BitConfig&)>;

struct Prop2Report {
  Rational psi0;                  // P[A∘B]
  Rational psi1;                  // P[A ∩ B̄]
  bool pointwise_identity = false;  // -∇_ii F == D_i F everywhere
  int failing_coordinate = 0;       // first i where the pointwise identity fails
  bool endpoint_zero = false;
  bool endpoint_one = false;
  bool ode_identity = false;      // ψ' == +1/2 Σ_i E[D_i F(ω, ω_t)]
  bool j_nonnegative = false;     // ψ(1) >= ψ(0) and Σ_i E[D_i F] >= 0 on the grid
  long double integral = 0;       // J by quadrature
  long double log_ratio = 0;      // log(ψ(1)/ψ(0))
  long double quadrature_error = 0;
  bool quadrature_ok = false;
  int quadrature_points = 0;

  bool exact_ok() const {
    return pointwise_identity && endpoint_zero && endpoint_one && ode_identity && j_nonnegative;
  }
  bool passed() const { return exact_ok() && quadrature_ok; }
};

/// Quantitative Reimer identity P[A∘B] = P[A ∩ B̄] e^{-J} for increasing A, B.
/// `d_impl` replaces D_i (test hook for mutation checks).
Prop2Report check_prop2(const CubeEvent& a, const CubeEvent& b, int quad_points = 129, double tol = 1e-9,
                        const DOperator& d_impl = d_op);

/// P[A∘B] <= ψ(1/2) <= P[A]P[B] for increasing A, B.
bool check_strong_bk(const CubeEvent& a, const CubeEvent& b);

/// ψ(1/2) <= P[A ∩ B̄]; any events.
bool check_dual_reimer(const CubeEvent& a, const CubeEvent& b);

}  // namespace qcorr
