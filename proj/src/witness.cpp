#include "qcorr/witness.hpp"

#include <bit>
#include <cmath>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

std::uint64_t full_mask(int n) { return (std::uint64_t{1} << n) - 1; }

void require_same_dim(const CubeEvent& a, const CubeEvent& b, const char* what) {
  if (a.n() != b.n()) throw UsageError(std::string(what) + ": dimension mismatch");
  detail::check_dim(a.n(), kMaxWitnessDim, what);
}

void require_increasing(const CubeEvent& a, const CubeEvent& b, const char* what) {
  if (!is_increasing(a) || !is_increasing(b)) {
    throw PreconditionError(std::string(what) + ": events must be increasing");
  }
}

Rational probability(const CubeEvent& a) { return expectation(a); }

long double log_rational(const Rational& q) {
  return std::log(static_cast<long double>(q.get_num().get_d())) -
         std::log(static_cast<long double>(q.get_den().get_d()));
}

}  // namespace

bool is_witness(const BitConfig& x, IndexMask support, const CubeEvent& a) {
  if (x.n() != a.n()) throw UsageError("is_witness: dimension mismatch");
  const std::uint64_t all = full_mask(a.n());
  if ((support & ~all) != 0) throw UsageError("is_witness: support outside [n]");
  const std::uint64_t free = all & ~support;
  const std::uint64_t fixed = x.bits() & support;
  // Enumerate all subsets of the free coordinates.
  std::uint64_t sub = 0;
  while (true) {
    if (!a.contains(fixed | sub)) return false;
    if (sub == free) break;
    sub = (sub - free) & free;
  }
  return true;
}

bool occurs_disjointly(const CubeEvent& a, const CubeEvent& b, const BitConfig& x, const BitConfig& y) {
  require_same_dim(a, b, "occurs_disjointly");
  const std::uint64_t all = full_mask(a.n());
  // J = [n]∖I suffices: enlarging the support of a witness keeps it a witness.
  for (std::uint64_t support = 0; support <= all; ++support) {
    if (is_witness(x, support, a) && is_witness(y, all & ~support, b)) return true;
  }
  return false;
}

CylinderTable::CylinderTable(const CubeEvent& a) {
  const int n = a.n();
  detail::check_dim(n, kMaxWitnessDim, "CylinderTable");
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint32_t> pow3(n + 1, 1);
  for (int j = 1; j <= n; ++j) pow3[j] = pow3[j - 1] * 3;
  ternary_.assign(size, 0);
  for (std::uint64_t m = 1; m < size; ++m) {
    const int j = std::countr_zero(m);
    ternary_[m] = ternary_[m & (m - 1)] + pow3[j];
  }
  inside_.assign(pow3[n], 0);
  // Codes with a free digit j refer to the codes with that digit set to 1 or
  // 2, which are larger; sweep downwards.
  for (std::int64_t c = static_cast<std::int64_t>(pow3[n]) - 1; c >= 0; --c) {
    std::uint32_t rest = static_cast<std::uint32_t>(c);
    int free_digit = -1;
    std::uint64_t point = 0;
    for (int j = 0; j < n; ++j) {
      const std::uint32_t d = rest % 3;
      rest /= 3;
      if (d == 0) {
        free_digit = j;
        break;
      }
      if (d == 2) point |= std::uint64_t{1} << j;
    }
    if (free_digit < 0) {
      inside_[c] = a.contains(point) ? 1 : 0;
    } else {
      inside_[c] = inside_[c + pow3[free_digit]] && inside_[c + 2 * pow3[free_digit]];
    }
  }
}

DisjointOccurrence::DisjointOccurrence(const CubeEvent& a, const CubeEvent& b) : n_(a.n()), a_(a), b_(b) {
  require_same_dim(a, b, "DisjointOccurrence");
}

bool DisjointOccurrence::operator()(std::uint64_t x, std::uint64_t y) const {
  const std::uint64_t all = full_mask(n_);
  for (std::uint64_t support = 0; support <= all; ++support) {
    if (a_.witnesses(x, support) && b_.witnesses(y, all & ~support)) return true;
  }
  return false;
}

BiFunction DisjointOccurrence::to_bifunction() const {
  return BiFunction::from(n_, [&](std::uint64_t x, std::uint64_t y) { return Rational((*this)(x, y) ? 1 : 0); });
}

CubeEvent box_event(const CubeEvent& a, const CubeEvent& b) {
  const DisjointOccurrence occ(a, b);
  return CubeFunction::from(a.n(), [&](std::uint64_t x) { return Rational(occ(x, x) ? 1 : 0); });
}

CubeEvent reflect(const CubeEvent& b) {
  const std::uint64_t all = full_mask(b.n());
  return CubeFunction::from(b.n(), [&](std::uint64_t x) { return b(~x & all); });
}

CubeEvent intersect(const CubeEvent& a, const CubeEvent& b) {
  return CubeFunction::from(a.n(), [&](std::uint64_t x) { return Rational(a(x) * b(x)); });
}

bool check_lemma2(const CubeEvent& a, const CubeEvent& b) {
  require_same_dim(a, b, "check_lemma2");
  require_increasing(a, b, "check_lemma2");
  const DisjointOccurrence occ(a, b);
  const std::uint64_t all = full_mask(a.n());
  for (std::uint64_t x = 0; x <= all; ++x) {
    const bool lhs = occ(x, ~x & all);
    const bool rhs = a.contains(x) && b.contains(~x & all);
    if (lhs != rhs) return false;
  }
  return true;
}

bool check_reimer(const CubeEvent& a, const CubeEvent& b) {
  require_same_dim(a, b, "check_reimer");
  return probability(box_event(a, b)) <= probability(intersect(a, reflect(b)));
}

Prop2Report check_prop2(const CubeEvent& a, const CubeEvent& b, int quad_points, double tol,
                        const DOperator& d_impl) {
  require_same_dim(a, b, "check_prop2");
  detail::check_dim(a.n(), kMaxBiDim, "check_prop2");
  require_increasing(a, b, "check_prop2");
  if (quad_points < 129) throw UsageError("check_prop2: quad_points must be >= 129");
  const int n = a.n();
  const BiFunction F = DisjointOccurrence(a, b).to_bifunction();

  Prop2Report rep;
  rep.psi0 = probability(box_event(a, b));
  if (rep.psi0 == 0) throw PreconditionError("check_prop2: P[A∘B] must be positive");
  rep.psi1 = probability(intersect(a, reflect(b)));

  rep.pointwise_identity = true;
  std::vector<BiFunction> d_tables;
  d_tables.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const BiFunction d = BiFunction::from(n, [&](std::uint64_t x, std::uint64_t y) {
      return d_impl(F, i, BitConfig(n, x), BitConfig(n, y));
    });
    if (rep.pointwise_identity) {
      const BiFunction g2 = grad2_function(F, i);
      for (std::size_t k = 0; k < g2.values().size(); ++k) {
        if (-g2.values()[k] != d.values()[k]) {
          rep.pointwise_identity = false;
          rep.failing_coordinate = i;
          break;
        }
      }
    }
    d_tables.push_back(d);
  }

  const RationalPoly psi = joint_poly(F);
  rep.endpoint_zero = psi(Rational(0)) == rep.psi0;
  rep.endpoint_one = psi(Rational(1)) == rep.psi1;

  RationalPoly d_sum;  // Σ_i E[D_i F(ω, ω_t)]
  for (const auto& d : d_tables) d_sum += joint_poly(d);
  rep.ode_identity = psi.derivative() == d_sum * Rational(1, 2);

  rep.j_nonnegative = rep.psi1 >= rep.psi0;
  for (int k = 0; k <= 64; ++k) {
    const Rational t = make_rational(k, 64);
    if (d_sum(t) < 0) rep.j_nonnegative = false;
    if (psi(t) == 0) throw SingularIntegrandError("check_prop2: E[F(ω,ω_t)] vanishes");
  }

  const auto q = simpson_ratio(d_sum * Rational(1, 2), psi, 0.0L, 1.0L, quad_points, tol);
  rep.integral = q.value;
  rep.quadrature_points = q.points;
  rep.log_ratio = log_rational(rep.psi1) - log_rational(rep.psi0);
  rep.quadrature_error = std::fabs(rep.integral - rep.log_ratio);
  rep.quadrature_ok = rep.quadrature_error <= tol && rep.integral >= -tol;
  return rep;
}

bool check_strong_bk(const CubeEvent& a, const CubeEvent& b) {
  require_same_dim(a, b, "check_strong_bk");
  detail::check_dim(a.n(), kMaxBiDim, "check_strong_bk");
  require_increasing(a, b, "check_strong_bk");
  const Rational psi_half = joint_poly(DisjointOccurrence(a, b).to_bifunction())(Rational(1, 2));
  const Rational box = probability(box_event(a, b));
  return box <= psi_half && psi_half <= probability(a) * probability(b);
}

bool check_dual_reimer(const CubeEvent& a, const CubeEvent& b) {
  require_same_dim(a, b, "check_dual_reimer");
  detail::check_dim(a.n(), kMaxBiDim, "check_dual_reimer");
  const Rational psi_half = joint_poly(DisjointOccurrence(a, b).to_bifunction())(Rational(1, 2));
  return psi_half <= probability(intersect(a, reflect(b)));
}

}  // namespace qcorr
