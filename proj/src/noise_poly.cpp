#include "qcorr/noise_poly.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "qcorr/errors.hpp"

namespace qcorr {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::linear(const Rational& a, const Rational& b) { return RationalPoly({a, b}); }

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

long double RationalPoly::eval(long double t) const {
  long double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->get_d();
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
  return RationalPoly(std::move(d));
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& c) {
  for (auto& a : coeffs_) a *= c;
  trim();
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RationalPoly(std::move(out));
}

std::string RationalPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << coeffs_[k].get_str();
    if (k == 1) os << " t";
    if (k > 1) os << " t^" << k;
  }
  return os.str();
}

namespace {

// t^d (1-t)^{n-d} for d = 0..n.
std::vector<RationalPoly> bernstein_basis(int n) {
  std::vector<RationalPoly> basis;
  basis.reserve(n + 1);
  const RationalPoly t = RationalPoly::linear(0, 1);
  const RationalPoly one_minus_t = RationalPoly::linear(1, -1);
  for (int d = 0; d <= n; ++d) {
    RationalPoly p = RationalPoly::constant(1);
    for (int k = 0; k < d; ++k) p = p * t;
    for (int k = d; k < n; ++k) p = p * one_minus_t;
    basis.push_back(std::move(p));
  }
  return basis;
}

void check_grid(const std::vector<Rational>& grid) {
  for (const auto& t : grid) {
    if (t < 0 || t > Rational(1, 2)) throw UsageError("grid point outside [0, 1/2]: " + t.get_str());
  }
}

long double log_rational(const Rational& q) {
  long exp_num = 0, exp_den = 0;
  const double mant_num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  const double mant_den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log(static_cast<long double>(mant_num)) - std::log(static_cast<long double>(mant_den)) +
         static_cast<long double>(exp_num - exp_den) * std::log(2.0L);
}

}  // namespace

RationalPoly joint_poly(const BiFunction& F) {
  const int n = F.n();
  const std::uint64_t side = F.side();
  std::vector<Rational> by_distance(n + 1);
  for (std::uint64_t y = 0; y < side; ++y) {
    for (std::uint64_t x = 0; x < side; ++x) {
      const auto& v = F(x, y);
      if (v != 0) by_distance[std::popcount(x ^ y)] += v;
    }
  }
  const auto basis = bernstein_basis(n);
  RationalPoly out;
  for (int d = 0; d <= n; ++d) {
    if (by_distance[d] != 0) out += basis[d] * by_distance[d];
  }
  return out * inv_pow2(static_cast<unsigned>(n));
}

RationalPoly joint_poly_product(const CubeFunction& f, const CubeFunction& g) {
  if (f.n() != g.n()) throw UsageError("joint_poly_product: dimension mismatch");
  const int n = f.n();
  const std::uint64_t size = f.size();
  // h[x] holds the coefficients of (N_t g)(x) after the coordinates processed so far.
  std::vector<std::vector<Rational>> h(size);
  for (std::uint64_t x = 0; x < size; ++x) h[x] = {g(x)};
  for (int j = 0; j < n; ++j) {
    const std::uint64_t b = std::uint64_t{1} << j;
    std::vector<std::vector<Rational>> next(size, std::vector<Rational>(j + 2));
    for (std::uint64_t x = 0; x < size; ++x) {
      const auto& same = h[x];
      const auto& flip = h[x ^ b];
      auto& out = next[x];
      // (1 - t) same + t flip
      for (std::size_t k = 0; k < same.size(); ++k) {
        out[k] += same[k];
        out[k + 1] -= same[k];
        out[k + 1] += flip[k];
      }
    }
    h = std::move(next);
  }
  std::vector<Rational> acc(n + 1);
  for (std::uint64_t x = 0; x < size; ++x) {
    if (f(x) == 0) continue;
    for (int k = 0; k <= n; ++k) acc[k] += f(x) * h[x][k];
  }
  return RationalPoly(std::move(acc)) * inv_pow2(static_cast<unsigned>(n));
}

std::vector<Rational> default_half_grid(int points) {
  if (points < 2) throw UsageError("grid needs at least two points");
  std::vector<Rational> grid;
  for (int k = 0; k < points; ++k) grid.push_back(make_rational(k, 2L * (points - 1)));
  return grid;
}

bool check_lemma1(int n, const std::vector<Rational>& grid) {
  detail::check_dim(n, kMaxBiDim, "check_lemma1");
  const std::uint64_t size = std::uint64_t{1} << n;
  const Rational atom = inv_pow2(static_cast<unsigned>(n));
  auto weights_for = [n](const Rational& t) {
    // P[η = m] depends on |m| only.
    std::vector<Rational> w(n + 1);
    for (int d = 0; d <= n; ++d) {
      Rational p = 1;
      for (int k = 0; k < d; ++k) p *= t;
      for (int k = d; k < n; ++k) p *= (1 - t);
      w[d] = p;
    }
    return w;
  };
  for (const auto& t : grid) {
    if (t < 0 || t > 1) throw UsageError("noise parameter outside [0, 1]");
    const auto w = weights_for(t);
    std::vector<Rational> marginal(size);
    for (std::uint64_t x = 0; x < size; ++x) {
      for (std::uint64_t m = 0; m < size; ++m) marginal[x ^ m] += atom * w[std::popcount(m)];
    }
    for (const auto& p : marginal) {
      if (p != atom) return false;
    }
  }
  const auto w = weights_for(Rational(1, 2));
  const Rational joint_atom = atom * atom;
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t m = 0; m < size; ++m) {
      // Each (x, y = x ^ m) is hit by exactly one mask.
      if (atom * w[std::popcount(m)] != joint_atom) return false;
    }
  }
  return true;
}

bool check_interpolation_identity(const BiFunction& F) {
  const RationalPoly lhs = joint_poly(F).derivative();
  RationalPoly rhs;
  for (int i = 1; i <= F.n(); ++i) rhs += joint_poly(grad2_function(F, i));
  rhs *= Rational(-1, 2);
  return lhs == rhs;
}

QuadratureResult simpson_ratio(const RationalPoly& num, const RationalPoly& den, long double a,
                               long double b, int points, long double tol) {
  auto integrand = [&](long double t) { return num.eval(t) / den.eval(t); };
  auto simpson = [&](long panels) {
    const long double h = (b - a) / panels;
    long double s = integrand(a) + integrand(b);
    for (long k = 1; k < panels; ++k) s += integrand(a + h * k) * ((k % 2) ? 4.0L : 2.0L);
    return s * h / 3.0L;
  };
  long panels = std::max(points - 1, 2);
  if (panels % 2) ++panels;
  QuadratureResult res;
  long double prev = simpson(panels);
  constexpr long kMaxPanels = long{1} << 22;
  while (panels < kMaxPanels) {
    panels *= 2;
    const long double cur = simpson(panels);
    const bool done = std::fabs(cur - prev) < tol / 16;
    prev = cur;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.value = prev;
  res.points = static_cast<int>(panels + 1);
  return res;
}

Prop1Report verify_prop1(const CubeFunction& f, const CubeFunction& g, int quad_points, double tol) {
  if (f.n() != g.n()) throw UsageError("verify_prop1: dimension mismatch");
  if (quad_points < 129) throw UsageError("verify_prop1: quad_points must be >= 129");
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    if (f(x) < 0 || g(x) < 0) throw PreconditionError("verify_prop1: functions must be non-negative");
  }
  const Rational ef = expectation(f), eg = expectation(g);
  if (ef == 0 || eg == 0) throw PreconditionError("verify_prop1: zero mean");

  Prop1Report rep;
  rep.phi0 = expectation(CubeFunction::from(f.n(), [&](std::uint64_t x) { return Rational(f(x) * g(x)); }));
  rep.phi_half = ef * eg;
  const RationalPoly phi = joint_poly_product(f, g);
  rep.endpoint_zero = phi(Rational(0)) == rep.phi0;
  rep.endpoint_half = phi(Rational(1, 2)) == rep.phi_half;

  RationalPoly pivotal_sum;  // Σ_i E[∇_i f(ω) ∇_i g(ω_t)]
  for (int i = 1; i <= f.n(); ++i) pivotal_sum += joint_poly_product(grad_function(f, i), grad_function(g, i));
  rep.ode_identity = phi.derivative() == pivotal_sum * Rational(-1, 2);

  for (const auto& t : default_half_grid(65)) {
    if (t > 0 && phi(t) == 0) throw SingularIntegrandError("verify_prop1: E[f(ω)g(ω_t)] vanishes");
  }
  rep.quadrature_applicable = rep.phi0 != 0;
  if (rep.quadrature_applicable) {
    const auto q = simpson_ratio(pivotal_sum * Rational(1, 2), phi, 0.0L, 0.5L, quad_points, tol);
    rep.integral = q.value;
    rep.quadrature_points = q.points;
    rep.log_ratio = log_rational(rep.phi0) - log_rational(rep.phi_half);
    rep.quadrature_error = std::fabs(rep.integral - rep.log_ratio);
    rep.quadrature_ok = rep.quadrature_error <= tol;
  }
  return rep;
}

bool check_remark4(const CubeFunction& f, const std::vector<Rational>& grid) {
  check_grid(grid);
  const RationalPoly deriv = joint_poly_product(f, f).derivative();
  for (const auto& t : grid) {
    if (deriv(t) > 0) return false;
  }
  return true;
}

bool check_holley_noised(const BiFunction& F, const BiFunction& G, const std::vector<Rational>& grid) {
  if (F.n() != G.n()) throw UsageError("check_holley_noised: dimension mismatch");
  check_grid(grid);
  const bool both_inc = F.is_increasing() && G.is_increasing();
  const bool both_dec = F.is_decreasing() && G.is_decreasing();
  if (!both_inc && !both_dec) {
    throw PreconditionError("check_holley_noised: F and G must be both increasing or both decreasing");
  }
  const RationalPoly pfg = joint_poly(F.times(G));
  const RationalPoly pf = joint_poly(F), pg = joint_poly(G);
  for (const auto& t : grid) {
    if (pfg(t) < pf(t) * pg(t)) return false;
  }
  return true;
}

namespace {

std::string coord_msg(const char* what, int i) { return std::string(what) + " at coordinate " + std::to_string(i); }

// F does not react to coordinate i in either argument.
bool insensitive(const BiFunction& F, int i) {
  const std::uint64_t b = std::uint64_t{1} << (i - 1);
  for (std::uint64_t y = 0; y < F.side(); ++y) {
    for (std::uint64_t x = 0; x < F.side(); ++x) {
      if (F(x | b, y) != F(x & ~b, y) || F(x, y | b) != F(x, y & ~b)) return false;
    }
  }
  return true;
}

// sign = +1: increasing in coordinate i of both arguments; -1: decreasing.
bool monotone_in(const BiFunction& F, int i, int sign) {
  const std::uint64_t b = std::uint64_t{1} << (i - 1);
  for (std::uint64_t y = 0; y < F.side(); ++y) {
    for (std::uint64_t x = 0; x < F.side(); ++x) {
      const Rational dx = F(x | b, y) - F(x & ~b, y);
      const Rational dy = F(x, y | b) - F(x, y & ~b);
      if (sign * dx < 0 || sign * dy < 0) return false;
    }
  }
  return true;
}

}  // namespace

bool check_prop3(const CoordinatePartition& part, const BiFunction& F, const BiFunction& G,
                 const std::vector<Rational>& grid) {
  if (F.n() != G.n()) throw UsageError("check_prop3: dimension mismatch");
  check_grid(grid);
  const int n = F.n();
  std::vector<int> owner(n + 1, -1);  // 0:A 1:B 2:S 3:T
  const std::vector<int>* sets[] = {&part.a, &part.b, &part.s, &part.t};
  for (int k = 0; k < 4; ++k) {
    for (int i : *sets[k]) {
      detail::check_index(n, i);
      if (owner[i] != -1) throw PreconditionError(coord_msg("check_prop3: sets overlap", i));
      owner[i] = k;
    }
  }
  for (int i = 1; i <= n; ++i) {
    const bool f_may_depend = owner[i] == 0 || owner[i] == 2 || owner[i] == 3;
    const bool g_may_depend = owner[i] == 1 || owner[i] == 2 || owner[i] == 3;
    if (!f_may_depend && !insensitive(F, i)) {
      throw PreconditionError(coord_msg("check_prop3: F depends on a coordinate outside A∪S∪T", i));
    }
    if (!g_may_depend && !insensitive(G, i)) {
      throw PreconditionError(coord_msg("check_prop3: G depends on a coordinate outside B∪S∪T", i));
    }
    if (owner[i] == 2 && !(monotone_in(F, i, 1) && monotone_in(G, i, 1))) {
      throw PreconditionError(coord_msg("check_prop3: not S-increasing", i));
    }
    if (owner[i] == 3 && !(monotone_in(F, i, -1) && monotone_in(G, i, -1))) {
      throw PreconditionError(coord_msg("check_prop3: not T-decreasing", i));
    }
  }
  const RationalPoly pfg = joint_poly(F.times(G));
  const RationalPoly pf = joint_poly(F), pg = joint_poly(G);
  for (const auto& t : grid) {
    if (pfg(t) < pf(t) * pg(t)) return false;
  }
  return true;
}

}  // namespace qcorr
