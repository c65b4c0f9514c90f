#include "qcorr/hex_lattice.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

// Work in scaled coordinates X = 2x/pitch, Y = 2*sqrt(3)*y/pitch. A face
// centred at (2a+b, 3b) then has the integer vertices (+-1, +-1), (0, +-2)
// around its centre, while rectangle sides become numbers r + s*sqrt(3).
struct Surd {
  Rational r, s;  // r + s*sqrt(3)
};

const long double kSqrt3 = std::sqrt(3.0L);

int sign(const Rational& q) { return sgn(q); }

// Sign of r + s*sqrt(3).
int sign(const Surd& v) {
  const int sr = sign(v.r), ss = sign(v.s);
  if (sr == 0) return ss;
  if (ss == 0 || sr == ss) return sr;
  const int c = cmp(Rational(v.r * v.r), Rational(3 * v.s * v.s));
  return c > 0 ? sr : ss;  // equality would make sqrt(3) rational
}

// Scaled rectangle with a floating copy used to skip the exact path when the
// answer is clear.
struct ScaledRect {
  Surd x0, x1, y0, y1;
  long double fx0, fx1, fy0, fy1;
};

long double approx(const Surd& v) { return v.r.get_d() + v.s.get_d() * kSqrt3; }

ScaledRect scale(const Rational& pitch, const Rational& x0, const Rational& x1, const Rational& y0,
                 const Rational& y1) {
  const Rational k = 2 / pitch;
  ScaledRect s{{k * x0, 0}, {k * x1, 0}, {0, k * y0}, {0, k * y1}, 0, 0, 0, 0};
  s.fx0 = approx(s.x0);
  s.fx1 = approx(s.x1);
  s.fy0 = approx(s.y0);
  s.fy1 = approx(s.y1);
  return s;
}

// Sign of (a - b) where a = int + lin-combination of rect bounds.
// Evaluated in floating point first; exact when within the margin.
constexpr long double kMargin = 1e-9L;

// lhs <= rhs where both are sums  c + sum_j w_j * bound_j.
bool le(long double fl, long double fr, const Surd& l, const Surd& r, bool strict) {
  const long double d = fr - fl;
  const long double scale = 1 + std::fabs(fl) + std::fabs(fr);
  if (d > kMargin * scale) return true;
  if (d < -kMargin * scale) return false;
  const int s = sign(Surd{r.r - l.r, r.s - l.s});
  return strict ? s > 0 : s >= 0;
}

Surd add(const Surd& a, const Surd& b) { return {a.r + b.r, a.s + b.s}; }
Surd sub(const Surd& a, const Surd& b) { return {a.r - b.r, a.s - b.s}; }
Surd integer(long v) { return {Rational(v), 0}; }

// Closed intervals [lo1, hi1] and [lo2, hi2] overlap.
bool overlap(long flo1, long fhi1, long double flo2, long double fhi2, const Surd& lo2, const Surd& hi2) {
  return le(static_cast<long double>(flo1), fhi2, integer(flo1), hi2, false) &&
         le(flo2, static_cast<long double>(fhi1), lo2, integer(fhi1), false);
}

// Separating-axis test on the axes (1,0), (0,1), (1,1), (1,-1); these are
// normals of both shapes in scaled coordinates.
bool hex_meets_scaled(const HexId& h, const ScaledRect& q) {
  const long cx = 2L * h.a + h.b, cy = 3L * h.b;
  if (!overlap(cx - 1, cx + 1, q.fx0, q.fx1, q.x0, q.x1)) return false;
  if (!overlap(cy - 2, cy + 2, q.fy0, q.fy1, q.y0, q.y1)) return false;
  if (!overlap(cx + cy - 2, cx + cy + 2, q.fx0 + q.fy0, q.fx1 + q.fy1, add(q.x0, q.y0), add(q.x1, q.y1))) {
    return false;
  }
  return overlap(cx - cy - 2, cx - cy + 2, q.fx0 - q.fy1, q.fx1 - q.fy0, sub(q.x0, q.y1), sub(q.x1, q.y0));
}

constexpr int kVertex[6][2] = {{1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}, {1, -1}};

bool hex_inside_scaled(const HexId& h, const ScaledRect& q, bool strict) {
  const long cx = 2L * h.a + h.b, cy = 3L * h.b;
  for (const auto& v : kVertex) {
    const long x = cx + v[0], y = cy + v[1];
    const auto fx = static_cast<long double>(x), fy = static_cast<long double>(y);
    if (!le(q.fx0, fx, q.x0, integer(x), strict) || !le(fx, q.fx1, integer(x), q.x1, strict)) return false;
    if (!le(q.fy0, fy, q.y0, integer(y), strict) || !le(fy, q.fy1, integer(y), q.y1, strict)) return false;
  }
  return true;
}

ScaledRect scaled_outer(const Region& r, const Rational& pitch) {
  return scale(pitch, r.cx() - r.outer(), r.cx() + r.outer(), r.cy() - r.outer(), r.cy() + r.outer());
}

ScaledRect scaled_inner(const Region& r, const Rational& pitch) {
  return scale(pitch, r.cx() - r.inner(), r.cx() + r.inner(), r.cy() - r.inner(), r.cy() + r.inner());
}

}  // namespace

std::string to_string(const HexId& h) { return "(" + std::to_string(h.a) + "," + std::to_string(h.b) + ")"; }

Region Region::rect(Rational x0, Rational x1, Rational y0, Rational y1) {
  if (x0 > x1 || y0 > y1) throw UsageError("Region::rect: empty rectangle");
  Region r;
  r.kind_ = Kind::Rect;
  r.p_ = {std::move(x0), std::move(x1), std::move(y0), std::move(y1)};
  return r;
}

Region Region::box(const Rational& n, const Rational& cx, const Rational& cy) {
  if (n < 0) throw UsageError("Region::box: negative half-width");
  return rect(cx - n, cx + n, cy - n, cy + n);
}

Region Region::annulus(const Rational& inner, const Rational& outer, const Rational& cx, const Rational& cy) {
  if (inner < 0 || !(inner < outer)) throw UsageError("Region::annulus: need 0 <= inner < outer");
  Region r;
  r.kind_ = Kind::Annulus;
  r.p_ = {inner, outer, cx, cy};
  return r;
}

Region Region::unite(std::vector<Region> parts) {
  if (parts.empty()) throw UsageError("Region::unite: no parts");
  Region r;
  r.kind_ = Kind::Union;
  r.parts_ = std::move(parts);
  return r;
}

Region Region::box_boundary(const Rational& n, const Rational& cx, const Rational& cy) {
  if (n <= 0) throw UsageError("Region::box_boundary: half-width must be positive");
  const Rational x0 = cx - n, x1 = cx + n, y0 = cy - n, y1 = cy + n;
  return unite({rect(x0, x1, y0, y0), rect(x0, x1, y1, y1), rect(x0, x0, y0, y1), rect(x1, x1, y0, y1)});
}

Region Region::reflected() const {
  switch (kind_) {
    case Kind::Rect:
      return rect(-x1(), -x0(), -y1(), -y0());
    case Kind::Annulus:
      return annulus(inner(), outer(), -cx(), -cy());
    case Kind::Union: {
      std::vector<Region> v;
      for (const auto& p : parts_) v.push_back(p.reflected());
      return unite(std::move(v));
    }
  }
  return *this;
}

Region Region::translated(const Rational& dx, const Rational& dy) const {
  switch (kind_) {
    case Kind::Rect:
      return rect(x0() + dx, x1() + dx, y0() + dy, y1() + dy);
    case Kind::Annulus:
      return annulus(inner(), outer(), cx() + dx, cy() + dy);
    case Kind::Union: {
      std::vector<Region> v;
      for (const auto& p : parts_) v.push_back(p.translated(dx, dy));
      return unite(std::move(v));
    }
  }
  return *this;
}

std::array<Rational, 4> Region::bounds() const {
  switch (kind_) {
    case Kind::Rect:
      return p_;
    case Kind::Annulus:
      return {cx() - outer(), cx() + outer(), cy() - outer(), cy() + outer()};
    case Kind::Union: {
      auto b = parts_.front().bounds();
      for (const auto& p : parts_) {
        const auto c = p.bounds();
        b[0] = std::min(b[0], c[0]);
        b[1] = std::max(b[1], c[1]);
        b[2] = std::min(b[2], c[2]);
        b[3] = std::max(b[3], c[3]);
      }
      return b;
    }
  }
  return p_;
}

bool Region::contains(const Rational& x, const Rational& y) const {
  switch (kind_) {
    case Kind::Rect:
      return x0() <= x && x <= x1() && y0() <= y && y <= y1();
    case Kind::Annulus: {
      const Rational dx = abs(Rational(x - cx())), dy = abs(Rational(y - cy()));
      return std::max(dx, dy) <= outer() && std::max(dx, dy) >= inner();
    }
    case Kind::Union:
      return std::any_of(parts_.begin(), parts_.end(), [&](const Region& p) { return p.contains(x, y); });
  }
  return false;
}

bool hex_meets(const HexId& h, const Rational& pitch, const Region& region) {
  switch (region.kind()) {
    case Region::Kind::Rect:
      return hex_meets_scaled(h, scale(pitch, region.x0(), region.x1(), region.y0(), region.y1()));
    case Region::Kind::Annulus:
      return hex_meets_scaled(h, scaled_outer(region, pitch)) &&
             !(region.inner() > 0 && hex_inside_scaled(h, scaled_inner(region, pitch), true));
    case Region::Kind::Union:
      return std::any_of(region.parts().begin(), region.parts().end(),
                         [&](const Region& p) { return hex_meets(h, pitch, p); });
  }
  return false;
}

bool hex_inside_rect(const HexId& h, const Rational& pitch, const Rational& x0, const Rational& x1,
                     const Rational& y0, const Rational& y1, bool strict) {
  return hex_inside_scaled(h, scale(pitch, x0, x1, y0, y1), strict);
}

Lattice::Lattice(int n_max, Rational pitch) : n_max_(n_max), pitch_(std::move(pitch)) {
  if (n_max < 1) throw UsageError("Lattice: extent must be >= 1");
  if (pitch_ <= 0) throw UsageError("Lattice: pitch must be positive");
  const ScaledRect outer = scale(pitch_, -n_max, n_max, -n_max, n_max);
  // Candidate rows: 3|b| - 2 <= 2*sqrt(3)*n/pitch.
  const long double half_y = outer.fy1, half_x = outer.fx1;
  const int b_hi = static_cast<int>(std::floor((half_y + 2) / 3)) + 1;
  b_min_ = -b_hi;
  for (int b = -b_hi; b <= b_hi; ++b) {
    const int a_lo = static_cast<int>(std::floor((-half_x - 1 - b) / 2)) - 1;
    const int a_hi = static_cast<int>(std::ceil((half_x + 1 - b) / 2)) + 1;
    int first = 0, count = 0;
    for (int a = a_lo; a <= a_hi; ++a) {
      if (!hex_meets_scaled({a, b}, outer)) continue;
      if (count == 0) first = a;
      if (a != first + count) throw std::logic_error("Lattice: row is not contiguous");
      hexes_.push_back({a, b});
      ++count;
    }
    row_a_min_.push_back(first);
    row_start_.push_back(static_cast<int>(hexes_.size()) - count);
    row_len_.push_back(count);
  }
  adj_start_.reserve(hexes_.size() + 1);
  adj_start_.push_back(0);
  for (const auto& h : hexes_) {
    for (const auto& d : kNeighbourOffsets) {
      const int g = id({h.a + d.a, h.b + d.b});
      if (g >= 0) adj_.push_back(g);
    }
    adj_start_.push_back(static_cast<int>(adj_.size()));
  }
  origin_ = id({0, 0});
}

int Lattice::id(const HexId& h) const {
  const int row = h.b - b_min_;
  if (row < 0 || row >= static_cast<int>(row_len_.size())) return -1;
  const int off = h.a - row_a_min_[row];
  if (off < 0 || off >= row_len_[row]) return -1;
  return row_start_[row] + off;
}

std::vector<HexId> Lattice::neighbours(const HexId& h) const {
  std::vector<HexId> out;
  for (const auto& d : kNeighbourOffsets) {
    const HexId g{h.a + d.a, h.b + d.b};
    if (id(g) >= 0) out.push_back(g);
  }
  return out;
}

std::vector<int> Lattice::hexes_meeting(const Region& region) const {
  const auto bb = region.bounds();
  if (bb[0] < -n_max_ || bb[1] > n_max_ || bb[2] < -n_max_ || bb[3] > n_max_) {
    throw UsageError("hexes_meeting: region exceeds the lattice extent");
  }
  const ScaledRect q = scale(pitch_, bb[0], bb[1], bb[2], bb[3]);
  const int b_lo = static_cast<int>(std::floor((q.fy0 - 2) / 3)) - 1;
  const int b_hi = static_cast<int>(std::ceil((q.fy1 + 2) / 3)) + 1;
  std::vector<int> out;
  for (int b = b_lo; b <= b_hi; ++b) {
    const int a_lo = static_cast<int>(std::floor((q.fx0 - 1 - b) / 2)) - 1;
    const int a_hi = static_cast<int>(std::ceil((q.fx1 + 1 - b) / 2)) + 1;
    for (int a = a_lo; a <= a_hi; ++a) {
      const int g = id({a, b});
      if (g < 0 || !hex_meets_scaled({a, b}, q)) continue;
      if (region.kind() == Region::Kind::Rect || hex_meets({a, b}, pitch_, region)) out.push_back(g);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<char> Lattice::mask(const Region& region) const {
  std::vector<char> m(hexes_.size(), 0);
  for (int g : hexes_meeting(region)) m[g] = 1;
  return m;
}

std::vector<int> Lattice::origin_closure() const {
  std::vector<int> out{origin_};
  out.insert(out.end(), neighbours_begin(origin_), neighbours_end(origin_));
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> Lattice::centre(int id) const {
  const double p = pitch_.get_d();
  const auto& h = hexes_[id];
  return {p * (h.a + 0.5 * h.b), p * h.b * std::sqrt(3.0) / 2};
}

StandardRegions standard_regions(int k, int n) {
  if (k < 1 || 10 * k > n) throw UsageError("standard_regions: need 1 <= k and 10k <= n");
  StandardRegions s;
  s.a_plus = Region::annulus(3 * k, 5 * k, 2 * k, 2 * k);
  s.a_minus = Region::annulus(3 * k, 5 * k, -2 * k, -2 * k);
  s.b_box = Region::rect(-3 * k, -k, k, 3 * k);
  s.b_box_prime = s.b_box.reflected();
  s.r = Region::rect(-k, k, -3 * k, k);
  s.r_reflected = s.r.reflected();
  s.s = Region::unite({Region::annulus(7 * k, n), Region::box(k, 0, 6 * k)});
  s.s_reflected = s.s.reflected();
  return s;
}

}  // namespace qcorr
