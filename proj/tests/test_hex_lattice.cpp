#include <cmath>
#include <queue>
#include <random>
#include <set>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/hex_lattice.hpp"

using namespace qcorr;

namespace {

// Floating-point convex polygon oracle, independent of the separating-axis code.
using Pt = std::pair<long double, long double>;
constexpr long double kEps = 1e-12L;

std::vector<Pt> hex_polygon(const HexId& h, long double pitch) {
  const long double s3 = std::sqrt(3.0L);
  const long double cx = pitch * (h.a + 0.5L * h.b), cy = pitch * h.b * s3 / 2;
  const long double r = pitch / s3;
  std::vector<Pt> v;
  for (int j = 0; j < 6; ++j) {
    const long double ang = (90.0L + 60.0L * j) * 3.14159265358979323846L / 180.0L;
    v.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
  }
  return v;
}

std::vector<Pt> rect_polygon(long double x0, long double x1, long double y0, long double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

long double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

bool on_segment(const Pt& p, const Pt& a, const Pt& b) {
  return std::fabs(cross(a, b, p)) <= kEps && std::min(a.first, b.first) - kEps <= p.first &&
         p.first <= std::max(a.first, b.first) + kEps && std::min(a.second, b.second) - kEps <= p.second &&
         p.second <= std::max(a.second, b.second) + kEps;
}

bool segments_meet(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  const long double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
      ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps))) {
    return true;
  }
  return on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b);
}

// Point inside a convex polygon (counter-clockwise), boundary included.
bool inside(const Pt& p, const std::vector<Pt>& poly) {
  long double area = 0;
  for (std::size_t j = 0; j < poly.size(); ++j) area += cross(poly[0], poly[j], poly[(j + 1) % poly.size()]);
  if (std::fabs(area) <= kEps) {  // degenerate rectangle: a point or a segment
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (on_segment(p, poly[j], poly[(j + 1) % poly.size()])) return true;
    }
    return false;
  }
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (cross(poly[j], poly[(j + 1) % poly.size()], p) < -kEps) return false;
  }
  return true;
}

bool polygons_meet(const std::vector<Pt>& p, const std::vector<Pt>& q) {
  for (const auto& v : p) if (inside(v, q)) return true;
  for (const auto& v : q) if (inside(v, p)) return true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (segments_meet(p[i], p[(i + 1) % p.size()], q[j], q[(j + 1) % q.size()])) return true;
    }
  }
  return false;
}

// Hexagons meeting [x0,x1] x [y0,y1] by scanning a generous window with the oracle.
std::set<HexId> oracle_meeting(long double x0, long double x1, long double y0, long double y1, long double pitch) {
  std::set<HexId> out;
  const int span = static_cast<int>(std::ceil(2 * std::max({std::fabs(x0), std::fabs(x1), std::fabs(y0), std::fabs(y1)}) / pitch)) + 3;
  for (int b = -span; b <= span; ++b) {
    for (int a = -2 * span; a <= 2 * span; ++a) {
      if (polygons_meet(hex_polygon({a, b}, pitch), rect_polygon(x0, x1, y0, y1))) out.insert({a, b});
    }
  }
  return out;
}

std::set<HexId> as_hexes(const Lattice& lat, const std::vector<int>& ids) {
  std::set<HexId> s;
  for (int g : ids) s.insert(lat.hex(g));
  return s;
}

}  // namespace

TEST_CASE("neighbours") {
  const Lattice lat(4);
  const std::set<HexId> expect{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
  const auto got = lat.neighbours(HexId{0, 0});
  CHECK(std::set<HexId>(got.begin(), got.end()) == expect);
  for (int g = 0; g < lat.size(); ++g) {
    for (int h : lat.neighbours(g)) {
      const auto back = lat.neighbours(h);
      CHECK(std::find(back.begin(), back.end(), g) != back.end());
    }
  }
  CHECK(lat.neighbours(lat.origin()).size() == 6);
  CHECK(lat.origin_closure().size() == 7);
}

TEST_CASE("dense ids are a bijection") {
  const Lattice lat(5);
  for (int g = 0; g < lat.size(); ++g) CHECK(lat.id(lat.hex(g)) == g);
  CHECK(lat.id({100, 0}) == -1);
  CHECK(lat.id({0, -100}) == -1);
}

TEST_CASE("points") {
  const Lattice lat(3);
  CHECK(as_hexes(lat, lat.hexes_meeting(Region::point(0, 0))) == std::set<HexId>{{0, 0}});
  CHECK(as_hexes(lat, lat.hexes_meeting(Region::point(1, 0))) == std::set<HexId>{{1, 0}});
  // Midpoint of the edge shared by (0,0) and (1,0) belongs to both closed faces.
  CHECK(as_hexes(lat, lat.hexes_meeting(Region::point(Rational(1, 2), 0))) == std::set<HexId>{{0, 0}, {1, 0}});
  CHECK(as_hexes(lat, lat.hexes_meeting(Region::point(Rational(1, 4), 0))) == std::set<HexId>{{0, 0}});
}

TEST_CASE("lattice covers exactly the hexagons meeting the box") {
  for (int n = 1; n <= 6; ++n) {
    const Lattice lat(n);
    std::set<HexId> all;
    for (int g = 0; g < lat.size(); ++g) all.insert(lat.hex(g));
    CHECK(all == oracle_meeting(-n, n, -n, n, 1));
  }
}

TEST_CASE("regression size of the lattice at extent 4") {
  const Lattice lat(4);
  CHECK(lat.size() == static_cast<int>(oracle_meeting(-4, 4, -4, 4, 1).size()));
  CHECK(lat.size() == 101);
}

TEST_CASE("hexes_meeting agrees with the polygon oracle on random rectangles") {
  const Lattice lat(6);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coord(-24, 24);
  for (int trial = 0; trial < 200; ++trial) {
    int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    if (trial % 5 == 0) x1 = x0;  // segments
    const auto r = Region::rect(Rational(x0, 4), Rational(x1, 4), Rational(y0, 4), Rational(y1, 4));
    CHECK(as_hexes(lat, lat.hexes_meeting(r)) == oracle_meeting(x0 / 4.0L, x1 / 4.0L, y0 / 4.0L, y1 / 4.0L, 1));
  }
}

TEST_CASE("pitch rescales the picture") {
  const Lattice coarse(10), fine(1, Rational(1, 10));
  CHECK(coarse.size() == fine.size());
  const auto a = coarse.hexes_meeting(Region::rect(-3, 7, -2, 5));
  const auto b = fine.hexes_meeting(Region::rect(Rational(-3, 10), Rational(7, 10), Rational(-2, 10), Rational(5, 10)));
  CHECK(as_hexes(coarse, a) == as_hexes(fine, b));
}

TEST_CASE("union distributes") {
  const Lattice lat(8);
  const auto r1 = Region::rect(-5, 1, -2, 3), r2 = Region::annulus(2, 4, 1, 1);
  auto a = lat.hexes_meeting(r1), b = lat.hexes_meeting(r2);
  std::set<int> both(a.begin(), a.end());
  both.insert(b.begin(), b.end());
  const auto u = lat.hexes_meeting(Region::unite({r1, r2}));
  CHECK(std::set<int>(u.begin(), u.end()) == both);
}

TEST_CASE("annulus is the outer box minus the inner faces") {
  const Lattice lat(6);
  const auto ann = lat.hexes_meeting(Region::annulus(2, 5));
  const auto outer = lat.hexes_meeting(Region::box(5));
  std::set<int> expect;
  for (int g : outer) {
    if (!hex_inside_rect(lat.hex(g), 1, -2, 2, -2, 2, true)) expect.insert(g);
  }
  CHECK(std::set<int>(ann.begin(), ann.end()) == expect);
  // Every annulus hexagon meets the inner boundary or lies outside the inner box.
  const auto inner_boundary = lat.mask(Region::box_boundary(2));
  const auto inner_box = lat.mask(Region::box(2));
  for (int g : ann) CHECK((inner_boundary[g] || !inner_box[g]));
  CHECK(std::find(ann.begin(), ann.end(), lat.origin()) == ann.end());
}

TEST_CASE("faces that meet are equal or adjacent") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    const HexId h{d(rng), d(rng)}, g{h.a + d(rng), h.b + d(rng)};
    const bool adjacent = h == g || std::any_of(std::begin(kNeighbourOffsets), std::end(kNeighbourOffsets),
                                                [&](const HexId& o) { return HexId{h.a + o.a, h.b + o.b} == g; });
    CHECK(polygons_meet(hex_polygon(h, 1), hex_polygon(g, 1)) == adjacent);
  }
}

TEST_CASE("adjacency restricted to a box is connected") {
  const Lattice lat(8);
  for (int m = 1; m <= 8; ++m) {
    const auto in = lat.mask(Region::box(m));
    const auto ids = lat.hexes_meeting(Region::box(m));
    std::vector<char> seen(lat.size(), 0);
    std::queue<int> q;
    q.push(ids.front());
    seen[ids.front()] = 1;
    std::size_t count = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      ++count;
      for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
        if (in[*it] && !seen[*it]) {
          seen[*it] = 1;
          q.push(*it);
        }
      }
    }
    CHECK(count == ids.size());
  }
}

TEST_CASE("standard regions") {
  for (int k = 1; k <= 3; ++k) {
    const auto s = standard_regions(k, 10 * k);
    // B_k sits in the annulus between scales k and 3k.
    const auto ring = Region::annulus(k, 3 * k);
    for (const auto& x : {s.b_box.x0(), s.b_box.x1()}) {
      for (const auto& y : {s.b_box.y0(), s.b_box.y1()}) CHECK(ring.contains(x, y));
    }
    CHECK(s.b_box.reflected().bounds() == s.b_box_prime.bounds());
    // The two annuli overlap exactly on B_k and its reflection (checked on a quarter-unit grid).
    for (int i = -32 * k; i <= 32 * k; ++i) {
      for (int j = -32 * k; j <= 32 * k; ++j) {
        const Rational x(i, 4), y(j, 4);
        const bool both = s.a_plus.contains(x, y) && s.a_minus.contains(x, y);
        const bool boxes = s.b_box.contains(x, y) || s.b_box_prime.contains(x, y);
        CHECK(both == boxes);
      }
    }
    const Lattice lat(10 * k);
    const auto hb = lat.hexes_meeting(s.b_box);
    const auto hr = lat.mask(ring);
    for (int g : hb) CHECK(hr[g]);
    CHECK(s.r_reflected.bounds() == std::array<Rational, 4>{-k, k, -k, 3 * k});
    CHECK(s.s.contains(0, 6 * k));
    CHECK(s.s_reflected.contains(0, -6 * k));
    CHECK_FALSE(s.s.contains(0, 0));
  }
  CHECK_THROWS_AS(standard_regions(2, 19), UsageError);
  CHECK_THROWS_AS(standard_regions(0, 10), UsageError);
}

TEST_CASE("region errors") {
  const Lattice lat(3);
  CHECK_THROWS_AS(lat.hexes_meeting(Region::box(4)), UsageError);
  CHECK_THROWS_AS(Region::annulus(3, 3), UsageError);
  CHECK_THROWS_AS(Region::rect(1, 0, 0, 1), UsageError);
  CHECK_THROWS_AS(Lattice(0), UsageError);
}
