#pragma once

// Brute-force references for the percolation detectors. They share the
// region resolution of the lattice but none of the graph code.

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "qcorr/perco.hpp"

namespace oracle {

using qcorr::Colour;
using qcorr::Config;
using qcorr::Lattice;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

inline bool adjacent(const Lattice& lat, int u, int v) {
  for (auto it = lat.neighbours_begin(u); it != lat.neighbours_end(u); ++it) {
    if (*it == v) return true;
  }
  return false;
}

inline std::vector<char> to_mask(const Lattice& lat, const std::vector<int>& ids) {
  std::vector<char> m(lat.size(), 0);
  for (int g : ids) m[g] = 1;
  return m;
}

/// Colour-c chain inside `inside` from a hexagon of `from` to one of `to`, by union-find.
inline bool chain(const Lattice& lat, const Config& c, Colour colour, const std::vector<char>& inside,
                  const std::vector<char>& from, const std::vector<char>& to) {
  UnionFind uf(lat.size());
  auto ok = [&](int v) { return inside[v] && c.is(v, colour); };
  for (int u = 0; u < lat.size(); ++u) {
    for (int v = u + 1; v < lat.size(); ++v) {
      if (ok(u) && ok(v) && adjacent(lat, u, v)) uf.join(u, v);
    }
  }
  for (int u = 0; u < lat.size(); ++u) {
    if (!ok(u) || !from[u]) continue;
    for (int v = 0; v < lat.size(); ++v) {
      if (ok(v) && to[v] && uf.find(u) == uf.find(v)) return true;
    }
  }
  return false;
}

/// Enumerates simple colour-c paths inside `inside` that start in `from`,
/// meet `from` only at their first hexagon and `to` only at their last.
/// The callback gets the path mask; returning true stops the enumeration.
inline bool for_each_arm(const Lattice& lat, const Config& c, Colour colour, const std::vector<char>& inside,
                         const std::vector<int>& starts, const std::vector<char>& from, const std::vector<char>& to,
                         const std::function<bool(const std::vector<char>&)>& visit) {
  std::vector<char> on(lat.size(), 0);
  std::function<bool(int)> go = [&](int v) -> bool {
    on[v] = 1;
    bool stop = false;
    if (to[v]) {
      stop = visit(on);
    } else {
      for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v) && !stop; ++it) {
        const int u = *it;
        if (on[u] || from[u] || !inside[u] || !c.is(u, colour)) continue;
        stop = go(u);
      }
    }
    on[v] = 0;
    return stop;
  };
  for (int s : starts) {
    if (inside[s] && c.is(s, colour) && go(s)) return true;
  }
  return false;
}

/// Two hexagon-disjoint arms, the first read in c0 and the second in c1.
inline bool disjoint_arms(const Lattice& lat, const Config& c0, const Config& c1, Colour colour,
                          const std::vector<char>& inside, const std::vector<int>& sources,
                          const std::vector<char>& target) {
  const auto from = to_mask(lat, sources);
  return for_each_arm(lat, c0, colour, inside, sources, from, target, [&](const std::vector<char>& p) {
    std::vector<char> rest = inside;
    for (int v = 0; v < lat.size(); ++v) {
      if (p[v]) rest[v] = 0;
    }
    return chain(lat, c1, colour, rest, from, target);
  });
}

/// Four pairwise disjoint arms from `ring` (listed in cyclic order) to
/// `target` inside `inside`, starting on ring hexagons of alternating colours.
inline bool four_arm(const Lattice& lat, const Config& c, const std::vector<int>& ring,
                     const std::vector<char>& inside, const std::vector<char>& target) {
  const auto from = to_mask(lat, ring);
  auto two_disjoint = [&](int p, int q, Colour colour) {
    return for_each_arm(lat, c, colour, inside, {p}, from, target, [&](const std::vector<char>& arm) {
      std::vector<char> rest = inside;
      for (int v = 0; v < lat.size(); ++v) {
        if (arm[v]) rest[v] = 0;
      }
      bool ok = false;
      for_each_arm(lat, c, colour, rest, {q}, from, target, [&](const std::vector<char>&) {
        ok = true;
        return true;
      });
      return ok;
    });
  };
  const int m = static_cast<int>(ring.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        for (int l = k + 1; l < m; ++l) {
          const int q[4] = {ring[i], ring[j], ring[k], ring[l]};
          for (int shift = 0; shift < 2; ++shift) {
            const int b1 = q[shift], w1 = q[shift + 1], b2 = q[shift + 2], w2 = q[(shift + 3) % 4];
            if (!c.is(b1, Colour::Black) || !c.is(b2, Colour::Black)) continue;
            if (!c.is(w1, Colour::White) || !c.is(w2, Colour::White)) continue;
            if (two_disjoint(b1, b2, Colour::Black) && two_disjoint(w1, w2, Colour::White)) return true;
          }
        }
      }
    }
  }
  return false;
}

/// Four arms from the six neighbours of the origin to the boundary of Lambda_n.
inline bool four_arm_origin(const Lattice& lat, const Config& c, int n) {
  // Ring of neighbours in angular order.
  static const qcorr::HexId ring_order[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  std::vector<int> ring;
  for (const auto& h : ring_order) ring.push_back(lat.id(h));
  std::vector<char> inside = lat.mask(qcorr::Region::box(n));
  inside[lat.origin()] = 0;
  std::vector<char> target = lat.mask(qcorr::Region::box_boundary(n));
  target[lat.origin()] = 0;
  return four_arm(lat, c, ring, inside, target);
}

/// A colour-c cycle of faces inside `inside` whose polygon of centres winds an
/// odd number of times around (px, py). Closed walks in the double cover that
/// flips parity when crossing a fixed ray from the point.
inline bool winding_cycle(const Lattice& lat, const Config& c, Colour colour, const std::vector<char>& inside,
                          double px, double py) {
  const double theta = 0.1234567, dx = std::cos(theta), dy = std::sin(theta);
  auto crosses = [&](int u, int v) {
    const auto [ux, uy] = lat.centre(u);
    const auto [vx, vy] = lat.centre(v);
    // Solve u + s (v - u) = p + r (dx, dy) with s in [0, 1], r >= 0.
    const double ex = vx - ux, ey = vy - uy;
    const double det = ex * (-dy) - ey * (-dx);
    if (std::fabs(det) < 1e-15) return false;
    const double qx = px - ux, qy = py - uy;
    const double s = (qx * (-dy) - qy * (-dx)) / det;
    const double r = (ex * qy - ey * qx) / det;
    return s >= 0 && s < 1 && r >= 0;
  };
  const int n = lat.size();
  UnionFind uf(2 * n);
  auto ok = [&](int v) { return inside[v] && c.is(v, colour); };
  for (int u = 0; u < n; ++u) {
    if (!ok(u)) continue;
    for (auto it = lat.neighbours_begin(u); it != lat.neighbours_end(u); ++it) {
      const int v = *it;
      if (v < u || !ok(v)) continue;
      const int flip = crosses(u, v) ? 1 : 0;
      uf.join(2 * u, 2 * v + flip);
      uf.join(2 * u + 1, 2 * v + 1 - flip);
    }
  }
  for (int u = 0; u < n; ++u) {
    if (ok(u) && uf.find(2 * u) == uf.find(2 * u + 1)) return true;
  }
  return false;
}

/// Exact probability of an event by enumerating every colouring of the
/// listed free hexagons (all others fixed by `base`).
inline double enumerate(const Config& base, const std::vector<int>& free, const std::function<bool(const Config&)>& event) {
  Config c = base;
  long hits = 0;
  const long total = 1L << free.size();
  for (long m = 0; m < total; ++m) {
    for (std::size_t j = 0; j < free.size(); ++j) c.set(free[j], ((m >> j) & 1) ? Colour::Black : Colour::White);
    hits += event(c);
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace oracle
