#include "qcorr/perco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::vector<char> ids_to_mask(int size, const std::vector<int>& ids) {
  std::vector<char> m(size, 0);
  for (int g : ids) m[g] = 1;
  return m;
}

std::vector<int> masked(const std::vector<int>& ids, const std::vector<char>& mask) {
  std::vector<int> out;
  for (int g : ids) {
    if (mask[g]) out.push_back(g);
  }
  return out;
}

// Breadth-first search over colour-c hexagons of p.inside, started from the
// c-coloured sources. Returns the first target reached, or -1. `parent`
// (when given) records the search tree; `seen` is left filled.
int bfs(const Lattice& lat, const Config& c, Colour colour, const Passage& p, const std::vector<char>* blocked,
        std::vector<char>& seen, std::vector<int>* parent) {
  seen.assign(lat.size(), 0);
  if (parent) parent->assign(lat.size(), -1);
  std::vector<int> queue;
  queue.reserve(64);
  auto ok = [&](int v) { return p.inside[v] && c.is(v, colour) && !(blocked && (*blocked)[v]); };
  for (int s : p.sources) {
    if (!seen[s] && ok(s)) {
      seen[s] = 1;
      if (p.target[s]) return s;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
      const int u = *it;
      if (seen[u] || !ok(u)) continue;
      seen[u] = 1;
      if (parent) (*parent)[u] = v;
      if (p.target[u]) return u;
      queue.push_back(u);
    }
  }
  return -1;
}

Passage make_passage(const Lattice& lat, const Region& inside, const std::vector<int>& sources,
                     const Region& target) {
  Passage p;
  p.inside = lat.mask(inside);
  p.sources = masked(sources, p.inside);
  p.target = lat.mask(target);
  for (int g = 0; g < lat.size(); ++g) p.target[g] = p.target[g] && p.inside[g];
  return p;
}

// Passage across an annulus. Sources are the hexagons adjacent to the hole.
// Targets are the hexagons adjacent to the exterior when `topological`,
// otherwise those meeting the outer boundary.
Passage annulus_passage(const Lattice& lat, const Region& annulus, bool topological) {
  const Region outer = Region::box(annulus.outer(), annulus.cx(), annulus.cy());
  Passage p;
  p.inside = lat.mask(annulus);
  std::vector<char> hole = lat.mask(outer);
  bool any_hole = false;
  for (int g = 0; g < lat.size(); ++g) {
    hole[g] = hole[g] && !p.inside[g];
    any_hole = any_hole || hole[g];
  }
  if (!any_hole) throw UsageError("annulus hole contains no hexagon");
  if (topological) {
    p.target.assign(lat.size(), 0);
  } else {
    p.target = lat.mask(Region::box_boundary(annulus.outer(), annulus.cx(), annulus.cy()));
  }
  for (int g = 0; g < lat.size(); ++g) {
    if (!p.inside[g]) {
      p.target[g] = 0;
      continue;
    }
    bool near_hole = false, near_exterior = std::distance(lat.neighbours_begin(g), lat.neighbours_end(g)) < 6;
    for (auto it = lat.neighbours_begin(g); it != lat.neighbours_end(g); ++it) {
      near_hole = near_hole || hole[*it];
      near_exterior = near_exterior || (!hole[*it] && !p.inside[*it]);
    }
    if (near_hole) p.sources.push_back(g);
    if (topological) p.target[g] = near_exterior;
  }
  return p;
}

// Hexagons adjacent to a simply connected hole, in the order met when walking
// once around it, consecutive repeats removed. Throws UsageError if the walk
// misses some adjacent hexagon (hole not simply connected).
std::vector<int> hole_contour(const Lattice& lat, const std::vector<char>& hole) {
  static constexpr HexId ccw[6] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  int start = -1;
  // Rightmost hole hexagon: its east neighbour is outside the hole.
  for (int g = 0; g < lat.size(); ++g) {
    if (!hole[g]) continue;
    if (start < 0 || lat.hex(g).a > lat.hex(start).a) start = g;
  }
  auto step = [&](int g, int d) {
    const HexId h = lat.hex(g);
    return lat.id({h.a + ccw[d].a, h.b + ccw[d].b});
  };
  std::vector<int> seq;
  int g = start, d = 0;
  const long limit = 6L * lat.size();
  for (long it = 0; it < limit; ++it) {
    const int u = step(g, d);
    if (u < 0) throw UsageError("hole touches the lattice edge");
    if (seq.empty() || seq.back() != u) seq.push_back(u);
    const int next = (d + 1) % 6, v = step(g, next);
    if (v >= 0 && hole[v]) {
      g = v;
      d = (d + 5) % 6;
    } else {
      d = next;
    }
    if (g == start && d == 0) break;
  }
  while (seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
  std::vector<char> met(lat.size(), 0);
  for (int u : seq) met[u] = 1;
  for (int u = 0; u < lat.size(); ++u) {
    if (hole[u] || met[u]) continue;
    for (auto it = lat.neighbours_begin(u); it != lat.neighbours_end(u); ++it) {
      if (hole[*it]) throw UsageError("hole is not simply connected");
    }
  }
  return seq;
}

void check_scale(const Lattice& lat, int n, const char* what) {
  if (n < 1 || n > lat.n_max()) {
    throw UsageError(std::string(what) + ": scale " + std::to_string(n) + " outside 1.." +
                     std::to_string(lat.n_max()));
  }
}

}  // namespace

std::string to_string(Colour c) { return c == Colour::Black ? "black" : "white"; }

std::string to_string(Ternary t) {
  switch (t) {
    case Ternary::No:
      return "no";
    case Ternary::Yes:
      return "yes";
    case Ternary::Unknown:
      return "unknown";
  }
  return "?";
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ rotl(stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL, 17);
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t stream_id(std::uint64_t salt, std::uint64_t index) {
  std::uint64_t x = salt * 0x9e3779b97f4a7c15ULL ^ index;
  splitmix64(x);
  return splitmix64(x) ^ index;
}

Config Config::with(int id, Colour c) const {
  Config out = *this;
  out.set(id, c);
  return out;
}

Config Config::complement() const {
  Config out = *this;
  for (auto& b : out.bits_) b ^= 1;
  return out;
}

Config sample(const Lattice& lat, Rng& rng) {
  Config c(lat.size(), Colour::White);
  auto& bits = c.bits();
  for (std::size_t i = 0; i < bits.size(); i += 64) {
    const std::uint64_t word = rng.next();
    const std::size_t end = std::min(bits.size(), i + 64);
    for (std::size_t j = i; j < end; ++j) bits[j] = static_cast<std::uint8_t>((word >> (j - i)) & 1);
  }
  return c;
}

Config apply_noise(const Config& c, double t, Rng& rng) {
  if (!(t >= 0 && t <= 1)) throw UsageError("apply_noise: t must lie in [0, 1]");
  Config out = c;
  auto& bits = out.bits();
  if (t == 0) return out;
  if (t == 1) return c.complement();
  if (t == 0.5) {
    for (std::size_t i = 0; i < bits.size(); i += 64) {
      const std::uint64_t word = rng.next();
      const std::size_t end = std::min(bits.size(), i + 64);
      for (std::size_t j = i; j < end; ++j) bits[j] ^= static_cast<std::uint8_t>((word >> (j - i)) & 1);
    }
    return out;
  }
  // Gaps between flipped sites are geometric with parameter t.
  const double log_keep = std::log1p(-t);
  std::size_t i = 0;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_keep);
    if (gap >= static_cast<double>(bits.size() - i)) break;
    i += static_cast<std::size_t>(gap);
    bits[i] ^= 1;
    if (++i >= bits.size()) break;
  }
  return out;
}

bool connects(const Lattice& lat, const Config& c, Colour colour, const Passage& p, const std::vector<char>* blocked) {
  std::vector<char> seen;
  return bfs(lat, c, colour, p, blocked, seen, nullptr) >= 0;
}

int disjoint_chains(const Lattice& lat, const Config& c, Colour colour, const Passage& p, int limit) {
  // Vertex-split unit-capacity flow. For each hexagon v: used[v] says the
  // edge v_in -> v_out carries flow, from[v] is the predecessor feeding
  // v_in (-2 for the source, -1 for none), to[v] the successor of v_out
  // (-2 for the sink, -1 for none).
  const int n = lat.size();
  auto ok = [&](int v) { return p.inside[v] && c.is(v, colour); };
  std::vector<char> used(n, 0);
  std::vector<int> from(n, -1), to(n, -1);
  int flow = 0;
  // Node encoding: 2v = v_in, 2v+1 = v_out, 2n = S, 2n+1 = T.
  const int S = 2 * n, T = 2 * n + 1;
  std::vector<int> prev(2 * n + 2);
  std::vector<int> queue;
  while (flow < limit) {
    std::fill(prev.begin(), prev.end(), -1);
    queue.clear();
    queue.push_back(S);
    prev[S] = S;
    bool found = false;
    auto visit = [&](int node, int parent) {
      if (prev[node] != -1) return;
      prev[node] = parent;
      queue.push_back(node);
      if (node == T) found = true;
    };
    for (std::size_t head = 0; head < queue.size() && !found; ++head) {
      const int x = queue[head];
      if (x == S) {
        for (int s : p.sources) {
          if (ok(s) && from[s] != -2) visit(2 * s, S);
        }
        continue;
      }
      const int v = x / 2;
      if (x % 2 == 0) {  // v_in
        if (!used[v]) visit(2 * v + 1, x);
        if (from[v] >= 0) visit(2 * from[v] + 1, x);  // cancel u_out -> v_in
      } else {           // v_out
        if (p.target[v] && to[v] != -2) visit(T, x);
        for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
          const int u = *it;
          if (ok(u) && from[u] != v) visit(2 * u, x);
        }
        if (used[v]) visit(2 * v, x);  // cancel v_in -> v_out
      }
    }
    if (!found) break;
    // Walk back from T and flip the path.
    int x = T;
    while (x != S) {
      const int y = prev[x];
      if (x == T) {
        to[y / 2] = -2;
      } else if (y == S) {
        from[x / 2] = -2;
      } else if (x % 2 == 1 && y % 2 == 0 && x / 2 == y / 2) {
        used[x / 2] = 1;
      } else if (x % 2 == 0 && y % 2 == 1 && x / 2 == y / 2) {
        used[x / 2] = 0;
      } else if (y % 2 == 1 && x % 2 == 0) {  // forward u_out -> v_in
        const int u = y / 2, v = x / 2;
        from[v] = u;
        to[u] = v;
      } else {  // backward v_in -> u_out cancels u_out -> v_in
        const int v = y / 2, u = x / 2;
        if (from[v] == u) from[v] = -1;
        if (to[u] == v) to[u] = -1;
      }
      x = y;
    }
    ++flow;
  }
  return flow;
}

OneArm::OneArm(const Lattice& lat, int n) : lat_(&lat), n_(n) {
  check_scale(lat, n, "OneArm");
  passage_ = make_passage(lat, Region::box(n), lat.origin_closure(), Region::box_boundary(n));
}

std::vector<char> OneArm::pivotal_mask(const Config& c, Colour colour) const {
  const Lattice& lat = *lat_;
  const int size = lat.size();
  std::vector<char> piv(size, 0);
  std::vector<char> seen;
  std::vector<int> parent;
  const int hit = bfs(lat, c, colour, passage_, nullptr, seen, &parent);
  std::vector<char> is_source(size, 0);
  for (int s : passage_.sources) is_source[s] = 1;

  if (hit < 0) {
    // No arm: only opposite-coloured x can be pivotal, when recolouring it
    // joins the source side to the target side.
    std::vector<char> to_target(size, 0);
    std::vector<int> queue;
    for (int v = 0; v < size; ++v) {
      if (passage_.target[v] && passage_.inside[v] && c.is(v, colour)) {
        to_target[v] = 1;
        queue.push_back(v);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
        const int u = *it;
        if (!to_target[u] && passage_.inside[u] && c.is(u, colour)) {
          to_target[u] = 1;
          queue.push_back(u);
        }
      }
    }
    for (int x = 0; x < size; ++x) {
      if (!passage_.inside[x] || c.is(x, colour)) continue;
      bool near_source = is_source[x], near_target = passage_.target[x];
      for (auto it = lat.neighbours_begin(x); it != lat.neighbours_end(x); ++it) {
        near_source = near_source || seen[*it];
        near_target = near_target || to_target[*it];
      }
      piv[x] = near_source && near_target;
    }
    return piv;
  }

  // An arm exists: x is pivotal iff it lies on every arm. Take the path P
  // found by the search, indexed 1..m between a virtual source (0) and sink
  // (m+1); x = P[j] is a cut vertex iff no bypass spans j strictly.
  std::vector<int> path;
  for (int v = hit; v >= 0; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  const int m = static_cast<int>(path.size());
  const int sink = m + 1;
  std::vector<int> index(size, 0);  // 1-based position on P, 0 if off P
  for (int j = 0; j < m; ++j) index[path[j]] = j + 1;
  auto usable = [&](int v) { return passage_.inside[v] && c.is(v, colour); };
  // cover[j] = furthest index reachable by a bypass starting at or before j.
  std::vector<int> reach(m + 2, 0);
  auto add_span = [&](int lo, int hi) {
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo >= 2) reach[lo] = std::max(reach[lo], hi);
  };
  for (int j = 0; j < m; ++j) {
    const int v = path[j];
    if (is_source[v]) add_span(0, j + 1);
    if (passage_.target[v]) add_span(j + 1, sink);
    for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
      if (index[*it]) add_span(j + 1, index[*it]);
    }
  }
  std::vector<int> comp(size, -1);
  std::vector<int> queue;
  for (int v = 0; v < size; ++v) {
    if (comp[v] >= 0 || index[v] || !usable(v)) continue;
    int lo = std::numeric_limits<int>::max(), hi = -1;
    queue.assign(1, v);
    comp[v] = v;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int w = queue[head];
      if (is_source[w]) lo = 0;
      if (passage_.target[w]) hi = sink;
      for (auto it = lat.neighbours_begin(w); it != lat.neighbours_end(w); ++it) {
        const int u = *it;
        if (index[u]) {
          lo = std::min(lo, index[u]);
          hi = std::max(hi, index[u]);
        } else if (comp[u] < 0 && usable(u)) {
          comp[u] = v;
          queue.push_back(u);
        }
      }
    }
    if (hi >= 0 && lo <= hi) add_span(lo, hi);
  }
  int furthest = 0;
  for (int j = 1; j <= m; ++j) {
    furthest = std::max(furthest, reach[j - 1]);
    if (furthest <= j) piv[path[j - 1]] = 1;
  }
  return piv;
}

Crossing::Crossing(const Lattice& lat, const Region& rect, Direction dir) : lat_(&lat) {
  if (rect.kind() != Region::Kind::Rect) throw UsageError("Crossing: region must be a rectangle");
  Region from, to;
  if (dir == Direction::LeftRight) {
    from = Region::rect(rect.x0(), rect.x0(), rect.y0(), rect.y1());
    to = Region::rect(rect.x1(), rect.x1(), rect.y0(), rect.y1());
  } else {
    from = Region::rect(rect.x0(), rect.x1(), rect.y0(), rect.y0());
    to = Region::rect(rect.x0(), rect.x1(), rect.y1(), rect.y1());
  }
  passage_ = make_passage(lat, rect, lat.hexes_meeting(from), to);
}

Circuit::Circuit(const Lattice& lat, const Region& annulus) : lat_(&lat) {
  if (annulus.kind() != Region::Kind::Annulus || annulus.inner() <= 0) {
    throw UsageError("Circuit: region must be an annulus with a non-empty hole");
  }
  // Duality needs the topological boundaries of the annulus.
  passage_ = annulus_passage(lat, annulus, true);
}

FourArm::FourArm(const Lattice& lat, int k, int n) : lat_(&lat) {
  check_scale(lat, n, "FourArm");
  if (k < 0 || k >= n) throw UsageError("FourArm: need 0 <= k < n");
  if (k == 0) {
    // The origin face is a hole; arms start on its six neighbours.
    passage_ = make_passage(lat, Region::box(n), lat.neighbours(lat.origin()), Region::box_boundary(n));
    passage_.inside[lat.origin()] = 0;
    passage_.target[lat.origin()] = 0;
    cycle_ = hole_contour(lat, ids_to_mask(lat.size(), {lat.origin()}));
  } else {
    passage_ = annulus_passage(lat, Region::annulus(k, n), false);
    std::vector<char> hole = lat.mask(Region::box(n));
    for (int g = 0; g < lat.size(); ++g) hole[g] = hole[g] && !passage_.inside[g];
    cycle_ = hole_contour(lat, hole);
  }
}

void FourArm::label(const Config& c, Colour colour, std::vector<int>& labels, std::vector<char>& crossing) const {
  const Lattice& lat = *lat_;
  labels.assign(lat.size(), -1);
  crossing.clear();
  std::vector<int> queue;
  for (int s : passage_.sources) {
    if (labels[s] >= 0 || !c.is(s, colour)) continue;
    const int id = static_cast<int>(crossing.size());
    crossing.push_back(0);
    queue.assign(1, s);
    labels[s] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      if (passage_.target[v]) crossing[id] = 1;
      for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
        const int u = *it;
        if (labels[u] < 0 && passage_.inside[u] && c.is(u, colour)) {
          labels[u] = id;
          queue.push_back(u);
        }
      }
    }
  }
}

int FourArm::crossing_clusters(const Config& c, Colour colour) const {
  std::vector<int> labels;
  std::vector<char> crossing;
  label(c, colour, labels, crossing);
  return static_cast<int>(std::count(crossing.begin(), crossing.end(), 1));
}

bool FourArm::operator()(const Config& c) const {
  // Cyclic colour word of crossing clusters met along the inner boundary.
  // BWBW is a cyclic subsequence iff the word has at least four colour runs.
  std::vector<int> labels[2];
  std::vector<char> crossing[2];
  for (int col = 0; col < 2; ++col) label(c, static_cast<Colour>(col), labels[col], crossing[col]);
  std::vector<int> word;
  for (int s : cycle_) {
    const int col = static_cast<int>(c[s]);
    const int id = labels[col][s];
    if (id >= 0 && crossing[col][id] && (word.empty() || word.back() != col)) word.push_back(col);
  }
  if (word.size() > 1 && word.front() == word.back()) word.pop_back();
  return word.size() >= 4;
}

DisjointArms::DisjointArms(const Lattice& lat, int n) : lat_(&lat) {
  check_scale(lat, n, "DisjointArms");
  passage_ = make_passage(lat, Region::box(n), lat.origin_closure(), Region::box_boundary(n));
}

bool DisjointArms::static_two_black(const Config& c) const {
  return disjoint_chains(*lat_, c, Colour::Black, passage_, 2) >= 2;
}

Ternary DisjointArms::dynamic(const Config& c0, const Config& c1, long budget) const {
  const Lattice& lat = *lat_;
  if (c0.size() != lat.size() || c1.size() != lat.size()) throw UsageError("DisjointArms: lattice mismatch");
  if (budget <= 0) throw UsageError("DisjointArms: budget must be positive");
  const Colour b = Colour::Black;
  std::vector<char> seen, blocked(lat.size(), 0);
  std::vector<int> parent;
  if (!connects(lat, c0, b, passage_) || !connects(lat, c1, b, passage_)) return Ternary::No;

  // Greedy: a shortest arm of one configuration, then an arm of the other avoiding it.
  auto greedy = [&](const Config& first, const Config& second) {
    const int hit = bfs(lat, first, b, passage_, nullptr, seen, &parent);
    std::fill(blocked.begin(), blocked.end(), 0);
    for (int v = hit; v >= 0; v = parent[v]) blocked[v] = 1;
    return connects(lat, second, b, passage_, &blocked);
  };
  if (greedy(c0, c1) || greedy(c1, c0)) return Ternary::Yes;

  // Exhaustive search over simple arms of c0 that meet the sources only at
  // their first hexagon and the targets only at their last; every arm
  // contains such a sub-arm, and shrinking an arm only helps disjointness.
  std::fill(blocked.begin(), blocked.end(), 0);
  std::vector<char> is_source(lat.size(), 0);
  for (int s : passage_.sources) is_source[s] = 1;
  long expanded = 0;
  bool out_of_budget = false;
  std::vector<int> path;
  Passage rest;  // c0 continuation from the path tip
  rest.inside = passage_.inside;
  rest.target = passage_.target;

  std::function<bool(int)> extend = [&](int v) -> bool {
    if (++expanded > budget) {
      out_of_budget = true;
      return false;
    }
    blocked[v] = 1;
    path.push_back(v);
    bool found = false;
    if (passage_.target[v]) {
      found = connects(lat, c1, b, passage_, &blocked);
    } else if (connects(lat, c1, b, passage_, &blocked)) {
      // The tip must still reach a target in c0 without reusing the path.
      rest.sources.clear();
      for (auto it = lat.neighbours_begin(v); it != lat.neighbours_end(v); ++it) {
        const int u = *it;
        if (!blocked[u] && !is_source[u] && passage_.inside[u] && c0.is(u, b)) rest.sources.push_back(u);
      }
      const bool alive = connects(lat, c0, b, rest, &blocked);
      for (auto it = lat.neighbours_begin(v); alive && it != lat.neighbours_end(v) && !found && !out_of_budget; ++it) {
        const int u = *it;
        if (blocked[u] || is_source[u] || !passage_.inside[u] || !c0.is(u, b)) continue;
        found = extend(u);
      }
    }
    path.pop_back();
    blocked[v] = 0;
    return found;
  };
  for (int s : passage_.sources) {
    if (!c0.is(s, b)) continue;
    if (extend(s)) return Ternary::Yes;
    if (out_of_budget) return Ternary::Unknown;
  }
  return Ternary::No;
}

SeparatedArm::SeparatedArm(const Lattice& lat, int k, int n, SeparatedVariant variant)
    : lat_(&lat), variant_(variant) {
  if (k < 1) throw UsageError("SeparatedArm: k must be >= 1");
  if (variant == SeparatedVariant::Long) {
    if (10 * k > n) throw UsageError("SeparatedArm: need 10k <= n");
    check_scale(lat, n, "SeparatedArm");
  } else {
    check_scale(lat, 3 * k, "SeparatedArm");
  }
  const auto regions = standard_regions(k, std::max(n, 10 * k));
  const Region bottom = Region::rect(-k, k, -3 * k, -3 * k);
  const Region mouth = Region::rect(-k, k, 6 * k, 6 * k);
  const auto closure = lat.origin_closure();
  const int black = static_cast<int>(Colour::Black), white = static_cast<int>(Colour::White);
  inner_[black] = make_passage(lat, regions.r, closure, bottom);
  inner_[white] = make_passage(lat, regions.r_reflected, closure, bottom.reflected());
  if (variant == SeparatedVariant::Long) {
    outer_[black] = make_passage(lat, regions.s, lat.hexes_meeting(mouth), Region::box_boundary(n));
    outer_[white] = make_passage(lat, regions.s_reflected, lat.hexes_meeting(mouth.reflected()), Region::box_boundary(n));
  }
}

bool SeparatedArm::operator()(const Config& c, Colour colour) const {
  const int i = static_cast<int>(colour);
  if (!connects(*lat_, c, colour, inner_[i])) return false;
  return variant_ == SeparatedVariant::Short || connects(*lat_, c, colour, outer_[i]);
}

Interlaced::Interlaced(const Lattice& lat, int k)
    : lat_(&lat),
      plus_(lat, standard_regions(k, 10 * k).a_plus),
      minus_(lat, standard_regions(k, 10 * k).a_minus) {
  const auto s = standard_regions(k, 10 * k);
  if (7 * k > lat.n_max()) throw UsageError("Interlaced: lattice too small for scale k");
  b_ = lat.hexes_meeting(s.b_box);
  b_prime_ = lat.hexes_meeting(s.b_box_prime);
  in_b_ = ids_to_mask(lat.size(), b_);
  in_b_prime_ = ids_to_mask(lat.size(), b_prime_);
  // Hexagon of B_k whose centre is nearest (-2k, 2k); its reflection for B'_k.
  double best = std::numeric_limits<double>::max();
  for (int g : b_) {
    const auto [cx, cy] = lat.centre(g);
    const double d = std::hypot(cx + 2.0 * k, cy - 2.0 * k);
    if (d < best - 1e-12) {
      best = d;
      x_centre_ = g;
    }
  }
  const HexId h = lat.hex(x_centre_);
  y_centre_ = lat.id({-h.a, -h.b});
}

bool Interlaced::event(const Config& c, int x, int y) const {
  if (!in_b_[x] || !in_b_prime_[y]) throw UsageError("Interlaced: x or y outside its box");
  Config eta = c;
  eta.set(x, Colour::Black);
  eta.set(y, Colour::Black);
  if (!plus_.has_circuit(eta, Colour::Black)) return false;
  eta.set(x, Colour::White);
  eta.set(y, Colour::White);
  return minus_.has_circuit(eta, Colour::White);
}

bool Interlaced::event_coloured(const Config& c, int x, int y, Colour colour) const {
  return c.is(y, colour) && event(c, x, y);
}

bool Interlaced::noised_event(const Config& w, const Config& wt, int x) const {
  for (int y : b_prime_) {
    if (!w.is(y, Colour::White) || !wt.is(y, Colour::Black)) continue;
    if (event(w, x, y) && event(wt, x, y)) return true;
  }
  return false;
}

ArmSpec ArmSpec::origin_colour(Colour c) {
  ArmSpec s;
  s.kind = Kind::OriginColour;
  s.colour = c;
  return s;
}

ArmSpec ArmSpec::one_arm(Colour c, int n) {
  ArmSpec s;
  s.kind = Kind::OneArm;
  s.colour = c;
  s.n = n;
  return s;
}

ArmSpec ArmSpec::two_arm_poly(int n) {
  ArmSpec s;
  s.kind = Kind::TwoArmPoly;
  s.n = n;
  return s;
}

ArmSpec ArmSpec::four_arm(int k, int n) {
  ArmSpec s;
  s.kind = Kind::FourArm;
  s.k = k;
  s.n = n;
  return s;
}

ArmSpec ArmSpec::crossing(const Region& rect, Direction dir, Colour c) {
  ArmSpec s;
  s.kind = Kind::Crossing;
  s.region = rect;
  s.direction = dir;
  s.colour = c;
  return s;
}

ArmSpec ArmSpec::circuit(const Region& annulus, Colour c) {
  ArmSpec s;
  s.kind = Kind::Circuit;
  s.region = annulus;
  s.colour = c;
  return s;
}

ArmSpec ArmSpec::separated_long(Colour c, int k, int n) {
  ArmSpec s;
  s.kind = Kind::SeparatedLong;
  s.colour = c;
  s.k = k;
  s.n = n;
  return s;
}

ArmSpec ArmSpec::separated_short(Colour c, int k, int n) {
  ArmSpec s = separated_long(c, k, n);
  s.kind = Kind::SeparatedShort;
  return s;
}

ArmSpec ArmSpec::disjoint_two_black(int n) {
  ArmSpec s;
  s.kind = Kind::DisjointTwoBlack;
  s.n = n;
  return s;
}

int ArmSpec::monotonicity() const {
  const int sign = colour == Colour::Black ? 1 : -1;
  switch (kind) {
    case Kind::OriginColour:
    case Kind::OneArm:
    case Kind::Crossing:
    case Kind::Circuit:
    case Kind::SeparatedLong:
    case Kind::SeparatedShort:
      return sign;
    case Kind::DisjointTwoBlack:
      return 1;
    case Kind::TwoArmPoly:
    case Kind::FourArm:
      return 0;
  }
  return 0;
}

std::string ArmSpec::describe() const {
  const std::string c = to_string(colour);
  switch (kind) {
    case Kind::OriginColour:
      return "origin_" + c;
    case Kind::OneArm:
      return "one_arm(" + c + ",n=" + std::to_string(n) + ")";
    case Kind::TwoArmPoly:
      return "two_arm_poly(n=" + std::to_string(n) + ")";
    case Kind::FourArm:
      return "four_arm(k=" + std::to_string(k) + ",n=" + std::to_string(n) + ")";
    case Kind::Crossing:
      return std::string("crossing(") + c + (direction == Direction::LeftRight ? ",lr" : ",bt") + ")";
    case Kind::Circuit:
      return "circuit(" + c + ")";
    case Kind::SeparatedLong:
      return "separated_long(" + c + ",k=" + std::to_string(k) + ",n=" + std::to_string(n) + ")";
    case Kind::SeparatedShort:
      return "separated_short(" + c + ",k=" + std::to_string(k) + ")";
    case Kind::DisjointTwoBlack:
      return "disjoint_two_black(n=" + std::to_string(n) + ")";
  }
  return "?";
}

Event make_event(const Lattice& lat, const ArmSpec& spec) {
  const Colour c = spec.colour;
  switch (spec.kind) {
    case ArmSpec::Kind::OriginColour: {
      const int o = lat.origin();
      return [o, c](const Config& x) { return x.is(o, c); };
    }
    case ArmSpec::Kind::OneArm: {
      auto d = std::make_shared<OneArm>(lat, spec.n);
      return [d, c](const Config& x) { return (*d)(x, c); };
    }
    case ArmSpec::Kind::TwoArmPoly: {
      auto d = std::make_shared<OneArm>(lat, spec.n);
      return [d](const Config& x) { return (*d)(x, Colour::Black) && (*d)(x, Colour::White); };
    }
    case ArmSpec::Kind::FourArm: {
      auto d = std::make_shared<FourArm>(lat, spec.k, spec.n);
      return [d](const Config& x) { return (*d)(x); };
    }
    case ArmSpec::Kind::Crossing: {
      auto d = std::make_shared<Crossing>(lat, spec.region, spec.direction);
      return [d, c](const Config& x) { return (*d)(x, c); };
    }
    case ArmSpec::Kind::Circuit: {
      auto d = std::make_shared<Circuit>(lat, spec.region);
      return [d, c](const Config& x) { return d->has_circuit(x, c); };
    }
    case ArmSpec::Kind::SeparatedLong:
    case ArmSpec::Kind::SeparatedShort: {
      const auto v = spec.kind == ArmSpec::Kind::SeparatedLong ? SeparatedVariant::Long : SeparatedVariant::Short;
      auto d = std::make_shared<SeparatedArm>(lat, spec.k, spec.n, v);
      return [d, c](const Config& x) { return (*d)(x, c); };
    }
    case ArmSpec::Kind::DisjointTwoBlack: {
      auto d = std::make_shared<DisjointArms>(lat, spec.n);
      return [d](const Config& x) { return d->static_two_black(x); };
    }
  }
  throw UsageError("make_event: unknown kind");
}

int pivotal_grad(const Event& event, const Config& c, int x) {
  if (x < 0 || x >= c.size()) throw UsageError("pivotal_grad: hexagon outside the lattice");
  return static_cast<int>(event(c.with(x, Colour::Black))) - static_cast<int>(event(c.with(x, Colour::White)));
}

}  // namespace qcorr
