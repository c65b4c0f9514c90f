#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/rational.hpp"

namespace qcorr {

/// Axial coordinates of a hexagonal face. The centre sits at
/// pitch * (a + b/2, b * sqrt(3)/2); faces are pointy-top with inradius pitch/2.
struct HexId {
  int a = 0;
  int b = 0;
  auto operator<=>(const HexId&) const = default;
};

std::string to_string(const HexId& h);

/// The six axial neighbour offsets.
inline constexpr HexId kNeighbourOffsets[6] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};

/// A closed planar region in lattice length units. Rectangles may be
/// degenerate (points, segments).
class Region {
 public:
  enum class Kind { Rect, Annulus, Union };

  /// The single point at the origin.
  Region() = default;

  static Region rect(Rational x0, Rational x1, Rational y0, Rational y1);
  static Region point(const Rational& x, const Rational& y) { return rect(x, x, y, y); }
  /// [-n, n]^2 translated by (cx, cy).
  static Region box(const Rational& n, const Rational& cx = 0, const Rational& cy = 0);
  /// (cx, cy) + ([-outer, outer]^2 minus [-inner, inner]^2); the hole is open,
  /// so the inner boundary belongs to the annulus.
  static Region annulus(const Rational& inner, const Rational& outer, const Rational& cx = 0,
                        const Rational& cy = 0);
  static Region unite(std::vector<Region> parts);
  /// Boundary curve of box(n, cx, cy) as four segments.
  static Region box_boundary(const Rational& n, const Rational& cx = 0, const Rational& cy = 0);

  Kind kind() const { return kind_; }
  /// Point reflection through the origin.
  Region reflected() const;
  Region translated(const Rational& dx, const Rational& dy) const;

  /// Bounding box as (x0, x1, y0, y1).
  std::array<Rational, 4> bounds() const;
  bool contains(const Rational& x, const Rational& y) const;

  // Rect and Annulus parameters (Annulus: centre cx, cy and half-widths).
  const Rational& x0() const { return p_[0]; }
  const Rational& x1() const { return p_[1]; }
  const Rational& y0() const { return p_[2]; }
  const Rational& y1() const { return p_[3]; }
  const Rational& inner() const { return p_[0]; }
  const Rational& outer() const { return p_[1]; }
  const Rational& cx() const { return p_[2]; }
  const Rational& cy() const { return p_[3]; }
  const std::vector<Region>& parts() const { return parts_; }

 private:
  Kind kind_ = Kind::Rect;
  std::array<Rational, 4> p_;
  std::vector<Region> parts_;
};

/// Exact test: does the closed face of h (at the given pitch) meet the closed region?
bool hex_meets(const HexId& h, const Rational& pitch, const Region& region);
/// Exact test: is the closed face of h inside the rectangle (its interior when strict)?
bool hex_inside_rect(const HexId& h, const Rational& pitch, const Rational& x0, const Rational& x1,
                     const Rational& y0, const Rational& y1, bool strict = false);

/// All hexagons meeting [-n_max, n_max]^2, with dense ids and adjacency.
class Lattice {
 public:
  explicit Lattice(int n_max, Rational pitch = 1);

  int n_max() const { return n_max_; }
  const Rational& pitch() const { return pitch_; }
  int size() const { return static_cast<int>(hexes_.size()); }
  const HexId& hex(int id) const { return hexes_[id]; }
  /// Dense id of h, or -1 when h is not in the lattice.
  int id(const HexId& h) const;
  int origin() const { return origin_; }

  /// Neighbour ids of a dense id (at most 6).
  const int* neighbours_begin(int id) const { return adj_.data() + adj_start_[id]; }
  const int* neighbours_end(int id) const { return adj_.data() + adj_start_[id + 1]; }
  std::vector<int> neighbours(int id) const { return {neighbours_begin(id), neighbours_end(id)}; }
  /// Axial neighbours of h that lie in the lattice.
  std::vector<HexId> neighbours(const HexId& h) const;

  /// Sorted dense ids of the hexagons whose closed face meets the region.
  /// Throws UsageError when the region is not inside [-n_max, n_max]^2.
  std::vector<int> hexes_meeting(const Region& region) const;
  /// Same set as a 0/1 mask indexed by dense id.
  std::vector<char> mask(const Region& region) const;

  /// Origin hexagon and its six neighbours: the faces meeting the closed origin face.
  std::vector<int> origin_closure() const;

  /// Centre in floating point, for reporting only.
  std::pair<double, double> centre(int id) const;

 private:
  int n_max_;
  Rational pitch_;
  std::vector<HexId> hexes_;
  int b_min_ = 0;
  std::vector<int> row_a_min_, row_start_, row_len_;
  std::vector<int> adj_start_, adj_;
  int origin_ = -1;
};

/// Regions used by the gluing constructions at scale k inside Lambda_n.
struct StandardRegions {
  Region a_plus, a_minus;     // (2k,2k) + Lambda_{3k,5k} and (-2k,-2k) + Lambda_{3k,5k}
  Region b_box, b_box_prime;  // [-3k,-k] x [k,3k] and its reflection
  Region r, r_reflected;      // [-k,k] x [-3k,k] and its reflection
  Region s, s_reflected;      // Lambda_{7k,n} union ((0,6k) + Lambda_k) and its reflection
};

/// Throws UsageError unless 1 <= k and 10k <= n.
StandardRegions standard_regions(int k, int n);

}  // namespace qcorr
