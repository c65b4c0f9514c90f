#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcorr/hex_lattice.hpp"

namespace qcorr {

enum class Colour : std::uint8_t { White = 0, Black = 1 };

inline Colour opposite(Colour c) { return c == Colour::Black ? Colour::White : Colour::Black; }
std::string to_string(Colour c);

/// xoshiro256** seeded through splitmix64 from (seed, stream).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Stream id for sample `index` of an experiment component tagged `salt`.
std::uint64_t stream_id(std::uint64_t salt, std::uint64_t index);

/// One colour bit per lattice hexagon (1 = black), indexed by dense id.
class Config {
 public:
  Config() = default;
  Config(int size, Colour fill) : bits_(size, static_cast<std::uint8_t>(fill)) {}

  int size() const { return static_cast<int>(bits_.size()); }
  Colour operator[](int id) const { return static_cast<Colour>(bits_[id]); }
  bool is(int id, Colour c) const { return bits_[id] == static_cast<std::uint8_t>(c); }
  void set(int id, Colour c) { bits_[id] = static_cast<std::uint8_t>(c); }
  Config with(int id, Colour c) const;
  Config complement() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }
  bool operator==(const Config&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Fair iid colours.
Config sample(const Lattice& lat, Rng& rng);
/// Flips each bit independently with probability t. Throws UsageError unless 0 <= t <= 1.
Config apply_noise(const Config& c, double t, Rng& rng);

/// Search domain shared by the detectors: allowed hexagons, start set and target set.
struct Passage {
  std::vector<char> inside;
  std::vector<int> sources;
  std::vector<char> target;
};

/// Is there a c-coloured chain inside `p.inside` from a source to a target?
/// Hexagons with blocked[id] != 0 are removed when `blocked` is given.
bool connects(const Lattice& lat, const Config& c, Colour colour, const Passage& p,
              const std::vector<char>* blocked = nullptr);

/// Maximal number of hexagon-disjoint c-coloured chains from sources to
/// targets, capped at `limit`.
int disjoint_chains(const Lattice& lat, const Config& c, Colour colour, const Passage& p, int limit);

/// Arm from the closed origin face to the boundary of Lambda_n.
class OneArm {
 public:
  OneArm(const Lattice& lat, int n);
  bool operator()(const Config& c, Colour colour) const { return connects(*lat_, c, colour, passage_); }
  const Passage& passage() const { return passage_; }
  int n() const { return n_; }
  /// ids x with grad_x 1{arm of this colour} != 0, computed for all x at once.
  std::vector<char> pivotal_mask(const Config& c, Colour colour) const;

 private:
  const Lattice* lat_;
  int n_;
  Passage passage_;
};

enum class Direction { LeftRight, BottomTop };

/// Crossing of a rectangle between two opposite sides inside H(rect).
class Crossing {
 public:
  Crossing(const Lattice& lat, const Region& rect, Direction dir);
  bool operator()(const Config& c, Colour colour) const { return connects(*lat_, c, colour, passage_); }

 private:
  const Lattice* lat_;
  Passage passage_;
};

/// Circuits of an annulus surrounding its hole, by duality with radial chains.
class Circuit {
 public:
  Circuit(const Lattice& lat, const Region& annulus);
  bool has_circuit(const Config& c, Colour colour) const { return !has_inner_outer_chain(c, opposite(colour)); }
  bool has_inner_outer_chain(const Config& c, Colour colour) const {
    return connects(*lat_, c, colour, passage_);
  }
  const Passage& passage() const { return passage_; }

 private:
  const Lattice* lat_;
  Passage passage_;
};

/// Four alternating arms across Lambda_{k,n}; k = 0 means arms from the origin face.
class FourArm {
 public:
  FourArm(const Lattice& lat, int k, int n);
  bool operator()(const Config& c) const;
  /// Number of distinct colour clusters inside the annulus joining its inner and outer boundary.
  int crossing_clusters(const Config& c, Colour colour) const;
  const Passage& passage() const { return passage_; }
  /// Hexagons around the inner hole in walking order (a hexagon may recur).
  const std::vector<int>& inner_cycle() const { return cycle_; }

 private:
  /// Cluster label per hexagon of the given colour reachable from the inner
  /// boundary; crossing[label] tells whether it reaches the outer boundary.
  void label(const Config& c, Colour colour, std::vector<int>& labels, std::vector<char>& crossing) const;

  const Lattice* lat_;
  Passage passage_;
  std::vector<int> cycle_;
};

enum class Ternary { No, Yes, Unknown };
std::string to_string(Ternary t);

/// Two hexagon-disjoint black arms from the origin face to the boundary of Lambda_n.
class DisjointArms {
 public:
  DisjointArms(const Lattice& lat, int n);
  /// Both arms read in one configuration (max-flow).
  bool static_two_black(const Config& c) const;
  /// One arm read in c0 and one in c1, hexagon-disjoint. Yes/No are exact;
  /// Unknown when more than `budget` search nodes would be expanded.
  Ternary dynamic(const Config& c0, const Config& c1, long budget = 200000) const;

 private:
  const Lattice* lat_;
  Passage passage_;
};

enum class SeparatedVariant { Long, Short };

/// Arms confined to the gluing regions: a chain in R from the origin face to
/// the bottom of R, and for the long variant a chain in S from the boundary of
/// Lambda_{6k} to the boundary of Lambda_n. White arms use -R and -S.
class SeparatedArm {
 public:
  SeparatedArm(const Lattice& lat, int k, int n, SeparatedVariant variant);
  bool operator()(const Config& c, Colour colour) const;

 private:
  const Lattice* lat_;
  SeparatedVariant variant_;
  Passage inner_[2], outer_[2];  // indexed by colour
};

/// Interlaced circuits at scale k: a black circuit of A_+ with x, y forced
/// black and a white circuit of A_- with x, y forced white.
class Interlaced {
 public:
  Interlaced(const Lattice& lat, int k);
  bool event(const Config& c, int x, int y) const;
  /// event(c, x, y) and c(y) = colour.
  bool event_coloured(const Config& c, int x, int y, Colour colour) const;
  /// Union over y in H(B'_k) of {w in E^white(x,y), wt in E^black(x,y)}.
  bool noised_event(const Config& w, const Config& wt, int x) const;
  const std::vector<int>& b_box() const { return b_; }
  const std::vector<int>& b_box_prime() const { return b_prime_; }
  /// Hexagons nearest the centres of B_k and B'_k.
  int x_centre() const { return x_centre_; }
  int y_centre() const { return y_centre_; }

 private:
  const Lattice* lat_;
  Circuit plus_, minus_;
  std::vector<int> b_, b_prime_;
  std::vector<char> in_b_, in_b_prime_;
  int x_centre_ = -1, y_centre_ = -1;
};

/// Declarative description of a static event.
struct ArmSpec {
  enum class Kind {
    OriginColour,
    OneArm,
    TwoArmPoly,
    FourArm,
    Crossing,
    Circuit,
    SeparatedLong,
    SeparatedShort,
    DisjointTwoBlack
  };
  Kind kind = Kind::OneArm;
  Colour colour = Colour::Black;
  int k = 0;
  int n = 1;
  Region region;
  Direction direction = Direction::LeftRight;

  static ArmSpec origin_colour(Colour c);
  static ArmSpec one_arm(Colour c, int n);
  static ArmSpec two_arm_poly(int n);
  static ArmSpec four_arm(int k, int n);
  static ArmSpec crossing(const Region& rect, Direction dir, Colour c);
  static ArmSpec circuit(const Region& annulus, Colour c);
  static ArmSpec separated_long(Colour c, int k, int n);
  static ArmSpec separated_short(Colour c, int k, int n);
  static ArmSpec disjoint_two_black(int n);

  /// Increasing (+1), decreasing (-1) or neither (0) in the black bits.
  int monotonicity() const;
  std::string describe() const;
};

using Event = std::function<bool(const Config&)>;

/// Indicator of the spec with all region masks precomputed.
Event make_event(const Lattice& lat, const ArmSpec& spec);

/// 1{event}(c with x black) - 1{event}(c with x white).
int pivotal_grad(const Event& event, const Config& c, int x);

}  // namespace qcorr
