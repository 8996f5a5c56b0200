#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>

namespace ubp {

using i64 = std::int64_t;
using i128 = __int128;

/// Lattice site (or integer vector) in Z^2.
struct Site {
  i64 x = 0;
  i64 y = 0;
  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
  Site operator+(const Site& o) const { return {x + o.x, y + o.y}; }
  Site operator-(const Site& o) const { return {x - o.x, y - o.y}; }
  Site operator-() const { return {-x, -y}; }
};

/// Rational direction on the circle, stored as a primitive integer vector
/// (gcd(|x|,|y|) == 1). Equality of primitive vectors is equality of
/// directions. Construct via dir_from() unless the input is already primitive.
struct Dir {
  i64 x = 1;
  i64 y = 0;
  friend bool operator==(const Dir&, const Dir&) = default;
  friend auto operator<=>(const Dir&, const Dir&) = default;
};

template <class A, class B>
constexpr i128 cross(const A& a, const B& b) {
  return static_cast<i128>(a.x) * b.y - static_cast<i128>(a.y) * b.x;
}

template <class A, class B>
constexpr i128 dot(const A& a, const B& b) {
  return static_cast<i128>(a.x) * b.x + static_cast<i128>(a.y) * b.y;
}

template <class A>
constexpr i128 norm2(const A& a) {
  return dot(a, a);
}

constexpr int sgn(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

/// Reduce (x, y) != (0, 0) to the primitive vector with the same direction.
inline Dir dir_from(i64 x, i64 y) {
  assert(x != 0 || y != 0);
  i64 g = std::gcd(x < 0 ? -x : x, y < 0 ? -y : y);
  return Dir{x / g, y / g};
}

inline Dir antipode(const Dir& u) { return Dir{-u.x, -u.y}; }

/// Rotation by +90 degrees (counterclockwise).
inline Dir perp_ccw(const Dir& u) { return Dir{-u.y, u.x}; }

/// Rotation by -90 degrees (clockwise).
inline Dir perp_cw(const Dir& u) { return Dir{u.y, -u.x}; }

/// Quadrant index for the angle theta(u) in [0, 2*pi), measured
/// counterclockwise from (1, 0):
///   0: theta in [0, pi/2)      (x > 0, y >= 0)
///   1: theta in [pi/2, pi)     (x <= 0, y > 0)
///   2: theta in [pi, 3*pi/2)   (x < 0, y <= 0)
///   3: theta in [3*pi/2, 2*pi) (x >= 0, y < 0)
inline int quadrant(const Dir& u) {
  if (u.x > 0 && u.y >= 0) return 0;
  if (u.x <= 0 && u.y > 0) return 1;
  if (u.x < 0 && u.y <= 0) return 2;
  return 3;
}

/// Three-way compare of absolute angles theta(a), theta(b) in [0, 2*pi).
inline int angle_compare(const Dir& a, const Dir& b) {
  int qa = quadrant(a), qb = quadrant(b);
  if (qa != qb) return qa < qb ? -1 : 1;
  return sgn(cross(b, a));
}

/// Counterclockwise gap from a to b, classified against pi:
/// -1 if gap < pi, 0 if gap == pi, +1 if gap > pi.
/// Equal directions are treated as a full turn (+1).
inline int gap_class(const Dir& a, const Dir& b) {
  i128 c = cross(a, b);
  if (c > 0) return -1;
  if (c < 0) return 1;
  return dot(a, b) < 0 ? 0 : 1;
}

inline bool ccw_gap_at_least_pi(const Dir& a, const Dir& b) {
  return gap_class(a, b) >= 0;
}

/// Compare a and b by counterclockwise angle from s, in [0, 2*pi).
/// Returns -1/0/+1.
inline int rel_compare(const Dir& s, const Dir& a, const Dir& b) {
  if (a == b) return 0;
  // A direction at or after s in absolute order sits in the first part of
  // the sweep that starts at s; the rest wrap around.
  bool wa = angle_compare(s, a) > 0;
  bool wb = angle_compare(s, b) > 0;
  if (wa != wb) return wa ? 1 : -1;
  return angle_compare(a, b);
}

/// A primitive direction strictly inside the open counterclockwise arc from
/// a to b. When a == b the arc is the full circle minus a point.
inline Dir interior_direction(const Dir& a, const Dir& b) {
  if (a == b) return antipode(a);
  int gc = gap_class(a, b);
  if (gc == 0) return perp_ccw(a);
  if (gc < 0) return dir_from(a.x + b.x, a.y + b.y);
  return dir_from(-(a.x + b.x), -(a.y + b.y));
}

/// Floor / ceil division with positive divisor, exact over the full range.
inline i128 floor_div(i128 a, i128 b) {
  assert(b > 0);
  i128 q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

inline i128 ceil_div(i128 a, i128 b) {
  assert(b > 0);
  i128 q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

}  // namespace ubp
