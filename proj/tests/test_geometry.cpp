#include <catch2/catch_amalgamated.hpp>

#include "ubp/geometry.hpp"

#include <cmath>
#include <vector>

using namespace ubp;

namespace {

// Every primitive vector with coordinates in [-k, k], deduplicated, in no
// particular order.
std::vector<Dir> primitive_dirs(int k) {
  std::vector<Dir> out;
  for (int x = -k; x <= k; ++x)
    for (int y = -k; y <= k; ++y) {
      if (x == 0 && y == 0) continue;
      Dir d = dir_from(x, y);
      if (d.x == x && d.y == y) out.push_back(d);
    }
  return out;
}

// Angle in [0, 2*pi) measured counterclockwise from (1, 0). Safe as an
// oracle for small integer vectors where doubles are exact enough.
double angle_of(const Dir& d) {
  double a = std::atan2(static_cast<double>(d.y), static_cast<double>(d.x));
  if (a < 0) a += 2 * M_PI;
  return a;
}

}  // namespace

TEST_CASE("dir_from reduces to primitive vectors") {
  CHECK(dir_from(4, 6) == Dir{2, 3});
  CHECK(dir_from(-4, 6) == Dir{-2, 3});
  CHECK(dir_from(0, -7) == Dir{0, -1});
  CHECK(dir_from(5, 0) == Dir{1, 0});
  CHECK(dir_from(-9, -6) == Dir{-3, -2});
  CHECK(dir_from(1, 1) == Dir{1, 1});
}

TEST_CASE("perpendicular rotations satisfy the product identities") {
  for (const Dir& u : primitive_dirs(4))
    for (const Dir& v : primitive_dirs(4)) {
      CHECK(dot(perp_ccw(u), v) == cross(u, v));
      CHECK(cross(u, perp_ccw(v)) == dot(u, v));
      CHECK(perp_cw(perp_ccw(u)) == u);
      CHECK(perp_ccw(perp_ccw(u)) == antipode(u));
    }
}

TEST_CASE("quadrant matches the half-open angle ranges") {
  CHECK(quadrant(Dir{1, 0}) == 0);
  CHECK(quadrant(Dir{1, 1}) == 0);
  CHECK(quadrant(Dir{0, 1}) == 1);
  CHECK(quadrant(Dir{-1, 1}) == 1);
  CHECK(quadrant(Dir{-1, 0}) == 2);
  CHECK(quadrant(Dir{-1, -1}) == 2);
  CHECK(quadrant(Dir{0, -1}) == 3);
  CHECK(quadrant(Dir{1, -1}) == 3);
  for (const Dir& u : primitive_dirs(5)) {
    double a = angle_of(u);
    int expect = static_cast<int>(a / (M_PI / 2));
    CHECK(quadrant(u) == expect);
  }
}

TEST_CASE("angle_compare agrees with the floating point oracle") {
  auto dirs = primitive_dirs(5);
  for (const Dir& a : dirs)
    for (const Dir& b : dirs) {
      double da = angle_of(a), db = angle_of(b);
      int expect = a == b ? 0 : (da < db ? -1 : 1);
      CHECK(angle_compare(a, b) == expect);
    }
}

TEST_CASE("gap_class classifies the counterclockwise gap against pi") {
  CHECK(gap_class(Dir{1, 0}, Dir{0, 1}) == -1);
  CHECK(gap_class(Dir{1, 0}, Dir{-1, 0}) == 0);
  CHECK(gap_class(Dir{1, 0}, Dir{0, -1}) == 1);
  CHECK(gap_class(Dir{1, 0}, Dir{1, 0}) == 1);
  CHECK(gap_class(Dir{2, 1}, Dir{-2, -1}) == 0);
  CHECK(gap_class(Dir{2, 1}, Dir{-1, 2}) == -1);

  auto dirs = primitive_dirs(5);
  for (const Dir& a : dirs)
    for (const Dir& b : dirs) {
      double gap = angle_of(b) - angle_of(a);
      if (gap <= 0) gap += 2 * M_PI;
      int got = gap_class(a, b);
      if (a == b) {
        CHECK(got == 1);
      } else if (a == antipode(b)) {
        CHECK(got == 0);
      } else {
        CHECK(got == (gap < M_PI ? -1 : 1));
      }
      CHECK(ccw_gap_at_least_pi(a, b) == (got >= 0));
    }
}

TEST_CASE("rel_compare is a total order on the sweep from s") {
  auto dirs = primitive_dirs(4);
  for (const Dir& s : dirs) {
    double base = angle_of(s);
    auto pos = [&](const Dir& d) {
      double a = angle_of(d) - base;
      if (a < 0) a += 2 * M_PI;
      return a;
    };
    for (const Dir& a : dirs)
      for (const Dir& b : dirs) {
        int expect = a == b ? 0 : (pos(a) < pos(b) ? -1 : 1);
        CHECK(rel_compare(s, a, b) == expect);
      }
  }
}

TEST_CASE("rel_compare places the start first") {
  auto dirs = primitive_dirs(4);
  for (const Dir& s : dirs)
    for (const Dir& d : dirs)
      if (!(s == d)) {
        CHECK(rel_compare(s, s, d) < 0);
        CHECK(rel_compare(s, d, s) > 0);
      }
}

TEST_CASE("interior_direction lands strictly inside the open arc") {
  auto dirs = primitive_dirs(5);
  for (const Dir& a : dirs)
    for (const Dir& b : dirs) {
      Dir m = interior_direction(a, b);
      CHECK(!(m == a));
      CHECK(!(m == b));
      if (a == b) {
        CHECK(m == antipode(a));
      } else {
        // Strictly between a and b in the sweep from a.
        CHECK(rel_compare(a, m, b) < 0);
      }
    }
}

TEST_CASE("floor_div and ceil_div match the mathematical definitions") {
  for (long long a = -25; a <= 25; ++a)
    for (long long b = 1; b <= 7; ++b) {
      double q = static_cast<double>(a) / static_cast<double>(b);
      CHECK(static_cast<long long>(floor_div(a, b)) ==
            static_cast<long long>(std::floor(q)));
      CHECK(static_cast<long long>(ceil_div(a, b)) ==
            static_cast<long long>(std::ceil(q)));
    }
  CHECK(static_cast<long long>(floor_div(-7, 2)) == -4);
  CHECK(static_cast<long long>(ceil_div(-7, 2)) == -3);
  CHECK(static_cast<long long>(floor_div(7, 2)) == 3);
  CHECK(static_cast<long long>(ceil_div(7, 2)) == 4);
  CHECK(static_cast<long long>(floor_div(-8, 2)) == -4);
  CHECK(static_cast<long long>(ceil_div(-8, 2)) == -4);
}

TEST_CASE("site arithmetic") {
  CHECK(Site{2, 3} + Site{-1, 4} == Site{1, 7});
  CHECK(Site{2, 3} - Site{-1, 4} == Site{3, -1});
  CHECK(-Site{2, -3} == Site{-2, 3});
  CHECK(Site{1, 2} < Site{1, 3});
  CHECK(Site{1, 2} < Site{2, 0});
  CHECK(norm2(Site{3, 4}) == 25);
  CHECK(cross(Site{1, 0}, Site{0, 1}) == 1);
  CHECK(dot(Site{2, 3}, Site{4, 5}) == 23);
}
