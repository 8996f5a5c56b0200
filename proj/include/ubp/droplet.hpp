#pragma once

// Droplets: lattice polygons {x : <x, v_i> <= o_i} over a fixed set of 3-4
// spanning directions. Directions are unnormalized integer vectors and
// offsets are integers, so every geometric decision below is exact. The four
// axis directions get O(1) fast paths since they cover the canonical
// families; general directions go through per-row interval scans.

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "ubp/arcset.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/geometry.hpp"

namespace ubp {

struct Droplet {
  std::vector<Dir> dirs;
  std::vector<i64> offsets;

  friend bool operator==(const Droplet&, const Droplet&) = default;

  bool contains(const Site& s) const {
    for (std::size_t i = 0; i < dirs.size(); ++i)
      if (dot(s, dirs[i]) > offsets[i]) return false;
    return true;
  }

  Droplet translated(const Site& t) const {
    Droplet d = *this;
    for (std::size_t i = 0; i < dirs.size(); ++i)
      d.offsets[i] += static_cast<i64>(dot(t, dirs[i]));
    return d;
  }

  Droplet inflated(i64 by) const {
    Droplet d = *this;
    for (i64& o : d.offsets) o += by;
    return d;
  }
};

inline const std::vector<Dir>& axis_directions() {
  static const std::vector<Dir> axes = {Dir{1, 0}, Dir{0, 1}, Dir{-1, 0},
                                        Dir{0, -1}};
  return axes;
}

inline bool is_axis_dirs(const std::vector<Dir>& dirs) {
  return dirs == axis_directions();
}

namespace detail {

/// Directions must positively span the plane: sorted by angle, every cyclic
/// gap strictly below pi.
inline void require_spanning(const std::vector<Dir>& dirs) {
  if (dirs.size() < 3)
    throw PreconditionError("droplet directions must span the plane");
  std::vector<Dir> s = dirs;
  std::sort(s.begin(), s.end(),
            [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (gap_class(s[i], s[(i + 1) % s.size()]) >= 0)
      throw PreconditionError("droplet directions must span the plane");
  }
}

/// Inclusive x-interval of row y under the constraints, empty as lo > hi.
/// Constraints with zero x-coefficient cut rows off entirely when violated.
inline std::pair<i64, i64> row_interval(const Droplet& d, i64 y) {
  i64 lo = INT64_MIN / 4, hi = INT64_MAX / 4;
  for (std::size_t i = 0; i < d.dirs.size(); ++i) {
    const i64 a = d.dirs[i].x;
    const i128 c = static_cast<i128>(d.offsets[i]) - static_cast<i128>(d.dirs[i].y) * y;
    if (a > 0) {
      hi = std::min(hi, static_cast<i64>(floor_div(c, a)));
    } else if (a < 0) {
      lo = std::max(lo, static_cast<i64>(ceil_div(-c, -static_cast<i128>(a))));
    } else if (c < 0) {
      return {1, 0};
    }
  }
  return {lo, hi};
}

/// Exact y-extent of the continuous polygon, from its rational vertices.
/// Throws on empty input polygons only via the caller's site checks; an
/// infeasible polygon yields an empty range.
inline std::optional<std::pair<i64, i64>> y_range(const Droplet& d) {
  // Vertices are pairwise constraint intersections that satisfy the rest.
  // y = num / den with den = cross of the two directions.
  bool found = false;
  i128 best_lo_n = 0, best_lo_d = 1, best_hi_n = 0, best_hi_d = 1;
  const std::size_t n = d.dirs.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const i128 den = cross(d.dirs[i], d.dirs[j]);
      if (den == 0) continue;
      // Solve <p, v_i> = o_i, <p, v_j> = o_j.
      const i128 px_n = static_cast<i128>(d.offsets[i]) * d.dirs[j].y -
                        static_cast<i128>(d.offsets[j]) * d.dirs[i].y;
      const i128 py_n = static_cast<i128>(d.offsets[j]) * d.dirs[i].x -
                        static_cast<i128>(d.offsets[i]) * d.dirs[j].x;
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k) {
        const i128 lhs = d.dirs[k].x * px_n + d.dirs[k].y * py_n;
        const i128 rhs = static_cast<i128>(d.offsets[k]) * den;
        ok = den > 0 ? lhs <= rhs : lhs >= rhs;
      }
      if (!ok) continue;
      const i128 yn = den > 0 ? py_n : -py_n;
      const i128 yd = den > 0 ? den : -den;
      if (!found) {
        best_lo_n = best_hi_n = yn;
        best_lo_d = best_hi_d = yd;
        found = true;
      } else {
        if (yn * best_lo_d < best_lo_n * yd) {
          best_lo_n = yn;
          best_lo_d = yd;
        }
        if (yn * best_hi_d > best_hi_n * yd) {
          best_hi_n = yn;
          best_hi_d = yd;
        }
      }
    }
  }
  if (!found) return std::nullopt;
  const i64 y_lo = static_cast<i64>(ceil_div(best_lo_n, best_lo_d));
  const i64 y_hi = static_cast<i64>(floor_div(best_hi_n, best_hi_d));
  if (y_lo > y_hi) return std::nullopt;
  return std::make_pair(y_lo, y_hi);
}

}  // namespace detail

inline std::vector<Site> droplet_sites(const Droplet& d) {
  std::vector<Site> out;
  if (is_axis_dirs(d.dirs)) {
    const i64 x_hi = d.offsets[0], y_hi = d.offsets[1];
    const i64 x_lo = -d.offsets[2], y_lo = -d.offsets[3];
    for (i64 y = y_lo; y <= y_hi; ++y)
      for (i64 x = x_lo; x <= x_hi; ++x) out.push_back(Site{x, y});
    return out;
  }
  auto yr = detail::y_range(d);
  if (!yr) return out;
  for (i64 y = yr->first; y <= yr->second; ++y) {
    auto [lo, hi] = detail::row_interval(d, y);
    for (i64 x = lo; x <= hi; ++x) out.push_back(Site{x, y});
  }
  return out;
}

inline bool droplet_empty(const Droplet& d) {
  if (is_axis_dirs(d.dirs))
    return d.offsets[0] < -d.offsets[2] || d.offsets[1] < -d.offsets[3];
  auto yr = detail::y_range(d);
  if (!yr) return true;
  for (i64 y = yr->first; y <= yr->second; ++y) {
    auto [lo, hi] = detail::row_interval(d, y);
    if (lo <= hi) return false;
  }
  return true;
}

inline Droplet minimal_droplet(const std::vector<Site>& sites,
                               const std::vector<Dir>& dirs) {
  if (sites.empty())
    throw PreconditionError("minimal_droplet: empty site set");
  detail::require_spanning(dirs);
  Droplet d;
  d.dirs = dirs;
  d.offsets.reserve(dirs.size());
  for (const Dir& v : dirs) {
    i128 best = dot(sites.front(), v);
    for (const Site& s : sites) best = std::max(best, dot(s, v));
    d.offsets.push_back(static_cast<i64>(best));
  }
  return d;
}

/// Same site set, offsets reduced to attained maxima.
inline Droplet tightened(const Droplet& d) {
  return minimal_droplet(droplet_sites(d), d.dirs);
}

/// Exact squared Euclidean diameter over the droplet's sites.
inline i128 sq_diam(const Droplet& d) {
  if (is_axis_dirs(d.dirs)) {
    if (droplet_empty(d))
      throw PreconditionError("sq_diam: empty droplet");
    const i128 w = static_cast<i128>(d.offsets[0]) + d.offsets[2];
    const i128 h = static_cast<i128>(d.offsets[1]) + d.offsets[3];
    return w * w + h * h;
  }
  auto yr = detail::y_range(d);
  if (!yr) throw PreconditionError("sq_diam: empty droplet");
  std::vector<Site> extremes;
  for (i64 y = yr->first; y <= yr->second; ++y) {
    auto [lo, hi] = detail::row_interval(d, y);
    if (lo > hi) continue;
    extremes.push_back(Site{lo, y});
    if (hi != lo) extremes.push_back(Site{hi, y});
  }
  if (extremes.empty()) throw PreconditionError("sq_diam: empty droplet");
  i128 best = 0;
  for (std::size_t i = 0; i < extremes.size(); ++i)
    for (std::size_t j = i + 1; j < extremes.size(); ++j) {
      const Site a = extremes[i], b = extremes[j];
      const i128 dx = a.x - b.x, dy = a.y - b.y;
      best = std::max(best, dx * dx + dy * dy);
    }
  return best;
}

inline i128 sq_diam_sites(const std::vector<Site>& sites) {
  if (sites.empty()) throw PreconditionError("sq_diam: empty site set");
  i128 best = 0;
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      const i128 dx = sites[i].x - sites[j].x;
      const i128 dy = sites[i].y - sites[j].y;
      best = std::max(best, dx * dx + dy * dy);
    }
  return best;
}

/// The reference droplet containing every rule and the origin: minimal over
/// that union, opened up by one step per direction.
inline Droplet dhat_droplet(const UpdateFamily& fam,
                            const std::vector<Dir>& dirs) {
  std::vector<Site> hull = fam.all_offsets();
  hull.push_back(Site{0, 0});
  return minimal_droplet(hull, dirs).inflated(1);
}

/// Deterministic 3-or-4 direction choice with the origin strictly inside the
/// convex hull. The four axes win whenever all of them are stable; otherwise
/// candidate representatives are drawn from the stable components and the
/// first spanning triple (then quadruple) in angle order is taken.
inline std::vector<Dir> choose_spanning_directions(const ArcSet& stab) {
  if (exists_free_semicircle(stab))
    throw PreconditionError(
        "choose_spanning_directions: supercritical stable set");

  bool axes_ok = true;
  for (const Dir& a : axis_directions())
    if (!stab.contains(a)) axes_ok = false;
  if (axes_ok) return axis_directions();

  std::vector<Dir> cand;
  for (const Arc& a : stab.arcs()) {
    cand.push_back(a.start);
    if (a.end != a.start) {
      cand.push_back(a.end);
      cand.push_back(interior_direction(a.start, a.end));
    }
    for (const Dir& c : {Dir{1, 0}, Dir{1, 1}, Dir{0, 1}, Dir{-1, 1},
                         Dir{-1, 0}, Dir{-1, -1}, Dir{0, -1}, Dir{1, -1}})
      if (arc_contains(a, c)) cand.push_back(c);
  }
  std::sort(cand.begin(), cand.end(),
            [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  const std::size_t n = cand.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (gap_class(cand[i], cand[j]) < 0 && gap_class(cand[j], cand[k]) < 0 &&
            gap_class(cand[k], cand[i]) < 0)
          return {cand[i], cand[j], cand[k]};
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          if (gap_class(cand[i], cand[j]) < 0 &&
              gap_class(cand[j], cand[k]) < 0 &&
              gap_class(cand[k], cand[l]) < 0 &&
              gap_class(cand[l], cand[i]) < 0)
            return {cand[i], cand[j], cand[k], cand[l]};
        }
  throw PreconditionError(
      "choose_spanning_directions: no spanning set among stable directions");
}

/// Whether some integer translate of dhat meets both droplets as site sets:
/// equivalently, some difference of two dhat sites carries a site of d2 onto
/// a site of d1.
inline bool merge_test(const Droplet& d1, const Droplet& d2,
                       const Droplet& dhat) {
  assert(d1.dirs == d2.dirs && d1.dirs == dhat.dirs);
  if (is_axis_dirs(d1.dirs)) {
    if (droplet_empty(d1) || droplet_empty(d2) || droplet_empty(dhat))
      return false;
    const i64 wd = dhat.offsets[0] + dhat.offsets[2];
    const i64 hd = dhat.offsets[1] + dhat.offsets[3];
    const i64 gap_x = std::max<i64>(
        {0, -d1.offsets[2] - d2.offsets[0], -d2.offsets[2] - d1.offsets[0]});
    const i64 gap_y = std::max<i64>(
        {0, -d1.offsets[3] - d2.offsets[1], -d2.offsets[3] - d1.offsets[1]});
    return gap_x <= wd && gap_y <= hd;
  }

  std::vector<Site> hs = droplet_sites(dhat);
  std::vector<Site> deltas;
  deltas.reserve(hs.size() * hs.size());
  for (const Site& a : hs)
    for (const Site& b : hs) deltas.push_back(a - b);
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  for (const Site& delta : deltas) {
    Droplet inter = d1;
    const Droplet shifted = d2.translated(delta);
    for (std::size_t i = 0; i < inter.offsets.size(); ++i)
      inter.offsets[i] = std::min(inter.offsets[i], shifted.offsets[i]);
    if (!droplet_empty(inter)) return true;
  }
  return false;
}

}  // namespace ubp
