#pragma once

// Breakthrough blocks: the finite pieces of a rule that poke out of a stable
// half-plane, X cut down to {x : <x,u> >= 0}. The pattern only changes when u
// crosses a perpendicular of some offset, so a circular sweep over those
// event directions enumerates every block exactly.

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ubp/arcset.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/stable_set.hpp"

namespace ubp {

struct BreakthroughBlock {
  // Offsets normalized so the lexicographically smallest site is the origin,
  // sorted. Never empty: stable u keeps at least one offset out of H_u.
  std::vector<Site> sites;
  std::size_t source_rule = 0;
  // Maximal arc of directions whose cut of the source rule equals this block
  // (up to translation). Intersects the stable set by construction.
  Arc direction_arc;
  // The site subtracted during normalization; sites + rule_anchor lie inside
  // the source rule, hence inside any droplet containing every rule.
  Site rule_anchor;
};

namespace detail {

inline std::vector<Site> block_pattern(const std::vector<Site>& rule,
                                       const Dir& u) {
  std::vector<Site> b;
  for (const Site& x : rule)
    if (dot(x, u) >= 0) b.push_back(x);
  return b;
}

inline std::pair<std::vector<Site>, Site> normalize_block(std::vector<Site> b) {
  assert(!b.empty());
  std::sort(b.begin(), b.end());
  const Site m = b.front();
  for (Site& s : b) s = s - m;
  return {std::move(b), m};
}

}  // namespace detail

inline std::vector<BreakthroughBlock> enumerate_breakthrough_blocks(
    const UpdateFamily& fam) {
  std::vector<BreakthroughBlock> out;
  ArcSet stab = stable_set(fam);
  if (stab.is_empty()) return out;

  std::set<std::vector<Site>> seen;
  for (std::size_t ri = 0; ri < fam.rules.size(); ++ri) {
    const auto& rule = fam.rules[ri];

    std::vector<Dir> ev;
    for (const Site& x : rule) {
      Dir p = dir_from(x.x, x.y);
      ev.push_back(perp_ccw(p));
      ev.push_back(perp_cw(p));
    }
    std::sort(ev.begin(), ev.end(),
              [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    const std::size_t n = ev.size();
    assert(n >= 2);

    // Region 2k is the event point ev[k], region 2k+1 the open interval
    // following it. Patterns are constant on each region.
    std::vector<std::vector<Site>> pat(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
      pat[2 * k] = detail::block_pattern(rule, ev[k]);
      pat[2 * k + 1] = detail::block_pattern(
          rule, interior_direction(ev[k], ev[(k + 1) % n]));
    }

    const std::size_t m = 2 * n;
    std::size_t first = m;
    for (std::size_t r = 0; r < m; ++r) {
      if (pat[r] != pat[(r + m - 1) % m]) {
        first = r;
        break;
      }
    }
    assert(first < m);  // sign flips across antipodes, so never constant

    std::size_t r = first;
    while (r < first + m) {
      std::size_t r0 = r;
      while (r + 1 < first + m && pat[(r + 1) % m] == pat[r0 % m]) ++r;
      std::size_t r1 = r % m;
      ++r;
      const std::vector<Site>& b = pat[r0 % m];
      if (b.empty()) continue;  // u strictly destabilized by this rule

      Arc arc;
      std::size_t s0 = r0 % m;
      if (s0 % 2 == 0) {
        arc.start = ev[s0 / 2];
        arc.closed_start = true;
      } else {
        arc.start = ev[s0 / 2];
        arc.closed_start = false;
      }
      if (r1 % 2 == 0) {
        arc.end = ev[r1 / 2];
        arc.closed_end = true;
      } else {
        arc.end = ev[(r1 / 2 + 1) % n];
        arc.closed_end = false;
      }
      if (arc.start == arc.end && arc.closed_start != arc.closed_end)
        continue;  // full-circle run cannot happen; guard stays cheap

      if (set_intersection(stab, ArcSet::from_arcs({arc})).is_empty())
        continue;

      auto [norm, anchor] = detail::normalize_block(b);
      if (!seen.insert(norm).second) continue;
      out.push_back(BreakthroughBlock{std::move(norm), ri, arc, anchor});
    }
  }
  return out;
}

/// Smallest breakthrough-block size, the quantity driving the lower-bound
/// exponent for critical families. Absent when nothing is stable.
inline std::optional<std::size_t> alpha1(const UpdateFamily& fam) {
  auto blocks = enumerate_breakthrough_blocks(fam);
  if (blocks.empty()) return std::nullopt;
  std::size_t best = blocks.front().sites.size();
  for (const auto& b : blocks) best = std::min(best, b.sites.size());
  return best;
}

/// Both primitive perpendiculars of every offset, deduplicated and sorted
/// counterclockwise. Adding these to the stable set makes droplet corners
/// reachable by line-by-line growth.
inline std::vector<Dir> quasi_stable_set(const UpdateFamily& fam) {
  std::vector<Dir> q;
  for (const Site& o : fam.all_offsets()) {
    Dir p = dir_from(o.x, o.y);
    q.push_back(perp_ccw(p));
    q.push_back(perp_cw(p));
  }
  std::sort(q.begin(), q.end(),
            [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

struct QuasiStabilityResult {
  bool ok = true;
  std::optional<std::pair<Dir, Dir>> first_failing;
};

/// For every cyclically consecutive pair (u, v) of dirs, some rule must fit
/// inside the intersection of the two closed half-planes (H_u u l_u) and
/// (H_v u l_v). A single direction passes vacuously.
inline QuasiStabilityResult verify_quasi_stability(const UpdateFamily& fam,
                                                   const std::vector<Dir>& dirs) {
  if (dirs.empty())
    throw PreconditionError("verify_quasi_stability: empty direction set");
  const std::size_t n = dirs.size();
  std::size_t descents = 0;
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    int c = angle_compare(dirs[i], dirs[(i + 1) % n]);
    if (c == 0)
      throw PreconditionError("verify_quasi_stability: duplicate direction");
    if (c > 0) ++descents;
  }
  if (descents > 1)
    throw PreconditionError(
        "verify_quasi_stability: directions not sorted counterclockwise");
  if (n == 1) return {true, std::nullopt};

  for (std::size_t i = 0; i < n; ++i) {
    const Dir& u = dirs[i];
    const Dir& v = dirs[(i + 1) % n];
    bool found = false;
    for (const auto& rule : fam.rules) {
      bool fits = true;
      for (const Site& x : rule) {
        if (dot(x, u) > 0 || dot(x, v) > 0) {
          fits = false;
          break;
        }
      }
      if (fits) {
        found = true;
        break;
      }
    }
    if (!found) return {false, std::make_pair(u, v)};
  }
  return {true, std::nullopt};
}

/// Finite representatives of stab u Q: component endpoints of the stable set
/// merged with the quasi-stable directions, counterclockwise.
inline std::vector<Dir> representative_directions(const UpdateFamily& fam) {
  ArcSet stab = stable_set(fam);
  std::vector<Dir> dirs = arc_endpoints(stab);
  std::vector<Dir> q = quasi_stable_set(fam);
  dirs.insert(dirs.end(), q.begin(), q.end());
  std::sort(dirs.begin(), dirs.end(),
            [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  return dirs;
}

}  // namespace ubp
