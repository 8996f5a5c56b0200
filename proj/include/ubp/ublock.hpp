#pragma once

// u-blocks: finite seeds of consecutive sites on the boundary line l_u that,
// riding on the infected half-plane H_u, take over the whole line (or one
// half of it). Decided by simulating a band 0 <= <x,u> <= h in coordinates
// straightened by a unimodular map, with H_u virtually infected below. A
// sideways translation certificate makes YES answers sound; a fixpoint
// without one is only "not within this window".

#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>
#include <vector>

#include "ubp/blocks.hpp"
#include "ubp/engine.hpp"
#include "ubp/errors.hpp"
#include "ubp/stable_set.hpp"

namespace ubp {

enum class UBlockStatus { Block, LeftBlockOnly, RightBlockOnly, NotBlockWithinWindow };

inline const char* ublock_status_name(UBlockStatus s) {
  switch (s) {
    case UBlockStatus::Block: return "Block";
    case UBlockStatus::LeftBlockOnly: return "LeftBlockOnly";
    case UBlockStatus::RightBlockOnly: return "RightBlockOnly";
    case UBlockStatus::NotBlockWithinWindow: return "NotBlockWithinWindow";
  }
  return "NotBlockWithinWindow";
}

struct UBlockVerdict {
  UBlockStatus status = UBlockStatus::NotBlockWithinWindow;
  i64 window_w = 0;
  i64 window_h = 0;
  // Sideways shift count k >= 1: the fixpoint trace on l_u contains the seed
  // translated k primitive steps with everything in between infected, which
  // propagates forever by translation invariance. Absent for inconclusive
  // verdicts; the smaller side when both sides certify.
  std::optional<i64> certificate;
};

namespace detail {

/// w with <w,u> = 1 for primitive u, shortened by multiples of the line step
/// so transformed offsets stay small.
inline Dir bezout_for(const Dir& u) {
  i64 old_r = u.x, r = u.y;
  i64 old_s = 1, s = 0;
  i64 old_t = 0, t = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  assert(old_r == 1 || old_r == -1);
  if (old_r < 0) {
    old_s = -old_s;
    old_t = -old_t;
  }
  Dir w{old_s, old_t};
  const Dir sr = perp_cw(u);
  const i128 n2 = norm2(u);
  const i64 k = static_cast<i64>(floor_div(2 * dot(w, sr) + n2, 2 * n2));
  w.x -= k * sr.x;
  w.y -= k * sr.y;
  assert(dot(w, u) == 1);
  return w;
}

}  // namespace detail

inline UBlockVerdict is_u_block(const UpdateFamily& fam, const Dir& u,
                                i64 z_length, i64 window_w, i64 window_h) {
  if (dir_from(u.x, u.y) != u)
    throw PreconditionError("is_u_block: direction must be primitive");
  if (z_length < 0)
    throw PreconditionError("is_u_block: negative seed length");
  if (window_w < 8 * fam.range * z_length || window_w < 2)
    throw PreconditionError("is_u_block: window too small for the seed");
  if (window_h < 2 * fam.range)
    throw PreconditionError("is_u_block: window shorter than the family range");

  const i64 n2 = static_cast<i64>(norm2(u));
  const i64 rows = window_h * n2 + 1;
  if (static_cast<i128>(window_w) * rows > (i128{1} << 28))
    throw PreconditionError("is_u_block: window exceeds the memory budget");

  // Straighten: x -> (cross(x,w), <x,u>) sends l_u to row 0 and the
  // rightward line step to +1 column; determinant is -1, so the dynamics
  // transport verbatim.
  const Dir w = detail::bezout_for(u);
  std::vector<std::vector<Site>> trules;
  trules.reserve(fam.rules.size());
  for (const auto& rule : fam.rules) {
    std::vector<Site> tr;
    tr.reserve(rule.size());
    for (const Site& o : rule) {
      const i128 c = cross(o, w);
      const i128 r = dot(o, u);
      if (c > kMaxOffset || c < -kMaxOffset || r > kMaxOffset || r < -kMaxOffset)
        throw PreconditionError("is_u_block: direction too steep for the window");
      tr.push_back(Site{static_cast<i64>(c), static_cast<i64>(r)});
    }
    trules.push_back(std::move(tr));
  }
  const UpdateFamily tfam = UpdateFamily::validated(std::move(trules));

  const i64 c_min = -window_w / 2;
  const i64 c_max = c_min + window_w - 1;
  Lattice band = Lattice::rect_halfplane(static_cast<int>(window_w),
                                         static_cast<int>(rows),
                                         Site{c_min, 0}, Dir{0, 1});
  const i64 s_lo = -(z_length / 2);
  const i64 s_hi = s_lo + z_length - 1;
  for (i64 c = s_lo; c <= s_hi; ++c) band.set(Site{c, 0});

  const CompiledFamily cf = CompiledFamily::compile(tfam);
  const long long budget = static_cast<long long>(window_w) * rows + 1;
  FixpointResult fr = run_to_fixpoint(std::move(band), cf, budget);
  assert(fr.reached_fixpoint);
  const Lattice& fin = fr.lattice;

  UBlockVerdict v;
  v.window_w = window_w;
  v.window_h = window_h;

  if (z_length == 0) {
    // The empty seed is a block exactly when u is unstable, in which case
    // the whole boundary line infects in one step.
    bool any = false;
    for (i64 c = c_min; c <= c_max && !any; ++c) any = fin.get(Site{c, 0});
    v.status = any ? UBlockStatus::Block : UBlockStatus::NotBlockWithinWindow;
    if (any) v.certificate = 1;
    return v;
  }

  i64 run_lo = s_lo;
  while (run_lo - 1 >= c_min && fin.get(Site{run_lo - 1, 0})) --run_lo;
  i64 run_hi = s_hi;
  while (run_hi + 1 <= c_max && fin.get(Site{run_hi + 1, 0})) ++run_hi;
  const i64 kl = s_lo - run_lo;
  const i64 kr = run_hi - s_hi;

  if (kl >= 1 && kr >= 1) {
    v.status = UBlockStatus::Block;
    v.certificate = std::min(kl, kr);
  } else if (kr >= 1) {
    v.status = UBlockStatus::RightBlockOnly;
    v.certificate = kr;
  } else if (kl >= 1) {
    v.status = UBlockStatus::LeftBlockOnly;
    v.certificate = kl;
  } else {
    v.status = UBlockStatus::NotBlockWithinWindow;
  }
  return v;
}

inline UBlockVerdict is_u_block(const UpdateFamily& fam, const Dir& u,
                                i64 z_length) {
  const i64 z = std::max<i64>(z_length, 1);
  return is_u_block(fam, u, z_length, 64 * fam.range * z, 4 * fam.range);
}

/// Finite direction set governing sideways growth inside the witness
/// semicircle: isolated stable points plus quasi-stable directions, sorted
/// counterclockwise from the semicircle's start.
inline std::vector<Dir> s_prime_directions(const UpdateFamily& fam,
                                           const Arc& c) {
  if (c.closed_start || c.closed_end || antipode(c.start) != c.end)
    throw PreconditionError("witness must be an open semicircle");
  const ArcSet stab = stable_set(fam);
  const ArcSet inter = set_intersection(stab, ArcSet::from_arcs({c}));
  std::vector<Dir> dirs;
  if (!inter.is_empty()) {
    for (const Arc& a : inter.arcs()) {
      if (a.start != a.end || !a.closed_start)
        throw PreconditionError(
            "stable set meets the witness semicircle in an arc");
      dirs.push_back(a.start);
    }
  }
  for (const Dir& q : quasi_stable_set(fam))
    if (arc_contains(c, q)) dirs.push_back(q);
  std::sort(dirs.begin(), dirs.end(), [&](const Dir& a, const Dir& b) {
    return rel_compare(c.start, a, b) < 0;
  });
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  return dirs;
}

struct Alpha2Report {
  // Max over directions of the least block length; absent when any
  // direction exhausts the search cap.
  std::optional<std::size_t> value;
  std::vector<std::pair<Dir, std::optional<std::size_t>>> per_direction;
};

inline Alpha2Report alpha2(const UpdateFamily& fam, const Arc& witness,
                           std::size_t l_max = 20) {
  if (l_max < 1) throw PreconditionError("alpha2: search cap must be positive");
  const ArcSet stab = stable_set(fam);
  if (exists_free_semicircle(stab))
    throw PreconditionError("alpha2: family is supercritical, not critical");
  if (!set_intersection(strongly_stable_set(stab),
                        ArcSet::from_arcs({witness}))
           .is_empty())
    throw PreconditionError(
        "alpha2: witness semicircle meets strongly stable directions");

  Alpha2Report rep;
  std::size_t best = 0;
  bool complete = true;
  for (const Dir& u : s_prime_directions(fam, witness)) {
    std::optional<std::size_t> found;
    for (std::size_t z = 0; z <= l_max; ++z) {
      if (is_u_block(fam, u, static_cast<i64>(z)).status == UBlockStatus::Block) {
        found = z;
        break;
      }
    }
    rep.per_direction.emplace_back(u, found);
    if (found)
      best = std::max(best, *found);
    else
      complete = false;
  }
  if (complete && !rep.per_direction.empty()) rep.value = best;
  return rep;
}

}  // namespace ubp
