#pragma once

// Deterministic droplet-growth verification and supercritical witnesses.
// A witness semicircle fixes a frame (u_r, u_l, u_plus); droplets grow in
// the u_plus direction inside the strip 0 <= <z,u_l> <= mu, their forward
// boundary translating by u_plus per step. Each step is checked by a dense
// simulation: the next droplet must lie in the closure of the rectangle R,
// the previous droplet, and one minimum block per newly exposed line.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "ubp/arcset.hpp"
#include "ubp/droplet.hpp"
#include "ubp/engine.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/sparse.hpp"
#include "ubp/stable_set.hpp"
#include "ubp/ublock.hpp"

namespace ubp {

struct GrowthStep {
  int m = 0;
  bool passed = false;
  std::size_t new_lines = 0;
  std::size_t blocks_placed = 0;
  std::size_t target_sites = 0;
};

struct GrowthReport {
  Dir u_r{1, 0}, u_l{-1, 0}, u_plus{0, 1};
  std::vector<Dir> directions;        // growth directions inside the semicircle
  std::vector<std::size_t> block_len; // minimum block cardinality per direction
  i64 lambda_x = 0;                   // extent of R along u_plus, scaled
  i64 mu = 0;                         // strip width along u_l, scaled
  i64 min_mu = 0;
  std::vector<GrowthStep> steps;
  bool all_passed = true;
};

struct SupercriticalWitness {
  std::vector<Site> seed;
  std::size_t cap = 0;
  bool exceeded_at_cap = false;
  bool exceeded_at_double = false;
};

namespace detail {

struct Frame {
  Dir u_r, u_l, u_plus;
  i64 n2;
};

inline Frame growth_frame(const Arc& c) {
  if (c.closed_start || c.closed_end || c.end != antipode(c.start))
    throw PreconditionError("witness must be an open semicircle");
  const Frame f{c.start, antipode(c.start), perp_ccw(c.start),
                static_cast<i64>(norm2(c.start))};
  return f;
}

struct GrowthGeometry {
  Frame frame;
  std::vector<Dir> dirs;            // u_1..u_k, counterclockwise from u_r
  std::vector<i64> a;               // <u_j, u_plus>, positive
  std::vector<std::size_t> alpha;   // block length per direction
  std::vector<i64> base_offset;     // <., u_j> offset of D_0
  std::vector<i64> y_low, y_high;   // side Y-extents, constant in m
  i64 margin_scaled = 0;
  i64 lambda_x = 0;
  i64 mu = 0;
  i64 min_mu = 0;
};

/// Lays out the m=0 corner chain: one side per direction, each long enough
/// to host its block between the corner margins, shifted so the whole chain
/// sits at positive u_plus depth. Throws when mu cannot fit the chain.
inline GrowthGeometry build_geometry(const Frame& f,
                                     const std::vector<Dir>& dirs,
                                     const std::vector<std::size_t>& alpha,
                                     int range, i64 mu_req) {
  GrowthGeometry g;
  g.frame = f;
  g.dirs = dirs;
  g.alpha = alpha;
  g.margin_scaled = static_cast<i64>(2 * range + 2) * f.n2;

  const std::size_t k = dirs.size();
  std::vector<i64> steps(k);
  g.min_mu = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const i64 aj = static_cast<i64>(dot(dirs[j], f.u_plus));
    assert(aj > 0);
    g.a.push_back(aj);
    const i64 margin_steps = static_cast<i64>(ceil_div(g.margin_scaled, aj));
    steps[j] = 2 * margin_steps + static_cast<i64>(alpha[j]) + 2;
    g.min_mu += steps[j] * aj;
  }
  if (mu_req < g.min_mu)
    throw PreconditionError("mu too small for the side-length constraints");
  g.mu = mu_req;

  // Walk the chain once from the origin to find its u_plus extent, then
  // shift it to depth >= margin.
  Site z{0, 0};
  i64 min_x = 0, max_x = 0;
  std::vector<Site> corners{z};
  for (std::size_t j = 0; j < k; ++j) {
    z = z + Site{steps[j] * perp_ccw(dirs[j]).x, steps[j] * perp_ccw(dirs[j]).y};
    corners.push_back(z);
    const i64 x = static_cast<i64>(dot(z, f.u_plus));
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
  }
  if (k > 0) {
    // The last side continues past its corner up to the strip edge Y = mu.
    const i64 y_top = static_cast<i64>(dot(z, f.u_l));
    const i64 b_k = static_cast<i64>(dot(dirs[k - 1], f.u_l));
    if (b_k < 0) {
      const i64 extra =
          static_cast<i64>(ceil_div(static_cast<i128>(-b_k) * (g.mu - y_top),
                                    g.a[k - 1]));
      max_x = std::max(max_x, static_cast<i64>(dot(z, f.u_plus)) + extra);
    }
  }
  const i64 shift = static_cast<i64>(ceil_div(g.margin_scaled - min_x, f.n2));
  const Site s0{shift * f.u_plus.x, shift * f.u_plus.y};
  g.lambda_x = max_x + shift * f.n2;

  Site p = s0;
  for (std::size_t j = 0; j < k; ++j) {
    g.base_offset.push_back(static_cast<i64>(dot(p, dirs[j])));
    g.y_low.push_back(static_cast<i64>(dot(p, f.u_l)));
    p = p + Site{steps[j] * perp_ccw(dirs[j]).x, steps[j] * perp_ccw(dirs[j]).y};
    g.y_high.push_back(j + 1 == k ? g.mu : static_cast<i64>(dot(p, f.u_l)));
  }
  return g;
}

inline Droplet strip_rectangle(const GrowthGeometry& g) {
  const Frame& f = g.frame;
  return Droplet{{f.u_plus, f.u_l, f.u_r, Dir{-f.u_plus.x, -f.u_plus.y}},
                 {g.lambda_x, g.mu, 0, 0}};
}

inline Droplet droplet_at(const GrowthGeometry& g, i64 m) {
  const Frame& f = g.frame;
  Droplet d;
  for (std::size_t j = 0; j < g.dirs.size(); ++j) {
    d.dirs.push_back(g.dirs[j]);
    d.offsets.push_back(g.base_offset[j] + m * g.a[j]);
  }
  d.dirs.insert(d.dirs.end(),
                {f.u_l, f.u_r, Dir{-f.u_plus.x, -f.u_plus.y}});
  d.offsets.insert(d.offsets.end(), {g.mu, 0, 0});
  return d;
}

/// Integer parameter range of lattice sites on the line <z,u> = i inside d,
/// with z(t) = i*w + t*perp_ccw(u).
inline std::optional<std::pair<i64, i64>> line_range_in(const Droplet& d,
                                                        const Dir& u, i64 i) {
  const Dir w = bezout_for(u);
  const Dir p = perp_ccw(u);
  const Site base{i * w.x, i * w.y};
  i128 lo_n = 0, lo_d = 0, hi_n = 0, hi_d = 0;  // t >= lo_n/lo_d, t <= hi_n/hi_d
  bool has_lo = false, has_hi = false;
  for (std::size_t c = 0; c < d.dirs.size(); ++c) {
    const i128 coeff = dot(Site{p.x, p.y}, d.dirs[c]);
    const i128 rhs = static_cast<i128>(d.offsets[c]) - dot(base, d.dirs[c]);
    if (coeff > 0) {
      if (!has_hi || hi_n * coeff > rhs * hi_d) {
        hi_n = rhs;
        hi_d = coeff;
        has_hi = true;
      }
    } else if (coeff < 0) {
      if (!has_lo || lo_n * (-coeff) < (-rhs) * lo_d) {
        lo_n = -rhs;
        lo_d = -coeff;
        has_lo = true;
      }
    } else if (rhs < 0) {
      return std::nullopt;
    }
  }
  if (!has_lo || !has_hi) return std::nullopt;
  const i64 t_lo = static_cast<i64>(ceil_div(lo_n, lo_d));
  const i64 t_hi = static_cast<i64>(floor_div(hi_n, hi_d));
  if (t_lo > t_hi) return std::nullopt;
  return std::make_pair(t_lo, t_hi);
}

/// Block of `len` consecutive line sites centred in the side's margin window.
inline std::vector<Site> place_block(const GrowthGeometry& g, std::size_t j,
                                     i64 i, std::size_t len) {
  const Dir& u = g.dirs[j];
  const Dir w = bezout_for(u);
  const Dir p = perp_ccw(u);
  const Site base{i * w.x, i * w.y};
  const i128 y_base = dot(base, g.frame.u_l);
  const i64 y_lo = g.y_low[j] + g.margin_scaled;
  const i64 y_hi = g.y_high[j] - g.margin_scaled;
  const i64 t_lo = static_cast<i64>(ceil_div(y_lo - y_base, g.a[j]));
  const i64 t_hi = static_cast<i64>(floor_div(y_hi - y_base, g.a[j]));
  assert(t_hi - t_lo + 1 >= static_cast<i64>(len));
  const i64 t0 = t_lo + (t_hi - t_lo + 1 - static_cast<i64>(len)) / 2;
  std::vector<Site> out;
  for (std::size_t s = 0; s < len; ++s) {
    const i64 t = t0 + static_cast<i64>(s);
    out.push_back(base + Site{t * p.x, t * p.y});
  }
  return out;
}

/// Dense closure check: does the closure of `seed` cover `target`?
inline bool closure_covers(const UpdateFamily& fam,
                           const std::vector<Site>& seed,
                           const std::vector<Site>& target) {
  if (target.empty()) return true;
  i64 x0 = target.front().x, x1 = x0, y0 = target.front().y, y1 = y0;
  const auto widen = [&](const std::vector<Site>& v) {
    for (const Site& s : v) {
      x0 = std::min(x0, s.x);
      x1 = std::max(x1, s.x);
      y0 = std::min(y0, s.y);
      y1 = std::max(y1, s.y);
    }
  };
  widen(target);
  widen(seed);
  const i64 pad = fam.range;
  x0 -= pad;
  y0 -= pad;
  x1 += pad;
  y1 += pad;
  Lattice lat = Lattice::rect_at(static_cast<int>(x1 - x0 + 1),
                                 static_cast<int>(y1 - y0 + 1), Site{x0, y0});
  for (const Site& s : seed) lat.set(s);
  const CompiledFamily cf = CompiledFamily::compile(fam);
  const i64 budget = static_cast<i64>(lat.width()) * lat.height() + 1;
  FixpointResult fx = run_to_fixpoint(std::move(lat), cf, budget);
  assert(fx.reached_fixpoint);
  for (const Site& s : target)
    if (!fx.lattice.get(s)) return false;
  return true;
}

}  // namespace detail

/// The smallest strip width the growth construction can run at.
inline i64 min_feasible_mu(const UpdateFamily& fam, const Arc& witness,
                           std::size_t l_max = 20) {
  const detail::Frame f = detail::growth_frame(witness);
  const Alpha2Report rep = alpha2(fam, witness, l_max);
  std::vector<Dir> dirs;
  std::vector<std::size_t> alpha;
  for (const auto& [u, a] : rep.per_direction) {
    if (!a) throw PreconditionError("u-block search exhausted its budget");
    dirs.push_back(u);
    alpha.push_back(*a);
  }
  // Build with an over-large mu just to read back the minimum.
  return detail::build_geometry(f, dirs, alpha, fam.range, i64{1} << 40)
      .min_mu;
}

/// Verifies m_max growth steps of the droplet sequence by direct simulation.
inline GrowthReport verify_droplet_growth(const UpdateFamily& fam,
                                          const Arc& witness, int m_max,
                                          i64 mu, std::size_t l_max = 20) {
  if (m_max < 0) throw PreconditionError("m_max must be non-negative");
  const Classification cls = classify(fam);
  if (cls.kind != Kind::Critical)
    throw PreconditionError("droplet growth verification needs a critical family");

  const detail::Frame f = detail::growth_frame(witness);
  const Alpha2Report rep = alpha2(fam, witness, l_max);
  GrowthReport out;
  out.u_r = f.u_r;
  out.u_l = f.u_l;
  out.u_plus = f.u_plus;
  for (const auto& [u, a] : rep.per_direction) {
    if (!a) throw PreconditionError("u-block search exhausted its budget");
    out.directions.push_back(u);
    out.block_len.push_back(*a);
  }

  const detail::GrowthGeometry g = detail::build_geometry(
      f, out.directions, out.block_len, fam.range, mu);
  out.lambda_x = g.lambda_x;
  out.mu = g.mu;
  out.min_mu = g.min_mu;

  const Droplet r = detail::strip_rectangle(g);
  const std::vector<Site> r_sites = droplet_sites(r);

  for (int m = 1; m <= m_max; ++m) {
    const Droplet d_prev = detail::droplet_at(g, m - 1);
    const Droplet d_cur = detail::droplet_at(g, m);
    GrowthStep step;
    step.m = m;

    std::vector<Site> seed = r_sites;
    {
      std::vector<Site> prev = droplet_sites(d_prev);
      seed.insert(seed.end(), prev.begin(), prev.end());
    }
    for (std::size_t j = 0; j < g.dirs.size(); ++j) {
      const i64 from = g.base_offset[j] + (m - 1) * g.a[j];
      const i64 to = g.base_offset[j] + m * g.a[j];
      for (i64 i = from + 1; i <= to; ++i) {
        if (!detail::line_range_in(d_cur, g.dirs[j], i)) continue;
        ++step.new_lines;
        if (g.alpha[j] == 0) continue;
        const std::vector<Site> blk = detail::place_block(g, j, i, g.alpha[j]);
        seed.insert(seed.end(), blk.begin(), blk.end());
        ++step.blocks_placed;
      }
    }

    const std::vector<Site> target = droplet_sites(d_cur);
    step.target_sites = target.size();
    step.passed = detail::closure_covers(fam, seed, target);
    out.all_passed = out.all_passed && step.passed;
    out.steps.push_back(step);
  }
  return out;
}

/// A finite seed whose closure provably escapes any cap: the rectangle R of
/// the growth construction, certified by two sparse-closure runs.
inline SupercriticalWitness supercritical_witness(const UpdateFamily& fam,
                                                  const Arc& witness,
                                                  std::size_t growth_cap) {
  const ArcSet stab = stable_set(fam);
  if (!exists_free_semicircle(stab))
    throw PreconditionError("supercritical witness needs a supercritical family");
  if (!set_intersection(stab, ArcSet::from_arcs({witness})).is_empty())
    throw PreconditionError("witness semicircle meets the stable set");

  const detail::Frame f = detail::growth_frame(witness);
  const std::vector<Dir> dirs = s_prime_directions(fam, witness);
  const std::vector<std::size_t> alpha(dirs.size(), 0);
  const i64 mu = detail::build_geometry(f, dirs, alpha, fam.range, i64{1} << 40)
                     .min_mu;
  const detail::GrowthGeometry g =
      detail::build_geometry(f, dirs, alpha, fam.range, mu);

  SupercriticalWitness out;
  out.seed = droplet_sites(detail::strip_rectangle(g));
  out.cap = growth_cap;
  out.exceeded_at_cap = sparse_closure(out.seed, fam, growth_cap).exceeded_cap;
  out.exceeded_at_double =
      sparse_closure(out.seed, fam, 2 * growth_cap).exceeded_cap;
  return out;
}

}  // namespace ubp
