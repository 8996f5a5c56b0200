#pragma once

// Synchronous dynamics on finite windows: torus with wraparound, rectangle
// with empty exterior, or rectangle backed by a virtual half-plane that
// counts as infected wherever <x,u> < 0. Rows are evaluated word-parallel;
// each rule is an AND over shifted copies of the state, rules OR together.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubp/bitgrid.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/geometry.hpp"

namespace ubp {

enum class Boundary { HardEmpty, VirtualHalfPlane };

struct Lattice {
  enum class Mode { Torus, Rect };

  Mode mode = Mode::Torus;
  Boundary boundary = Boundary::HardEmpty;
  Dir halfplane_u{0, 1};  // VirtualHalfPlane only
  Site origin{0, 0};      // lattice coordinate of grid cell (0,0)
  BitGrid grid;
  long long generation = 0;

  static Lattice torus(int n) {
    Lattice l;
    l.mode = Mode::Torus;
    l.grid = BitGrid(n, n);
    return l;
  }

  /// Rectangle with empty exterior, origin at the center cell.
  static Lattice rect(int w, int h) {
    return rect_at(w, h, Site{-(w / 2), -(h / 2)});
  }

  static Lattice rect_at(int w, int h, Site origin) {
    Lattice l;
    l.mode = Mode::Rect;
    l.origin = origin;
    l.grid = BitGrid(w, h);
    return l;
  }

  static Lattice rect_halfplane(int w, int h, Site origin, Dir u) {
    Lattice l = rect_at(w, h, origin);
    l.boundary = Boundary::VirtualHalfPlane;
    l.halfplane_u = u;
    return l;
  }

  int width() const { return grid.width(); }
  int height() const { return grid.height(); }

  bool in_bounds(const Site& s) const {
    if (mode == Mode::Torus) return true;
    const i64 cx = s.x - origin.x, cy = s.y - origin.y;
    return cx >= 0 && cx < width() && cy >= 0 && cy < height();
  }

  /// Grid cell of a lattice site; torus coordinates wrap.
  std::pair<int, int> cell(const Site& s) const {
    if (mode == Mode::Torus) {
      const int w = width(), h = height();
      return {static_cast<int>(((s.x % w) + w) % w),
              static_cast<int>(((s.y % h) + h) % h)};
    }
    assert(in_bounds(s));
    return {static_cast<int>(s.x - origin.x), static_cast<int>(s.y - origin.y)};
  }

  bool get(const Site& s) const {
    auto [x, y] = cell(s);
    return grid.get(x, y);
  }

  void set(const Site& s, bool v = true) {
    auto [x, y] = cell(s);
    grid.set(x, y, v);
  }

  /// Membership seen by the dynamics, exterior included.
  bool infected_extended(const Site& s) const {
    if (mode == Mode::Torus || in_bounds(s)) return get(s);
    if (boundary == Boundary::VirtualHalfPlane) return dot(s, halfplane_u) < 0;
    return false;
  }
};

/// Shift plan shared across rules: every distinct offset is gathered once
/// per row, and rules AND together references into that buffer.
struct CompiledFamily {
  std::vector<Site> offsets;
  std::vector<std::vector<std::size_t>> rule_offsets;

  static CompiledFamily compile(const UpdateFamily& fam) {
    CompiledFamily cf;
    cf.offsets = fam.all_offsets();
    std::sort(cf.offsets.begin(), cf.offsets.end(),
              [](const Site& a, const Site& b) {
                return std::pair{a.y, a.x} < std::pair{b.y, b.x};
              });
    cf.rule_offsets.reserve(fam.rules.size());
    for (const auto& rule : fam.rules) {
      std::vector<std::size_t> idx;
      idx.reserve(rule.size());
      for (const Site& o : rule) {
        auto it = std::find(cf.offsets.begin(), cf.offsets.end(), o);
        idx.push_back(static_cast<std::size_t>(it - cf.offsets.begin()));
      }
      cf.rule_offsets.push_back(std::move(idx));
    }
    return cf;
  }
};

namespace detail {

struct StepPlan {
  std::vector<BitGrid> vhp_masks;  // per offset; only for VirtualHalfPlane
};

inline StepPlan make_plan(const Lattice& l, const CompiledFamily& f) {
  StepPlan plan;
  if (l.mode != Lattice::Mode::Rect || l.boundary != Boundary::VirtualHalfPlane)
    return plan;
  const int w = l.width(), h = l.height();
  plan.vhp_masks.reserve(f.offsets.size());
  for (const Site& o : f.offsets) {
    BitGrid m(w, h);
    for (int j = 0; j < h; ++j) {
      const i64 py = j + o.y;
      for (int i = 0; i < w; ++i) {
        const i64 px = i + o.x;
        if (px >= 0 && px < w && py >= 0 && py < h) continue;
        const Site p{px + l.origin.x, py + l.origin.y};
        if (dot(p, l.halfplane_u) < 0) m.set(i, j);
      }
    }
    plan.vhp_masks.push_back(std::move(m));
  }
  return plan;
}

/// One synchronous generation from src into dst (grids must have equal
/// dimensions). Returns whether any word changed.
inline bool step_into(const Lattice& src, const CompiledFamily& f,
                      const StepPlan& plan, Lattice& dst) {
  const int w = src.width(), h = src.height();
  const int wpr = src.grid.words_per_row();
  const std::size_t noff = f.offsets.size();
  std::vector<std::uint64_t> buf(noff * wpr);
  std::vector<std::uint64_t> racc(wpr), tmp(wpr);
  const bool torus = src.mode == Lattice::Mode::Torus;
  bool changed = false;

  for (int j = 0; j < h; ++j) {
    for (std::size_t oi = 0; oi < noff; ++oi) {
      std::uint64_t* b = &buf[oi * wpr];
      std::fill(b, b + wpr, 0);
      const Site& o = f.offsets[oi];
      const i64 jj = j + o.y;
      if (torus) {
        const int sj = static_cast<int>(((jj % h) + h) % h);
        const std::uint64_t* s = src.grid.row(sj);
        const std::size_t sft =
            static_cast<std::size_t>(((o.x % w) + w) % w);
        if (sft == 0) {
          std::copy(s, s + wpr, b);
        } else {
          copy_bit_range(s, sft, b, 0, w - sft);
          copy_bit_range(s, 0, b, w - sft, sft);
        }
      } else {
        if (jj >= 0 && jj < h) {
          const std::uint64_t* s = src.grid.row(static_cast<int>(jj));
          const i64 dx = o.x;
          if (dx >= 0) {
            if (dx < w) copy_bit_range(s, static_cast<std::size_t>(dx), b, 0,
                                       static_cast<std::size_t>(w - dx));
          } else if (-dx < w) {
            copy_bit_range(s, 0, b, static_cast<std::size_t>(-dx),
                           static_cast<std::size_t>(w + dx));
          }
        }
        if (!plan.vhp_masks.empty()) {
          const std::uint64_t* m = plan.vhp_masks[oi].row(j);
          for (int k = 0; k < wpr; ++k) b[k] |= m[k];
        }
      }
    }

    const std::uint64_t* cur = src.grid.row(j);
    std::uint64_t* out = dst.grid.row(j);
    std::copy(cur, cur + wpr, racc.data());
    for (const auto& ro : f.rule_offsets) {
      const std::uint64_t* first = &buf[ro[0] * wpr];
      std::copy(first, first + wpr, tmp.data());
      for (std::size_t t = 1; t < ro.size(); ++t) {
        const std::uint64_t* bb = &buf[ro[t] * wpr];
        for (int k = 0; k < wpr; ++k) tmp[k] &= bb[k];
      }
      for (int k = 0; k < wpr; ++k) racc[k] |= tmp[k];
    }
    for (int k = 0; k < wpr; ++k) {
      changed |= racc[k] != cur[k];
      out[k] = racc[k];
    }
  }
  return changed;
}

}  // namespace detail

inline Lattice step(const Lattice& l, const CompiledFamily& f) {
  detail::StepPlan plan = detail::make_plan(l, f);
  Lattice out = l;
  detail::step_into(l, f, plan, out);
  ++out.generation;
  return out;
}

struct FixpointResult {
  Lattice lattice;
  long long steps_taken = 0;
  bool reached_fixpoint = false;
};

inline FixpointResult run_to_fixpoint(Lattice l, const CompiledFamily& f,
                                      long long max_steps) {
  if (max_steps < 0)
    throw PreconditionError("run_to_fixpoint: negative step budget");
  detail::StepPlan plan = detail::make_plan(l, f);
  FixpointResult r;
  Lattice scratch = l;
  while (r.steps_taken < max_steps) {
    const bool changed = detail::step_into(l, f, plan, scratch);
    if (!changed) {
      r.reached_fixpoint = true;
      break;
    }
    std::swap(l.grid, scratch.grid);
    ++l.generation;
    ++r.steps_taken;
  }
  r.lattice = std::move(l);
  return r;
}

/// Full infection of the torus from this initial state. Each productive
/// generation adds a site, so 2n^2 steps always suffice.
inline bool percolates(const Lattice& l0, const CompiledFamily& f) {
  if (l0.mode != Lattice::Mode::Torus)
    throw PreconditionError("percolates: torus lattice required");
  const long long n = l0.width();
  FixpointResult r = run_to_fixpoint(l0, f, 2 * n * n);
  return r.lattice.grid.all_set();
}

/// First generation at which the origin is infected; absent when a fixpoint
/// or the budget arrives first.
inline std::optional<long long> tau(const Lattice& l0, const CompiledFamily& f,
                                    long long max_steps) {
  if (l0.mode == Lattice::Mode::Rect && !l0.in_bounds(Site{0, 0}))
    throw PreconditionError("tau: origin outside the lattice");
  if (l0.get(Site{0, 0})) return 0;
  detail::StepPlan plan = detail::make_plan(l0, f);
  Lattice cur = l0;
  Lattice scratch = l0;
  for (long long t = 1; t <= max_steps; ++t) {
    const bool changed = detail::step_into(cur, f, plan, scratch);
    if (!changed) return std::nullopt;
    std::swap(cur.grid, scratch.grid);
    if (cur.get(Site{0, 0})) return t;
  }
  return std::nullopt;
}

/// Per-site oracle with identical boundary semantics. Slow on purpose; the
/// word-level kernel is differential-tested against it.
inline Lattice reference_step(const Lattice& l, const UpdateFamily& fam) {
  Lattice out = l;
  ++out.generation;
  const int w = l.width(), h = l.height();
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (l.grid.get(i, j)) continue;
      const Site x{i + l.origin.x, j + l.origin.y};
      bool infect = false;
      for (const auto& rule : fam.rules) {
        bool all = true;
        for (const Site& o : rule) {
          if (!l.infected_extended(x + o)) {
            all = false;
            break;
          }
        }
        if (all) {
          infect = true;
          break;
        }
      }
      if (infect) out.grid.set(i, j);
    }
  }
  return out;
}

/// Binary PBM (P4) snapshot. File row 0 is the top of the image, which is
/// the highest y row of the grid; bit 1 marks an infected site.
inline std::string to_pbm(const Lattice& l) {
  const int w = l.width(), h = l.height();
  std::string s = "P4\n" + std::to_string(w) + " " + std::to_string(h) + "\n";
  const int bpr = (w + 7) / 8;
  for (int r = 0; r < h; ++r) {
    const int j = h - 1 - r;
    for (int byte = 0; byte < bpr; ++byte) {
      unsigned char v = 0;
      for (int bit = 0; bit < 8; ++bit) {
        const int x = byte * 8 + bit;
        if (x < w && l.grid.get(x, j)) v |= static_cast<unsigned char>(0x80 >> bit);
      }
      s.push_back(static_cast<char>(v));
    }
  }
  return s;
}

}  // namespace ubp
