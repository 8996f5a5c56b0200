#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace ubp {

/// Circular arc from start to end, walked counterclockwise, with independent
/// endpoint closedness. Degenerate forms when start == end:
///   both closed -> the single point {start}
///   both open   -> the full circle minus {start}
/// Mixed flags with start == end are invalid.
struct Arc {
  Dir start;
  Dir end;
  bool closed_start = true;
  bool closed_end = true;
  friend bool operator==(const Arc&, const Arc&) = default;
};

inline bool arc_is_valid(const Arc& a) {
  return a.start != a.end || a.closed_start == a.closed_end;
}

inline bool arc_contains(const Arc& a, const Dir& d) {
  assert(arc_is_valid(a));
  if (a.start == a.end) return a.closed_start ? d == a.start : d != a.start;
  if (d == a.start) return a.closed_start;
  if (d == a.end) return a.closed_end;
  return rel_compare(a.start, d, a.end) < 0;
}

/// Whether the open interval (d, d + epsilon) lies in the arc for all small
/// epsilon > 0. Endpoint closedness is irrelevant here.
inline bool arc_contains_just_after(const Arc& a, const Dir& d) {
  assert(arc_is_valid(a));
  if (a.start == a.end) return !a.closed_start;
  if (d == a.start) return true;
  if (d == a.end) return false;
  return rel_compare(a.start, d, a.end) < 0;
}

/// Mirror image: whether (d - epsilon, d) lies in the arc.
inline bool arc_contains_just_before(const Arc& a, const Dir& d) {
  assert(arc_is_valid(a));
  if (a.start == a.end) return !a.closed_start;
  if (d == a.end) return true;
  if (d == a.start) return false;
  return rel_compare(a.start, d, a.end) < 0;
}

/// Finite union of arcs and points of the circle in a canonical form:
/// pairwise disjoint, non-touching arcs sorted by start angle, with the full
/// circle kept as a flag. Equal sets always compare equal.
class ArcSet {
 public:
  ArcSet() = default;

  static ArcSet empty_set() { return ArcSet{}; }

  static ArcSet full_circle() {
    ArcSet s;
    s.full_ = true;
    return s;
  }

  static ArcSet from_arcs(const std::vector<Arc>& raw) {
    std::vector<Dir> ev;
    ev.reserve(raw.size() * 2);
    for (const Arc& a : raw) {
      assert(arc_is_valid(a));
      ev.push_back(a.start);
      ev.push_back(a.end);
    }
    return sweep(std::move(ev), [&raw](const Dir& d, bool after) {
      for (const Arc& a : raw)
        if (after ? arc_contains_just_after(a, d) : arc_contains(a, d))
          return true;
      return false;
    });
  }

  bool is_empty() const { return !full_ && arcs_.empty(); }
  bool is_full() const { return full_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  bool contains(const Dir& d) const {
    if (full_) return true;
    for (const Arc& a : arcs_)
      if (arc_contains(a, d)) return true;
    return false;
  }

  bool contains_just_before(const Dir& d) const {
    if (full_) return true;
    for (const auto& a : arcs_)
      if (arc_contains_just_before(a, d)) return true;
    return false;
  }

  bool contains_just_after(const Dir& d) const {
    if (full_) return true;
    for (const Arc& a : arcs_)
      if (arc_contains_just_after(a, d)) return true;
    return false;
  }

  friend bool operator==(const ArcSet&, const ArcSet&) = default;

  template <class Op>
  static ArcSet combine(const ArcSet& a, const ArcSet& b, Op op) {
    std::vector<Dir> ev;
    for (const Arc& x : a.arcs_) {
      ev.push_back(x.start);
      ev.push_back(x.end);
    }
    for (const Arc& x : b.arcs_) {
      ev.push_back(x.start);
      ev.push_back(x.end);
    }
    return sweep(std::move(ev), [&](const Dir& d, bool after) {
      bool va = after ? a.contains_just_after(d) : a.contains(d);
      bool vb = after ? b.contains_just_after(d) : b.contains(d);
      return op(va, vb);
    });
  }

 private:
  /// Split the circle at the event directions and evaluate the target set on
  /// every point region and every open interval between consecutive events,
  /// then stitch maximal true runs back into arcs. eval(d, false) is
  /// membership of d itself, eval(d, true) membership just after d.
  template <class Eval>
  static ArcSet sweep(std::vector<Dir> ev, Eval eval) {
    std::sort(ev.begin(), ev.end(),
              [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    if (ev.empty()) return eval(Dir{1, 0}, false) ? full_circle() : empty_set();

    const std::size_t n = ev.size();
    // Region 2k is the point ev[k], region 2k+1 the interval after it.
    std::vector<char> m(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
      m[2 * k] = eval(ev[k], false);
      m[2 * k + 1] = eval(ev[k], true);
    }

    std::size_t f = 2 * n;
    for (std::size_t r = 0; r < 2 * n; ++r)
      if (!m[r]) {
        f = r;
        break;
      }
    if (f == 2 * n) return full_circle();

    ArcSet out;
    std::size_t j = 1;
    while (j < 2 * n) {
      std::size_t r0 = (f + j) % (2 * n);
      if (!m[r0]) {
        ++j;
        continue;
      }
      std::size_t len = 1;
      while (j + len < 2 * n && m[(f + j + len) % (2 * n)]) ++len;
      std::size_t r1 = (f + j + len - 1) % (2 * n);
      Arc arc;
      arc.start = ev[r0 / 2];
      arc.closed_start = r0 % 2 == 0;
      arc.end = r1 % 2 == 0 ? ev[r1 / 2] : ev[(r1 / 2 + 1) % n];
      arc.closed_end = r1 % 2 == 0;
      assert(arc_is_valid(arc));
      out.arcs_.push_back(arc);
      j += len;
    }
    std::sort(out.arcs_.begin(), out.arcs_.end(), [](const Arc& a, const Arc& b) {
      return angle_compare(a.start, b.start) < 0;
    });
    return out;
  }

  bool full_ = false;
  std::vector<Arc> arcs_;
};

inline ArcSet set_union(const ArcSet& a, const ArcSet& b) {
  return ArcSet::combine(a, b, [](bool x, bool y) { return x || y; });
}

inline ArcSet set_intersection(const ArcSet& a, const ArcSet& b) {
  return ArcSet::combine(a, b, [](bool x, bool y) { return x && y; });
}

inline ArcSet set_difference(const ArcSet& a, const ArcSet& b) {
  return ArcSet::combine(a, b, [](bool x, bool y) { return x && !y; });
}

inline ArcSet set_complement(const ArcSet& a) {
  return ArcSet::combine(a, ArcSet::empty_set(),
                         [](bool x, bool) { return !x; });
}

/// Endpoint directions of every component, counterclockwise, deduplicated.
/// Isolated points contribute themselves; the full circle has none.
inline std::vector<Dir> arc_endpoints(const ArcSet& s) {
  std::vector<Dir> out;
  if (s.is_full()) return out;
  for (const Arc& a : s.arcs()) {
    out.push_back(a.start);
    if (!(a.end == a.start)) out.push_back(a.end);
  }
  std::sort(out.begin(), out.end(),
            [](const Dir& a, const Dir& b) { return angle_compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// An open semicircle disjoint from the given set, if one exists. The witness
/// is always a half-open-free arc (u, -u) of length exactly pi.
inline std::optional<Arc> exists_free_semicircle(const ArcSet& s) {
  ArcSet comp = set_complement(s);
  if (comp.is_full()) return Arc{Dir{1, 0}, Dir{-1, 0}, false, false};
  for (const Arc& c : comp.arcs()) {
    if (c.start == c.end) {
      if (c.closed_start) continue;  // lone point, no room
      return Arc{c.start, antipode(c.start), false, false};
    }
    if (gap_class(c.start, c.end) >= 0)
      return Arc{c.start, antipode(c.start), false, false};
  }
  return std::nullopt;
}

}  // namespace ubp
