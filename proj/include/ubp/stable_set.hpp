#pragma once

// Stability analysis for update families: which directions u have a stable
// half-plane H_u, and the coarse classification that follows from the
// geometry of that set of directions.

#include <algorithm>
#include <array>
#include <cassert>
#include <optional>
#include <vector>

#include "ubp/arcset.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"

namespace ubp {

/// Directions u for which the single offset x helps destabilize H_u,
/// i.e. {u : <x,u> < 0}. Always an open semicircle.
inline Arc destabilized_arc_of_site(const Site& x) {
  if (x.x == 0 && x.y == 0)
    throw PreconditionError("destabilized_arc_of_site: zero offset");
  Dir p = dir_from(x.x, x.y);
  return Arc{perp_ccw(p), perp_cw(p), false, false};
}

/// Directions u destabilized by the whole rule X: every offset must lie
/// strictly inside H_u. Intersection of open semicircles, hence empty or a
/// single open arc.
inline std::optional<Arc> destabilized_arc_of_rule(const std::vector<Site>& rule) {
  ArcSet acc = ArcSet::full_circle();
  for (const Site& x : rule) {
    acc = set_intersection(acc, ArcSet::from_arcs({destabilized_arc_of_site(x)}));
    if (acc.is_empty()) return std::nullopt;
  }
  assert(!acc.is_full());
  assert(acc.arcs().size() == 1);
  return acc.arcs().front();
}

inline ArcSet destabilized_set(const UpdateFamily& fam) {
  ArcSet acc = ArcSet::empty_set();
  for (const auto& rule : fam.rules) {
    if (auto arc = destabilized_arc_of_rule(rule))
      acc = set_union(acc, ArcSet::from_arcs({*arc}));
  }
  return acc;
}

/// The stable set: directions whose half-plane no rule can break out of.
/// Complement of a finite union of open arcs, so always closed.
inline ArcSet stable_set(const UpdateFamily& fam) {
  return set_complement(destabilized_set(fam));
}

/// Topological interior of a canonical arc set. Isolated points vanish,
/// endpoints of proper arcs open up.
inline ArcSet interior(const ArcSet& s) {
  if (s.is_full()) return s;
  std::vector<Arc> opened;
  for (const Arc& a : s.arcs()) {
    if (a.start == a.end) {
      if (a.closed_start) continue;  // point
      opened.push_back(a);           // circle minus a point, already open
      continue;
    }
    opened.push_back(Arc{a.start, a.end, false, false});
  }
  return ArcSet::from_arcs(opened);
}

/// Strongly stable directions: interior points of the stable set.
inline ArcSet strongly_stable_set(const ArcSet& stab) { return interior(stab); }

inline ArcSet strongly_stable_set(const UpdateFamily& fam) {
  return interior(stable_set(fam));
}

enum class Kind { Supercritical, Critical, Subcritical };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Supercritical: return "supercritical";
    case Kind::Critical: return "critical";
    case Kind::Subcritical: break;
  }
  return "subcritical";
}

struct Classification {
  Kind kind = Kind::Subcritical;
  // Open semicircle avoiding the stable set (supercritical) or the strongly
  // stable set (critical). Absent for subcritical families.
  std::optional<Arc> witness;
};

inline Classification classify(const UpdateFamily& fam) {
  ArcSet stab = stable_set(fam);
  if (auto w = exists_free_semicircle(stab)) return {Kind::Supercritical, *w};
  if (auto w = exists_free_semicircle(strongly_stable_set(stab)))
    return {Kind::Critical, *w};
  return {Kind::Subcritical, std::nullopt};
}

/// Whether u is an endpoint of the stable set on either side. Left is the
/// counterclockwise side (directions just after u), right the clockwise one.
struct IsolationStatus {
  bool left = false;
  bool right = false;
};

inline IsolationStatus is_isolated(const Dir& u, const ArcSet& stab) {
  if (!stab.contains(u))
    throw PreconditionError("is_isolated: direction is not stable");
  return IsolationStatus{!stab.contains_just_after(u),
                         !stab.contains_just_before(u)};
}

inline IsolationStatus is_isolated(const Dir& u, const UpdateFamily& fam) {
  return is_isolated(u, stable_set(fam));
}

namespace detail {

inline const std::array<Dir, 8>& compass_dirs() {
  static const std::array<Dir, 8> dirs = {
      Dir{1, 0}, Dir{1, 1},  Dir{0, 1},  Dir{-1, 1},
      Dir{-1, 0}, Dir{-1, -1}, Dir{0, -1}, Dir{1, -1}};
  return dirs;
}

// Rule whose destabilized arc is exactly the open arc (a, b), requiring
// gap(a, b) <= pi. At exactly pi the two boundary sites coincide, so a
// collinear second offset keeps the rule two-site without changing its arc.
inline std::vector<Site> rule_for_short_arc(const Dir& a, const Dir& b) {
  Dir lo = perp_cw(a);   // on the boundary line of H_a, right of origin
  Dir hi = perp_ccw(b);  // on the boundary line of H_b, left of origin
  Site s1{lo.x, lo.y};
  Site s2{hi.x, hi.y};
  if (s1 == s2) return {s1, Site{2 * s1.x, 2 * s1.y}};
  return {s1, s2};
}

}  // namespace detail

/// Inverse problem: build a family whose stable set equals `target`.
/// The target must be a finite union of closed arcs and points. Complement
/// components shorter than pi become one rule each; longer ones are
/// subdivided along compass directions into overlapping sub-arcs, two chain
/// steps at a time.
inline UpdateFamily family_from_stable_set(const ArcSet& target) {
  if (target.is_full()) {
    // No rule fits in an open half-plane when every rule holds three of the
    // four axis neighbours, so every direction is stable.
    const std::vector<Site> nn = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<std::vector<Site>> rules;
    for (std::size_t skip = 0; skip < nn.size(); ++skip) {
      std::vector<Site> rule;
      for (std::size_t i = 0; i < nn.size(); ++i)
        if (i != skip) rule.push_back(nn[i]);
      rules.push_back(std::move(rule));
    }
    return UpdateFamily::validated(std::move(rules));
  }
  for (const Arc& a : target.arcs()) {
    bool is_point = a.start == a.end && a.closed_start && a.closed_end;
    if (!is_point && !(a.closed_start && a.closed_end))
      throw PreconditionError(
          "family_from_stable_set: target must be a union of closed arcs");
  }

  std::vector<std::vector<Site>> rules;

  if (target.is_empty()) {
    // Four overlapping open semicircles covering the circle.
    for (const Dir& v : {Dir{1, 0}, Dir{0, 1}, Dir{-1, 0}, Dir{0, -1}}) {
      Site s{v.x, v.y};
      rules.push_back({s, Site{2 * s.x, 2 * s.y}});
    }
    return UpdateFamily::validated(std::move(rules));
  }

  ArcSet comp = set_complement(target);
  for (const Arc& c : comp.arcs()) {
    assert(!c.closed_start && !c.closed_end);
    if (c.start != c.end && gap_class(c.start, c.end) <= 0) {
      rules.push_back(detail::rule_for_short_arc(c.start, c.end));
      continue;
    }
    // Long component: chain a = P0 < P1 < ... < Pm = b through the compass
    // directions strictly inside, each step at most a quarter turn. The
    // skip-one arcs (P_i, P_{i+2}) overlap pairwise and union to (a, b).
    std::vector<Dir> chain;
    chain.push_back(c.start);
    std::vector<Dir> inside;
    for (const Dir& d : detail::compass_dirs())
      if (arc_contains(c, d)) inside.push_back(d);
    std::sort(inside.begin(), inside.end(), [&](const Dir& p, const Dir& q) {
      return rel_compare(c.start, p, q) < 0;
    });
    chain.insert(chain.end(), inside.begin(), inside.end());
    chain.push_back(c.end);
    assert(chain.size() >= 4);
    for (std::size_t i = 0; i + 2 < chain.size(); ++i)
      rules.push_back(detail::rule_for_short_arc(chain[i], chain[i + 2]));
  }
  return UpdateFamily::validated(std::move(rules));
}

}  // namespace ubp
