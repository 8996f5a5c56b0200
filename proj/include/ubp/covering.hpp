#pragma once

// The covering algorithm: select a maximal disjoint collection of
// breakthrough-block translates inside the seed set, drop a reference
// droplet on each, then merge droplets that a single reference translate
// can touch simultaneously. Merging runs to a fixpoint and its trace keeps
// the exact squared diameters involved in every merge.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ubp/blocks.hpp"
#include "ubp/droplet.hpp"
#include "ubp/errors.hpp"
#include "ubp/family.hpp"
#include "ubp/stable_set.hpp"

namespace ubp {

struct PlacedBlock {
  std::size_t shape_index;
  Site anchor;
  std::vector<Site> sites;
};

struct MergeEvent {
  i128 sq_first;
  i128 sq_second;
  i128 sq_max_before;
  i128 sq_merged;
};

struct CoverResult {
  std::vector<Dir> dirs;
  Droplet dhat;
  std::vector<BreakthroughBlock> shapes;
  std::vector<PlacedBlock> selected;
  std::vector<Droplet> droplets;
  std::vector<MergeEvent> merge_trace;
};

namespace detail {

inline bool shape_order(const BreakthroughBlock& a, const BreakthroughBlock& b) {
  if (a.sites.size() != b.sites.size())
    return a.sites.size() < b.sites.size();
  return a.sites < b.sites;
}

inline CoverResult cover_impl(std::vector<Site> seed, const UpdateFamily& fam,
                              std::optional<std::uint64_t> merge_shuffle,
                              std::optional<std::uint64_t> select_shuffle) {
  const ArcSet stab = stable_set(fam);
  if (exists_free_semicircle(stab))
    throw PreconditionError("cover requires a non-supercritical family");

  CoverResult out;
  out.dirs = choose_spanning_directions(stab);
  out.dhat = dhat_droplet(fam, out.dirs);
  out.shapes = enumerate_breakthrough_blocks(fam);

  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());

  std::vector<std::size_t> order(out.shapes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shape_order(out.shapes[a], out.shapes[b]);
  });

  std::vector<Site> anchors = seed;
  if (select_shuffle) {
    std::mt19937_64 rng(*select_shuffle);
    std::shuffle(anchors.begin(), anchors.end(), rng);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::set<Site> consumed;
  const auto in_seed = [&](const Site& s) {
    return std::binary_search(seed.begin(), seed.end(), s);
  };
  const auto fits = [&](const BreakthroughBlock& blk, const Site& t) {
    for (const Site& s : blk.sites) {
      const Site p = t + s;
      if (!in_seed(p) || consumed.count(p)) return false;
    }
    return true;
  };

  // Same-size shapes compete per anchor; sizes go up only after the whole
  // seed offers no placement of the smaller ones.
  std::size_t group_begin = 0;
  while (group_begin < order.size()) {
    std::size_t group_end = group_begin;
    const std::size_t sz = out.shapes[order[group_begin]].sites.size();
    while (group_end < order.size() &&
           out.shapes[order[group_end]].sites.size() == sz)
      ++group_end;
    for (const Site& t : anchors) {
      for (std::size_t g = group_begin; g < group_end; ++g) {
        const std::size_t si = order[g];
        if (!fits(out.shapes[si], t)) continue;
        PlacedBlock pb;
        pb.shape_index = si;
        pb.anchor = t;
        for (const Site& s : out.shapes[si].sites) {
          pb.sites.push_back(t + s);
          consumed.insert(t + s);
        }
        out.selected.push_back(std::move(pb));
        break;
      }
    }
    group_begin = group_end;
  }

  for (const BreakthroughBlock& blk : out.shapes)
    for (const Site& t : seed)
      if (fits(blk, t))
        throw std::logic_error("cover: greedy block selection not maximal");

  for (const PlacedBlock& pb : out.selected)
    out.droplets.push_back(
        out.dhat.translated(pb.anchor - out.shapes[pb.shape_index].rule_anchor));

  const i128 sq_dhat = sq_diam(out.dhat);
  std::vector<i128> sq(out.droplets.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = sq_diam(out.droplets[i]);

  std::mt19937_64 merge_rng(merge_shuffle.value_or(0));
  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < out.droplets.size(); ++i)
      for (std::size_t j = i + 1; j < out.droplets.size(); ++j)
        pairs.emplace_back(i, j);
    if (merge_shuffle) std::shuffle(pairs.begin(), pairs.end(), merge_rng);
    for (const auto& [i, j] : pairs) {
      if (!merge_test(out.droplets[i], out.droplets[j], out.dhat)) continue;
      MergeEvent ev;
      ev.sq_first = sq[i];
      ev.sq_second = sq[j];
      ev.sq_max_before = *std::max_element(sq.begin(), sq.end());
      std::vector<Site> u = droplet_sites(out.droplets[i]);
      std::vector<Site> v = droplet_sites(out.droplets[j]);
      u.insert(u.end(), v.begin(), v.end());
      Droplet m = minimal_droplet(u, out.dirs);
      ev.sq_merged = sq_diam(m);
      const i128 slack = ev.sq_merged - 9 * ev.sq_max_before - sq_dhat;
      if (slack > 0 && slack * slack > 36 * ev.sq_max_before * sq_dhat)
        throw std::logic_error("cover: merge exceeded the diameter scale bound");
      out.merge_trace.push_back(ev);
      out.droplets[i] = std::move(m);
      sq[i] = ev.sq_merged;
      out.droplets.erase(out.droplets.begin() + static_cast<std::ptrdiff_t>(j));
      sq.erase(sq.begin() + static_cast<std::ptrdiff_t>(j));
      merged = true;
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Covers a finite seed set. rng_seed 0 keeps the canonical merge scan
/// order; any other value shuffles it (the output is the same either way,
/// which the test suite checks).
inline CoverResult cover(const std::vector<Site>& seed, const UpdateFamily& fam,
                         std::uint64_t rng_seed = 0) {
  return detail::cover_impl(
      seed, fam,
      rng_seed == 0 ? std::nullopt : std::optional<std::uint64_t>(rng_seed),
      std::nullopt);
}

/// Greedy approximation of the covered predicate: the deterministic cover of
/// D's sites restricted to the carrier must return exactly D (as a site set).
inline bool is_covered(const Droplet& d, const std::vector<Site>& carrier,
                       const UpdateFamily& fam, std::uint64_t rng_seed = 0) {
  std::vector<Site> d_sites = droplet_sites(d);
  std::sort(d_sites.begin(), d_sites.end());
  std::vector<Site> a = carrier;
  std::sort(a.begin(), a.end());
  std::vector<Site> k;
  std::set_intersection(d_sites.begin(), d_sites.end(), a.begin(), a.end(),
                        std::back_inserter(k));
  const CoverResult res = cover(k, fam, rng_seed);
  if (res.droplets.size() != 1) return false;
  std::vector<Site> got = droplet_sites(res.droplets[0]);
  std::sort(got.begin(), got.end());
  return got == d_sites;
}

}  // namespace ubp
