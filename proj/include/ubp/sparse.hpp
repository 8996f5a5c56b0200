#pragma once

// Frontier-driven closure of a finite seed on the unbounded lattice. Every
// newly infected site re-queues its Chebyshev neighborhood out to the family
// range, so any rule translate that could have become satisfied is retried.
// A site budget turns runaway growth into an explicit certificate.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <deque>
#include <unordered_set>
#include <vector>

#include "ubp/errors.hpp"
#include "ubp/family.hpp"

namespace ubp {

struct SparseClosure {
  std::vector<Site> sites;  // sorted; partial when exceeded_cap
  bool exceeded_cap = false;
};

namespace detail {

inline std::uint64_t site_key(const Site& s) {
  assert(s.x >= INT32_MIN && s.x <= INT32_MAX);
  assert(s.y >= INT32_MIN && s.y <= INT32_MAX);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.y));
}

}  // namespace detail

inline SparseClosure sparse_closure(const std::vector<Site>& seed,
                                    const UpdateFamily& fam,
                                    std::size_t cap) {
  std::unordered_set<std::uint64_t> infected;
  infected.reserve(std::min<std::size_t>(cap + 1, 1 << 20));
  std::deque<Site> queue;
  std::vector<Site> sites;

  auto infect = [&](const Site& s) {
    if (!infected.insert(detail::site_key(s)).second) return false;
    sites.push_back(s);
    return true;
  };
  auto is_infected = [&](const Site& s) {
    return infected.count(detail::site_key(s)) != 0;
  };

  for (const Site& s : seed) infect(s);
  if (sites.size() > cap)
    throw PreconditionError("sparse_closure: cap smaller than the seed");

  const i64 r = fam.range;
  auto push_neighborhood = [&](const Site& s) {
    for (i64 dy = -r; dy <= r; ++dy)
      for (i64 dx = -r; dx <= r; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Site n{s.x + dx, s.y + dy};
        if (!is_infected(n)) queue.push_back(n);
      }
  };
  for (const Site& s : sites) push_neighborhood(s);

  SparseClosure out;
  while (!queue.empty()) {
    const Site x = queue.front();
    queue.pop_front();
    if (is_infected(x)) continue;
    bool fires = false;
    for (const auto& rule : fam.rules) {
      bool all = true;
      for (const Site& o : rule) {
        if (!is_infected(x + o)) {
          all = false;
          break;
        }
      }
      if (all) {
        fires = true;
        break;
      }
    }
    if (!fires) continue;
    infect(x);
    if (sites.size() > cap) {
      out.exceeded_cap = true;
      break;
    }
    push_neighborhood(x);
  }

  std::sort(sites.begin(), sites.end());
  out.sites = std::move(sites);
  return out;
}

}  // namespace ubp
