#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace ubp {

/// Largest admissible |coordinate| of a rule offset. Keeps every derived
/// quantity (perpendiculars, endpoint sums, cross products of sums) far from
/// the limits of the 128-bit predicates.
inline constexpr i64 kMaxOffset = i64{1} << 30;

/// A finite family of update rules. Each rule is a finite set of nonzero
/// offsets; a site becomes infected when every offset of some rule lands on
/// an infected site. Construct via validated(); rules and sites are held in
/// a canonical order (sites lexicographic, rules by size then content).
struct UpdateFamily {
  std::vector<std::vector<Site>> rules;
  i64 range = 1;  // max Chebyshev norm over all offsets

  /// Validates raw rules (in input order, for error reporting), then
  /// canonicalizes. Throws ParseError.
  static UpdateFamily validated(std::vector<std::vector<Site>> raw) {
    if (raw.empty()) throw ParseError(ParseCode::EmptyFamily, "no rules");
    for (std::size_t i = 0; i < raw.size(); ++i) {
      auto& rule = raw[i];
      int idx = static_cast<int>(i);
      if (rule.empty()) throw ParseError(ParseCode::EmptyRule, "", idx);
      for (const Site& s : rule) {
        if (s.x == 0 && s.y == 0)
          throw ParseError(ParseCode::OriginInRule, "", idx);
        if (s.x < -kMaxOffset || s.x > kMaxOffset || s.y < -kMaxOffset ||
            s.y > kMaxOffset)
          throw ParseError(ParseCode::OffsetOverflow, "", idx);
      }
      std::sort(rule.begin(), rule.end());
      if (std::adjacent_find(rule.begin(), rule.end()) != rule.end())
        throw ParseError(ParseCode::DuplicateOffset, "", idx);
    }
    std::sort(raw.begin(), raw.end(),
              [](const std::vector<Site>& a, const std::vector<Site>& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
    UpdateFamily f;
    f.rules = std::move(raw);
    f.range = 0;
    for (const auto& rule : f.rules)
      for (const Site& s : rule) {
        i64 c = std::max(s.x < 0 ? -s.x : s.x, s.y < 0 ? -s.y : s.y);
        f.range = std::max(f.range, c);
      }
    return f;
  }

  std::vector<Site> all_offsets() const {
    std::vector<Site> out;
    for (const auto& rule : rules) out.insert(out.end(), rule.begin(), rule.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

namespace detail {

inline std::vector<std::vector<Site>> subsets_of_size(
    const std::vector<Site>& pool, std::size_t k) {
  std::vector<std::vector<Site>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<Site> rule;
    for (std::size_t i : idx) rule.push_back(pool[i]);
    out.push_back(std::move(rule));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

/// The bundled canonical families. Returns false if the name is unknown.
inline bool named_family(const std::string& name, UpdateFamily& out) {
  const std::vector<Site> nn = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (name == "twonbr") {
    out = UpdateFamily::validated(detail::subsets_of_size(nn, 2));
  } else if (name == "threenbr") {
    out = UpdateFamily::validated(detail::subsets_of_size(nn, 3));
  } else if (name == "onenbr") {
    out = UpdateFamily::validated({{{1, 0}}, {{-1, 0}}, {{0, 1}}, {{0, -1}}});
  } else if (name == "duarte") {
    const std::vector<Site> d = {{-1, 0}, {0, 1}, {0, -1}};
    out = UpdateFamily::validated(detail::subsets_of_size(d, 2));
  } else if (name == "east") {
    out = UpdateFamily::validated({{{1, 0}}});
  } else {
    return false;
  }
  return true;
}

}  // namespace ubp
