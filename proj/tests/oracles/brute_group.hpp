#pragma once
// Breadth-first closure of a permutation group, with a parity count.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using RawPerm = std::vector<std::uint32_t>;

inline RawPerm compose(const RawPerm& a, const RawPerm& b) {
  RawPerm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = a[b[i]];
  return c;
}

inline bool is_odd(const RawPerm& p) {
  std::vector<bool> seen(p.size(), false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i])
      continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 1;
}

struct ClosureSummary {
  std::size_t order = 0;
  std::size_t odd = 0;
};

/// Group generated by gens; stops once more than cap elements are found
/// (order is then cap + 1).
inline std::set<RawPerm> brute_closure(std::size_t degree, const std::vector<RawPerm>& gens,
                                       std::size_t cap = 500000) {
  RawPerm id(degree);
  for (std::size_t i = 0; i < degree; ++i)
    id[i] = static_cast<std::uint32_t>(i);
  std::set<RawPerm> seen{id};
  std::vector<RawPerm> frontier{id};
  while (!frontier.empty() && seen.size() <= cap) {
    std::vector<RawPerm> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        RawPerm h = compose(s, g);
        if (seen.insert(h).second)
          next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  return seen;
}

inline ClosureSummary summarize(const std::set<RawPerm>& group) {
  ClosureSummary s;
  s.order = group.size();
  for (const auto& g : group)
    s.odd += is_odd(g);
  return s;
}

}  // namespace oracle
