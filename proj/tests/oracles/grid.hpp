#pragma once
// Maps on the grid of Q equal atoms of [0,1), stored as atom images. Any
// piecewise translation whose breakpoints and offsets are multiples of 1/Q
// is a permutation of these atoms, so agreement sets can be counted atom by
// atom.

#include "toti/piecewise.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

struct GridMap {
  long q = 1;
  std::vector<long> image;  // atom i -> atom image[i]

  static GridMap identity(long q) {
    GridMap g{q, std::vector<long>(static_cast<std::size_t>(q))};
    std::iota(g.image.begin(), g.image.end(), 0L);
    return g;
  }
};

inline GridMap compose(const GridMap& s, const GridMap& t) {
  GridMap out{t.q, std::vector<long>(t.image.size())};
  for (std::size_t i = 0; i < t.image.size(); ++i)
    out.image[i] = s.image[static_cast<std::size_t>(t.image[i])];
  return out;
}

inline GridMap inverse(const GridMap& s) {
  GridMap out{s.q, std::vector<long>(s.image.size())};
  for (std::size_t i = 0; i < s.image.size(); ++i)
    out.image[static_cast<std::size_t>(s.image[i])] = static_cast<long>(i);
  return out;
}

/// (#atoms where they differ, q)
inline std::pair<long, long> disagreement(const GridMap& s, const GridMap& t) {
  long n = 0;
  for (std::size_t i = 0; i < s.image.size(); ++i)
    n += s.image[i] != t.image[i];
  return {n, s.q};
}

inline toti::Transform to_transform(const GridMap& g) {
  // One piece per maximal run of atoms sharing a displacement.
  std::vector<toti::Piece> pieces;
  long start = 0;
  for (long i = 1; i <= g.q; ++i) {
    const auto at = [&](long k) { return g.image[static_cast<std::size_t>(k)] - k; };
    if (i < g.q && at(i) == at(start))
      continue;
    pieces.push_back({toti::make_rat(start, g.q), toti::make_rat(i, g.q), toti::make_rat(at(start), g.q)});
    start = i;
  }
  return toti::PiecewiseTranslation::from_pieces(std::move(pieces));
}

/// Interval exchange of at most `cuts + 1` grid-aligned intervals, permuted
/// uniformly; the identity on a random tail so supports vary.
template <class Rng>
GridMap random_iet(Rng& rng, long q, int cuts) {
  std::uniform_int_distribution<long> pos(1, q - 1);
  std::vector<long> c{0, q};
  for (int i = 0; i < cuts; ++i)
    c.push_back(pos(rng));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  const std::size_t n = c.size() - 1;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Keep a random number of trailing intervals fixed.
  std::size_t moving = std::uniform_int_distribution<std::size_t>(1, n)(rng);
  std::shuffle(order.begin(), order.begin() + static_cast<long>(moving), rng);
  GridMap g{q, std::vector<long>(static_cast<std::size_t>(q))};
  long dest = 0;
  std::vector<long> start(n);
  for (std::size_t k = 0; k < n; ++k) {
    start[order[k]] = dest;
    dest += c[order[k] + 1] - c[order[k]];
  }
  for (std::size_t k = 0; k < n; ++k)
    for (long a = c[k]; a < c[k + 1]; ++a)
      g.image[static_cast<std::size_t>(a)] = start[k] + (a - c[k]);
  return g;
}

/// Least k >= 1 with g^k = id (lcm of the atom cycle lengths).
inline long grid_period(const GridMap& g) {
  std::vector<bool> seen(g.image.size(), false);
  long l = 1;
  for (std::size_t i = 0; i < g.image.size(); ++i) {
    if (seen[i])
      continue;
    long len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(g.image[j])) {
      seen[j] = true;
      ++len;
    }
    l = std::lcm(l, len);
  }
  return l;
}

}  // namespace oracle
