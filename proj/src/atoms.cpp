#include "toti/atoms.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace toti {

std::vector<std::vector<std::size_t>> AtomDecomposition::cycles() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(image.size(), false);
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (seen[i])
      continue;
    std::vector<std::size_t> cycle;
    for (std::size_t j = i; !seen[j]; j = image[j]) {
      seen[j] = true;
      cycle.push_back(j);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

BigInt AtomDecomposition::order() const {
  BigInt l = 1;
  for (const auto& c : cycles()) {
    BigInt len = static_cast<unsigned long>(c.size());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), len.get_mpz_t());
  }
  return l;
}

namespace {

// Images of q under the right- and left-continuous versions of a total map.
void push_images(const std::vector<Piece>& pieces, const Rat& q, std::vector<Rat>& out) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), q,
                             [](const Rat& v, const Piece& p) { return v < p.lo; });
  if (it != pieces.begin()) {
    const auto& p = *std::prev(it);
    if (q < p.hi)
      out.push_back(q + p.offset);
    if (q == p.hi)
      out.push_back(q + p.offset);
    if (q == p.lo && std::prev(it) != pieces.begin())
      out.push_back(q + std::prev(it, 2)->offset);
  }
}

}  // namespace

AtomDecomposition atom_decomposition(const Transform& t, const std::vector<Rat>& extra_cuts) {
  require_total(t, "atom_decomposition");
  const Transform inv = invert(t);
  std::set<Rat> points;
  std::deque<Rat> work;
  auto add = [&](const Rat& q) {
    if (points.insert(q).second)
      work.push_back(q);
  };
  add(Rat(0));
  add(Rat(1));
  for (const auto& p : t.pieces())
    add(p.lo);
  for (const auto& q : extra_cuts)
    add(q);
  std::vector<Rat> next;
  while (!work.empty()) {
    Rat q = work.front();
    work.pop_front();
    next.clear();
    push_images(t.pieces(), q, next);
    push_images(inv.pieces(), q, next);
    for (const auto& r : next)
      add(r);
  }
  AtomDecomposition d;
  d.cuts.assign(points.begin(), points.end());
  d.image.resize(d.cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < d.cuts.size(); ++i) {
    Rat target = *t.apply(d.cuts[i]);
    auto it = std::lower_bound(d.cuts.begin(), d.cuts.end(), target);
    d.image[i] = static_cast<std::size_t>(it - d.cuts.begin());
  }
  return d;
}

}  // namespace toti
