#include "toti/permgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace toti {

Perm::Perm(std::size_t degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), 0u);
}

Perm::Perm(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (auto x : images_) {
    if (x >= images_.size() || hit[x])
      throw std::invalid_argument("Perm: images are not a bijection");
    hit[x] = true;
  }
}

Perm Perm::transposition(std::size_t degree, std::uint32_t a, std::uint32_t b) {
  Perm p(degree);
  std::swap(p.images_[a], p.images_[b]);
  return p;
}

Perm Perm::cycle(std::size_t degree, std::span<const std::uint32_t> points) {
  Perm p(degree);
  for (std::size_t i = 0; i < points.size(); ++i)
    p.images_[points[i]] = points[(i + 1) % points.size()];
  return Perm(p.images_);
}

bool Perm::is_identity() const {
  for (std::uint32_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i)
      return false;
  return true;
}

Perm Perm::inverse() const {
  Perm q(images_.size());
  for (std::uint32_t i = 0; i < images_.size(); ++i)
    q.images_[images_[i]] = i;
  return q;
}

Perm Perm::pow(long k) const {
  Perm base = k < 0 ? inverse() : *this;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  Perm acc(images_.size());
  while (e > 0) {
    if (e & 1UL)
      acc = base * acc;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

std::vector<std::vector<std::uint32_t>> Perm::cycles() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t i = 0; i < images_.size(); ++i) {
    if (seen[i])
      continue;
    std::vector<std::uint32_t> c;
    for (std::uint32_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::uint32_t Perm::first_moved() const {
  for (std::uint32_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i)
      return i;
  return static_cast<std::uint32_t>(images_.size());
}

Perm operator*(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree())
    throw std::invalid_argument("Perm: degree mismatch");
  Perm c(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i)
    c.images_[i] = a.images_[b.images_[i]];
  return c;
}

namespace {

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : p.images()) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

}  // namespace

std::optional<std::vector<Perm>> closure(std::size_t degree, std::span<const Perm> gens,
                                         std::size_t cap) {
  std::unordered_set<Perm, PermHash> seen;
  std::deque<Perm> queue;
  Perm id(degree);
  seen.insert(id);
  queue.push_back(id);
  while (!queue.empty()) {
    Perm g = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : gens) {
      Perm h = s * g;
      if (seen.insert(h).second) {
        if (seen.size() > cap)
          return std::nullopt;
        queue.push_back(std::move(h));
      }
    }
  }
  std::vector<Perm> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

StabilizerChain::StabilizerChain(std::size_t degree, std::span<const Perm> gens)
    : degree_(degree) {
  for (const auto& g : gens) {
    if (g.degree() != degree)
      throw std::invalid_argument("StabilizerChain: generator degree mismatch");
    if (g.is_identity())
      continue;
    // Make sure some base point is moved by g, then file g at level 0.
    bool moves_base = std::any_of(levels_.begin(), levels_.end(),
                                  [&](const Level& l) { return g(l.point) != l.point; });
    if (!moves_base)
      levels_.push_back(Level{g.first_moved(), {}, {}, {}});
    if (levels_.empty())
      continue;
    levels_[0].gens.push_back(g);
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    // Level i holds every strong generator fixing the first i base points.
    if (i > 0)
      for (const auto& g : levels_[0].gens) {
        bool fixes = true;
        for (std::size_t j = 0; j < i && fixes; ++j)
          fixes = g(levels_[j].point) == levels_[j].point;
        if (fixes)
          levels_[i].gens.push_back(g);
      }
    rebuild_orbit(i);
  }
  run();
}

void StabilizerChain::rebuild_orbit(std::size_t i) {
  Level& l = levels_[i];
  l.orbit.clear();
  l.transversal.assign(degree_, std::nullopt);
  l.transversal[l.point] = Perm(degree_);
  l.orbit.push_back(l.point);
  for (std::size_t k = 0; k < l.orbit.size(); ++k) {
    std::uint32_t y = l.orbit[k];
    for (const auto& s : l.gens) {
      std::uint32_t z = s(y);
      if (!l.transversal[z]) {
        l.transversal[z] = s * *l.transversal[y];
        l.orbit.push_back(z);
      }
    }
  }
}

StabilizerChain::SiftResult StabilizerChain::sift(Perm g, std::size_t from) const {
  for (std::size_t j = from; j < levels_.size(); ++j) {
    const Level& l = levels_[j];
    std::uint32_t x = g(l.point);
    if (!l.transversal[x])
      return {std::move(g), j};
    g = l.transversal[x]->inverse() * g;
  }
  return {std::move(g), levels_.size()};
}

void StabilizerChain::run() {
  if (levels_.empty())
    return;
  std::size_t i = levels_.size();
  while (i-- > 0) {
    bool restarted = false;
    for (std::size_t k = 0; k < levels_[i].orbit.size() && !restarted; ++k) {
      std::uint32_t x = levels_[i].orbit[k];
      for (std::size_t s = 0; s < levels_[i].gens.size(); ++s) {
        const Perm& gen = levels_[i].gens[s];
        const Perm& ux = *levels_[i].transversal[x];
        const Perm& usx = *levels_[i].transversal[gen(x)];
        Perm schreier = usx.inverse() * gen * ux;
        if (schreier.is_identity())
          continue;
        auto [residue, drop] = sift(std::move(schreier), i + 1);
        if (drop == levels_.size() && residue.is_identity())
          continue;
        if (drop == levels_.size())
          levels_.push_back(Level{residue.first_moved(), {}, {}, {}});
        for (std::size_t j = i + 1; j <= drop; ++j) {
          levels_[j].gens.push_back(residue);
          rebuild_orbit(j);
        }
        i = drop + 1;  // the loop decrement resumes at the drop level
        restarted = true;
        break;
      }
    }
  }
}

bool StabilizerChain::contains(const Perm& p) const {
  if (p.degree() != degree_)
    return false;
  auto [residue, level] = sift(p, 0);
  return level == levels_.size() && residue.is_identity();
}

BigInt StabilizerChain::order() const {
  BigInt n = 1;
  for (const auto& l : levels_)
    n *= static_cast<unsigned long>(l.orbit.size());
  return n;
}

std::vector<std::uint32_t> StabilizerChain::base() const {
  std::vector<std::uint32_t> b;
  for (const auto& l : levels_)
    b.push_back(l.point);
  return b;
}

bool is_member(const StabilizerChain& g, const Perm& p) { return g.contains(p); }

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (a > b)
      std::swap(a, b);
    parent[b] = a;
    return true;
  }
  std::vector<std::uint32_t> parent;
};

}  // namespace

bool transposition_classes_cover(std::size_t degree, std::span<const Perm> gens,
                                 std::span<const Perm> targets) {
  UnionFind uf(degree);
  // g^L is a transposition exactly when g has one 2-cycle and every other
  // cycle has odd length (L = lcm of the odd lengths).
  for (const auto& g : gens) {
    const std::vector<std::uint32_t>* two_cycle = nullptr;
    bool ok = true;
    auto cycles = g.cycles();
    for (const auto& c : cycles) {
      if (c.size() == 2) {
        if (two_cycle) {
          ok = false;
          break;
        }
        two_cycle = &c;
      } else if (c.size() % 2 == 0) {
        ok = false;
        break;
      }
    }
    if (ok && two_cycle)
      uf.unite((*two_cycle)[0], (*two_cycle)[1]);
  }
  // Close under conjugation: x ~ y implies g(x) ~ g(y).
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : gens)
      for (std::uint32_t x = 0; x < degree; ++x) {
        std::uint32_t root = uf.find(x);
        if (root != x && uf.unite(g(x), g(root)))
          changed = true;
      }
  }
  for (const auto& t : targets)
    for (std::uint32_t x = 0; x < degree; ++x)
      if (uf.find(t(x)) != uf.find(x))
        return false;
  return true;
}

}  // namespace toti
