#include "toti/schreier.hpp"

#include "toti/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace toti {

PartialAction PartialAction::empty(int rank, std::size_t size) {
  if (rank < 1)
    throw std::invalid_argument("PartialAction: rank must be positive");
  PartialAction g;
  g.size = size;
  g.maps.assign(static_cast<std::size_t>(rank), std::vector<std::uint32_t>(size, kHole));
  return g;
}

std::uint32_t PartialAction::preimage(int gen, std::uint32_t v) const {
  const auto& m = maps[gen];
  for (std::uint32_t u = 0; u < size; ++u)
    if (m[u] == v)
      return u;
  return kHole;
}

std::uint32_t PartialAction::along(int slot, std::uint32_t v) const {
  return slot % 2 == 0 ? image(slot / 2, v) : preimage(slot / 2, v);
}

void PartialAction::add_edge(int gen, std::uint32_t v, std::uint32_t w) {
  if (v >= size || w >= size)
    throw std::invalid_argument("add_edge: vertex out of range");
  if (maps[gen][v] != kHole || preimage(gen, w) != kHole)
    throw std::invalid_argument("add_edge: a" + std::to_string(gen + 1) + "-edge " +
                                std::to_string(v) + "->" + std::to_string(w) +
                                " conflicts with an existing edge");
  maps[gen][v] = w;
}

std::uint32_t PartialAction::add_vertex() {
  for (auto& m : maps)
    m.push_back(kHole);
  return static_cast<std::uint32_t>(size++);
}

bool PartialAction::connected() const {
  if (size == 0)
    return true;
  return bfs_order(*this, 0).size() == size;
}

bool PartialAction::total() const {
  for (const auto& m : maps)
    for (auto w : m)
      if (w == kHole)
        return false;
  return true;
}

std::size_t PartialAction::edge_count() const {
  std::size_t n = 0;
  for (const auto& m : maps)
    n += static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](auto w) { return w != kHole; }));
  return n;
}

void PartialAction::validate() const {
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].size() != size)
      throw std::invalid_argument("PartialAction: map a" + std::to_string(i + 1) +
                                  " has the wrong length");
    std::vector<bool> hit(size, false);
    for (auto w : maps[i]) {
      if (w == kHole)
        continue;
      if (w >= size || hit[w])
        throw std::invalid_argument("PartialAction: map a" + std::to_string(i + 1) +
                                    " is not an injective partial map");
      hit[w] = true;
    }
  }
}

namespace {

// Inverse maps, so that every slot lookup is constant time.
std::vector<std::vector<std::uint32_t>> inverses(const PartialAction& g) {
  std::vector<std::vector<std::uint32_t>> inv(g.maps.size(), std::vector<std::uint32_t>(g.size, kHole));
  for (std::size_t i = 0; i < g.maps.size(); ++i)
    for (std::uint32_t v = 0; v < g.size; ++v)
      if (g.maps[i][v] != kHole)
        inv[i][g.maps[i][v]] = v;
  return inv;
}

struct Slots {
  const PartialAction& g;
  std::vector<std::vector<std::uint32_t>> inv;
  explicit Slots(const PartialAction& a) : g(a), inv(inverses(a)) {}
  int count() const { return 2 * g.rank(); }
  std::uint32_t at(int slot, std::uint32_t v) const {
    return slot % 2 == 0 ? g.maps[slot / 2][v] : inv[slot / 2][v];
  }
};

// Rooted code, stopping as soon as it exceeds bound (if given). Returns
// false if it did.
bool code_from(const Slots& s, std::uint32_t root, CanonicalCode& out,
               std::vector<std::uint32_t>* order, const CanonicalCode* bound) {
  const std::size_t n = s.g.size;
  std::vector<std::uint32_t> number(n, kHole);
  std::vector<std::uint32_t> seq{root};
  number[root] = 0;
  out.clear();
  bool equal_so_far = bound != nullptr;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    for (int slot = 0; slot < s.count(); ++slot) {
      std::uint32_t w = s.at(slot, seq[k]);
      std::uint32_t token = 0;
      if (w != kHole) {
        if (number[w] == kHole) {
          number[w] = static_cast<std::uint32_t>(seq.size());
          seq.push_back(w);
        }
        token = number[w] + 1;
      }
      if (equal_so_far) {
        std::size_t pos = out.size();
        if (pos < bound->size()) {
          if (token > (*bound)[pos])
            return false;
          if (token < (*bound)[pos])
            equal_so_far = false;
        }
      }
      out.push_back(token);
    }
  }
  if (order)
    *order = std::move(seq);
  return true;
}

}  // namespace

CanonicalCode rooted_code(const PartialAction& g, std::uint32_t root) {
  if (root >= g.size)
    throw std::invalid_argument("rooted_code: root out of range");
  CanonicalCode code;
  code_from(Slots(g), root, code, nullptr, nullptr);
  return code;
}

std::vector<std::uint32_t> bfs_order(const PartialAction& g, std::uint32_t root) {
  if (root >= g.size)
    throw std::invalid_argument("bfs_order: root out of range");
  CanonicalCode code;
  std::vector<std::uint32_t> order;
  code_from(Slots(g), root, code, &order, nullptr);
  return order;
}

namespace {

std::pair<CanonicalCode, std::uint32_t> best_root(const PartialAction& g) {
  if (g.size == 0)
    throw Disconnected("canonical_code: empty graph");
  if (!g.connected())
    throw Disconnected("canonical_code: graph is not connected");
  Slots s(g);
  CanonicalCode best, code;
  std::uint32_t arg = 0;
  code_from(s, 0, best, nullptr, nullptr);
  for (std::uint32_t r = 1; r < g.size; ++r)
    if (code_from(s, r, code, nullptr, &best) && code < best) {
      best = code;
      arg = r;
    }
  return {best, arg};
}

}  // namespace

CanonicalCode canonical_code(const PartialAction& g) { return best_root(g).first; }

PartialAction relabel(const PartialAction& g, const std::vector<std::uint32_t>& perm) {
  if (perm.size() != g.size)
    throw std::invalid_argument("relabel: permutation size mismatch");
  PartialAction h = PartialAction::empty(g.rank(), g.size);
  for (int i = 0; i < g.rank(); ++i)
    for (std::uint32_t v = 0; v < g.size; ++v)
      if (g.maps[i][v] != kHole)
        h.maps[i][perm[v]] = perm[g.maps[i][v]];
  return h;
}

PartialAction canonical_form(const PartialAction& g) {
  auto order = bfs_order(g, best_root(g).second);
  std::vector<std::uint32_t> perm(g.size);
  for (std::uint32_t k = 0; k < order.size(); ++k)
    perm[order[k]] = k;
  return relabel(g, perm);
}

PartialAction decode(int rank, const CanonicalCode& code) {
  const std::size_t slots = 2 * static_cast<std::size_t>(rank);
  if (code.size() % slots != 0)
    throw std::invalid_argument("decode: code length is not a multiple of 2r");
  PartialAction g = PartialAction::empty(rank, code.size() / slots);
  for (std::size_t k = 0; k < code.size(); ++k) {
    if (code[k] == 0)
      continue;
    auto v = static_cast<std::uint32_t>(k / slots);
    auto w = code[k] - 1;
    int slot = static_cast<int>(k % slots);
    if (w >= g.size)
      throw std::invalid_argument("decode: token out of range");
    if (slot % 2 == 1)
      std::swap(v, w);  // the slot reads an incoming edge
    if (g.maps[slot / 2][v] == kHole)
      g.add_edge(slot / 2, v, w);
    else if (g.maps[slot / 2][v] != w)
      throw std::invalid_argument("decode: inconsistent code");
  }
  return g;
}

namespace {

// Depth-first generation of root-0 BFS codes with exactly `target` vertices.
class Generator {
 public:
  Generator(int rank, std::size_t target, const std::function<bool(const PartialAction&)>& visit)
      : rank_(rank), target_(target), visit_(visit), g_(PartialAction::empty(rank, target)) {
    inv_.assign(static_cast<std::size_t>(rank), std::vector<std::uint32_t>(target, kHole));
    decided_.assign(target * 2 * rank, false);
  }

  bool run() {
    count_ = 1;
    return step(0, 0);
  }

 private:
  std::size_t idx(std::uint32_t v, int slot) const { return v * 2 * rank_ + slot; }
  std::uint32_t at(int slot, std::uint32_t v) const {
    return slot % 2 == 0 ? g_.maps[slot / 2][v] : inv_[slot / 2][v];
  }
  void link(int slot, std::uint32_t v, std::uint32_t w) {
    // v --slot--> w, recorded on both ends.
    if (slot % 2 == 0) {
      g_.maps[slot / 2][v] = w;
      inv_[slot / 2][w] = v;
    } else {
      g_.maps[slot / 2][w] = v;
      inv_[slot / 2][v] = w;
    }
  }
  void unlink(int slot, std::uint32_t v, std::uint32_t w) {
    if (slot % 2 == 0) {
      g_.maps[slot / 2][v] = kHole;
      inv_[slot / 2][w] = kHole;
    } else {
      g_.maps[slot / 2][w] = kHole;
      inv_[slot / 2][v] = kHole;
    }
  }

  bool finish() {
    if (count_ != target_ || g_.total())
      return true;
    CanonicalCode mine, other;
    Slots s(g_);
    code_from(s, 0, mine, nullptr, nullptr);
    for (std::uint32_t r = 1; r < target_; ++r)
      if (code_from(s, r, other, nullptr, &mine) && other < mine)
        return true;
    return visit_(g_);
  }

  bool step(std::uint32_t u, int slot) {
    if (slot == 2 * rank_) {
      ++u;
      slot = 0;
    }
    if (u == count_)
      return finish();
    if (at(slot, u) != kHole || decided_[idx(u, slot)])
      return step(u, slot + 1);
    const int rev = slot ^ 1;
    decided_[idx(u, slot)] = true;
    // Hole.
    if (!step(u, slot + 1)) {
      decided_[idx(u, slot)] = false;
      return false;
    }
    // An existing vertex whose reverse slot is still open.
    for (std::uint32_t w = u; w < count_; ++w) {
      if (at(rev, w) != kHole)
        continue;
      if (w == u && rev < slot)
        continue;
      if (decided_[idx(w, rev)])
        continue;
      link(slot, u, w);
      bool go = step(u, slot + 1);
      unlink(slot, u, w);
      if (!go) {
        decided_[idx(u, slot)] = false;
        return false;
      }
    }
    // A new vertex.
    if (count_ < target_) {
      std::uint32_t w = static_cast<std::uint32_t>(count_++);
      link(slot, u, w);
      bool go = step(u, slot + 1);
      unlink(slot, u, w);
      --count_;
      if (!go) {
        decided_[idx(u, slot)] = false;
        return false;
      }
    }
    decided_[idx(u, slot)] = false;
    return true;
  }

  int rank_;
  std::size_t target_;
  const std::function<bool(const PartialAction&)>& visit_;
  PartialAction g_;
  std::vector<std::vector<std::uint32_t>> inv_;
  std::vector<bool> decided_;
  std::size_t count_ = 0;
};

}  // namespace

void enumerate_partial_actions(int rank, std::size_t min_verts, std::size_t max_verts,
                               const std::function<bool(const PartialAction&)>& visit) {
  if (rank < 1)
    throw std::invalid_argument("enumerate_partial_actions: rank must be positive");
  if (min_verts < 1 || min_verts > max_verts)
    throw std::invalid_argument("enumerate_partial_actions: need 1 <= min <= max");
  for (std::size_t n = min_verts; n <= max_verts; ++n) {
    Generator gen(rank, n, visit);
    if (!gen.run())
      return;
  }
}

std::vector<PartialAction> enumerate_partial_actions(int rank, std::size_t min_verts,
                                                     std::size_t max_verts) {
  std::vector<PartialAction> out;
  enumerate_partial_actions(rank, min_verts, max_verts, [&](const PartialAction& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

MarkedAction extend_marked(const PartialAction& g) {
  if (g.rank() < 2)
    throw std::invalid_argument("extend_marked: rank must be at least 2");
  MarkedAction m;
  bool found = false;
  for (int l = 0; l < g.rank() && !found; ++l)
    for (std::uint32_t v = 0; v < g.size && !found; ++v)
      if (g.maps[l][v] == kHole) {
        m.ell = l;
        m.zeta = v;
        found = true;
      }
  if (!found)
    throw NoMissingEdge("extend_marked: every generator already acts as a permutation");
  PartialAction rho = g;
  m.delta = rho.add_vertex();
  m.marked = rho.add_vertex();
  rho.add_edge(m.ell, m.zeta, m.delta);
  rho.add_edge(0, m.delta, m.marked);
  rho.add_edge(1, m.marked, m.marked);
  for (int i = 0; i < rho.rank(); ++i) {
    auto inv = inverses(rho)[i];
    for (std::uint32_t start = 0; start < rho.size; ++start) {
      if (inv[start] != kHole)
        continue;
      std::uint32_t end = start;
      while (rho.maps[i][end] != kHole)
        end = rho.maps[i][end];
      rho.maps[i][end] = start;
      inv[start] = end;
    }
  }
  m.action = std::move(rho);
  return m;
}

RootedBall ball_of(const PartialAction& g, std::uint32_t root, int radius) {
  if (root >= g.size)
    throw std::invalid_argument("ball_of: root out of range");
  if (radius < 0)
    throw std::invalid_argument("ball_of: radius must be non-negative");
  Slots s(g);
  std::vector<int> dist(g.size, -1);
  RootedBall ball;
  dist[root] = 0;
  ball.original.push_back(root);
  for (std::size_t k = 0; k < ball.original.size(); ++k) {
    std::uint32_t v = ball.original[k];
    if (dist[v] == radius)
      continue;
    for (int slot = 0; slot < s.count(); ++slot) {
      std::uint32_t w = s.at(slot, v);
      if (w != kHole && dist[w] < 0) {
        dist[w] = dist[v] + 1;
        ball.original.push_back(w);
      }
    }
  }
  std::vector<std::uint32_t> local(g.size, kHole);
  for (std::uint32_t k = 0; k < ball.original.size(); ++k)
    local[ball.original[k]] = k;
  ball.graph = PartialAction::empty(g.rank(), ball.original.size());
  for (int i = 0; i < g.rank(); ++i)
    for (std::uint32_t k = 0; k < ball.original.size(); ++k) {
      std::uint32_t w = g.maps[i][ball.original[k]];
      if (w != kHole && local[w] != kHole)
        ball.graph.maps[i][k] = local[w];
    }
  return ball;
}

std::optional<std::vector<std::uint32_t>> contains_labeled_copy(
    const PartialAction& host, const PartialAction& pattern,
    std::optional<std::pair<std::uint32_t, std::uint32_t>> anchor) {
  if (pattern.size == 0)
    return std::vector<std::uint32_t>{};
  if (!pattern.connected())
    throw Disconnected("contains_labeled_copy: pattern is not connected");
  if (pattern.rank() != host.rank())
    throw std::invalid_argument("contains_labeled_copy: rank mismatch");
  const std::uint32_t root = anchor ? anchor->first : 0;
  if (root >= pattern.size || (anchor && anchor->second >= host.size))
    throw std::invalid_argument("contains_labeled_copy: anchor out of range");
  Slots ps(pattern), hs(host);
  const auto order = bfs_order(pattern, root);
  auto attempt = [&](std::uint32_t image) -> std::optional<std::vector<std::uint32_t>> {
    std::vector<std::uint32_t> f(pattern.size, kHole);
    std::vector<bool> used(host.size, false);
    f[root] = image;
    used[image] = true;
    for (std::uint32_t v : order)
      for (int slot = 0; slot < ps.count(); ++slot) {
        std::uint32_t w = ps.at(slot, v);
        if (w == kHole)
          continue;
        std::uint32_t hw = hs.at(slot, f[v]);
        if (hw == kHole)
          return std::nullopt;
        if (f[w] == kHole) {
          if (used[hw])
            return std::nullopt;
          f[w] = hw;
          used[hw] = true;
        } else if (f[w] != hw) {
          return std::nullopt;
        }
      }
    return f;
  };
  if (anchor)
    return attempt(anchor->second);
  for (std::uint32_t h = 0; h < host.size; ++h)
    if (auto f = attempt(h))
      return f;
  return std::nullopt;
}

std::string to_dot(const PartialAction& g, std::optional<std::uint32_t> marked) {
  std::ostringstream out;
  out << "digraph schreier {\n  node [shape=circle];\n";
  for (std::uint32_t v = 0; v < g.size; ++v) {
    out << "  " << v;
    if (marked && *marked == v)
      out << " [shape=doublecircle]";
    out << ";\n";
  }
  for (int i = 0; i < g.rank(); ++i)
    for (std::uint32_t v = 0; v < g.size; ++v)
      if (g.maps[i][v] != kHole)
        out << "  " << v << " -> " << g.maps[i][v] << " [label=\"a" << i + 1 << "\"];\n";
  out << "}\n";
  return out.str();
}

nlohmann::ordered_json to_json(const PartialAction& g) {
  nlohmann::ordered_json j;
  j["size"] = g.size;
  auto maps = nlohmann::ordered_json::array();
  for (const auto& m : g.maps) {
    auto row = nlohmann::ordered_json::array();
    for (auto w : m)
      row.push_back(w == kHole ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(w));
    maps.push_back(row);
  }
  j["maps"] = maps;
  return j;
}

nlohmann::ordered_json to_json(const MarkedAction& m) {
  auto j = to_json(m.action);
  j["marked"] = m.marked;
  j["delta"] = m.delta;
  j["zeta"] = m.zeta;
  j["ell"] = m.ell + 1;
  return j;
}

PartialAction partial_action_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("maps") || !j.at("maps").is_array())
    throw ParseError("partial action must have 'size' and 'maps'");
  PartialAction g;
  g.size = j.at("size").get<std::size_t>();
  for (const auto& row : j.at("maps")) {
    if (!row.is_array() || row.size() != g.size)
      throw ParseError("partial action map has the wrong length");
    std::vector<std::uint32_t> m;
    for (const auto& x : row)
      m.push_back(x.is_null() ? kHole : x.get<std::uint32_t>());
    g.maps.push_back(std::move(m));
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return g;
}

}  // namespace toti
