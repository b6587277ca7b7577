#include "toti/stallings.hpp"

#include "toti/errors.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace toti {

Word::Word(const std::vector<int>& letters) {
  for (int x : letters) {
    if (x == 0)
      throw std::invalid_argument("Word: letter 0 is not a generator");
    if (!letters_.empty() && letters_.back() == -x)
      letters_.pop_back();
    else
      letters_.push_back(x);
  }
}

namespace {

long parse_long(std::string_view s, std::string_view whole) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError("malformed word '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Word Word::parse(std::string_view text) {
  std::vector<int> letters;
  std::size_t i = 0;
  auto sep = [](char c) { return c == ' ' || c == '*' || c == '\t'; };
  while (i < text.size()) {
    if (sep(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !sep(text[j]))
      ++j;
    std::string_view tok = text.substr(i, j - i);
    i = j;
    if (tok == "e" || tok == "1")
      continue;
    if (tok.size() < 2 || tok[0] != 'a')
      throw ParseError("malformed word '" + std::string(text) + "'");
    std::string_view gen = tok.substr(1);
    long exp = 1;
    if (auto hat = tok.find('^'); hat != std::string_view::npos) {
      gen = tok.substr(1, hat - 1);
      exp = parse_long(tok.substr(hat + 1), text);
    }
    long g = parse_long(gen, text);
    if (g < 1)
      throw ParseError("generator index must be positive in '" + std::string(text) + "'");
    int letter = static_cast<int>(exp < 0 ? -g : g);
    for (long k = 0; k < std::labs(exp); ++k)
      letters.push_back(letter);
  }
  return Word(letters);
}

int Word::max_generator() const {
  int m = 0;
  for (int x : letters_)
    m = std::max(m, std::abs(x));
  return m;
}

Word Word::inverse() const {
  std::vector<int> out(letters_.rbegin(), letters_.rend());
  for (int& x : out)
    x = -x;
  return Word(out);
}

Word Word::pow(long n) const {
  Word base = n < 0 ? inverse() : *this;
  Word out;
  for (long k = 0; k < std::labs(n); ++k)
    out = out * base;
  return out;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<int> all = a.letters_;
  all.insert(all.end(), b.letters_.begin(), b.letters_.end());
  return Word(all);
}

std::string Word::str() const {
  if (letters_.empty())
    return "e";
  std::string out;
  for (std::size_t i = 0; i < letters_.size();) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i])
      ++j;
    long exp = static_cast<long>(j - i) * (letters_[i] > 0 ? 1 : -1);
    if (!out.empty())
      out += ' ';
    out += "a" + std::to_string(std::abs(letters_[i]));
    if (exp != 1)
      out += "^" + std::to_string(exp);
    i = j;
  }
  return out;
}

std::vector<Word> parse_words(std::string_view text) {
  std::vector<Word> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos)
      comma = text.size();
    std::string_view part = text.substr(start, comma - start);
    if (part.find_first_not_of(" \t") != std::string_view::npos)
      out.push_back(Word::parse(part));
    start = comma + 1;
  }
  return out;
}

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t add() {
    parent.push_back(static_cast<std::uint32_t>(parent.size()));
    return parent.back();
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller id survives, so the base 0 is never absorbed.
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

struct Edge {
  std::uint32_t from;
  int gen;  // 0-based
  std::uint32_t to;
  auto operator<=>(const Edge&) const = default;
};

// Renumbers the graph on `alive` vertices in BFS order from base.
StallingsAutomaton renumber(int rank, const std::set<Edge>& edges, std::uint32_t base,
                            std::size_t total) {
  PartialAction g = PartialAction::empty(rank, total);
  for (const auto& e : edges)
    g.maps[e.gen][e.from] = e.to;
  auto order = bfs_order(g, base);
  std::vector<std::uint32_t> perm(total, kHole);
  for (std::uint32_t k = 0; k < order.size(); ++k)
    perm[order[k]] = k;
  StallingsAutomaton a;
  a.graph = PartialAction::empty(rank, order.size());
  for (const auto& e : edges)
    if (perm[e.from] != kHole)
      a.graph.maps[e.gen][perm[e.from]] = perm[e.to];
  return a;
}

}  // namespace

StallingsAutomaton subgroup_from_generators(int rank, const std::vector<Word>& gens) {
  if (rank < 1)
    throw std::invalid_argument("subgroup_from_generators: rank must be positive");
  UnionFind uf(1);
  std::vector<Edge> raw;
  for (const auto& w : gens) {
    if (w.max_generator() > rank)
      throw std::invalid_argument("word " + w.str() + " uses a generator beyond rank " +
                                  std::to_string(rank));
    if (w.empty())
      continue;
    std::uint32_t at = 0;
    for (std::size_t i = 0; i < w.length(); ++i) {
      std::uint32_t next = i + 1 == w.length() ? 0 : uf.add();
      int x = w.letters()[i];
      if (x > 0)
        raw.push_back({at, x - 1, next});
      else
        raw.push_back({next, -x - 1, at});
      at = next;
    }
  }
  // Fold: identify targets of equal-labeled edges with a common source, and
  // sources of equal-labeled edges with a common target.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<std::uint32_t, int>, std::uint32_t> out, in;
    for (const auto& e : raw) {
      std::uint32_t s = uf.find(e.from), t = uf.find(e.to);
      auto [it, fresh] = out.try_emplace({s, e.gen}, t);
      if (!fresh && uf.find(it->second) != t) {
        uf.unite(it->second, t);
        changed = true;
        break;
      }
      auto [jt, fresh2] = in.try_emplace({t, e.gen}, s);
      if (!fresh2 && uf.find(jt->second) != s) {
        uf.unite(jt->second, s);
        changed = true;
        break;
      }
    }
  }
  std::set<Edge> edges;
  for (const auto& e : raw)
    edges.insert({uf.find(e.from), e.gen, uf.find(e.to)});
  // Trim hanging trees: drop non-base vertices of degree at most one.
  bool trimmed = true;
  while (trimmed) {
    trimmed = false;
    std::map<std::uint32_t, int> degree;
    for (const auto& e : edges) {
      ++degree[e.from];
      ++degree[e.to];
    }
    for (auto it = edges.begin(); it != edges.end();) {
      bool hang = (it->from != 0 && degree[it->from] <= 1) || (it->to != 0 && degree[it->to] <= 1);
      if (hang) {
        it = edges.erase(it);
        trimmed = true;
      } else {
        ++it;
      }
    }
  }
  return renumber(rank, edges, 0, uf.parent.size());
}

std::optional<std::uint32_t> read_word(const StallingsAutomaton& a, std::uint32_t v, const Word& w) {
  for (int x : w.letters()) {
    if (std::abs(x) > a.rank())
      return std::nullopt;
    v = a.graph.along(letter_slot(x), v);
    if (v == kHole)
      return std::nullopt;
  }
  return v;
}

bool contains_word(const StallingsAutomaton& a, const Word& w) {
  auto end = read_word(a, a.base, w);
  return end && *end == a.base;
}

std::optional<std::size_t> index(const StallingsAutomaton& a) {
  if (!a.graph.total())
    return std::nullopt;
  return a.size();
}

bool in_perfect_kernel(const StallingsAutomaton& a, int r) {
  if (r < 2)
    throw std::invalid_argument("in_perfect_kernel: rank must be at least 2");
  return !index(a).has_value();
}

std::vector<Word> basis(const StallingsAutomaton& a) {
  const auto& g = a.graph;
  // BFS tree: path[v] is the tree word from the base to v.
  std::vector<std::optional<Word>> path(g.size);
  std::vector<std::pair<std::uint32_t, int>> tree_edge(g.size, {kHole, -1});
  path[a.base] = Word();
  std::vector<std::uint32_t> queue{a.base};
  std::set<std::pair<std::uint32_t, int>> tree;  // (source, gen) of tree edges
  for (std::size_t k = 0; k < queue.size(); ++k) {
    std::uint32_t v = queue[k];
    for (int slot = 0; slot < 2 * g.rank(); ++slot) {
      std::uint32_t w = g.along(slot, v);
      if (w == kHole || path[w])
        continue;
      path[w] = *path[v] * Word({slot_letter(slot)});
      tree.insert(slot % 2 == 0 ? std::pair{v, slot / 2} : std::pair{w, slot / 2});
      queue.push_back(w);
    }
  }
  std::vector<Word> out;
  for (int i = 0; i < g.rank(); ++i)
    for (std::uint32_t v = 0; v < g.size; ++v) {
      std::uint32_t w = g.maps[i][v];
      if (w == kHole || tree.count({v, i}))
        continue;
      out.push_back(*path[v] * Word({i + 1}) * path[w]->inverse());
    }
  return out;
}

std::size_t subgroup_rank(const StallingsAutomaton& a) {
  return 1 + a.graph.edge_count() - a.size();
}

StallingsAutomaton hall_completion(const StallingsAutomaton& a) {
  if (index(a))
    throw AlreadyComplete("hall_completion: the subgroup already has finite index");
  StallingsAutomaton out = a;
  auto& g = out.graph;
  for (int i = 0; i < g.rank(); ++i) {
    std::vector<bool> has_in(g.size, false);
    for (auto w : g.maps[i])
      if (w != kHole)
        has_in[w] = true;
    std::vector<std::uint32_t> sources, targets;
    for (std::uint32_t v = 0; v < g.size; ++v) {
      if (g.maps[i][v] == kHole)
        sources.push_back(v);
      if (!has_in[v])
        targets.push_back(v);
    }
    for (std::size_t k = 0; k < sources.size(); ++k)
      g.maps[i][sources[k]] = targets[k];
  }
  return out;
}

namespace {

// Shortlex-least reduced word of the given length reading a loop at the base
// of `full` that uses an edge absent from `part`.
std::optional<Word> loop_with_added_edge(const StallingsAutomaton& part,
                                         const StallingsAutomaton& full, std::size_t length,
                                         const std::vector<std::size_t>& dist) {
  std::vector<int> letters;
  std::optional<Word> found;
  auto dfs = [&](auto&& self, std::uint32_t v, bool used) -> bool {
    if (letters.size() == length) {
      if (v == full.base && used) {
        found = Word(letters);
        return true;
      }
      return false;
    }
    if (dist[v] > length - letters.size())
      return false;
    for (int slot = 0; slot < 2 * full.rank(); ++slot) {
      int x = slot_letter(slot);
      if (!letters.empty() && letters.back() == -x)
        continue;
      std::uint32_t w = full.graph.along(slot, v);
      bool added = part.graph.along(slot, v) != w;
      letters.push_back(x);
      if (self(self, w, used || added))
        return true;
      letters.pop_back();
    }
    return false;
  };
  dfs(dfs, full.base, false);
  return found;
}

}  // namespace

IsolationWitness isolation_witness(const StallingsAutomaton& a, long n_max) {
  const StallingsAutomaton full = hall_completion(a);
  // Distances to the base, ignoring reducedness: a lower bound for pruning.
  std::vector<std::size_t> dist(full.size(), full.size() + 1);
  dist[full.base] = 0;
  std::vector<std::uint32_t> queue{full.base};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (int slot = 0; slot < 2 * full.rank(); ++slot) {
      std::uint32_t w = full.graph.along(slot, queue[k]);
      if (dist[w] > dist[queue[k]] + 1) {
        dist[w] = dist[queue[k]] + 1;
        queue.push_back(w);
      }
    }
  IsolationWitness out;
  for (std::size_t len = 1;; ++len) {
    if (auto g = loop_with_added_edge(a, full, len, dist)) {
      out.g = *g;
      break;
    }
    if (len > 4 * full.size() + 4)
      throw std::logic_error("isolation_witness: no loop through an added edge");
  }
  const auto gens = basis(a);
  out.increasing = true;
  int prev = -1;
  for (long n = 2; n <= n_max; ++n) {
    IsolationStep step;
    step.n = n;
    step.generators = gens;
    Word gn = out.g.pow(n);
    step.generators.push_back(gn);
    auto lambda_n = subgroup_from_generators(a.rank(), step.generators);
    step.infinite_index = !index(lambda_n).has_value();
    step.agreement = ball_agreement(a, lambda_n, static_cast<int>(gn.length()) + 1);
    if (step.agreement <= prev)
      out.increasing = false;
    prev = step.agreement;
    out.steps.push_back(std::move(step));
  }
  return out;
}

bool neighborhood_member(const StallingsAutomaton& a, const NeighborhoodSpec& spec) {
  for (const auto& w : spec.inside)
    if (!contains_word(a, w))
      return false;
  for (const auto& w : spec.outside)
    if (contains_word(a, w))
      return false;
  return true;
}

int ball_agreement(const StallingsAutomaton& a, const StallingsAutomaton& b, int radius) {
  if (a.rank() != b.rank())
    throw std::invalid_argument("ball_agreement: rank mismatch");
  // States (vertex of a or hole, vertex of b or hole, last slot), explored
  // by word length.
  using State = std::tuple<std::uint32_t, std::uint32_t, int>;
  std::set<State> seen;
  std::vector<State> level{{a.base, b.base, -1}};
  seen.insert(level.front());
  for (int len = 1; len <= radius; ++len) {
    std::vector<State> next;
    for (auto [u, v, last] : level)
      for (int slot = 0; slot < 2 * a.rank(); ++slot) {
        if (last >= 0 && slot == (last ^ 1))
          continue;
        std::uint32_t u2 = u == kHole ? kHole : a.graph.along(slot, u);
        std::uint32_t v2 = v == kHole ? kHole : b.graph.along(slot, v);
        if (u2 == kHole && v2 == kHole)
          continue;
        if ((u2 == a.base) != (v2 == b.base))
          return len - 1;
        State s{u2, v2, slot};
        if (seen.insert(s).second)
          next.push_back(s);
      }
    level = std::move(next);
  }
  return radius;
}

nlohmann::ordered_json to_json(const StallingsAutomaton& a) {
  nlohmann::ordered_json j;
  j["rank"] = a.rank();
  j["base"] = a.base;
  auto g = to_json(a.graph);
  j["size"] = g["size"];
  j["maps"] = g["maps"];
  return j;
}

StallingsAutomaton automaton_from_json(const nlohmann::json& j) {
  StallingsAutomaton a;
  a.graph = partial_action_from_json(j);
  a.base = j.value("base", 0u);
  if (a.base >= a.graph.size)
    throw ParseError("automaton base out of range");
  return a;
}

std::string to_dot(const StallingsAutomaton& a) { return to_dot(a.graph, a.base); }

}  // namespace toti
