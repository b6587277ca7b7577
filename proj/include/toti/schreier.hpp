#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace toti {

inline constexpr std::uint32_t kHole = std::numeric_limits<std::uint32_t>::max();

/// Finite partial action of F_r: maps[i][v] is the image of v under the
/// generator a_(i+1), or kHole. Every maps[i] is injective where defined.
struct PartialAction {
  std::size_t size = 0;
  std::vector<std::vector<std::uint32_t>> maps;

  static PartialAction empty(int rank, std::size_t size);

  int rank() const { return static_cast<int>(maps.size()); }
  std::uint32_t image(int gen, std::uint32_t v) const { return maps[gen][v]; }
  /// Preimage of v under a_(gen+1), or kHole.
  std::uint32_t preimage(int gen, std::uint32_t v) const;
  /// Neighbor along label slot s: 2i is a_(i+1), 2i+1 its inverse.
  std::uint32_t along(int slot, std::uint32_t v) const;

  /// Adds v -a_(gen+1)-> w. Throws std::invalid_argument on a conflict.
  void add_edge(int gen, std::uint32_t v, std::uint32_t w);
  std::uint32_t add_vertex();

  bool connected() const;
  /// Every generator acts as a permutation.
  bool total() const;
  bool has_missing_edge() const { return !total(); }
  std::size_t edge_count() const;

  /// Throws std::invalid_argument if a map is not an injective partial map.
  void validate() const;

  friend bool operator==(const PartialAction&, const PartialAction&) = default;
};

/// Completed finite action with a marked point fixed by a_2.
struct MarkedAction {
  PartialAction action;
  std::uint32_t marked = 0;  // xi
  std::uint32_t delta = 0;
  std::uint32_t zeta = 0;
  int ell = 0;  // generator index (0-based) of the new edge out of zeta
};

using CanonicalCode = std::vector<std::uint32_t>;

/// BFS code from a root: slot tokens in vertex discovery order, labels in the
/// order a1, a1^-1, a2, a2^-1, ...; 0 is a hole and w+1 is vertex number w.
/// Vertices not reachable from the root are ignored.
CanonicalCode rooted_code(const PartialAction& g, std::uint32_t root);
/// Discovery order of that BFS.
std::vector<std::uint32_t> bfs_order(const PartialAction& g, std::uint32_t root);

/// Lexicographic minimum of the rooted codes. Disconnected if g is.
CanonicalCode canonical_code(const PartialAction& g);
/// g renumbered in the BFS order of a root attaining the canonical code.
PartialAction canonical_form(const PartialAction& g);
/// Image of g under the vertex bijection v -> perm[v].
PartialAction relabel(const PartialAction& g, const std::vector<std::uint32_t>& perm);
/// Graph whose rooted code (root 0) is the given code.
PartialAction decode(int rank, const CanonicalCode& code);

/// Calls visit on every connected partial action of the given rank with a
/// vertex count in [min_verts, max_verts] and at least one missing
/// half-edge, once per isomorphism class, in (size, code) order. Each graph
/// is numbered canonically. Stops early when visit returns false.
void enumerate_partial_actions(int rank, std::size_t min_verts, std::size_t max_verts,
                               const std::function<bool(const PartialAction&)>& visit);
std::vector<PartialAction> enumerate_partial_actions(int rank, std::size_t min_verts,
                                                     std::size_t max_verts);

/// Adds delta and xi, the edges zeta -a_l-> delta, delta -a1-> xi and the
/// a2-loop at xi, with l and then zeta least in vertex order among vertices
/// missing an outgoing a_l-edge. Every maximal a_i-segment is then closed by
/// an edge from its end to its start, generators in index order and segments
/// by start vertex. NoMissingEdge if g is complete.
MarkedAction extend_marked(const PartialAction& g);

struct RootedBall {
  PartialAction graph;                  // root is vertex 0
  std::vector<std::uint32_t> original;  // ball vertex -> vertex of the source
};

/// Induced subgraph on the vertices within distance radius of root, numbered
/// in BFS order.
RootedBall ball_of(const PartialAction& g, std::uint32_t root, int radius);

/// Injective label-preserving map pattern -> host defined on every pattern
/// edge. The pattern root (anchor->first, else 0) is tried against
/// anchor->second, else every host vertex in order.
std::optional<std::vector<std::uint32_t>> contains_labeled_copy(
    const PartialAction& host, const PartialAction& pattern,
    std::optional<std::pair<std::uint32_t, std::uint32_t>> anchor = std::nullopt);

std::string to_dot(const PartialAction& g, std::optional<std::uint32_t> marked = std::nullopt);

nlohmann::ordered_json to_json(const PartialAction& g);
nlohmann::ordered_json to_json(const MarkedAction& m);
PartialAction partial_action_from_json(const nlohmann::json& j);

}  // namespace toti
