#pragma once

#include "toti/schreier.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toti {

/// Freely reduced word in a_1, ..., a_r. Letter +i is a_i, -i is a_i^-1.
class Word {
 public:
  Word() = default;
  /// Freely reduces the given letters.
  explicit Word(const std::vector<int>& letters);

  /// Tokens "a<i>" or "a<i>^<k>" separated by spaces or '*'; "e" or "1" is
  /// the identity.
  static Word parse(std::string_view text);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int max_generator() const;

  Word inverse() const;
  Word pow(long n) const;
  friend Word operator*(const Word& a, const Word& b);

  /// "a1^2 a2 a1^-1"; "e" for the identity.
  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<int> letters_;
};

/// Comma-separated list of words.
std::vector<Word> parse_words(std::string_view text);

/// Slot index of a letter in the order a1, a1^-1, a2, a2^-1, ...
inline int letter_slot(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }
inline int slot_letter(int slot) { return slot % 2 == 0 ? slot / 2 + 1 : -(slot / 2 + 1); }

/// Folded core graph of a finitely generated subgroup; the base is vertex 0
/// and the other vertices are numbered in BFS order from it.
struct StallingsAutomaton {
  PartialAction graph;
  std::uint32_t base = 0;

  int rank() const { return graph.rank(); }
  std::size_t size() const { return graph.size; }
  friend bool operator==(const StallingsAutomaton&, const StallingsAutomaton&) = default;
};

StallingsAutomaton subgroup_from_generators(int rank, const std::vector<Word>& gens);

/// Vertex reached by reading w from v, if the path exists.
std::optional<std::uint32_t> read_word(const StallingsAutomaton& a, std::uint32_t v, const Word& w);
bool contains_word(const StallingsAutomaton& a, const Word& w);

/// Vertex count when every generator acts as a permutation; nullopt means
/// infinite index.
std::optional<std::size_t> index(const StallingsAutomaton& a);
bool in_perfect_kernel(const StallingsAutomaton& a, int r);

/// Free basis read off a BFS spanning tree: one word per non-tree edge,
/// edges ordered by generator and then by source vertex.
std::vector<Word> basis(const StallingsAutomaton& a);
/// 1 - |V| + |E|.
std::size_t subgroup_rank(const StallingsAutomaton& a);

/// Completes every generator by matching vertices without an outgoing edge
/// to vertices without an incoming edge, both in increasing order.
/// AlreadyComplete if the index is finite.
StallingsAutomaton hall_completion(const StallingsAutomaton& a);

struct IsolationStep {
  long n = 0;
  std::vector<Word> generators;  // generators of Lambda plus g^n
  bool infinite_index = false;
  int agreement = 0;             // ball_agreement with Lambda
};

struct IsolationWitness {
  Word g;
  std::vector<IsolationStep> steps;  // n = 2..n_max
  /// Agreement radius strictly increases along the steps.
  bool increasing = false;
};

/// g is the shortlex-least reduced loop at the base of the Hall completion
/// that uses an added edge; Lambda_n = <gens(Lambda), g^n>.
IsolationWitness isolation_witness(const StallingsAutomaton& a, long n_max);

struct NeighborhoodSpec {
  std::vector<Word> inside;   // I
  std::vector<Word> outside;  // O
};

bool neighborhood_member(const StallingsAutomaton& a, const NeighborhoodSpec& spec);

/// Largest k <= radius such that both subgroups contain the same reduced
/// words of length at most k.
int ball_agreement(const StallingsAutomaton& a, const StallingsAutomaton& b, int radius);

nlohmann::ordered_json to_json(const StallingsAutomaton& a);
StallingsAutomaton automaton_from_json(const nlohmann::json& j);
std::string to_dot(const StallingsAutomaton& a);

}  // namespace toti
