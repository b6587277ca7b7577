#pragma once

#include "toti/interval_set.hpp"
#include "toti/rational.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace toti {

/// Translation block: [lo, hi) -> [lo + offset, hi + offset).
struct Piece {
  Rat lo;
  Rat hi;
  Rat offset;

  Rat image_lo() const { return lo + offset; }
  Rat image_hi() const { return hi + offset; }

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Measure-preserving partial injection of [0,1) made of finitely many
/// rational translations. Always held in canonical form: pieces sorted by
/// source, sources and images pairwise disjoint, and touching pieces with
/// equal offsets merged. Two maps are equal as functions iff their canonical
/// forms are identical.
class PiecewiseTranslation {
 public:
  PiecewiseTranslation() = default;

  /// Validates and canonicalizes. Throws OverlapError on overlapping sources
  /// or images and std::invalid_argument on anything leaving [0,1).
  static PiecewiseTranslation from_pieces(std::vector<Piece> pieces);

  static PiecewiseTranslation identity(const IntervalSet& on = IntervalSet::unit());
  /// The single translation x -> x + offset on [lo, hi).
  static PiecewiseTranslation translation(const Rat& lo, const Rat& hi, const Rat& offset);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  IntervalSet domain() const;
  IntervalSet range() const;
  /// True iff the domain is all of [0,1).
  bool is_total() const;

  std::optional<Rat> apply(const Rat& x) const;

  /// Image of a subset of the domain. Throws if s is not inside the domain.
  IntervalSet image(const IntervalSet& s) const;
  PiecewiseTranslation restrict_to(const IntervalSet& s) const;

  std::string str() const;

  friend bool operator==(const PiecewiseTranslation&, const PiecewiseTranslation&) = default;

 private:
  static PiecewiseTranslation canonical(std::vector<Piece> pieces);
  std::vector<Piece> pieces_;
};

/// A total PiecewiseTranslation, i.e. an element of Aut([0,1), Lebesgue).
using Transform = PiecewiseTranslation;

/// Throws std::invalid_argument unless t is total.
void require_total(const PiecewiseTranslation& t, const char* what);

/// s o t, defined on t^-1(rng t ∩ dom s).
PiecewiseTranslation compose(const PiecewiseTranslation& s, const PiecewiseTranslation& t);
PiecewiseTranslation invert(const PiecewiseTranslation& phi);
/// phi^k for any integer k; phi^0 is the identity of [0,1).
PiecewiseTranslation power(const PiecewiseTranslation& phi, long k);

/// Union of maps with disjoint domains and disjoint ranges; OverlapError otherwise.
PiecewiseTranslation disjoint_union(const PiecewiseTranslation& phi, const PiecewiseTranslation& psi);

IntervalSet support(const PiecewiseTranslation& phi);
IntervalSet fix_set(const Transform& t);
Rat uniform_distance(const Transform& s, const Transform& t);

/// Greedy left-to-right measure-preserving map with domain a and range b.
PiecewiseTranslation transport(const IntervalSet& a, const IntervalSet& b);

/// Extends phi by the identity off its domain. Requires dom phi == rng phi.
Transform complete_by_identity(const PiecewiseTranslation& phi);

using Graphing = std::vector<PiecewiseTranslation>;
Rat cost(const Graphing& g);

Rat measure(const IntervalSet& a);

nlohmann::ordered_json to_json(const PiecewiseTranslation& phi);
/// Rejects non-canonical input with a diagnostic (ParseError).
PiecewiseTranslation piecewise_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const nlohmann::json& j);

}  // namespace toti
