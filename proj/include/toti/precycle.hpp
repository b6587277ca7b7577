#pragma once

#include "toti/certificate.hpp"
#include "toti/piecewise.hpp"

#include <optional>
#include <variant>

namespace toti {

/// Partial map whose basis B = dom \ rng is carried through dom by
/// B, phi(B), ..., phi^(n-2)(B) and through rng by phi(B), ..., phi^(n-1)(B).
struct PreCycle {
  PiecewiseTranslation map;
  int length = 0;
  IntervalSet basis;

  /// Verifies the pre-cycle structure; throws std::invalid_argument if it fails.
  static PreCycle from_map(PiecewiseTranslation map, int length);
};

struct PrecycleCheck {
  bool ok = false;
  IntervalSet basis;
  std::string reason;
};

PrecycleCheck is_precycle(const PiecewiseTranslation& phi, int n);

/// Carves n consecutive blocks of the given measure from slots, left to
/// right, and chains them. InsufficientRoom if slots are too small.
PreCycle make_precycle(int n, const Rat& basis_measure, const IntervalSet& slots);

/// phi on dom, phi^-(n-1) on rng \ dom, identity elsewhere.
Transform closing_cycle(const PreCycle& p);

struct ExceedsBound {
  friend bool operator==(ExceedsBound, ExceedsBound) = default;
};

struct PeriodReport {
  std::variant<long, ExceedsBound> period;
  long bound = 0;

  bool exceeded() const { return std::holds_alternative<ExceedsBound>(period); }
  long value() const { return std::get<long>(period); }
};

/// Least k <= bound with t^k = id, from the cycle structure of t on atoms.
PeriodReport period(const Transform& t, long bound);

/// k-th root w of a periodic u: w^k = u and supp w = supp u. The fundamental
/// domain of each atom cycle is its least atom; that atom is cut into k equal
/// consecutive blocks which the root cycles in order. NotPeriodic if the
/// period of u exceeds bound.
Transform kth_root(const Transform& u, long k, long bound = 1L << 40);

/// t agrees with phi on dom phi.
bool extends(const Transform& t, const PiecewiseTranslation& phi);

/// Atom-level conjugation test on the dyadic grid of the given
/// level: <u, Sym of each psi-class> contains Sym of each phi-class, where
/// psi = phi restricted to the basis. GridMismatch if p or u is off-grid;
/// std::invalid_argument if u does not extend p.map.
GroupCertificate conj_trick_certificate(const PreCycle& p, const Transform& u, int level);

nlohmann::ordered_json to_json(const PreCycle& p);
/// Re-verifies the pre-cycle structure (ParseError on failure).
PreCycle precycle_from_json(const nlohmann::json& j);

}  // namespace toti
