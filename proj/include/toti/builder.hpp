#pragma once

#include "toti/certificate.hpp"
#include "toti/piecewise.hpp"
#include "toti/precycle.hpp"
#include "toti/schreier.hpp"
#include "toti/stallings.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toti {

struct BuildParams {
  int r = 2;
  Rat muY = make_rat(3, 5);
  int level = 10;            // odometer level L on Y
  int ballCount = 8;         // N
  int maxBallVerts = 6;
  int precycleLength = 4;    // p + 2
  Rat precycleC = make_rat(1, 10);
  long evanescentM = 2;
  int evanescentN = 3;

  int p() const { return precycleLength - 2; }
};

/// Throws ConfigError naming the violated constraint.
void validate(const BuildParams& params);

/// key = value lines; '#' starts a comment. Rationals must be "p/q" or
/// integers. Unknown keys and floating-point values are rejected.
BuildParams parse_config(const std::string& text);
/// Canonical text form, parsed back to the same parameters.
std::string write_config(const BuildParams& params);

struct BallEntry {
  PartialAction g;                 // G_n, canonically numbered
  MarkedAction completed;          // (rho_n, xi_n) on G'_n
  IntervalSet region;              // C_n
  std::vector<IntervalSet> blocks; // B_n^g for g in G'_n, in vertex order

  const IntervalSet& marked_block() const { return blocks[completed.marked]; }
};

struct BuildResult {
  BuildParams params;
  std::vector<Transform> alpha;      // alpha(a_1), ..., alpha(a_r)
  std::vector<Transform> alpha_inf;  // alpha_inf(a_i): block moves on C, identity on Y
  IntervalSet Y, C, A, B, D, middle;
  Transform T, V, W, I;
  Transform V_unit;                  // V before scaling into Y
  int v_level = 0;                   // p of the U_p that V is a root of
  std::vector<PreCycle> phi;         // phi[0] is phi_2
  std::vector<Transform> U;          // U[0] is U_2
  PreCycle psi;                      // common length-2 restriction of the phi_i
  std::vector<BallEntry> balls;
  Rat eta;
  long m0 = 0;
  std::vector<std::string> log;
};

IntervalSet choose_Y(const BuildParams& params);
/// s o t o s^-1 on Y = [0, muY), identity off Y; s(x) = muY x.
Transform scale_into(const PiecewiseTranslation& t, const Rat& muY);
/// Inverse of scale_into for maps supported in Y.
Transform scale_out(const Transform& t, const Rat& muY);
Transform make_T_on_Y(const BuildParams& params);

struct PrecycleStage {
  std::vector<PreCycle> phi;
  std::vector<Transform> U;
  PreCycle psi;
  IntervalSet middle;
  Rat eta;
  long m0 = 0;
};

/// Blocks X_0, ..., X_(p+1) of measure c/p carved from the middle half
/// s([1/4, 3/4)) of Y. phi_i runs X_0 -> X_1 and then through the tail blocks
/// X_2, ..., X_(p+1) rotated by (i - 2) mod p. InsufficientRoom if the
/// middle half is too small.
PrecycleStage make_precycles(const BuildParams& params);

struct FiniteStage {
  IntervalSet C;
  std::vector<BallEntry> balls;
  std::vector<Transform> alpha_inf;
};

/// First ballCount enumerated partial actions with m0 to maxBallVerts
/// vertices, completed by extend_marked and laid out on C = [muY, 1).
FiniteStage assemble_finite_actions(const BuildParams& params, long m0);

struct VWIStage {
  Transform V, W, I, V_unit;
  int v_level = 0;
  IntervalSet A, B, D;
};

VWIStage choose_V_W_I(const BuildParams& params, const PrecycleStage& pre, const FiniteStage& fin);

/// Runs every stage and checks the result invariants (std::logic_error if
/// one fails, which would be a build bug).
BuildResult build(const BuildParams& params);

struct Clause {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string title;
  std::vector<Clause> clauses;
  nlohmann::ordered_json data;  // extra facts: k, witness words, measures

  bool ok() const;
  void add(std::string name, bool pass, std::string detail = {});
  nlohmann::ordered_json to_json() const;
};

/// Structural invariants of a build: totality, factor disjointness,
/// extension of the pre-cycles, alpha(a_2)(A) = B, mu(Y) = muY.
Report check_invariants(const BuildResult& result);

/// Decomposition clauses (i)-(iv) on alpha(a_2). k <= 0 computes k as the lcm of the periods of
/// U_2, I and the a_2-parts of the first n0 finite actions (n0 <= 0 means all).
Report verify_step4(const BuildResult& result, long k = 0, int n0 = 0);

/// For every ball: the block graph of alpha on C_n equals rho_n except at the
/// a_2-edge of xi_n, G_n embeds with the identity assignment, and orbit balls
/// of block midpoints contain the predicted block balls.
Report verify_totipotency(const BuildResult& result, int radius = 2);

/// alpha(a_1) with the first two blocks of C_1 exchanged: a negative control.
BuildResult corrupt_first_block_pair(const BuildResult& result);

struct StabilizerSample {
  Rat point;
  int radius = 0;
  PartialAction orbit_ball;        // vertex 0 is the point
  std::vector<Rat> orbit_points;
  std::vector<Word> stab_words;    // reduced, up to the word length bound
  std::optional<long> a1_return;   // least j with alpha(a_1)^j x = x, searched up to 2^L
};

StabilizerSample irs_sample(const BuildResult& result, const Rat& x, int radius, int word_len);
StallingsAutomaton stabilizer_to_subgroup(const StabilizerSample& sample, int rank);

nlohmann::ordered_json to_json(const StabilizerSample& s);

}  // namespace toti
