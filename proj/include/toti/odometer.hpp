#pragma once

#include "toti/certificate.hpp"
#include "toti/piecewise.hpp"
#include "toti/precycle.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace toti {

/// Finite binary word s_1 s_2 ... s_n; s_1 is the most significant digit
/// of the binary expansion x = sum s_i 2^-i.
struct BitWord {
  std::vector<bool> bits;

  static BitWord parse(std::string_view text);
  std::size_t size() const { return bits.size(); }
  /// Index of the level-|s| atom [j 2^-n, (j+1) 2^-n) this word names.
  std::size_t atom_index() const;
};

Interval cylinder(const BitWord& s);

/// Level-L periodic approximation of the binary odometer: on the cylinder
/// 1^(k-1)0 it adds 1 with carry to the right, and it sends 1^L back to 0^L.
/// A single 2^L-cycle of level-L atoms.
Transform odometer_at_level(int level);

/// Permutation of the 2^level dyadic atoms of [0,1).
struct AtomPermutation {
  int level = 0;
  Perm perm;
};

Transform dyadic_permutation(const AtomPermutation& sigma);

/// True iff every breakpoint and offset of phi is a multiple of 2^-level.
bool on_dyadic_grid(const PiecewiseTranslation& phi, int level);
/// Least level whose grid carries phi, or -1 if some datum is not dyadic.
int dyadic_level(const PiecewiseTranslation& phi);
/// Atom permutation induced by a total t at the given level (GridMismatch otherwise).
Perm atom_permutation(const Transform& t, int level);

/// The 2^level-cycle induced by odometer_at_level(level).
Perm odometer_cycle(int level);
/// The transposition of the atoms 0^(n-1)1 and 1^(n-1)0 at level n.
Perm upsilon(int n);
/// Involution swapping the cylinders 0^(n-1)1 and 1^(n-1)0.
Transform u_n(int n);

/// Lift of a level-n permutation to level p >= n acting on the first n digits.
Perm lift(const Perm& sigma, int n, int p);

GroupCertificate group_contains(const std::vector<AtomPermutation>& gens,
                                const std::vector<AtomPermutation>& targets);

/// Conjugates of upsilon(n) by the powers of the level-n odometer cycle
/// generate all of Sym(2^n).
GroupCertificate lemma_conjugates_certificate(int n);

/// Finite membership certificate for E_{m,n}: conjugates of (the atom
/// permutation of) v^m by the level-p odometer cycle, 0 <= k < 2^p, generate
/// a group containing the lift of Sym(2^n). When v^m is off every dyadic
/// grid, dyadic powers (v^m)^j are certified instead; their conjugates lie in
/// the group generated by those of v^m, so a true verdict still holds.
/// NotDyadic if no power of v^m other than the identity is dyadic.
GroupCertificate evanescent_certificate(const Transform& v, long m, int n);

struct EvanescentApproximation {
  Transform u_tilde;   // equal to u off saturation, root of U_p on it
  Transform root;      // (K m)-th root of U_p
  IntervalSet saturation;
  int p = 0;
  long order = 0;      // K, the order of u
};

/// Replaces u on the u-saturation A of supp U_p by a (K m)-th root of U_p,
/// with p the least p >= n such that 2^-p K < eps/2. Then d_u(u, result) <= mu(A) < eps
/// and result^(K m) = U_p. NotPeriodic if u has order above 2^40.
EvanescentApproximation build_evanescent_V(const Transform& u, long m, int n, const Rat& eps);

struct CostOnePair {
  Transform v2;            // v o U2
  PiecewiseTranslation psi;
  PreCycle chain;          // phi ⊔ psi, length 3
  Transform u1;            // closing 3-cycle
  Transform u2;            // n-th root of u1
  long psi_power = 0;      // psi = t^j on rng phi, or 0 if carved greedily
};

/// Extends the length-2 pre-cycle phi to a length-3 pre-cycle phi ⊔ psi off
/// supp v (psi a restriction of a power of t when one fits, otherwise a
/// greedy transport), closes it to U1, takes an n-th root U2 and returns
/// V2 = v U2. OverlapError if supp phi meets supp v.
CostOnePair strengthen_to_cost1_pair(const Transform& v, const Transform& t, const PreCycle& phi,
                                     long n);

}  // namespace toti
