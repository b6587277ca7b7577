#pragma once

#include "toti/piecewise.hpp"

#include <cstddef>
#include <vector>

namespace toti {

/// Partition of [0,1) into intervals ("atoms") that a transformation maps
/// onto one another by translation.
struct AtomDecomposition {
  std::vector<Rat> cuts;            // 0 = cuts[0] < ... < cuts.back() = 1
  std::vector<std::size_t> image;   // atom i is translated onto atom image[i]

  std::size_t size() const { return image.size(); }
  Interval atom(std::size_t i) const { return {cuts[i], cuts[i + 1]}; }
  /// Cycles of the atom permutation, each listed from its least atom, in
  /// increasing order of that atom.
  std::vector<std::vector<std::size_t>> cycles() const;
  /// Least common multiple of the cycle lengths.
  BigInt order() const;
};

/// Coarsest refinement of the breakpoints of t (plus extra_cuts) that t
/// permutes. Every total rational piecewise translation admits one: all
/// generated points share the common denominator of the input data.
AtomDecomposition atom_decomposition(const Transform& t, const std::vector<Rat>& extra_cuts = {});

}  // namespace toti
