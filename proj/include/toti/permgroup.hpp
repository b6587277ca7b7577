#pragma once

#include "toti/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace toti {

/// Permutation of {0, ..., degree-1}.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t degree);
  explicit Perm(std::vector<std::uint32_t> images);

  static Perm transposition(std::size_t degree, std::uint32_t a, std::uint32_t b);
  /// Cyclic permutation points[0] -> points[1] -> ... -> points[0].
  static Perm cycle(std::size_t degree, std::span<const std::uint32_t> points);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return images_[x]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  bool is_identity() const;
  Perm inverse() const;
  Perm pow(long k) const;
  std::vector<std::vector<std::uint32_t>> cycles() const;
  /// Smallest moved point, or degree() for the identity.
  std::uint32_t first_moved() const;

  /// (a * b)(x) = a(b(x)).
  friend Perm operator*(const Perm& a, const Perm& b);
  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

/// All elements of <gens> in sorted order, or nullopt once more than cap
/// elements have been found.
std::optional<std::vector<Perm>> closure(std::size_t degree, std::span<const Perm> gens,
                                         std::size_t cap);

/// Base and strong generating set built by the deterministic Schreier-Sims
/// algorithm. New base points are the least point moved by the sifted
/// residue, so identical generator lists give identical chains.
class StabilizerChain {
 public:
  StabilizerChain(std::size_t degree, std::span<const Perm> gens);

  bool contains(const Perm& p) const;
  BigInt order() const;
  std::vector<std::uint32_t> base() const;
  std::size_t degree() const { return degree_; }

 private:
  struct Level {
    std::uint32_t point;
    std::vector<Perm> gens;
    std::vector<std::uint32_t> orbit;
    std::vector<std::optional<Perm>> transversal;
  };

  struct SiftResult {
    Perm residue;
    std::size_t level;
  };

  SiftResult sift(Perm g, std::size_t from) const;
  void rebuild_orbit(std::size_t i);
  void run();

  std::size_t degree_;
  std::vector<Level> levels_;
};

bool is_member(const StabilizerChain& g, const Perm& p);

/// Sufficient test for targets ⊆ <gens>. Transpositions obtainable as powers
/// of generators seed a point partition, which is then closed under
/// conjugation by the generators; <gens> contains Sym(C) for every class C.
/// Returns true only if every target preserves every class.
bool transposition_classes_cover(std::size_t degree, std::span<const Perm> gens,
                                 std::span<const Perm> targets);

}  // namespace toti
