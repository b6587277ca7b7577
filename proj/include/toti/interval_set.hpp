#pragma once

#include "toti/rational.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace toti {

/// Half-open interval [lo, hi).
struct Interval {
  Rat lo;
  Rat hi;

  Rat length() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
  bool contains(const Rat& x) const { return lo <= x && x < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of half-open intervals inside [0,1), kept sorted, disjoint
/// and maximally merged so that equal sets have equal representations.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts);
  explicit IntervalSet(std::vector<Interval> parts);

  static IntervalSet unit() { return IntervalSet{{Rat(0), Rat(1)}}; }
  static IntervalSet of(const Rat& lo, const Rat& hi) { return IntervalSet{{lo, hi}}; }

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }

  Rat measure() const;
  bool contains(const Rat& x) const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;
  /// Complement inside [0,1).
  IntervalSet complement() const;
  IntervalSet translate(const Rat& offset) const;

  bool subset_of(const IntervalSet& other) const;
  bool disjoint_from(const IntervalSet& other) const;

  /// Takes the leftmost sub-union of the given measure. Returns the carved
  /// part; throws InsufficientRoom if the set is too small.
  IntervalSet carve(const Rat& amount) const;

  std::string str() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

}  // namespace toti
