#include "toti/interval_set.hpp"

#include "toti/errors.hpp"

#include <algorithm>

namespace toti {

IntervalSet::IntervalSet(std::initializer_list<Interval> parts) : parts_(parts) {
  normalize();
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
  normalize();
}

void IntervalSet::normalize() {
  std::erase_if(parts_, [](const Interval& iv) { return iv.empty(); });
  std::sort(parts_.begin(), parts_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  merged.reserve(parts_.size());
  for (auto& iv : parts_) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      if (iv.hi > merged.back().hi)
        merged.back().hi = iv.hi;
    } else {
      merged.push_back(std::move(iv));
    }
  }
  parts_ = std::move(merged);
}

Rat IntervalSet::measure() const {
  Rat total = 0;
  for (const auto& iv : parts_)
    total += iv.length();
  return total;
}

bool IntervalSet::contains(const Rat& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rat& v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin())
    return false;
  return std::prev(it)->contains(x);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const auto& a = parts_[i];
    const auto& b = other.parts_[j];
    Rat lo = std::max(a.lo, b.lo);
    Rat hi = std::min(a.hi, b.hi);
    if (lo < hi)
      out.push_back({lo, hi});
    if (a.hi < b.hi)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto& a : parts_) {
    Rat cursor = a.lo;
    while (j < other.parts_.size() && other.parts_[j].hi <= cursor)
      ++j;
    std::size_t k = j;
    while (k < other.parts_.size() && other.parts_[k].lo < a.hi) {
      const auto& b = other.parts_[k];
      if (b.lo > cursor)
        out.push_back({cursor, b.lo});
      if (b.hi > cursor)
        cursor = b.hi;
      if (cursor >= a.hi)
        break;
      ++k;
    }
    if (cursor < a.hi)
      out.push_back({cursor, a.hi});
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
  return unit().subtract(*this);
}

IntervalSet IntervalSet::translate(const Rat& offset) const {
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const auto& iv : parts_)
    out.push_back({iv.lo + offset, iv.hi + offset});
  return IntervalSet(std::move(out));
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  return subtract(other).empty();
}

bool IntervalSet::disjoint_from(const IntervalSet& other) const {
  return intersect(other).empty();
}

IntervalSet IntervalSet::carve(const Rat& amount) const {
  if (amount < 0)
    throw std::invalid_argument("carve: negative amount");
  Rat need = amount;
  std::vector<Interval> out;
  for (const auto& iv : parts_) {
    if (need == 0)
      break;
    if (iv.length() <= need) {
      out.push_back(iv);
      need -= iv.length();
    } else {
      out.push_back({iv.lo, iv.lo + need});
      need = 0;
    }
  }
  if (need > 0)
    throw InsufficientRoom("carve: need " + to_string(amount) + " but only " +
                           to_string(measure()) + " available (deficit " +
                           to_string(need) + ")");
  return IntervalSet(std::move(out));
}

std::string IntervalSet::str() const {
  if (parts_.empty())
    return "{}";
  std::string s;
  for (const auto& iv : parts_) {
    if (!s.empty())
      s += " u ";
    s += "[" + to_string(iv.lo) + "," + to_string(iv.hi) + ")";
  }
  return s;
}

}  // namespace toti
