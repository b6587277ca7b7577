#pragma once
// HLT coset enumeration for a subgroup H of the free group F_r. With no
// relators the coset table closes exactly when H has finite index; otherwise
// the definition budget runs out and the answer is Inconclusive.

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

namespace oracle {

struct CosetResult {
  bool inconclusive = true;
  std::size_t index = 0;
};

class CosetTable {
 public:
  explicit CosetTable(int rank) : cols_(2 * rank) { new_coset(); }

  CosetResult enumerate(const std::vector<std::vector<int>>& gens, std::size_t budget) {
    for (const auto& w : gens)
      if (!scan_and_fill(0, w, budget))
        return {};
    // Fill remaining holes in coset order; with no relators nothing ever
    // closes them again, so any hole means the budget will be exhausted.
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (!alive(c))
        continue;
      for (int col = 0; col < cols_; ++col)
        if (table_[c][col] < 0) {
          if (live_count() >= budget)
            return {};
          define(c, col);
        }
    }
    return {false, live_count()};
  }

 private:
  static int inv_col(int col) { return col ^ 1; }
  static int col_of(int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; }

  std::size_t new_coset() {
    table_.emplace_back(cols_, -1);
    parent_.push_back(table_.size() - 1);
    return table_.size() - 1;
  }
  bool alive(std::size_t c) const { return parent_[c] == c; }
  std::size_t live_count() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < table_.size(); ++c)
      n += alive(c);
    return n;
  }
  std::size_t rep(std::size_t c) {
    while (parent_[c] != c)
      c = parent_[c] = parent_[parent_[c]];
    return c;
  }
  void define(std::size_t c, int col) {
    std::size_t d = new_coset();
    table_[c][col] = static_cast<long>(d);
    table_[d][inv_col(col)] = static_cast<long>(c);
  }

  // Scans w at c, defining cosets as needed, and records the closing
  // deduction or coincidence.
  bool scan_and_fill(std::size_t c, const std::vector<int>& w, std::size_t budget) {
    if (w.empty())
      return true;
    std::size_t f = rep(c);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      int col = col_of(w[i]);
      if (table_[f][col] < 0) {
        if (live_count() >= budget)
          return false;
        define(f, col);
      }
      f = rep(static_cast<std::size_t>(table_[f][col]));
    }
    join(f, col_of(w.back()), rep(c));
    return true;
  }

  // Asserts f --col--> t.
  void join(std::size_t f, int col, std::size_t t) {
    f = rep(f);
    t = rep(t);
    if (table_[f][col] < 0 && table_[t][inv_col(col)] < 0) {
      table_[f][col] = static_cast<long>(t);
      table_[t][inv_col(col)] = static_cast<long>(f);
      return;
    }
    if (table_[f][col] >= 0)
      coincidence(rep(static_cast<std::size_t>(table_[f][col])), t);
    else
      coincidence(rep(static_cast<std::size_t>(table_[t][inv_col(col)])), f);
  }

  // Merges rows; stale entries still name dead cosets and are read through rep.
  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::pair<std::size_t, std::size_t>> queue{{a, b}};
    while (!queue.empty()) {
      auto [x, y] = queue.back();
      queue.pop_back();
      x = rep(x);
      y = rep(y);
      if (x == y)
        continue;
      if (x > y)
        std::swap(x, y);
      parent_[y] = x;
      for (int col = 0; col < cols_; ++col) {
        long ty = table_[y][col];
        if (ty < 0)
          continue;
        if (table_[x][col] < 0)
          table_[x][col] = ty;
        else
          queue.emplace_back(static_cast<std::size_t>(table_[x][col]), static_cast<std::size_t>(ty));
      }
    }
    for (std::size_t c = 0; c < table_.size(); ++c)
      if (alive(c))
        for (auto& e : table_[c])
          if (e >= 0)
            e = static_cast<long>(rep(static_cast<std::size_t>(e)));
  }

  int cols_;
  std::vector<std::vector<long>> table_;
  std::vector<std::size_t> parent_;
};

inline CosetResult todd_coxeter_index(int rank, const std::vector<std::vector<int>>& gens,
                                      std::size_t budget = 2000) {
  CosetTable t(rank);
  return t.enumerate(gens, budget);
}

}  // namespace oracle
