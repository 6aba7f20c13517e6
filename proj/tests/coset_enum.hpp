#pragma once
// Small-index coset enumeration, used as an independent oracle in tests.
// Generators are numbered 1..ng; a word is a sequence of nonzero ints where
// -g denotes the inverse of generator g. The enumeration is a plain
// HLT-style systematic scan with coincidence processing plus explicit
// closing of missing table entries; it terminates whenever the subgroup has
// finite index (use only with small expected index).
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

class CosetTable {
 public:
  explicit CosetTable(int ng) : ng_(ng) { add(); }

  int enumerate(const std::vector<std::vector<int>>& relators,
                const std::vector<std::vector<int>>& subgens,
                int max_cosets = 100000) {
    max_ = max_cosets;
    for (const auto& w : subgens) scan_and_fill(0, w);
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t a = 0; a < tab_.size(); ++a) {
        if (dead(static_cast<int>(a))) continue;
        for (const auto& w : relators) {
          scan_and_fill(static_cast<int>(a), w);
          if (dead(static_cast<int>(a))) break;
        }
      }
      for (size_t a = 0; a < tab_.size() && !changed; ++a) {
        if (dead(static_cast<int>(a))) continue;
        for (int c = 0; c < 2 * ng_ && !changed; ++c) {
          if (tab_[a][c] >= 0) continue;
          std::vector<std::pair<int, int>> co;
          set(static_cast<int>(a), c, add(), co);
          merge_all(co);
          changed = true;
        }
      }
    }
    int live = 0;
    for (size_t a = 0; a < tab_.size(); ++a)
      if (!dead(static_cast<int>(a))) ++live;
    return live;
  }

 private:
  int ng_;
  int max_ = 100000;
  std::vector<std::vector<int>> tab_;
  std::vector<int> rep_;

  static int col(int g) { return g > 0 ? 2 * (g - 1) : 2 * (-g - 1) + 1; }
  bool dead(int a) const { return rep_[a] != a; }
  int find(int a) {
    while (rep_[a] != a) a = rep_[a] = rep_[rep_[a]];
    return a;
  }
  int add() {
    if (static_cast<int>(tab_.size()) >= max_)
      throw std::runtime_error("coset enumeration overflow");
    tab_.push_back(std::vector<int>(2 * ng_, -1));
    rep_.push_back(static_cast<int>(tab_.size()) - 1);
    return static_cast<int>(tab_.size()) - 1;
  }

  void set(int a, int c, int b, std::vector<std::pair<int, int>>& coinc) {
    a = find(a);
    b = find(b);
    int cur = tab_[a][c];
    if (cur >= 0) {
      if (find(cur) != b) coinc.push_back({cur, b});
    } else {
      tab_[a][c] = b;
    }
    cur = tab_[b][c ^ 1];
    if (cur >= 0) {
      if (find(cur) != a) coinc.push_back({cur, a});
    } else {
      tab_[b][c ^ 1] = a;
    }
  }

  void merge_all(std::vector<std::pair<int, int>>& coinc) {
    while (!coinc.empty()) {
      auto [x, y] = coinc.back();
      coinc.pop_back();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      rep_[y] = x;
      for (int c = 0; c < 2 * ng_; ++c) {
        int t = tab_[y][c];
        if (t < 0) continue;
        tab_[y][c] = -1;
        set(x, c, find(t), coinc);
      }
    }
  }

  // Trace the cyclic relation a·w = a, filling gaps; restarts after any
  // structural change so stale ids never leak.
  void scan_and_fill(int a, const std::vector<int>& w) {
    while (true) {
      int start = find(a);
      int fwd = start;
      size_t i = 0, j = w.size();
      while (i < j && tab_[fwd][col(w[i])] >= 0)
        fwd = find(tab_[fwd][col(w[i++])]);
      std::vector<std::pair<int, int>> co;
      if (i == j) {
        if (fwd != start) {
          co.push_back({fwd, start});
          merge_all(co);
        }
        return;
      }
      int bwd = start;
      while (j > i + 1 && tab_[bwd][col(-w[j - 1])] >= 0)
        bwd = find(tab_[bwd][col(-w[--j])]);
      if (j == i + 1) {
        set(fwd, col(w[i]), bwd, co);
        merge_all(co);
        continue;  // re-verify full closure
      }
      set(fwd, col(w[i]), add(), co);
      merge_all(co);
    }
  }
};

}  // namespace oracle
