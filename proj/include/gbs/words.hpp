#pragma once
#include <string>
#include <vector>

#include "gbs/core.hpp"

namespace gbs {

// a_v^k (VertexPower) or t_e (EdgeGen, only for e outside the tree).
struct Letter {
  enum Kind { VertexPower, EdgeGen } kind;
  int id;       // vertex id or edge id
  Int exp = 1;  // only for VertexPower

  static Letter vpow(int v, const Int& k) { return {VertexPower, v, k}; }
  static Letter egen(int e) { return {EdgeGen, e, 1}; }
  bool operator==(const Letter& o) const {
    return kind == o.kind && id == o.id &&
           (kind == EdgeGen || exp == o.exp);
  }
};

using GroupWord = std::vector<Letter>;

GroupWord inverse(const GroupWord& w, const GbsGraph& h);
GroupWord concat(GroupWord a, const GroupWord& b);

// Word of type c: path c = (e_1..e_r) and powers
// (a_{src(e_1)}^{k_1}, ..., a_{trg(e_r)}^{k_{r+1}}).
struct TypedWord {
  EdgePath path;
  std::vector<Int> pw;  // size path.size() + 1
  int base = -1;        // source vertex; required when path is empty

  int src(const GbsGraph& h) const {
    return path.empty() ? base : h.g.esrc[path.front()];
  }
  int trg(const GbsGraph& h) const {
    return path.empty() ? base : h.g.etrg[path.back()];
  }
  bool operator==(const TypedWord& o) const {
    return path == o.path && pw == o.pw && (!path.empty() || base == o.base);
  }
};

bool well_formed(const TypedWord& w, const GbsGraph& h);

// Reduced: r = 0 with k_1 ≠ 0, or whenever e_{i+1} = bar(e_i), k_{e_i,trg}
// does not divide k_{i+1}.
bool is_reduced_typed(const TypedWord& w, const GbsGraph& h);

// Concatenation: paths joined, boundary powers merged by exponent addition.
TypedWord concat_typed(const TypedWord& a, const TypedWord& b,
                       const GbsGraph& h);

// |c,μ| with s_i = t_{e_i} for e_i ∉ T and s_i = 1 otherwise; zero powers
// elided.
GroupWord to_group_word(const TypedWord& w, const GbsGraph& h,
                        const SpanningTree& t);

// Prefixes of length 1..r-1 (keeping the following boundary power).
std::vector<TypedWord> subwords(const TypedWord& w);

std::string word_str(const GroupWord& w, const GbsGraph& h);
std::string typed_str(const TypedWord& w, const GbsGraph& h);

}  // namespace gbs
