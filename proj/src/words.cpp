#include "gbs/words.hpp"

#include <sstream>

#include "gbs/errors.hpp"

namespace gbs {

GroupWord inverse(const GroupWord& w, const GbsGraph& h) {
  GroupWord out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->kind == Letter::VertexPower)
      out.push_back(Letter::vpow(it->id, -it->exp));
    else
      out.push_back(Letter::egen(h.g.ebar[it->id]));  // t_e^{-1} = t_{ē}
  }
  return out;
}

GroupWord concat(GroupWord a, const GroupWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool well_formed(const TypedWord& w, const GbsGraph& h) {
  if (w.pw.size() != w.path.size() + 1) return false;
  if (w.path.empty() && (w.base < 0 || w.base >= h.g.nv)) return false;
  for (size_t i = 0; i + 1 < w.path.size(); ++i)
    if (h.g.etrg[w.path[i]] != h.g.esrc[w.path[i + 1]]) return false;
  return true;
}

bool is_reduced_typed(const TypedWord& w, const GbsGraph& h) {
  if (!well_formed(w, h)) throw DomainError("is_reduced_typed: malformed word");
  if (w.path.empty()) return w.pw[0] != 0;
  for (size_t i = 0; i + 1 < w.path.size(); ++i) {
    if (w.path[i + 1] != h.g.ebar[w.path[i]]) continue;
    Int kt = h.ktrg(w.path[i]);
    if (w.pw[i + 1] % kt == 0) return false;
  }
  return true;
}

TypedWord concat_typed(const TypedWord& a, const TypedWord& b,
                       const GbsGraph& h) {
  if (!well_formed(a, h) || !well_formed(b, h))
    throw DomainError("concat_typed: malformed word");
  if (a.trg(h) != b.src(h))
    throw DomainError("concat_typed: endpoint mismatch");
  TypedWord out;
  out.base = a.src(h);
  out.path = a.path;
  out.path.insert(out.path.end(), b.path.begin(), b.path.end());
  out.pw = a.pw;
  out.pw.back() += b.pw.front();
  out.pw.insert(out.pw.end(), b.pw.begin() + 1, b.pw.end());
  return out;
}

GroupWord to_group_word(const TypedWord& w, const GbsGraph& h,
                        const SpanningTree& t) {
  if (!well_formed(w, h)) throw DomainError("to_group_word: malformed word");
  GroupWord out;
  auto push_pow = [&](int v, const Int& k) {
    if (k != 0) out.push_back(Letter::vpow(v, k));
  };
  for (size_t i = 0; i < w.path.size(); ++i) {
    push_pow(h.g.esrc[w.path[i]], w.pw[i]);
    if (!t.contains(w.path[i])) out.push_back(Letter::egen(w.path[i]));
  }
  push_pow(w.trg(h), w.pw.back());
  return out;
}

std::vector<TypedWord> subwords(const TypedWord& w) {
  std::vector<TypedWord> out;
  if (w.path.size() < 2) return out;
  for (size_t i = 1; i < w.path.size(); ++i) {
    TypedWord s;
    s.path.assign(w.path.begin(), w.path.begin() + i);
    s.pw.assign(w.pw.begin(), w.pw.begin() + i + 1);
    out.push_back(s);
  }
  return out;
}

std::string word_str(const GroupWord& w, const GbsGraph& h) {
  std::ostringstream os;
  bool first = true;
  for (const Letter& l : w) {
    if (!first) os << ' ';
    first = false;
    if (l.kind == Letter::VertexPower)
      os << "a[" << h.vname[l.id] << "]^" << l.exp;
    else
      os << "t[" << h.edge_name(l.id) << "]";
  }
  if (first) os << "1";
  return os.str();
}

std::string typed_str(const TypedWord& w, const GbsGraph& h) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < w.path.size(); ++i)
    os << (i ? "," : "") << h.edge_name(w.path[i]);
  os << " | ";
  for (size_t i = 0; i < w.pw.size(); ++i) os << (i ? "," : "") << w.pw[i];
  os << ')';
  return os.str();
}

}  // namespace gbs
