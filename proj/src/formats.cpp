#include "gbs/formats.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

using Tokens = std::vector<std::string>;

// All non-empty lines of the stream, comments stripped, tokenized.
std::vector<Tokens> read_lines(std::istream& in) {
  std::vector<Tokens> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Tokens toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

void expect_len(const Tokens& l, size_t n) {
  if (l.size() != n)
    fail("line '" + l[0] + "': expected " + std::to_string(n) + " tokens");
}

Int parse_int(const std::string& s) {
  size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i == s.size()) fail("bad integer '" + s + "'");
  for (; i < s.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(s[i])))
      fail("bad integer '" + s + "'");
  return Int(s);
}

ExtNat parse_size(const std::string& s) {
  if (s == "inf") return ExtNat::inf();
  Int n = parse_int(s);
  if (n < 1) fail("size must be >= 1, got '" + s + "'");
  return ExtNat(n);
}

std::string size_str(const ExtNat& n) {
  return n.finite() ? n.v.str() : "inf";
}

int vertex_by_name(const GbsGraph& h, const std::string& s) {
  auto it = h.vid.find(s);
  if (it == h.vid.end()) fail("unknown vertex '" + s + "'");
  return it->second;
}

// Resolves "name" to the positive edge and "~name" to its bar.
int edge_by_name(const GbsGraph& h, const std::string& s) {
  bool neg = !s.empty() && s[0] == '~';
  std::string base = neg ? s.substr(1) : s;
  auto it = h.eid.find(base);
  if (it == h.eid.end()) fail("unknown edge '" + s + "'");
  return neg ? h.g.ebar[it->second] : it->second;
}

int orbit_index(const std::string& s, size_t norbits) {
  Int i = parse_int(s);
  if (i < 0 || i >= Int(norbits)) fail("orbit index '" + s + "' out of range");
  return i.convert_to<int>();
}

}  // namespace

GbsGraph parse_graph(std::istream& in) {
  std::vector<Tokens> lines = read_lines(in);
  if (lines.empty() || lines[0] != Tokens{"gbs-graph"})
    fail("expected 'gbs-graph' header");
  GbsGraph h;
  try {
    for (size_t i = 1; i < lines.size(); ++i) {
      const Tokens& l = lines[i];
      if (l[0] == "vertex") {
        expect_len(l, 2);
        if (h.vid.count(l[1])) fail("duplicate vertex '" + l[1] + "'");
        h.add_vertex(l[1]);
      } else if (l[0] == "edge") {
        expect_len(l, 6);
        if (h.eid.count(l[1])) fail("duplicate edge '" + l[1] + "'");
        h.add_edge(l[1], vertex_by_name(h, l[2]), vertex_by_name(h, l[3]),
                   parse_int(l[4]), parse_int(l[5]));
      } else {
        fail("unknown directive '" + l[0] + "' in graph file");
      }
    }
  } catch (const DomainError& e) {
    fail(e.what());
  }
  if (h.g.nv == 0) fail("graph has no vertices");
  return h;
}

void write_graph(std::ostream& out, const GbsGraph& h) {
  out << "gbs-graph\n";
  for (int v = 0; v < h.g.nv; ++v) out << "vertex " << h.vname[v] << "\n";
  for (int e = 0; e < h.g.ne(); e += 2)
    out << "edge " << h.ename[e / 2] << " " << h.vname[h.g.esrc[e]] << " "
        << h.vname[h.g.etrg[e]] << " " << h.ksrc(e).str() << " "
        << h.ktrg(e).str() << "\n";
}

HGraph parse_hgraph(std::istream& in, const GbsGraph& h) {
  std::vector<Tokens> lines = read_lines(in);
  if (lines.empty() || lines[0] != Tokens{"hgraph"})
    fail("expected 'hgraph' header");
  HGraph hg;
  for (size_t i = 1; i < lines.size(); ++i) {
    const Tokens& l = lines[i];
    if (l[0] == "vertex") {
      expect_len(l, 3);
      hg.add_vertex(vertex_by_name(h, l[1]), parse_size(l[2]));
    } else if (l[0] == "edge") {
      expect_len(l, 4);
      int from = orbit_index(l[1], hg.g.nv);
      int to = orbit_index(l[2], hg.g.nv);
      int e = edge_by_name(h, l[3]);
      if (h.g.esrc[e] != hg.vtype[from] || h.g.etrg[e] != hg.vtype[to])
        fail("edge '" + l[3] + "' does not match the endpoint types");
      hg.add_edge(h, from, to, e);
    } else {
      fail("unknown directive '" + l[0] + "' in H-graph file");
    }
  }
  return hg;
}

void write_hgraph(std::ostream& out, const HGraph& hg, const GbsGraph& h) {
  out << "hgraph\n";
  for (int v = 0; v < hg.g.nv; ++v)
    out << "vertex " << h.vname[hg.vtype[v]] << " " << size_str(hg.vsize[v])
        << "\n";
  for (int e = 0; e < hg.g.ne(); e += 2)
    out << "edge " << hg.g.esrc[e] << " " << hg.g.etrg[e] << " "
        << h.edge_name(hg.etype[e]) << "\n";
}

Preaction parse_preaction(std::istream& in, const GbsGraph& h) {
  std::vector<Tokens> lines = read_lines(in);
  if (lines.empty() || lines[0] != Tokens{"preaction"})
    fail("expected 'preaction' header");

  SpanningTree tree;
  tree.in_tree.assign(h.g.ne(), false);
  bool tree_seen = false;
  std::vector<std::pair<int, ExtNat>> orbits;
  std::vector<Gluing> gluings;

  for (size_t i = 1; i < lines.size(); ++i) {
    const Tokens& l = lines[i];
    if (l[0] == "tree") {
      if (tree_seen) fail("duplicate tree line");
      tree_seen = true;
      for (size_t j = 1; j < l.size(); ++j) {
        int e = edge_by_name(h, l[j]);
        if (tree.in_tree[e]) fail("duplicate tree edge '" + l[j] + "'");
        tree.in_tree[e] = tree.in_tree[h.g.ebar[e]] = true;
      }
    } else if (l[0] == "orbit") {
      expect_len(l, 3);
      orbits.push_back({vertex_by_name(h, l[1]), parse_size(l[2])});
    } else if (l[0] == "gluing") {
      if (l.size() < 2) fail("gluing line needs a kind");
      Gluing g;
      size_t base;
      if (l[1] == "tree" || l[1] == "tau") {
        expect_len(l, 7);
        g.kind = l[1] == "tree" ? Gluing::TreeEdge : Gluing::Tau;
        g.e = edge_by_name(h, l[2]);
        if (!h.g.epos[g.e]) fail("gluing edge must be positive: '" + l[2] + "'");
        if ((g.kind == Gluing::TreeEdge) != tree.in_tree[g.e])
          fail("gluing kind disagrees with the spanning tree at '" + l[2] +
               "'");
        base = 3;
      } else if (l[1] == "pair") {
        expect_len(l, 6);
        g.kind = Gluing::PointPair;
        base = 2;
      } else {
        fail("unknown gluing kind '" + l[1] + "'");
      }
      g.oa = orbit_index(l[base], orbits.size());
      g.ua = parse_int(l[base + 1]);
      g.ob = orbit_index(l[base + 2], orbits.size());
      g.ub = parse_int(l[base + 3]);
      gluings.push_back(g);
    } else {
      fail("unknown directive '" + l[0] + "' in preaction file");
    }
  }

  // The tree edges must form a spanning tree of the ambient graph.
  int ntree = 0;
  std::vector<int> rep(h.g.nv);
  for (int v = 0; v < h.g.nv; ++v) rep[v] = v;
  auto find = [&](int v) {
    while (rep[v] != v) v = rep[v] = rep[rep[v]];
    return v;
  };
  for (int e = 0; e < h.g.ne(); e += 2) {
    if (!tree.in_tree[e]) continue;
    ++ntree;
    int a = find(h.g.esrc[e]), b = find(h.g.etrg[e]);
    if (a == b) fail("tree edges contain a cycle");
    rep[a] = b;
  }
  if (ntree != h.g.nv - 1) fail("tree edges do not span the graph");

  Preaction p(h, tree);
  try {
    for (const auto& [type, size] : orbits) p.add_orbit(type, size);
    for (const Gluing& g : gluings) p.add_gluing(g);
  } catch (const DomainError& e) {
    fail(e.what());
  }
  return p;
}

void write_preaction(std::ostream& out, const Preaction& p) {
  const GbsGraph& h = p.graph();
  out << "preaction\n";
  bool any = false;
  for (int e = 0; e < h.g.ne() && !any; e += 2) any = p.tree().contains(e);
  if (any) {
    out << "tree";
    for (int e = 0; e < h.g.ne(); e += 2)
      if (p.tree().contains(e)) out << " " << h.ename[e / 2];
    out << "\n";
  }
  for (const Orbit& o : p.orbits())
    out << "orbit " << h.vname[o.type] << " " << size_str(o.size) << "\n";
  for (const Gluing& g : p.gluings()) {
    out << "gluing ";
    if (g.kind == Gluing::PointPair)
      out << "pair";
    else
      out << (g.kind == Gluing::TreeEdge ? "tree " : "tau ")
          << h.ename[g.e / 2];
    out << " " << g.oa << " " << g.ua.str() << " " << g.ob << " "
        << g.ub.str() << "\n";
  }
}

GroupWord parse_group_word(std::istream& in, const GbsGraph& h) {
  std::vector<Tokens> lines = read_lines(in);
  if (lines.empty() || lines[0] != Tokens{"word"})
    fail("expected 'word' header");
  GroupWord w;
  for (size_t i = 1; i < lines.size(); ++i) {
    const Tokens& l = lines[i];
    if (l[0] == "v") {
      expect_len(l, 3);
      w.push_back(Letter::vpow(vertex_by_name(h, l[1]), parse_int(l[2])));
    } else if (l[0] == "t") {
      expect_len(l, 2);
      w.push_back(Letter::egen(edge_by_name(h, l[1])));
    } else {
      fail("unknown directive '" + l[0] + "' in word file");
    }
  }
  return w;
}

void write_group_word(std::ostream& out, const GroupWord& w,
                      const GbsGraph& h) {
  out << "word\n";
  for (const Letter& l : w) {
    if (l.kind == Letter::VertexPower)
      out << "v " << h.vname[l.id] << " " << l.exp.str() << "\n";
    else
      out << "t " << h.edge_name(l.id) << "\n";
  }
}

TypedWord parse_typed_word(std::istream& in, const GbsGraph& h) {
  std::vector<Tokens> lines = read_lines(in);
  if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "typed")
    fail("expected 'typed <vertex>' header");
  TypedWord w;
  w.base = vertex_by_name(h, lines[0][1]);
  for (size_t i = 1; i < lines.size(); ++i) {
    const Tokens& l = lines[i];
    if (l[0] == "pow") {
      expect_len(l, 2);
      if (i != 1) fail("'pow' must be the first line after the header");
      w.pw.push_back(parse_int(l[1]));
    } else if (l[0] == "step") {
      expect_len(l, 3);
      if (w.pw.empty()) fail("'step' before the initial 'pow'");
      w.path.push_back(edge_by_name(h, l[1]));
      w.pw.push_back(parse_int(l[2]));
    } else {
      fail("unknown directive '" + l[0] + "' in typed-word file");
    }
  }
  if (w.pw.empty()) fail("typed word is missing its initial 'pow'");
  if (w.src(h) != w.base)
    fail("typed word path does not start at the declared base");
  if (!well_formed(w, h)) fail("typed word path is not a path from its base");
  return w;
}

void write_typed_word(std::ostream& out, const TypedWord& w,
                      const GbsGraph& h) {
  out << "typed " << h.vname[w.src(h)] << "\n";
  out << "pow " << w.pw[0].str() << "\n";
  for (size_t i = 0; i < w.path.size(); ++i)
    out << "step " << h.edge_name(w.path[i]) << " " << w.pw[i + 1].str()
        << "\n";
}

namespace {

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace

GbsGraph load_graph(const std::string& path) {
  auto in = open_file(path);
  return parse_graph(in);
}
HGraph load_hgraph(const std::string& path, const GbsGraph& h) {
  auto in = open_file(path);
  return parse_hgraph(in, h);
}
Preaction load_preaction(const std::string& path, const GbsGraph& h) {
  auto in = open_file(path);
  return parse_preaction(in, h);
}
GroupWord load_group_word(const std::string& path, const GbsGraph& h) {
  auto in = open_file(path);
  return parse_group_word(in, h);
}
TypedWord load_typed_word(const std::string& path, const GbsGraph& h) {
  auto in = open_file(path);
  return parse_typed_word(in, h);
}

std::string dot_graph(const GbsGraph& h) {
  std::ostringstream out;
  out << "digraph gbs {\n";
  for (int v = 0; v < h.g.nv; ++v)
    out << "  n" << v << " [label=\"" << h.vname[v] << "\"];\n";
  for (int e = 0; e < h.g.ne(); e += 2)
    out << "  n" << h.g.esrc[e] << " -> n" << h.g.etrg[e] << " [label=\""
        << h.ename[e / 2] << " (" << h.ksrc(e).str() << ","
        << h.ktrg(e).str() << ")\"];\n";
  out << "}\n";
  return out.str();
}

std::string dot_hgraph(const HGraph& hg, const GbsGraph& h) {
  std::ostringstream out;
  out << "digraph hgraph {\n";
  for (int v = 0; v < hg.g.nv; ++v)
    out << "  n" << v << " [label=\"" << h.vname[hg.vtype[v]] << ","
        << (hg.vsize[v].finite() ? hg.vsize[v].v.str() : "inf") << "\"];\n";
  for (int e = 0; e < hg.g.ne(); e += 2)
    out << "  n" << hg.g.esrc[e] << " -> n" << hg.g.etrg[e] << " [label=\""
        << h.edge_name(hg.etype[e]) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace gbs
