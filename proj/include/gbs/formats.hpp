#pragma once
#include <iosfwd>
#include <string>

#include "gbs/hgraph.hpp"

namespace gbs {

// Line-oriented text formats. Lines are sequences of whitespace-separated
// tokens; '#' starts a comment and blank lines are skipped. Each format
// opens with a fixed header token. Sizes are decimal integers or "inf";
// negative edges of the ambient graph are written "~name".
//
// graph:        gbs-graph / vertex <name> / edge <name> <src> <trg> <k> <l>
// H-graph:      hgraph / vertex <vtype> <size> / edge <from> <to> <ename>
// preaction:    preaction / tree <ename>... / orbit <vtype> <size> /
//               gluing tree|tau <ename> <oa> <ua> <ob> <ub> /
//               gluing pair <oa> <ua> <ob> <ub>
// group word:   word / v <name> <exp> / t <ename>
// typed word:   typed <vertex> / pow <k> / step <ename> <k>
//
// Vertices of an H-graph and orbits of a preaction are numbered implicitly
// in order of appearance. Parsers throw ParseError; every writer's output
// re-parses to an equal value.

GbsGraph parse_graph(std::istream& in);
void write_graph(std::ostream& out, const GbsGraph& h);

HGraph parse_hgraph(std::istream& in, const GbsGraph& h);
void write_hgraph(std::ostream& out, const HGraph& hg, const GbsGraph& h);

Preaction parse_preaction(std::istream& in, const GbsGraph& h);
void write_preaction(std::ostream& out, const Preaction& p);

GroupWord parse_group_word(std::istream& in, const GbsGraph& h);
void write_group_word(std::ostream& out, const GroupWord& w,
                      const GbsGraph& h);

TypedWord parse_typed_word(std::istream& in, const GbsGraph& h);
void write_typed_word(std::ostream& out, const TypedWord& w,
                      const GbsGraph& h);

// Convenience wrappers reading a whole file (ParseError when unreadable).
GbsGraph load_graph(const std::string& path);
HGraph load_hgraph(const std::string& path, const GbsGraph& h);
Preaction load_preaction(const std::string& path, const GbsGraph& h);
GroupWord load_group_word(const std::string& path, const GbsGraph& h);
TypedWord load_typed_word(const std::string& path, const GbsGraph& h);

// DOT export; nodes and edges are emitted in id order.
std::string dot_graph(const GbsGraph& h);
std::string dot_hgraph(const HGraph& hg, const GbsGraph& h);

}  // namespace gbs
