// Command-line front end for the GBS library: parses graph / preaction /
// H-graph / word files and dispatches to the library operations. Exit codes:
// 0 success, 1 domain error (one machine-parsable line on stderr), 2 parse
// or usage error.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gbs/arith.hpp"
#include "gbs/errors.hpp"
#include "gbs/formats.hpp"
#include "gbs/kernel.hpp"
#include "gbs/merge.hpp"

using namespace gbs;

namespace {

ExtNat parse_size_arg(const std::string& s) {
  if (s == "inf") return ExtNat::inf();
  try {
    Int n(s);
    if (n < 1) throw DomainError("size must be >= 1: '" + s + "'");
    return ExtNat(n);
  } catch (const std::runtime_error&) {
    throw ParseError("bad size '" + s + "'");
  }
}

Point point_arg(const std::vector<std::string>& kv) {
  try {
    return {std::stoi(kv.at(0)), Int(kv.at(1))};
  } catch (const std::exception&) {
    throw ParseError("bad point '" + kv.at(0) + " " + kv.at(1) + "'");
  }
}

int vertex_arg(const GbsGraph& h, const std::string& s) {
  auto it = h.vid.find(s);
  if (it == h.vid.end()) throw DomainError("unknown vertex '" + s + "'");
  return it->second;
}

int edge_arg(const GbsGraph& h, const std::string& s) {
  bool neg = !s.empty() && s[0] == '~';
  auto it = h.eid.find(neg ? s.substr(1) : s);
  if (it == h.eid.end()) throw DomainError("unknown edge '" + s + "'");
  return neg ? h.g.ebar[it->second] : it->second;
}

std::string size_str(const ExtNat& n) {
  return n.finite() ? n.v.str() : "inf";
}

std::string class_str(const GroupClass& c) {
  switch (c.kind) {
    case GroupClass::AmenableBS1n:
      return "AmenableBS1n n=" + c.n.str();
    case GroupClass::UnimodularNonAmenable:
      return "UnimodularNonAmenable";
    case GroupClass::NonUnimodularNonAmenable:
      return "NonUnimodularNonAmenable";
  }
  return "?";
}

// Name of Schreier generator g (vertex generators first, then non-tree edge
// generators in positive-edge order), matching the ball labeling.
std::string gen_name(const GbsGraph& h, const SpanningTree& t, int g) {
  if (g < h.g.nv) return "a_" + h.vname[g];
  int j = g - h.g.nv;
  for (int e = 0; e < h.g.ne(); e += 2)
    if (!t.contains(e) && j-- == 0) return "t_" + h.ename[e / 2];
  return "?";
}

void print_ball(const SchreierBall& b, const GbsGraph& h,
                const SpanningTree& t, bool dot) {
  if (dot) {
    std::cout << "digraph ball {\n";
    for (size_t v = 0; v < b.adj.size(); ++v)
      std::cout << "  n" << v << " [label=\"" << v << " (d=" << b.dist[v]
                << ")\"];\n";
    for (size_t v = 0; v < b.adj.size(); ++v)
      for (const auto& [lbl, w] : b.adj[v])
        if (lbl % 2 == 0)
          std::cout << "  n" << v << " -> n" << w << " [label=\""
                    << gen_name(h, t, lbl / 2) << "\"];\n";
    std::cout << "}\n";
    return;
  }
  std::cout << "radius=" << b.radius << "\n";
  for (size_t v = 0; v < b.adj.size(); ++v)
    std::cout << "vertex " << v << " " << b.dist[v] << "\n";
  for (size_t v = 0; v < b.adj.size(); ++v)
    for (const auto& [lbl, w] : b.adj[v])
      if (lbl % 2 == 0)
        std::cout << "arc " << v << " " << gen_name(h, t, lbl / 2) << " " << w
                  << "\n";
}

void emit_hgraph(const HGraph& hg, const GbsGraph& h, bool dot) {
  if (dot)
    std::cout << dot_hgraph(hg, h);
  else
    write_hgraph(std::cout, hg, h);
}

int run(int argc, char** argv) {
  CLI::App app{"Computations with generalized Baumslag-Solitar groups"};
  app.require_subcommand(1);

  // phenotype GRAPH VERTEX N
  std::string g_path, arg_vertex, arg_size, hg_path, pre_path;
  bool dot = false;
  auto* ph = app.add_subcommand("phenotype", "Phenotype Ph_{H,v}(N)");
  ph->add_option("graph", g_path)->required();
  ph->add_option("vertex", arg_vertex)->required();
  ph->add_option("N", arg_size)->required();
  ph->callback([&] {
    GbsGraph h = load_graph(g_path);
    ExtNat ph_val = phenotype(h, vertex_arg(h, arg_vertex),
                              parse_size_arg(arg_size));
    std::cout << "Ph=" << size_str(ph_val) << "\n";
  });

  auto* cl = app.add_subcommand("classify", "Group classification");
  cl->add_option("graph", g_path)->required();
  cl->callback([&] {
    GbsGraph h = load_graph(g_path);
    if (!is_reduced(h)) throw DomainError("graph is not reduced");
    std::cout << class_str(classify(h)) << "\n";
  });

  auto* vg = app.add_subcommand("validate-graph", "Check a GBS graph file");
  vg->add_option("graph", g_path)->required();
  vg->add_flag("--dot", dot, "Emit DOT instead of a report");
  vg->callback([&] {
    GbsGraph h = load_graph(g_path);
    Violation v = validate_graph(h.g);
    if (!v.ok) throw DomainError(v.what);
    if (dot) {
      std::cout << dot_graph(h);
      return;
    }
    std::cout << "ok\n";
    std::cout << "connected=" << (h.connected() ? "yes" : "no") << "\n";
    std::cout << "reduced=" << (is_reduced(h) ? "yes" : "no") << "\n";
    std::cout << "unimodular=" << (is_unimodular(h) ? "yes" : "no") << "\n";
  });

  auto* vp = app.add_subcommand("validate-preaction",
                                "Check the five preaction conditions");
  vp->add_option("graph", g_path)->required();
  vp->add_option("preaction", pre_path)->required();
  vp->callback([&] {
    GbsGraph h = load_graph(g_path);
    Preaction p = load_preaction(pre_path, h);
    PreactionReport r = validate(p);
    if (!r.ok)
      throw DomainError("condition-" + std::to_string(r.condition) + ": " +
                        r.what);
    std::cout << "ok\n";
    std::cout << "transitive=" << (is_transitive(p) ? "yes" : "no") << "\n";
    std::cout << "saturated=" << (is_saturated_preaction(p) ? "yes" : "no")
              << "\n";
  });

  auto* ex = app.add_subcommand("extract", "H-graph of a preaction");
  ex->add_option("graph", g_path)->required();
  ex->add_option("preaction", pre_path)->required();
  ex->add_flag("--dot", dot);
  ex->callback([&] {
    GbsGraph h = load_graph(g_path);
    Preaction p = load_preaction(pre_path, h);
    emit_hgraph(extract(p).hg, h, dot);
  });

  auto* vh = app.add_subcommand("validate-hgraph", "Check an H-graph file");
  vh->add_option("graph", g_path)->required();
  vh->add_option("hgraph", hg_path)->required();
  vh->callback([&] {
    GbsGraph h = load_graph(g_path);
    HGraph hg = load_hgraph(hg_path, h);
    Violation v = validate_hgraph(hg, h);
    if (!v.ok)
      throw DomainError(v.what + " witness=" + std::to_string(v.witness));
    std::cout << "ok\n";
    std::cout << "connected=" << (hgraph_connected(hg) ? "yes" : "no") << "\n";
    std::cout << "saturated=" << (is_saturated_hgraph(hg, h) ? "yes" : "no")
              << "\n";
    std::cout << "betti=" << betti_number(hg.g) << "\n";
  });

  int depth = 1;
  auto* sa = app.add_subcommand("saturate",
                                "Fill saturation deficits to a given depth");
  sa->add_option("graph", g_path)->required();
  sa->add_option("hgraph", hg_path)->required();
  sa->add_option("depth", depth)->required()->check(CLI::NonNegativeNumber);
  sa->add_flag("--dot", dot);
  sa->callback([&] {
    GbsGraph h = load_graph(g_path);
    HGraph hg = load_hgraph(hg_path, h);
    emit_hgraph(complete_to_depth(hg, h, depth), h, dot);
  });

  std::string arg_root;
  auto* re = app.add_subcommand("realize",
                                "Preaction realizing a finite H-graph");
  re->add_option("graph", g_path)->required();
  re->add_option("hgraph", hg_path)->required();
  re->add_option("--root", arg_root, "Spanning-tree root (default first)");
  re->callback([&] {
    GbsGraph h = load_graph(g_path);
    HGraph hg = load_hgraph(hg_path, h);
    int root = arg_root.empty() ? 0 : vertex_arg(h, arg_root);
    SpanningTree t = spanning_tree(h, root);
    write_preaction(std::cout, realize_finite(hg, h, t));
  });

  std::string arg_edge;
  auto* ga = app.add_subcommand("gadget",
                                "Non-saturated H-graph witness at an edge");
  ga->add_option("graph", g_path)->required();
  ga->add_option("edge", arg_edge)->required();
  ga->add_option("N", arg_size)->required();
  ga->add_flag("--dot", dot);
  ga->callback([&] {
    GbsGraph h = load_graph(g_path);
    emit_hgraph(gadget(h, edge_arg(h, arg_edge), parse_size_arg(arg_size)), h,
                dot);
  });

  std::string beta_path, m_path, mprime_path;
  std::vector<std::string> arg_x0, arg_y0;
  auto* me = app.add_subcommand("merge",
                                "Phenotype-preserving merge of two pointed "
                                "preactions");
  me->add_option("graph", g_path)->required();
  me->add_option("alpha", pre_path)->required();
  me->add_option("beta", beta_path)->required();
  me->add_option("--e0", arg_edge, "Liaison edge")->required();
  me->add_option("--x0", arg_x0, "Base point in alpha: ORBIT OFFSET")
      ->expected(2)
      ->required();
  me->add_option("--y0", arg_y0, "Base point in beta: ORBIT OFFSET")
      ->expected(2)
      ->required();
  me->add_option("--m", m_path, "Typed word positioning x0 (default empty)");
  me->add_option("--mprime", mprime_path,
                 "Typed word positioning y0 (default same as --m)");
  me->callback([&] {
    GbsGraph h = load_graph(g_path);
    Preaction alpha = load_preaction(pre_path, h);
    Preaction beta = load_preaction(beta_path, h);
    if (alpha.tree().in_tree != beta.tree().in_tree)
      throw DomainError("alpha and beta use different spanning trees");
    MergeRequest req;
    req.h = &h;
    req.t = alpha.tree();
    req.e0 = edge_arg(h, arg_edge);
    TypedWord empty{{}, {Int(0)}, h.g.esrc[req.e0]};
    req.m = m_path.empty() ? empty : load_typed_word(m_path, h);
    req.mprime = mprime_path.empty()
                     ? (m_path.empty() ? empty : req.m)
                     : load_typed_word(mprime_path, h);
    Point x0 = point_arg(arg_x0);
    Point y0 = point_arg(arg_y0);
    req.pairs.push_back({&alpha, &beta, x0, y0});
    MergeResult res = merge(req);
    std::cout << "# beta-base " << res.beta_base[0] << "\n";
    write_preaction(std::cout, res.gammas[0]);
    write_group_word(std::cout, res.word, h);
  });

  std::vector<std::string> arg_pt;
  int radius = 1;
  auto* ba = app.add_subcommand("ball", "Schreier ball around a point");
  ba->add_option("graph", g_path)->required();
  ba->add_option("preaction", pre_path)->required();
  ba->add_option("--at", arg_pt, "Base point: ORBIT OFFSET")
      ->expected(2)
      ->required();
  ba->add_option("--radius", radius)->required()->check(
      CLI::NonNegativeNumber);
  ba->add_flag("--dot", dot);
  ba->callback([&] {
    GbsGraph h = load_graph(g_path);
    Preaction p = load_preaction(pre_path, h);
    Point x = point_arg(arg_pt);
    print_ball(schreier_ball({p, x}, radius), h, p.tree(), dot);
  });

  std::vector<std::string> arg_balls;
  auto* wi = app.add_subcommand(
      "witness", "Common conjugator aligning phenotype-matched ball pairs");
  wi->add_option("graph", g_path)->required();
  wi->add_option("--radius", radius)->required()->check(
      CLI::NonNegativeNumber);
  wi->add_option("inputs", arg_balls,
                 "2S pointed actions: FILE ORBIT OFFSET ...")
      ->required();
  wi->callback([&] {
    GbsGraph h = load_graph(g_path);
    if (arg_balls.empty() || arg_balls.size() % 6 != 0)
      throw ParseError("witness inputs come in FILE ORBIT OFFSET triples, "
                       "2S of them");
    std::vector<Preaction> acts;
    std::vector<PointedAction> balls;
    for (size_t i = 0; i < arg_balls.size(); i += 3)
      acts.push_back(load_preaction(arg_balls[i], h));
    for (size_t i = 0; i < arg_balls.size(); i += 3)
      balls.push_back({acts[i / 3], point_arg({arg_balls[i + 1],
                                               arg_balls[i + 2]})});
    WitnessResult w = transitivity_witness(balls, radius);
    std::cout << "pairs=" << w.gammas.size() << "\n";
    std::cout << "balls-verified=yes\n";
    for (size_t i = 0; i < w.gammas.size(); ++i)
      std::cout << "pair " << i << " x=(" << w.xbase[i].orbit << ","
                << w.xbase[i].off.str() << ") y=(" << w.ybase[i].orbit << ","
                << w.ybase[i].off.str() << ")\n";
    write_group_word(std::cout, w.m, h);
  });

  auto* pi = app.add_subcommand("piece",
                                "Topology of the phenotype piece Ph^{-1}(N)");
  pi->add_option("graph", g_path)->required();
  pi->add_option("vertex", arg_vertex)->required();
  pi->add_option("N", arg_size)->required();
  pi->callback([&] {
    GbsGraph h = load_graph(g_path);
    PieceTopology top = piece_topology(h, vertex_arg(h, arg_vertex),
                                       parse_size_arg(arg_size));
    std::cout << "piece=" << piece_topology_name(top) << "\n";
  });

  auto* ke = app.add_subcommand("kernel", "Perfect-kernel description");
  ke->add_option("graph", g_path)->required();
  ke->add_option("--action", pre_path, "Pointed action (preaction file)");
  ke->add_option("--at", arg_pt, "Base point: ORBIT OFFSET")->expected(2);
  ke->add_option("--vertex", arg_vertex, "Vertex type for subgroup data");
  ke->callback([&] {
    GbsGraph h = load_graph(g_path);
    if (pre_path.empty()) {
      KernelReport r = kernel_description(h);
      std::cout << "class=" << class_str(r.cls) << "\n";
      std::cout << "kernel: " << r.description << "\n";
      return;
    }
    if (arg_pt.empty() || arg_vertex.empty())
      throw ParseError("kernel --action needs --at and --vertex");
    Preaction p = load_preaction(pre_path, h);
    Point x = point_arg(arg_pt);
    KernelReport r =
        kernel_description(h, {p, x}, vertex_arg(h, arg_vertex));
    std::cout << "class=" << class_str(r.cls) << "\n";
    std::cout << "kernel: " << r.description << "\n";
    std::cout << "in-kernel=" << (r.in_kernel ? "yes" : "no") << "\n";
    std::cout << "index=" << size_str(r.index) << "\n";
    std::cout << "phenotype=" << size_str(r.phen) << "\n";
    std::cout << "piece=" << piece_topology_name(r.piece) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
