// Python bindings for the gbs library. Sizes and edge labels cross the
// boundary as strings ("inf" or a decimal integer) so arbitrary-precision
// values survive the trip.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gbs/arith.hpp"
#include "gbs/core.hpp"
#include "gbs/errors.hpp"
#include "gbs/extnat.hpp"
#include "gbs/hgraph.hpp"
#include "gbs/kernel.hpp"
#include "gbs/preaction.hpp"

namespace py = pybind11;
using namespace gbs;

namespace {

ExtNat parse_size(const std::string& s) {
  if (s == "inf") return ExtNat::inf();
  return ExtNat(Int(s));
}

std::string class_str(const GroupClass& c) {
  switch (c.kind) {
    case GroupClass::AmenableBS1n:
      return "AmenableBS1n n=" + c.n.str();
    case GroupClass::UnimodularNonAmenable:
      return "UnimodularNonAmenable";
    default:
      return "NonUnimodularNonAmenable";
  }
}

}  // namespace

PYBIND11_MODULE(gbspy, m) {
  m.doc() = "Generalized Baumslag-Solitar groups: graphs, phenotypes, "
            "H-graphs and perfect-kernel queries.";

  py::register_exception<DomainError>(m, "DomainError");

  py::class_<GbsGraph>(m, "GbsGraph")
      .def(py::init<>())
      .def("add_vertex", &GbsGraph::add_vertex)
      .def("add_edge",
           [](GbsGraph& h, const std::string& name, int src, int trg,
              const std::string& k, const std::string& l) {
             return h.add_edge(name, src, trg, Int(k), Int(l));
           })
      .def("nv", [](const GbsGraph& h) { return h.g.nv; })
      .def("ne", [](const GbsGraph& h) { return h.g.ne(); })
      .def("vertex_name", [](const GbsGraph& h, int v) { return h.vname.at(v); })
      .def("edge_name", [](const GbsGraph& h, int e) { return h.edge_name(e); })
      .def("is_reduced", [](const GbsGraph& h) { return is_reduced(h); })
      .def("is_unimodular", [](const GbsGraph& h) { return is_unimodular(h); })
      .def("classify",
           [](const GbsGraph& h) { return class_str(classify(h)); })
      .def("phenotype", [](const GbsGraph& h, int v, const std::string& n) {
        return phenotype(h, v, parse_size(n)).str();
      });

  m.def("loop_graph", [](const std::string& k, const std::string& l) {
    return loop_graph(Int(k), Int(l));
  });
  m.def("segment_graph", [](const std::string& k, const std::string& l) {
    return segment_graph(Int(k), Int(l));
  });

  py::class_<HGraph>(m, "HGraph")
      .def(py::init<>())
      .def("add_vertex",
           [](HGraph& hg, int type, const std::string& size) {
             return hg.add_vertex(type, parse_size(size));
           })
      .def("add_edge", &HGraph::add_edge)
      .def("nv", [](const HGraph& hg) { return hg.g.nv; })
      .def("vertex_type", [](const HGraph& hg, int v) { return hg.vtype.at(v); })
      .def("vertex_size",
           [](const HGraph& hg, int v) { return hg.vsize.at(v).str(); });

  m.def("gadget", [](const GbsGraph& h, int e, const std::string& n) {
    return gadget(h, e, parse_size(n));
  });
  m.def("complete_to_depth", &complete_to_depth);
  m.def("validate_hgraph", [](const HGraph& hg, const GbsGraph& h) {
    return validate_hgraph(hg, h).ok;
  });
  m.def("is_saturated", [](const HGraph& hg, const GbsGraph& h) {
    return is_saturated_hgraph(hg, h);
  });
  m.def("hgraph_phenotype", [](const HGraph& hg, const GbsGraph& h, int s) {
    return hgraph_phenotype(hg, h, s).str();
  });
  m.def("in_perfect_kernel", [](const HGraph& hg, const GbsGraph& h) {
    return in_perfect_kernel(h, hg);
  });
  m.def("kernel_description", [](const GbsGraph& h) {
    KernelReport r = kernel_description(h);
    return py::make_tuple(class_str(r.cls), r.description);
  });
  m.def("piece_topology", [](const GbsGraph& h, int v, const std::string& n) {
    return piece_topology_name(piece_topology(h, v, parse_size(n)));
  });
}
