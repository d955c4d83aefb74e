#include <memory>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "etale/algebra.hpp"
#include "etale/builders.hpp"
#include "etale/cli.hpp"
#include "etale/equivalence.hpp"
#include "etale/io.hpp"
#include "etale/morita.hpp"

namespace py = pybind11;
using namespace etale;

namespace {

// Groupoids are shared immutable values in C++; Python sees them through a
// non-const holder, which is only ever handed back as GroupoidPtr.
using PyGroupoid = std::shared_ptr<FiniteGroupoid>;

PyGroupoid hold(FiniteGroupoid g) { return std::make_shared<FiniteGroupoid>(std::move(g)); }
PyGroupoid hold(const GroupoidPtr& g) { return std::const_pointer_cast<FiniteGroupoid>(g); }

py::object fraction(const Scalar& v) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::int_(py::str(v.get_num().get_str())), py::int_(py::str(v.get_den().get_str())));
}

Scalar scalar_from(const py::handle& h) {
  return parse_scalar(py::str(h).cast<std::string>());
}

py::list matrix_to_py(const Matrix& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(fraction(m(i, j)));
    rows.append(row);
  }
  return rows;
}

Arrow arrow_arg(const FiniteGroupoid& g, const std::string& name) {
  auto a = g.find_arrow(name);
  if (!a) throw py::key_error("unknown arrow '" + name + "'");
  return *a;
}

AlgebraElement element_from(const PyGroupoid& g, const Ring& ring, const py::dict& coeffs) {
  AlgebraElement f(g, ring);
  for (auto [k, v] : coeffs) f.add_term(arrow_arg(*g, k.cast<std::string>()), ring.element(scalar_from(v)));
  return f;
}

py::dict element_to_py(const AlgebraElement& f) {
  py::dict d;
  for (const auto& [a, c] : f.coefficients()) d[py::str(f.groupoid().name(a))] = fraction(c);
  return d;
}

std::vector<std::string> names(const FiniteGroupoid& g, const std::vector<Arrow>& arrows) {
  std::vector<std::string> out;
  for (Arrow a : arrows) out.push_back(g.name(a));
  return out;
}

}  // namespace

PYBIND11_MODULE(_etale, m) {
  m.doc() = "Finite ample groupoids, convolution algebras, modules and sheaves";

  py::register_exception<Error>(m, "EtaleError");
  py::register_exception<ParseError>(m, "ParseError", m.attr("EtaleError"));

  py::class_<Report>(m, "Report")
      .def_readonly("passed", &Report::passed)
      .def_readonly("check", &Report::check)
      .def_readonly("witness", &Report::witness)
      .def("summary", &Report::summary)
      .def("__bool__", [](const Report& r) { return r.passed; })
      .def("__repr__", [](const Report& r) { return "<Report " + r.summary() + ">"; });

  py::class_<Ring>(m, "Ring")
      .def(py::init(&Ring::parse), py::arg("name"))
      .def_property_readonly("name", &Ring::name)
      .def_property_readonly("is_field", &Ring::is_field)
      .def("__eq__", [](const Ring& a, const Ring& b) { return a == b; })
      .def("__repr__", [](const Ring& r) { return "Ring('" + r.name() + "')"; });

  py::class_<FiniteGroupoid, PyGroupoid>(m, "Groupoid")
      .def_property_readonly("num_objects", &FiniteGroupoid::num_objects)
      .def_property_readonly("num_arrows", &FiniteGroupoid::num_arrows)
      .def_property_readonly("objects", [](const FiniteGroupoid& g) {
        std::vector<std::string> out;
        for (Object x : g.objects()) out.push_back(g.name(x));
        return out;
      })
      .def_property_readonly("arrows", [](const FiniteGroupoid& g) { return names(g, g.arrows()); })
      .def("source", [](const FiniteGroupoid& g, const std::string& a) { return g.name(g.source(arrow_arg(g, a))); })
      .def("target", [](const FiniteGroupoid& g, const std::string& a) { return g.name(g.target(arrow_arg(g, a))); })
      .def("inverse", [](const FiniteGroupoid& g, const std::string& a) { return g.name(g.inverse(arrow_arg(g, a))); })
      .def("compose",
           [](const FiniteGroupoid& g, const std::string& a, const std::string& b) -> std::optional<std::string> {
             auto c = g.compose(arrow_arg(g, a), arrow_arg(g, b));
             if (!c) return std::nullopt;
             return g.name(*c);
           })
      .def("validate", &validate_groupoid)
      .def("to_json", [](const FiniteGroupoid& g) { return to_json(g); })
      .def("__eq__", [](const FiniteGroupoid& a, const FiniteGroupoid& b) { return a == b; })
      .def("__repr__", [](const FiniteGroupoid& g) {
        return "<Groupoid " + std::to_string(g.num_objects()) + " objects, " +
               std::to_string(g.num_arrows()) + " arrows>";
      });

  m.def("pair_groupoid", [](std::size_t n) { return hold(pair_groupoid(n)); }, py::arg("n"));
  m.def("cyclic_groupoid", [](std::size_t n) { return hold(group_groupoid(cyclic_table(n))); }, py::arg("n"));
  m.def("group_groupoid", [](const GroupTable& t, std::vector<std::string> ns) { return hold(group_groupoid(t, std::move(ns))); },
        py::arg("table"), py::arg("names") = std::vector<std::string>{});
  m.def("action_groupoid",
        [](const GroupTable& t, const std::vector<std::string>& points,
           const std::vector<std::vector<std::size_t>>& act) { return hold(action_groupoid(t, points, act)); },
        py::arg("table"), py::arg("points"), py::arg("action"));
  m.def("graph_groupoid",
        [](const std::vector<std::string>& vertices, const std::vector<std::pair<std::string, std::string>>& edges) {
          GraphSpec spec{vertices, {}};
          for (const auto& [s, d] : edges) spec.edges.push_back({"", s, d});
          return hold(acyclic_graph_groupoid(spec));
        },
        py::arg("vertices"), py::arg("edges"));
  m.def("parse_groupoid", [](const std::string& text) { return hold(parse_groupoid(text)); }, py::arg("text"));
  m.def("load_groupoid", [](const std::string& path) { return hold(load_groupoid(path)); }, py::arg("path"));

  m.def("bisections", [](const PyGroupoid& g) {
    std::vector<std::vector<std::string>> out;
    for (const auto& u : enumerate_bisections(*g)) out.push_back(names(*g, u.arrows()));
    return out;
  });
  m.def("multiplication_table", [](const PyGroupoid& g, const Ring& ring) {
    return multiplication_table(g, ring).to_tsv();
  });
  m.def("convolve",
        [](const PyGroupoid& g, const Ring& ring, const py::dict& f1, const py::dict& f2) {
          return element_to_py(convolve(element_from(g, ring, f1), element_from(g, ring, f2)));
        },
        py::arg("groupoid"), py::arg("ring"), py::arg("f1"), py::arg("f2"));

  py::class_<GModule>(m, "Module")
      .def_property_readonly("rank", &GModule::rank)
      .def_property_readonly("ring", &GModule::ring)
      .def("action", [](const GModule& mod, const std::string& a) {
        return matrix_to_py(mod.action(arrow_arg(mod.groupoid(), a)));
      })
      .def("validate", &validate_module)
      .def("to_json", [](const GModule& mod) { return to_json(mod); });
  m.def("regular_module", [](const PyGroupoid& g, const Ring& r) { return regular_module(g, r); });
  m.def("random_module",
        [](const PyGroupoid& g, const Ring& r, std::size_t max_rank, std::uint64_t seed) {
          return random_module(g, r, max_rank, seed);
        },
        py::arg("groupoid"), py::arg("ring"), py::arg("max_rank"), py::arg("seed"));

  py::class_<GSheaf>(m, "Sheaf")
      .def_property_readonly("stalk_ranks", &GSheaf::stalk_ranks)
      .def_property_readonly("ring", &GSheaf::ring)
      .def("transport", [](const GSheaf& e, const std::string& a) {
        return matrix_to_py(e.transport(arrow_arg(e.groupoid(), a)));
      })
      .def("validate", &validate_sheaf)
      .def("to_json", [](const GSheaf& e) { return to_json(e); });
  m.def("random_sheaf",
        [](const PyGroupoid& g, const Ring& r, std::size_t max_rank, std::uint64_t seed) {
          return random_sheaf(g, r, max_rank, seed);
        },
        py::arg("groupoid"), py::arg("ring"), py::arg("max_rank"), py::arg("seed"));
  m.def("gamma_c", &gamma_c);
  m.def("sheafify", [](const GModule& mod) { return sheafify(mod).sheaf; });

  py::class_<CertificateResult>(m, "Certificate")
      .def_readonly("report", &CertificateResult::report)
      .def_property_readonly("passed", [](const CertificateResult& c) { return bool(c); })
      .def_property_readonly("checks", [](const CertificateResult& c) {
        return c.certificate ? c.certificate->checks : std::vector<std::string>{};
      })
      .def_property_readonly("components", [](const CertificateResult& c) {
        py::list out;
        if (c.certificate) {
          for (const auto& mat : c.certificate->components) out.append(matrix_to_py(mat));
        }
        return out;
      })
      .def("__bool__", [](const CertificateResult& c) { return bool(c); });
  m.def("eta", py::overload_cast<const GModule&>(&eta));
  m.def("epsilon", &epsilon);

  py::class_<MoritaSpan>(m, "Span")
      .def("validate", &validate_span);
  m.def("load_span", &load_span, py::arg("path"));

  py::class_<MoritaSample>(m, "MoritaSample")
      .def_readonly("direction", &MoritaSample::direction)
      .def_readonly("index", &MoritaSample::index)
      .def_readonly("rank", &MoritaSample::rank)
      .def_readonly("transported_rank", &MoritaSample::transported_rank)
      .def_readonly("round_trip", &MoritaSample::round_trip)
      .def_readonly("hom", &MoritaSample::hom);
  py::class_<MoritaReport>(m, "MoritaReport")
      .def_readonly("span", &MoritaReport::span)
      .def_readonly("samples", &MoritaReport::samples)
      .def_readonly("regular", &MoritaReport::regular)
      .def_readonly("regular_rank", &MoritaReport::regular_rank)
      .def_readonly("regular_transported_rank", &MoritaReport::regular_transported_rank)
      .def("passed", &MoritaReport::passed);
  m.def("verify_morita", &verify_morita, py::arg("span"), py::arg("ring"), py::arg("samples"),
        py::arg("seed") = 0, py::arg("max_rank") = 2);

  m.def(
      "run_command",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a CLI command; returns (exit code, stdout, stderr).");
}
