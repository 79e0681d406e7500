#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reggecurv/norms.hpp"
#include "reggecurv/ops_check.hpp"
#include "reggecurv/study.hpp"

namespace py = pybind11;
using namespace reggecurv;

namespace {

SpaceKind kind_from_string(const std::string& s) {
  if (s == "lagrange") return SpaceKind::Lagrange;
  if (s == "regge") return SpaceKind::Regge;
  if (s == "bdm") return SpaceKind::Bdm;
  if (s == "rt") return SpaceKind::Rt;
  throw std::invalid_argument("unknown space kind '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_reggecurv, m) {
  m.doc() = "Curvature, connection and covariant operators of Regge metrics";

  py::register_exception<ParseError>(m, "ExprParseError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericalError>(m, "NumericalError");

  py::class_<Expr>(m, "Expr")
      .def("__call__", [](const Expr& e, double x, double y) { return e.evaluate(x, y); })
      .def("diff",
           [](const Expr& e, const std::string& var) {
             return e.differentiate(var == "x" ? Var::X : Var::Y).simplify();
           })
      .def("simplify", &Expr::simplify)
      .def("__repr__", [](const Expr& e) { return e.to_string(); });
  m.def("parse", [](const std::string& s) { return parse(s); }, "Parse a scalar expression in x, y");

  py::class_<TriMesh>(m, "TriMesh")
      .def_property_readonly("n_vertices", &TriMesh::num_vertices)
      .def_property_readonly("n_triangles", &TriMesh::num_triangles)
      .def_property_readonly("n_edges", &TriMesh::num_edges)
      .def_property_readonly("h_max", [](const TriMesh& m) { return m.h_max; })
      .def("vertex", [](const TriMesh& m, int v) { return std::pair(m.vertices[v].x, m.vertices[v].y); })
      .def("to_json", &mesh_to_json)
      .def_static("from_json", &mesh_from_json);
  m.def("structured_unit_square",
        [](int n, std::pair<double, double> origin, std::pair<double, double> extent) {
          return structured_unit_square(n, {origin.first, origin.second},
                                        {extent.first, extent.second});
        },
        py::arg("n"), py::arg("origin") = std::pair(0.0, 0.0), py::arg("extent") = std::pair(1.0, 1.0));
  m.def("perturb", &perturb, py::arg("mesh"), py::arg("amplitude_fraction"), py::arg("seed"));

  py::class_<AnalyticTensorField>(m, "AnalyticMetric")
      .def_static("graph", [](const std::string& f) {
        return AnalyticTensorField::graph_metric(parse(f));
      })
      .def_static("entries",
                  [](const std::string& g11, const std::string& g12, const std::string& g22) {
                    return AnalyticTensorField(parse(g11), parse(g12), parse(g22));
                  })
      .def("value",
           [](const AnalyticTensorField& g, double x, double y) {
             const SymMat2 v = g.value({x, y});
             return std::make_tuple(v.m11, v.m12, v.m22);
           })
      .def("gauss_curvature",
           [](const AnalyticTensorField& g, double x, double y) {
             return gauss_curvature_at(g, {x, y});
           })
      .def("geodesic_curvature",
           [](const AnalyticTensorField& g, double x, double y, double tx, double ty) {
             const double n = std::sqrt(tx * tx + ty * ty);
             return geodesic_curvature_at(g, {x, y}, {tx / n, ty / n});
           })
      .def("connection_oneform", [](const AnalyticTensorField& g, double x, double y) {
        const Vec2 w = connection_oneform_at(g, {x, y});
        return std::pair(w.x, w.y);
      });

  py::class_<FeSpace>(m, "FeSpace")
      .def_property_readonly("dof_count", [](const FeSpace& s) { return s.dof_count; })
      .def_property_readonly("degree", [](const FeSpace& s) { return s.degree; });
  m.def(
      "build_space",
      [](const TriMesh& mesh, const std::string& kind, int degree,
         const std::set<std::string>& essential_tags) {
        return build_space(mesh, kind_from_string(kind), degree, essential_tags);
      },
      py::arg("mesh"), py::arg("kind"), py::arg("degree"),
      py::arg("essential_tags") = std::set<std::string>{}, py::keep_alive<0, 1>());

  py::class_<DofVector>(m, "DofVector")
      .def_property_readonly("coeffs", [](const DofVector& v) { return v.coeffs; })
      .def("to_json", &dofvector_to_json);

  m.def(
      "regge_interpolate",
      [](const AnalyticTensorField& f, const FeSpace& space, int quad_degree) {
        return regge_interpolate(f, space, quad_degree);
      },
      py::arg("field"), py::arg("space"), py::arg("quad_degree") = 10, py::keep_alive<0, 2>());

  m.def(
      "lift_curvature",
      [](const DofVector& g, const FeSpace& V, const AnalyticTensorField& gex,
         const std::set<std::string>& dirichlet_tags, const std::map<std::string, std::string>& dirichlet,
         const std::set<std::string>& neumann_tags, const std::map<std::string, std::string>& neumann) {
        BoundaryData bd;
        bd.gex = &gex;
        bd.dirichlet_tags = dirichlet_tags;
        bd.neumann_tags = neumann_tags;
        for (const auto& [tag, s] : dirichlet) bd.dirichlet.emplace(tag, parse(s));
        for (const auto& [tag, s] : neumann) bd.neumann.emplace(tag, parse(s));
        const AssemblyQuad q = AssemblyQuad::for_degrees(g.space->degree, V.degree);
        return lift_curvature(g, V, bd, q);
      },
      py::arg("g"), py::arg("space"), py::arg("gex"),
      py::arg("dirichlet_tags") = std::set<std::string>{},
      py::arg("dirichlet") = std::map<std::string, std::string>{},
      py::arg("neumann_tags") = std::set<std::string>{},
      py::arg("neumann") = std::map<std::string, std::string>{}, py::keep_alive<0, 2>());

  m.def(
      "lift_connection",
      [](const DofVector& g, const FeSpace& W) {
        const AssemblyQuad q = AssemblyQuad::for_degrees(g.space->degree, W.degree + 1);
        return lift_connection(g, W, q);
      },
      py::arg("g"), py::arg("space"), py::keep_alive<0, 2>());

  m.def("eval_scalar", [](const DofVector& u, int tri, double x, double y) {
    return u.space->eval_scalar(tri, {x, y}, u.space->generator_coeffs(tri, u.coeffs));
  });
  m.def("eval_vector", [](const DofVector& u, int tri, double x, double y) {
    const Vec2 v = u.space->eval_vector(tri, {x, y}, u.space->generator_coeffs(tri, u.coeffs));
    return std::pair(v.x, v.y);
  });

  m.def("l2_error_scalar",
        [](const TriMesh& mesh, const DofVector& u, const std::function<double(double, double)>& ref,
           int quad_degree) {
          const ScalarFieldFn uf = scalar_fe_field(u);
          return l2_error_scalar(
              mesh, uf, [&ref](int, const Vec2& p) { return ref(p.x, p.y); }, quad_degree);
        });

  m.def("run_study", [](const std::string& command, const std::string& config_json) {
    const StudyConfig cfg = load_config(config_json);
    StudyResult result;
    if (command == "curvature") result = run_curvature_study(cfg);
    else if (command == "connection") result = run_connection_study(cfg);
    else if (command == "curl") result = run_curl_study(cfg);
    else if (command == "inc") result = run_inc_study(cfg);
    else if (command == "interpolate") result = run_interpolation_study(cfg);
    else throw std::invalid_argument("unknown study '" + command + "'");
    return result.csv;
  });

  m.def("ops_check", [](const std::string& config_json) {
    const CheckReport report = run_ops_check(load_config(config_json));
    py::list items;
    for (const auto& it : report.items) {
      py::dict d;
      d["name"] = it.name;
      d["value"] = it.value;
      d["tolerance"] = it.tolerance;
      d["pass"] = it.pass;
      items.append(d);
    }
    return items;
  });
}
