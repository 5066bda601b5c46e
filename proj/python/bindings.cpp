#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "treeshift/dynamics.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/function.hpp"
#include "treeshift/io.hpp"
#include "treeshift/matrix_oracle.hpp"
#include "treeshift/operators.hpp"
#include "treeshift/shadowing.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/weights.hpp"

namespace py = pybind11;
using namespace treeshift;

namespace {

VertexAddress resolve(const TreeModel& model, const std::string& text) {
  return model.resolve(text);
}

OperatorKind kind_from(const std::string& text) {
  if (text == "forward") return OperatorKind::Forward;
  if (text == "adjoint") return OperatorKind::Adjoint;
  if (text == "backward") return OperatorKind::Backward;
  if (text == "right_inverse") return OperatorKind::RightInverse;
  throw InputError("unknown operator kind \"" + text + "\"");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "shift operators on weighted L^p spaces of directed trees";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<WindowExhausted>(m, "WindowExhausted", PyExc_RuntimeError);

  py::class_<TreeModel>(m, "TreeModel")
      .def_static("finite",
                  [](const std::vector<std::pair<std::string, std::string>>& edges,
                     std::optional<std::string> root) {
                    return TreeModel::finite(edges, root);
                  },
                  py::arg("edges"), py::arg("root") = std::nullopt)
      .def_static("kary_rooted",
                  [](std::uint32_t k, std::uint32_t down, bool opaque) {
                    return TreeModel::kary_rooted(k, DepthWindow{0, down}, opaque);
                  },
                  py::arg("k"), py::arg("down"), py::arg("opaque") = false)
      .def_static("kary_unrooted",
                  [](std::uint32_t k, std::uint32_t up, std::uint32_t down, bool opaque) {
                    return TreeModel::kary_unrooted(k, DepthWindow{up, down}, opaque);
                  },
                  py::arg("k"), py::arg("up"), py::arg("down"), py::arg("opaque") = false)
      .def_static("bilateral_line",
                  [](std::uint32_t up, std::uint32_t down) {
                    return TreeModel::bilateral_line(DepthWindow{up, down});
                  },
                  py::arg("up"), py::arg("down"))
      .def_static("unilateral_leaf_line",
                  [](std::uint32_t up, std::uint32_t down) {
                    return TreeModel::unilateral_leaf_line(DepthWindow{up, down});
                  },
                  py::arg("up"), py::arg("down"))
      .def_static("grafted_free_end",
                  [](std::uint32_t k, const std::string& graft_at, std::uint32_t down) {
                    return TreeModel::grafted_free_end(k, VertexAddress::parse(graft_at),
                                                       DepthWindow{0, down});
                  },
                  py::arg("k"), py::arg("graft_at"), py::arg("down"))
      .def_property_readonly("rooted", &TreeModel::rooted)
      .def_property_readonly("finite", &TreeModel::is_finite)
      .def_property_readonly("leafless", &TreeModel::leafless)
      .def_property_readonly("window",
                             [](const TreeModel& t) {
                               return std::make_pair(t.window().up, t.window().down);
                             })
      .def("vertices",
           [](const TreeModel& t) {
             std::vector<std::string> out;
             for (const auto& v : t.window_vertices()) out.push_back(t.format(v));
             return out;
           })
      .def("outdegree",
           [](const TreeModel& t, const std::string& v) { return t.outdegree(resolve(t, v)); })
      .def("parent",
           [](const TreeModel& t, const std::string& v) -> std::optional<std::string> {
             auto p = t.parent(resolve(t, v));
             if (!p) return std::nullopt;
             return t.format(*p);
           })
      .def("children",
           [](const TreeModel& t, const std::string& v) {
             std::vector<std::string> out;
             for (const auto& c : t.children(resolve(t, v))) out.push_back(t.format(c));
             return out;
           })
      .def("gamma", [](const TreeModel& t, const std::string& v, std::uint32_t n) {
        return t.gamma(resolve(t, v), n);
      });

  py::class_<WeightMap>(m, "WeightMap")
      .def_static("unit", &WeightMap::unit)
      .def_static("geometric", &WeightMap::geometric, py::arg("base"))
      .def_static("distance_to_h",
                  [](double s, const std::string& anchor) {
                    return WeightMap::distance_to_h(s, VertexAddress::parse(anchor));
                  },
                  py::arg("s"), py::arg("anchor") = std::string("anchor"))
      .def("at", [](const WeightMap& w, const TreeModel& t, const std::string& v) {
        return w.at(t, resolve(t, v));
      });

  py::class_<TreeFunction>(m, "TreeFunction")
      .def(py::init<>())
      .def_static("from_entries",
                  [](const TreeModel& t,
                     const std::vector<std::pair<std::string, std::complex<double>>>& entries) {
                    TreeFunction f;
                    for (const auto& [name, a] : entries) f.add(resolve(t, name), a);
                    return f;
                  },
                  py::arg("model"), py::arg("entries"))
      .def("entries",
           [](const TreeFunction& f, const TreeModel& t) {
             std::vector<std::pair<std::string, std::complex<double>>> out;
             for (const auto& [v, a] : f.entries()) out.emplace_back(t.format(v), a);
             return out;
           })
      .def("at",
           [](const TreeFunction& f, const TreeModel& t, const std::string& v) {
             return f.at(resolve(t, v));
           })
      .def_property_readonly("support_size", &TreeFunction::support_size)
      .def("__eq__", [](const TreeFunction& a, const TreeFunction& b) { return a == b; });

  m.def("load_tree", &load_tree_spec_text, py::arg("json_text"));
  m.def("load_weights", &load_weight_spec_text, py::arg("json_text"), py::arg("model"));

  m.def("norm_p", &norm_p, py::arg("f"), py::arg("weights"), py::arg("model"), py::arg("p"));
  m.def("dual_pairing", &dual_pairing, py::arg("f"), py::arg("g"), py::arg("weights"),
        py::arg("model"));
  m.def("random_function", &random_tree_function, py::arg("model"), py::arg("support_depth"),
        py::arg("support_size"), py::arg("seed"));

  m.def("apply_S", &apply_S, py::arg("f"), py::arg("model"));
  m.def("apply_S_pow", &apply_S_pow, py::arg("f"), py::arg("n"), py::arg("model"));
  m.def("apply_Sstar", &apply_Sstar, py::arg("g"), py::arg("weights"), py::arg("model"));
  m.def("apply_B", &apply_B, py::arg("f"), py::arg("model"));
  m.def("apply_B_pow", &apply_B_pow, py::arg("f"), py::arg("n"), py::arg("model"));
  m.def("apply_T_n", &apply_T_n, py::arg("g"), py::arg("n"), py::arg("model"));

  m.def("shift_norm",
        [](const WeightMap& lam, double p, const TreeModel& t) {
          const auto b = shift_norm(lam, p, t);
          return std::make_pair(b.value, b.exact);
        },
        py::arg("weights"), py::arg("p"), py::arg("model"));
  m.def("backward_bound",
        [](const WeightMap& lam, double q, const TreeModel& t) {
          const auto b = backward_bound(lam, q, t);
          return std::make_pair(b.value, b.exact);
        },
        py::arg("weights"), py::arg("q"), py::arg("model"));
  m.def("check_unitary_equivalence", &check_unitary_equivalence, py::arg("f"),
        py::arg("weights"), py::arg("q"), py::arg("model"));

  m.def("omega",
        [](const TreeModel& t, const WeightMap& lam, double q, const std::string& u,
           std::uint32_t n) { return omega(t, lam, q, resolve(t, u), n); });
  m.def("theta",
        [](const TreeModel& t, const WeightMap& lam, double q, const std::string& u,
           std::uint32_t n) { return theta(t, lam, q, resolve(t, u), n); });
  m.def("omega_star",
        [](const TreeModel& t, const WeightMap& lam, double q, const std::string& u,
           std::uint32_t n) { return omega_star(t, lam, q, resolve(t, u), n); });
  m.def("necessary_sum",
        [](const TreeModel& t, const WeightMap& lam, double q, const std::string& u,
           std::uint32_t n) { return necessary_sum(t, lam, q, resolve(t, u), n); });

  m.def("decide_forward_json",
        [](const TreeModel& t) { return verdict_json(decide_forward(t), t, "forward"); },
        py::arg("model"));
  m.def("decide_backward_json",
        [](const TreeModel& t, const WeightMap& lam, double q, std::uint32_t n_max) {
          return verdict_json(decide_backward(t, lam, q, {}, n_max), t, "backward");
        },
        py::arg("model"), py::arg("weights"), py::arg("q"), py::arg("n_max") = 12);

  m.def("decay_json",
        [](const TreeModel& t, const WeightMap& lam, double q, const std::string& quantity,
           std::uint32_t n_max) {
          std::vector<std::uint32_t> grid;
          for (std::uint32_t n = 1; n <= n_max; ++n) grid.push_back(n);
          const auto report =
              decay_report(t, lam, q, parse_decay_quantity(quantity), default_probes(t), grid);
          return decay_report_json(report, t);
        },
        py::arg("model"), py::arg("weights"), py::arg("q"), py::arg("quantity"),
        py::arg("n_max") = 12);
  m.def("decay_csv",
        [](const TreeModel& t, const WeightMap& lam, double q, const std::string& quantity,
           std::uint32_t n_max) {
          std::vector<std::uint32_t> grid;
          for (std::uint32_t n = 1; n <= n_max; ++n) grid.push_back(n);
          const auto report =
              decay_report(t, lam, q, parse_decay_quantity(quantity), default_probes(t), grid);
          std::ostringstream os;
          write_decay_csv(os, report, t);
          return os.str();
        },
        py::arg("model"), py::arg("weights"), py::arg("q"), py::arg("quantity"),
        py::arg("n_max") = 12);

  m.def("run_shadow",
        [](const TreeModel& t, const WeightMap& lam, double q, double eps,
           const std::vector<TreeFunction>& targets) {
          const auto plan = plan_schedule(t, lam, q, eps, targets);
          const auto build = build_shadow_vector(plan, t, lam);
          py::dict out;
          out["schedule"] = plan.schedule;
          out["budgets"] = plan.budgets;
          out["predicted"] = plan.predicted;
          out["errors"] = build.errors;
          out["norm"] = build.norm;
          return out;
        },
        py::arg("model"), py::arg("weights"), py::arg("q"), py::arg("eps"),
        py::arg("targets"));

  m.def("estimate_sigma",
        [](const TreeModel& t, const WeightMap& lam, const std::string& kind, double p,
           std::uint32_t sub_up, std::uint32_t sub_down, std::uint32_t power) {
          const auto op =
              truncate_operator(kind_from(kind), t, lam, DepthWindow{sub_up, sub_down}, p,
                                power);
          const auto pi = estimate_norm_p2(op);
          py::dict out;
          out["dim"] = op.dim;
          out["sigma"] = pi.sigma;
          out["iterations"] = pi.iterations;
          out["converged"] = pi.converged;
          out["bottom_boundary"] = op.bottom_boundary;
          out["top_boundary"] = op.top_boundary;
          return out;
        },
        py::arg("model"), py::arg("weights"), py::arg("kind"), py::arg("p"), py::arg("sub_up"),
        py::arg("sub_down"), py::arg("power") = 1);
}
