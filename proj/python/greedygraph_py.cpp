#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "greedygraph/acceptance.hpp"
#include "greedygraph/branching.hpp"
#include "greedygraph/lambda_tracker.hpp"
#include "greedygraph/numerics.hpp"
#include "greedygraph/patterns.hpp"
#include "greedygraph/predictor.hpp"
#include "greedygraph/process.hpp"

namespace py = pybind11;
namespace gg = greedygraph;

namespace {

gg::BitGraph graph_from_edges(gg::Vertex n, const std::vector<gg::Edge>& edges) {
  gg::BitGraph g(n);
  for (const auto& [u, v] : edges) g.insert_edge(u, v);
  return g;
}

gg::EvolvingGraph state_from_edges(gg::Vertex n, const std::vector<gg::Edge>& tf, const std::vector<gg::Edge>& birthed) {
  gg::EvolvingGraph s(n);
  for (const auto& [u, v] : birthed) s.mark_birthed(u, v);
  for (const auto& [u, v] : tf) {
    if (!s.is_birthed(u, v)) s.mark_birthed(u, v);
    if (!s.add_edge_if_open(u, v)) throw std::invalid_argument("TF edges must form a triangle-free graph");
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Triangle-free process simulation and survival calculus";
  m.attr("__version__") = GREEDYGRAPH_VERSION;

  py::register_exception<gg::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<gg::ComplexityGuardError>(m, "ComplexityGuardError", PyExc_RuntimeError);

  m.def("erfi", &gg::erfi, py::arg("x"));
  m.def("phi_big", &gg::phi_big, py::arg("x"), "Phi(x): inverse of (sqrt(pi)/2) erfi");
  m.def("phi_small", &gg::phi_small, py::arg("x"), "phi(x) = exp(-Phi(x)^2)");

  py::class_<gg::RoundContext>(m, "RoundContext")
      .def(py::init(&gg::RoundContext::make), py::arg("n"), py::arg("eps"))
      .def("at_round", &gg::RoundContext::at_round, py::arg("i"))
      .def_property_readonly("n", &gg::RoundContext::n)
      .def_property_readonly("eps", &gg::RoundContext::eps)
      .def_property_readonly("k", &gg::RoundContext::k)
      .def_property_readonly("delta", &gg::RoundContext::delta)
      .def_property_readonly("total_rounds", &gg::RoundContext::total_rounds)
      .def_property_readonly("round", &gg::RoundContext::round)
      .def("Phi_at", &gg::RoundContext::Phi_at, py::arg("i"))
      .def("phi_at", &gg::RoundContext::phi_at, py::arg("i"))
      .def("gamma_at", &gg::RoundContext::gamma_at, py::arg("i"))
      .def("Gamma_at", &gg::RoundContext::Gamma_at, py::arg("i"))
      .def("varphi", [](const gg::RoundContext& ctx, std::uint64_t i) { return gg::varphi(ctx, i); }, py::arg("i"))
      .def("equivalent_cutoff", [](const gg::RoundContext& ctx) { return gg::equivalent_cutoff(ctx); });

  m.def(
      "run_process",
      [](std::uint64_t n, double eps, std::uint64_t seed, std::uint64_t trial, const std::string& mode,
         std::optional<double> cutoff) {
        if (mode != "exact" && mode != "rounds") throw std::invalid_argument("mode must be 'exact' or 'rounds'");
        gg::ProcessParams params{gg::RoundContext::make(n, eps), seed, trial,
                                 mode == "exact" ? gg::ProcessMode::kExact : gg::ProcessMode::kRounds, false, cutoff};
        gg::RunTrace trace;
        {
          py::gil_scoped_release release;
          trace = gg::run_process(params);
        }
        py::list rounds;
        for (const auto& r : trace.per_round) {
          py::dict d;
          d["i"] = r.round;
          d["birthed"] = r.birthed;
          d["added"] = r.added;
          d["total_edges"] = r.total_edges;
          rounds.append(d);
        }
        py::dict out;
        out["per_round"] = rounds;
        out["edges"] = trace.final_graph.graph().edges();
        out["triangle_free"] = trace.final_graph.audit_triangle_free();
        return out;
      },
      py::arg("n"), py::arg("eps"), py::arg("seed") = 0, py::arg("trial") = 0, py::arg("mode") = "rounds",
      py::arg("cutoff") = std::nullopt);

  m.def("exhaustive_oracle_json", [](std::uint32_t n) { return gg::oracle_to_json(gg::exhaustive_oracle(n)).dump(); },
        py::arg("n"));

  m.def(
      "lambda_counts",
      [](gg::Vertex n, const std::vector<gg::Edge>& tf, const std::vector<gg::Edge>& birthed, gg::Vertex u,
         gg::Vertex v) {
        const auto c = gg::lambda_sets(state_from_edges(n, tf, birthed), u, v);
        return py::make_tuple(c.lam0, c.lam1, c.lam2);
      },
      py::arg("n"), py::arg("tf_edges"), py::arg("birthed_edges"), py::arg("u"), py::arg("v"));

  m.def(
      "closed_form",
      [](const gg::RoundContext& ctx, double x) {
        const auto c = gg::closed_form(ctx, x);
        return py::make_tuple(c.P, c.p);
      },
      py::arg("ctx"), py::arg("x"), "(P(x), p(x)) at the context's round");
  m.def(
      "limit_recursion",
      [](const gg::RoundContext& ctx, int depth, std::size_t grid) {
        py::list levels;
        for (const auto& c : gg::limit_recursion(ctx, depth, grid)) levels.append(c.p);
        return levels;
      },
      py::arg("ctx"), py::arg("depth") = 40, py::arg("grid") = 1024, "p_0..p_depth on the survival grid");
  m.def(
      "finite_m_p_delta",
      [](const gg::RoundContext& ctx, std::uint64_t k, int depth, std::optional<double> zeta) {
        return gg::finite_m_recursion(gg::SurvivalModel::make(ctx, k, depth, 1024, zeta)).back().p.back();
      },
      py::arg("ctx"), py::arg("k"), py::arg("depth") = 40, py::arg("zeta") = std::nullopt);
  m.def(
      "simulate_tree",
      [](const gg::RoundContext& ctx, std::uint64_t k, int depth, double x, std::uint64_t trials,
         std::uint64_t seed) {
        const auto model = gg::SurvivalModel::make(ctx, k, depth);
        gg::McEstimate est;
        {
          py::gil_scoped_release release;
          est = gg::simulate_tree(model, x, trials, seed);
        }
        return py::make_tuple(est.mean, est.std_error);
      },
      py::arg("ctx"), py::arg("k"), py::arg("depth"), py::arg("x"), py::arg("trials") = 10000, py::arg("seed") = 0);

  m.def(
      "predict_copies",
      [](const std::string& pattern, const gg::RoundContext& ctx) {
        return gg::predict_copies(gg::load_pattern(pattern), ctx);
      },
      py::arg("pattern"), py::arg("ctx"));
  m.def(
      "count_copies",
      [](gg::Vertex n, const std::vector<gg::Edge>& edges, const std::string& pattern) {
        return gg::count_copies(graph_from_edges(n, edges), gg::load_pattern(pattern));
      },
      py::arg("n"), py::arg("edges"), py::arg("pattern"));
  m.def(
      "variance_margin",
      [](const std::string& pattern, double eps) { return gg::variance_margin(gg::load_pattern(pattern), eps).margin; },
      py::arg("pattern"), py::arg("eps"));
  m.def(
      "pattern_info",
      [](const std::string& name) {
        const auto p = gg::load_pattern(name);
        py::dict d;
        d["name"] = p.name();
        d["vertices"] = p.vertex_count();
        d["edges"] = p.edges();
        d["aut"] = p.aut();
        d["density"] = p.density();
        d["balanced"] = p.balanced();
        d["triangle_free"] = p.triangle_free();
        return d;
      },
      py::arg("name"));

  m.def(
      "run_criterion_json",
      [](int id, std::uint64_t seed) {
        gg::AcceptanceOptions options;
        options.seed = seed;
        gg::CriterionResult r;
        {
          py::gil_scoped_release release;
          r = gg::run_criterion(id, options);
        }
        return gg::results_to_json({r}).dump();
      },
      py::arg("id"), py::arg("seed") = 1);
}
