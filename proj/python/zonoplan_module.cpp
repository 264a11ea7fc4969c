#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zonoplan/bench.hpp"
#include "zonoplan/pwa.hpp"
#include "zonoplan/solver.hpp"
#include "zonoplan/unions.hpp"

namespace py = pybind11;
using namespace zonoplan;

namespace
{

using Dense = Eigen::MatrixXd;

HybZono make_hybzono(const Dense& Gc, const Dense& Gb, const Vec& c, const Dense& Ac,
                     const Dense& Ab, const Vec& b, bool zero_one)
{
    return HybZono(sparse_from_dense(Gc), sparse_from_dense(Gb), c, sparse_from_dense(Ac),
                   sparse_from_dense(Ab), b, zero_one ? Form::ZeroOne : Form::Canonical);
}

HybZono make_zonotope(const Dense& G, const Vec& c, bool zero_one)
{
    return HybZono::zonotope(sparse_from_dense(G), c,
                             zero_one ? Form::ZeroOne : Form::Canonical);
}

HybZono make_conzono(const Dense& G, const Vec& c, const Dense& A, const Vec& b, bool zero_one)
{
    return HybZono::constrained(sparse_from_dense(G), c, sparse_from_dense(A), b,
                                zero_one ? Form::ZeroOne : Form::Canonical);
}

} // namespace

PYBIND11_MODULE(_zonoplan, m)
{
    m.doc() = "hybrid zonotope reachability and ADMM-FP planning";

    py::enum_<Form>(m, "Form")
        .value("CANONICAL", Form::Canonical)
        .value("ZERO_ONE", Form::ZeroOne);

    py::class_<SetComplexity>(m, "SetComplexity")
        .def_readonly("n", &SetComplexity::n)
        .def_readonly("n_gc", &SetComplexity::n_Gc)
        .def_readonly("n_gb", &SetComplexity::n_Gb)
        .def_readonly("n_c", &SetComplexity::n_C)
        .def_readonly("nnz_g", &SetComplexity::nnz_G)
        .def_readonly("nnz_a", &SetComplexity::nnz_A)
        .def("__repr__", [](const SetComplexity& s) {
            return "SetComplexity(n=" + std::to_string(s.n) + ", n_gc=" + std::to_string(s.n_Gc) +
                   ", n_gb=" + std::to_string(s.n_Gb) + ", n_c=" + std::to_string(s.n_C) +
                   ", nnz_g=" + std::to_string(s.nnz_G) + ", nnz_a=" + std::to_string(s.nnz_A) +
                   ")";
        });

    py::class_<HybZono>(m, "HybZono")
        .def(py::init(&make_hybzono), py::arg("Gc"), py::arg("Gb"), py::arg("c"), py::arg("Ac"),
             py::arg("Ab"), py::arg("b"), py::arg("zero_one") = false)
        .def_static("zonotope", &make_zonotope, py::arg("G"), py::arg("c"),
                    py::arg("zero_one") = false)
        .def_static("constrained", &make_conzono, py::arg("G"), py::arg("c"), py::arg("A"),
                    py::arg("b"), py::arg("zero_one") = false)
        .def_static("point", [](const Vec& c) { return HybZono::point(c); })
        .def_static("interval_box", &HybZono::interval_box)
        .def_property_readonly("n", &HybZono::n)
        .def_property_readonly("n_gc", &HybZono::nGc)
        .def_property_readonly("n_gb", &HybZono::nGb)
        .def_property_readonly("n_c", &HybZono::nC)
        .def_property_readonly("Gc", [](const HybZono& z) { return Dense(z.Gc); })
        .def_property_readonly("Gb", [](const HybZono& z) { return Dense(z.Gb); })
        .def_property_readonly("Ac", [](const HybZono& z) { return Dense(z.Ac); })
        .def_property_readonly("Ab", [](const HybZono& z) { return Dense(z.Ab); })
        .def_property_readonly("c", [](const HybZono& z) { return z.c; })
        .def_property_readonly("b", [](const HybZono& z) { return z.b; })
        .def_property_readonly("form", [](const HybZono& z) { return z.form; })
        .def("map_factors", &HybZono::map_factors);

    m.def("affine_map",
          [](const Dense& R, const HybZono& Z, const Vec& s) {
              return affine_map(sparse_from_dense(R), Z, s);
          },
          py::arg("R"), py::arg("Z"), py::arg("s") = Vec());
    m.def("minkowski_sum", &minkowski_sum);
    m.def("cartesian_product", &cartesian_product);
    m.def("generalized_intersection",
          [](const HybZono& Z1, const HybZono& Z2, const Dense& R) {
              return generalized_intersection(Z1, Z2, sparse_from_dense(R));
          });
    m.def("convex_relaxation", &convex_relaxation);
    m.def("convert_form", &convert_form);
    m.def("contains_point", &contains_point, py::arg("Z"), py::arg("x"), py::arg("tol") = 1e-6);
    m.def("interval_hull", &interval_hull);
    m.def("regular_polygon_zonotope", &regular_polygon_zonotope);
    m.def("complexity", &complexity);

    m.def("union_sharp", &union_sharp);
    m.def("union_condensed", &union_condensed);
    m.def("union_zonotope", &union_zonotope, py::arg("sets"), py::arg("shared_tol") = 0.0);

    py::enum_<UnionKind>(m, "UnionKind")
        .value("SHARP", UnionKind::Sharp)
        .value("CONDENSED", UnionKind::Condensed)
        .value("ZONOTOPE", UnionKind::Zonotope);

    py::class_<PWAMode>(m, "PWAMode")
        .def(py::init([](const Dense& A, const Dense& B, const Vec& f, const HybZono& domain) {
                 return PWAMode{sparse_from_dense(A), sparse_from_dense(B), f, domain};
             }),
             py::arg("A"), py::arg("B"), py::arg("f"), py::arg("domain"));

    py::class_<PWASystem>(m, "PWASystem")
        .def(py::init([](std::vector<PWAMode> modes, int nx, int nu, const HybZono& S_bar,
                         const HybZono& U_bar) {
                 return PWASystem{std::move(modes), nx, nu, S_bar, U_bar};
             }),
             py::arg("modes"), py::arg("nx"), py::arg("nu"), py::arg("S_bar"), py::arg("U_bar"));

    py::class_<CostSpec>(m, "CostSpec")
        .def(py::init([](const Dense& Q, const Dense& R, const Dense& QN,
                         std::vector<Vec> x_ref) {
                 return CostSpec{sparse_from_dense(Q), sparse_from_dense(R),
                                 sparse_from_dense(QN), std::move(x_ref)};
             }),
             py::arg("Q"), py::arg("R"), py::arg("QN"), py::arg("x_ref"));

    py::class_<LiftedLayout>(m, "LiftedLayout")
        .def_readonly("nx", &LiftedLayout::nx)
        .def_readonly("nu", &LiftedLayout::nu)
        .def_readonly("N", &LiftedLayout::N)
        .def("x_offset", &LiftedLayout::x_offset)
        .def("u_offset", &LiftedLayout::u_offset)
        .def("total", &LiftedLayout::total);

    py::class_<LiftedPlanningProblem>(m, "LiftedPlanningProblem")
        .def_property_readonly("Z", [](const LiftedPlanningProblem& p) { return p.Z; })
        .def_property_readonly("P", [](const LiftedPlanningProblem& p) { return Dense(p.P); })
        .def_property_readonly("q", [](const LiftedPlanningProblem& p) { return p.q; })
        .def_readonly("layout", &LiftedPlanningProblem::layout);

    m.def("mode_graph", &mode_graph);
    m.def("system_graph", &system_graph);
    m.def("constrain_graph", &constrain_graph);
    m.def("reach_step", [](const HybZono& Xk, const HybZono& Psi) {
        return reach_step(Xk, Psi, nullptr);
    });
    m.def("reach_step", [](const HybZono& Xk, const HybZono& Psi, const HybZono& U_bar) {
        return reach_step(Xk, Psi, &U_bar);
    });
    m.def("build_problem",
          [](const PWASystem& sys, const HybZono& X0,
             const std::vector<std::optional<HybZono>>& F, const CostSpec& cost, UnionKind kind) {
              return build_problem(sys, X0, F, cost, kind);
          });

    py::enum_<SolveStatus>(m, "SolveStatus")
        .value("CONVERGED", SolveStatus::Converged)
        .value("ITER_LIMIT", SolveStatus::IterLimit)
        .value("TIME_LIMIT", SolveStatus::TimeLimit);

    py::class_<SolverParams>(m, "SolverParams")
        .def(py::init<>())
        .def_readwrite("rho", &SolverParams::rho)
        .def_readwrite("eps_p", &SolverParams::eps_p)
        .def_readwrite("k_restart", &SolverParams::k_restart)
        .def_readwrite("k_ph1", &SolverParams::k_ph1)
        .def_readwrite("k_ph2", &SolverParams::k_ph2)
        .def_readwrite("l_buf", &SolverParams::l_buf)
        .def_readwrite("eps_buf", &SolverParams::eps_buf)
        .def_readwrite("eps_d", &SolverParams::eps_d)
        .def_readwrite("t_max", &SolverParams::t_max)
        .def_readwrite("seed", &SolverParams::seed);

    py::class_<SolverResult>(m, "SolverResult")
        .def_readonly("z", &SolverResult::z)
        .def_readonly("xi", &SolverResult::xi)
        .def_readonly("zeta", &SolverResult::zeta)
        .def_readonly("u", &SolverResult::u)
        .def_readonly("r_p", &SolverResult::r_p)
        .def_readonly("status", &SolverResult::status)
        .def_readonly("iterations", &SolverResult::iterations)
        .def_readonly("phase1_iterations", &SolverResult::phase1_iterations)
        .def_readonly("wall_time", &SolverResult::wall_time)
        .def_readonly("objective", &SolverResult::objective);

    m.def("admm_fp",
          [](const HybZono& Z, const Dense& P, const Vec& q, const SolverParams& params) {
              return admm_fp(Z, sparse_from_dense(P), q, params);
          },
          py::arg("Z"), py::arg("P"), py::arg("q"), py::arg("params") = SolverParams());
    m.def("solve_convex_qp",
          [](const HybZono& Z, const Dense& P, const Vec& q, const SolverParams& params) {
              return solve_convex_qp(Z, sparse_from_dense(P), q, params);
          },
          py::arg("Z"), py::arg("P"), py::arg("q"), py::arg("params") = SolverParams());
    m.def("warm_start_from_point", &warm_start_from_point);

    // benchmark scenarios
    auto mb = m.def_submodule("bench");
    py::class_<bench::TwoEquilibriumRun>(mb, "TwoEquilibriumRun")
        .def_property_readonly("final_set",
                               [](const bench::TwoEquilibriumRun& r) { return r.final_set; })
        .def_property_readonly("per_step",
                               [](const bench::TwoEquilibriumRun& r) { return r.per_step; });
    mb.def("run_two_equilibrium", &bench::run_two_equilibrium, py::arg("steps"), py::arg("kind"),
           py::arg("lifted"), py::arg("constrained"));
    mb.def("two_equilibrium_system", &bench::two_equilibrium_system);
    mb.def("two_equilibrium_x0", &bench::two_equilibrium_x0);

    py::class_<bench::ReachAvoidScenario>(mb, "ReachAvoidScenario")
        .def_property_readonly("prob",
                               [](const bench::ReachAvoidScenario& s) { return s.prob; })
        .def_readonly("params", &bench::ReachAvoidScenario::params)
        .def_readonly("N", &bench::ReachAvoidScenario::N);
    mb.def("build_reach_avoid", &bench::build_reach_avoid, py::arg("fs"), py::arg("seed"));
}
