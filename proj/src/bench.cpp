#include "zonoplan/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace zonoplan
{
namespace bench
{

namespace
{

SpMat dense2(double a11, double a12, double a21, double a22)
{
    Eigen::MatrixXd D(2, 2);
    D << a11, a12, a21, a22;
    return sparse_from_dense(D);
}

Vec vec2(double a, double b)
{
    Vec v(2);
    v << a, b;
    return v;
}

Vec vec4(double a, double b, double c, double d)
{
    Vec v(4);
    v << a, b, c, d;
    return v;
}

SpMat sparse_diag(const Vec& d)
{
    std::vector<Triplet> trips;
    for (int i = 0; i < d.size(); ++i)
    {
        trips.emplace_back(i, i, d(i));
    }
    return make_sparse(static_cast<int>(d.size()), static_cast<int>(d.size()), trips);
}

HybZono box_zono(double lo, double hi)
{
    Vec l(1), h(1);
    l << lo;
    h << hi;
    return HybZono::interval_box(l, h);
}

void ensure_dir(const std::string& dir)
{
    std::filesystem::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name)
{
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

// ---------------------------------------------------------------- two-equilibrium

PWASystem two_equilibrium_system()
{
    PWAMode left;
    left.A = dense2(0.75, 0.25, -0.25, 0.75);
    left.B = SpMat(2, 0);
    left.f = vec2(-0.25, -0.25);
    left.domain = HybZono::zonotope(dense2(1.0, 0.0, 0.0, 2.0), vec2(-1.0, 1.0));

    PWAMode right;
    right.A = dense2(0.75, -0.25, 0.25, 0.75);
    right.B = SpMat(2, 0);
    right.f = vec2(0.25, -0.25);
    // mirror of the left half-box about the x2 axis
    right.domain = affine_map(dense2(-1.0, 0.0, 0.0, 1.0), left.domain);

    PWASystem sys;
    sys.modes = {left, right};
    sys.nx = 2;
    sys.nu = 0;
    sys.S_bar = two_equilibrium_state_box();
    sys.U_bar = HybZono::point(Vec(0));
    return sys;
}

HybZono two_equilibrium_x0()
{
    return HybZono::zonotope(dense2(0.25, -0.19, 0.19, 0.25), vec2(-1.31, 2.55));
}

HybZono two_equilibrium_state_box()
{
    return HybZono::zonotope(dense2(2.0, 0.0, 0.0, 2.0), vec2(0.0, 1.0));
}

Vec two_equilibrium_map(const Vec& x)
{
    const PWASystem sys = two_equilibrium_system();
    const PWAMode& m = x(0) <= 0.0 ? sys.modes[0] : sys.modes[1];
    return m.A * x + m.f;
}

TwoEquilibriumRun run_two_equilibrium(int steps, UnionKind kind, bool lifted, bool constrained)
{
    if (steps < 1)
    {
        throw InvalidArgument("two-equilibrium: steps must be >= 1.");
    }
    const PWASystem sys = two_equilibrium_system();
    HybZono Psi = system_graph(sys, kind);
    if (constrained)
    {
        Psi = constrain_graph(Psi, convert_form(two_equilibrium_state_box(), Form::ZeroOne));
    }
    const HybZono S01 = convert_form(sys.S_bar, Form::ZeroOne);

    TwoEquilibriumRun run;
    HybZono X = convert_form(two_equilibrium_x0(), Form::ZeroOne);
    run.per_step.push_back(complexity(X));
    for (int k = 0; k < steps; ++k)
    {
        X = lifted ? lifted_step(X, Psi, S01, nullptr) : reach_step(X, Psi, nullptr);
        run.per_step.push_back(complexity(X));
    }
    run.final_set = std::move(X);
    return run;
}

// ---------------------------------------------------------------- random MILP

std::uint64_t instance_seed(std::uint64_t base_seed, int index)
{
    return base_seed + static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL;
}

MilpInstance random_milp_instance(const MilpDims& dims, RngStream& rng)
{
    // draw order fixed: Gc, Gb, Ac, Ab (row-major), then c, q, xi*
    auto random_matrix = [&](int rows, int cols) {
        std::vector<Triplet> trips;
        for (int r = 0; r < rows; ++r)
        {
            for (int cidx = 0; cidx < cols; ++cidx)
            {
                if (rng.uniform(0.0, 1.0) < dims.density)
                {
                    trips.emplace_back(r, cidx, rng.uniform(-1.0, 1.0));
                }
            }
        }
        return make_sparse(rows, cols, trips);
    };

    const SpMat Gc = random_matrix(dims.n, dims.nGc);
    const SpMat Gb = random_matrix(dims.n, dims.nGb);
    const SpMat Ac = random_matrix(dims.nC, dims.nGc);
    const SpMat Ab = random_matrix(dims.nC, dims.nGb);

    Vec c(dims.n);
    for (int i = 0; i < dims.n; ++i)
    {
        c(i) = rng.uniform(-1.0, 1.0);
    }
    Vec q(dims.n);
    for (int i = 0; i < dims.n; ++i)
    {
        q(i) = rng.uniform(-1.0, 1.0);
    }

    // feasibility forced: sample an admissible factor and set b = A xi*
    Vec xi_c(dims.nGc), xi_b(dims.nGb);
    for (int i = 0; i < dims.nGc; ++i)
    {
        xi_c(i) = rng.uniform(-1.0, 1.0);
    }
    for (int i = 0; i < dims.nGb; ++i)
    {
        xi_b(i) = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    }
    Vec b = Ac * xi_c + Ab * xi_b;

    MilpInstance inst;
    inst.Z = HybZono(Gc, Gb, c, Ac, Ab, b, Form::Canonical);
    inst.q = q;
    return inst;
}

bool verify_milp_result(const HybZono& Z, const SolverResult& res, double eps_p,
                        double residual_tol)
{
    if (res.xi.size() != Z.nG() || res.zeta.size() != Z.nG())
    {
        return false;
    }
    if (Z.nC() > 0)
    {
        const Vec r = Z.A() * res.xi - Z.b;
        if (r.cwiseAbs().maxCoeff() > residual_tol)
        {
            return false;
        }
    }
    const double lo = Z.box_lo();
    const double hi = Z.box_hi();
    for (int i = 0; i < Z.nGc(); ++i)
    {
        if (res.zeta(i) < lo - 1e-9 || res.zeta(i) > hi + 1e-9)
        {
            return false;
        }
    }
    for (int i = Z.nGc(); i < Z.nG(); ++i)
    {
        const double v = res.zeta(i);
        if (std::min(std::abs(v - lo), std::abs(v - hi)) > 1e-9)
        {
            return false;
        }
    }
    return (res.xi - res.zeta).cwiseAbs().maxCoeff() <= eps_p + 1e-12;
}

// ---------------------------------------------------------------- reach-avoid

namespace
{

// double integrator in discrete time
std::pair<SpMat, SpMat> double_integrator(double dt)
{
    Eigen::MatrixXd A(4, 4), B(4, 2);
    A << 1, 0, dt, 0,
         0, 1, 0, dt,
         0, 0, 1, 0,
         0, 0, 0, 1;
    B << dt * dt / 2, 0,
         0, dt * dt / 2,
         dt, 0,
         0, dt;
    return {sparse_from_dense(A), sparse_from_dense(B)};
}

HybZono box2_zono(const Box2& bx)
{
    Vec lo(2), hi(2);
    lo << bx.xlo, bx.ylo;
    hi << bx.xhi, bx.yhi;
    return HybZono::interval_box(lo, hi);
}

// corridor free space: full columns alternate with columns carrying a seeded
// obstacle band, leaving top and bottom passages
std::vector<Box2> corridor_free_space(RngStream& rng)
{
    std::vector<Box2> boxes;
    for (int col = 0; col < 5; ++col)
    {
        const double x0 = 2.0 * col;
        const double x1 = x0 + 2.0;
        if (col % 2 == 0)
        {
            boxes.push_back({x0, x1, -5.0, 5.0});
        }
        else
        {
            const double g = rng.uniform(-2.5, 2.5);
            const double w = rng.uniform(0.5, 1.25);
            boxes.push_back({x0, x1, -5.0, g - w});
            boxes.push_back({x0, x1, g + w, 5.0});
        }
    }
    return boxes;
}

HybZono union_of_boxes(const std::vector<Box2>& boxes)
{
    std::vector<HybZono> zs;
    zs.reserve(boxes.size());
    for (const auto& bx : boxes)
    {
        zs.push_back(convert_form(box2_zono(bx), Form::ZeroOne));
    }
    return union_zonotope(zs);
}

// membership in a centered 2-D zonotope via its facet normals
bool in_zono_2d(const HybZono& Z, const Vec& p, double tol)
{
    const Eigen::MatrixXd G(Z.Gc);
    const Vec d = p - Z.c;
    for (int j = 0; j < G.cols(); ++j)
    {
        Vec n(2);
        n << -G(1, j), G(0, j);
        const double nn = n.norm();
        if (nn < 1e-14)
        {
            continue;
        }
        n /= nn;
        double support = 0.0;
        for (int k = 0; k < G.cols(); ++k)
        {
            support += std::abs(n.dot(G.col(k)));
        }
        if (std::abs(n.dot(d)) > support + tol)
        {
            return false;
        }
    }
    return true;
}

} // namespace

namespace
{

ReachAvoidScenario build_reach_avoid_impl(int fs, std::uint64_t seed,
                                          const std::vector<Box2>* boxes_override);

} // namespace

ReachAvoidScenario build_reach_avoid(int fs, std::uint64_t seed)
{
    return build_reach_avoid_impl(fs, seed, nullptr);
}

ReachAvoidScenario build_reach_avoid_trivial(int fs, std::uint64_t seed)
{
    const std::vector<Box2> whole{{0.0, 10.0, -5.0, 5.0}};
    return build_reach_avoid_impl(fs, seed, &whole);
}

namespace
{

ReachAvoidScenario build_reach_avoid_impl(int fs, std::uint64_t seed,
                                          const std::vector<Box2>* boxes_override)
{
    if (fs < 1)
    {
        throw InvalidArgument("reach-avoid: sampling factor must be >= 1.");
    }
    ReachAvoidScenario sc;
    sc.dt = 2.0 / fs;
    sc.N = 10 * fs;
    std::tie(sc.A, sc.B) = double_integrator(sc.dt);
    sc.x0 = vec4(0.1, 0.0, 0.1, 0.0);
    sc.x_ref = vec4(10.0, 0.0, 0.0, 0.0);
    sc.v_max = 1.0;
    sc.a_max = 0.1 * M_PI / 2.0;

    const HybZono Sp = HybZono::interval_box(vec2(0.0, -5.0), vec2(10.0, 5.0));
    const HybZono Sv = regular_polygon_zonotope(sc.v_max, 4);
    const HybZono U = regular_polygon_zonotope(sc.a_max, 4);

    PWAMode mode;
    mode.A = sc.A;
    mode.B = sc.B;
    mode.f = Vec::Zero(4);
    mode.domain = cartesian_product(cartesian_product(Sp, Sv), U);

    PWASystem sys;
    sys.modes = {mode};
    sys.nx = 4;
    sys.nu = 2;
    sys.S_bar = cartesian_product(Sp, Sv);
    sys.U_bar = U;

    const HybZono Psi = system_graph(sys, UnionKind::Condensed);

    // terminal set {x_ref} + (O(1,6) x O(0.01,6))
    const HybZono FN = minkowski_sum(
        HybZono::point(sc.x_ref),
        cartesian_product(regular_polygon_zonotope(1.0, 6), regular_polygon_zonotope(0.01, 6)));

    RngStream rng(seed);
    sc.free_boxes = boxes_override != nullptr ? *boxes_override : corridor_free_space(rng);
    const HybZono P_free = union_of_boxes(sc.free_boxes);

    // lifted recursion with a position-space intersection each step
    const HybZono S01 = convert_form(sys.S_bar, Form::ZeroOne);
    const HybZono U01 = convert_form(sys.U_bar, Form::ZeroOne);
    HybZono Z = convert_form(HybZono::point(sc.x0), Form::ZeroOne);
    LiftedLayout layout{4, 2, sc.N};
    for (int k = 1; k <= sc.N; ++k)
    {
        const HybZono Psi_k =
            k == sc.N ? constrain_graph(Psi, convert_form(FN, Form::ZeroOne)) : Psi;
        Z = lifted_step(Z, Psi_k, S01, &U01);
        std::vector<Triplet> trips;
        trips.emplace_back(0, layout.x_offset(k), 1.0);
        trips.emplace_back(1, layout.x_offset(k) + 1, 1.0);
        Z = generalized_intersection(Z, P_free, make_sparse(2, Z.n(), trips));
    }

    CostSpec cost;
    cost.Q = sparse_diag(vec4(0.1 / sc.N, 0.1 / sc.N, 0.0, 0.0));
    cost.QN = sparse_diag(vec4(1.0, 1.0, 0.0, 0.0));
    cost.R = pruned(SpMat((10.0 / sc.N) * sparse_identity(2)));
    cost.x_ref.assign(static_cast<size_t>(sc.N), sc.x_ref);

    sc.prob.layout = layout;
    sc.prob.Z = std::move(Z);
    std::tie(sc.prob.P, sc.prob.q) = assemble_cost(cost, sc.N, 4, 2);

    sc.params = SolverParams{};
    sc.params.seed = seed;
    return sc;
}

} // namespace

bool verify_reach_avoid(const ReachAvoidScenario& sc, const std::vector<TrajectoryStage>& traj,
                        double dyn_tol, double cont_tol)
{
    if (static_cast<int>(traj.size()) != sc.N + 1)
    {
        return false;
    }
    const HybZono Sv = regular_polygon_zonotope(sc.v_max, 4);
    const HybZono Uz = regular_polygon_zonotope(sc.a_max, 4);
    const HybZono Fpos = regular_polygon_zonotope(1.0, 6);
    const HybZono Fvel = regular_polygon_zonotope(0.01, 6);

    for (int k = 0; k <= sc.N; ++k)
    {
        const Vec& x = traj[static_cast<size_t>(k)].x;
        if (x.size() != 4)
        {
            return false;
        }
        // position containment in the corridor union (skip the fixed x0)
        if (k > 0)
        {
            bool inside = false;
            for (const auto& bx : sc.free_boxes)
            {
                if (bx.contains(x(0), x(1), cont_tol))
                {
                    inside = true;
                    break;
                }
            }
            if (!inside)
            {
                return false;
            }
        }
        if (!in_zono_2d(Sv, x.tail(2), cont_tol))
        {
            return false;
        }
        if (k < sc.N)
        {
            const Vec& u = traj[static_cast<size_t>(k)].u;
            if (u.size() != 2 || !in_zono_2d(Uz, u, cont_tol))
            {
                return false;
            }
            const Vec pred = sc.A * x + sc.B * u;
            if ((traj[static_cast<size_t>(k + 1)].x - pred).cwiseAbs().maxCoeff() > dyn_tol)
            {
                return false;
            }
        }
    }
    const Vec& xN = traj.back().x;
    Vec dpos = xN.head(2) - sc.x_ref.head(2);
    Vec dvel = xN.tail(2) - sc.x_ref.tail(2);
    return in_zono_2d(Fpos, dpos + Fpos.c, cont_tol) && in_zono_2d(Fvel, dvel + Fvel.c, cont_tol);
}

// ---------------------------------------------------------------- behavior planning

namespace
{

constexpr double kLaneHalfWidth = 0.255;
constexpr double kRoadLength = 10.5;
constexpr double kOccupancyHalf = 0.5;
constexpr double kKd = 0.213;
constexpr double kKdd = 0.653;

HybZono triangle_conzono(const Vec& v0, const Vec& v1, const Vec& v2)
{
    Eigen::MatrixXd V(2, 3);
    V << v0(0), v1(0), v2(0), v0(1), v1(1), v2(1);
    SpMat A(1, 3);
    A.insert(0, 0) = 1.0;
    A.insert(0, 1) = 1.0;
    A.insert(0, 2) = 1.0;
    Vec b(1);
    b << 1.0;
    return HybZono::constrained(sparse_from_dense(V), Vec::Zero(2), A, b, Form::ZeroOne);
}

std::vector<Box2> lane_free_segments(double lane_lo, double lane_hi, double occ_center)
{
    std::vector<Box2> out;
    const double a = occ_center - kOccupancyHalf;
    const double b = occ_center + kOccupancyHalf;
    if (a > 0.0)
    {
        out.push_back({0.0, std::min(a, kRoadLength), lane_lo, lane_hi});
    }
    if (b < kRoadLength)
    {
        out.push_back({std::max(b, 0.0), kRoadLength, lane_lo, lane_hi});
    }
    if (out.empty())
    {
        // fully blocked never happens with these lengths, but stay safe
        out.push_back({0.0, kRoadLength, lane_lo, lane_hi});
    }
    return out;
}

} // namespace

BehaviorScenario build_behavior_scenario(std::uint64_t seed)
{
    BehaviorScenario sc;
    sc.N = 15;
    sc.v_max = 1.0;
    sc.heading_slope = std::tan(M_PI / 6.0);
    const double dt = 1.0;
    const double d_rl = kLaneHalfWidth;
    const double d_ll = -kLaneHalfWidth;

    auto [A, B] = double_integrator(dt);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 4);
    K(1, 1) = kKd;
    K(1, 3) = kKdd;
    const SpMat Acl = pruned(SpMat(A - SpMat(B * sparse_from_dense(K))));
    const Vec f_rl = B * (K * vec4(0.0, d_rl, 0.0, 0.0));
    const Vec f_ll = B * (K * vec4(0.0, d_ll, 0.0, 0.0));

    // coupled velocity domains: right-lane tracking needs d_dot >= 0 below the
    // 30-degree heading bound, left-lane tracking mirrors it
    const HybZono tri_right = triangle_conzono(vec2(0.0, 0.0), vec2(sc.v_max, 0.0),
                                               vec2(sc.v_max, sc.heading_slope * sc.v_max));
    const HybZono tri_left = triangle_conzono(vec2(0.0, 0.0), vec2(sc.v_max, 0.0),
                                              vec2(sc.v_max, -sc.heading_slope * sc.v_max));

    const HybZono box_s = convert_form(box_zono(0.0, kRoadLength), Form::ZeroOne);
    const HybZono box_d = convert_form(box_zono(-0.51, 0.51), Form::ZeroOne);
    const HybZono box_sdd = convert_form(box_zono(-1.0, 1.0), Form::ZeroOne);
    const HybZono box_ddd = convert_form(box_zono(-0.01, 0.01), Form::ZeroOne);

    auto make_domain = [&](const HybZono& tri) {
        return cartesian_product(
            cartesian_product(cartesian_product(cartesian_product(box_s, box_d), tri), box_sdd),
            box_ddd);
    };

    PWAMode right{Acl, B, f_rl, make_domain(tri_right)};
    PWAMode left{Acl, B, f_ll, make_domain(tri_left)};
    sc.modes = {right, left};

    PWASystem sys;
    sys.modes = sc.modes;
    sys.nx = 4;
    sys.nu = 2;
    sys.S_bar = cartesian_product(
        cartesian_product(box_zono(0.0, kRoadLength), box_zono(-0.51, 0.51)),
        HybZono::interval_box(vec2(0.0, -sc.heading_slope * sc.v_max),
                              vec2(sc.v_max, sc.heading_slope * sc.v_max)));
    sys.U_bar = cartesian_product(box_zono(-1.0, 1.0), box_zono(-0.01, 0.01));

    const HybZono Psi = system_graph(sys, UnionKind::Condensed);
    const HybZono Sv_bar =
        convert_form(HybZono::interval_box(vec2(0.0, -sc.heading_slope * sc.v_max),
                                           vec2(sc.v_max, sc.heading_slope * sc.v_max)),
                     Form::ZeroOne);

    // obstacle vehicles: one per lane, constant speed; draw order s0, v per vehicle
    RngStream rng(seed);
    const double s0_right = rng.uniform(0.0, sc.v_max * dt * sc.N);
    const double v_right = rng.normal(0.2, 0.1);
    const double s0_left = rng.uniform(0.0, sc.v_max * dt * sc.N);
    const double v_left = rng.normal(0.2, 0.1);

    std::vector<HybZono> graphs;
    for (int k = 1; k <= sc.N; ++k)
    {
        std::vector<Box2> boxes;
        for (const auto& seg :
             lane_free_segments(0.0, 2.0 * kLaneHalfWidth, s0_right + v_right * dt * k))
        {
            boxes.push_back(seg);
        }
        for (const auto& seg :
             lane_free_segments(-2.0 * kLaneHalfWidth, 0.0, s0_left + v_left * dt * k))
        {
            boxes.push_back(seg);
        }
        // shift lane boxes into (s, d) coordinates: d ranges already set above
        sc.free_boxes.push_back(boxes);
        const HybZono Pk = union_of_boxes(boxes);
        graphs.push_back(constrain_graph(Psi, cartesian_product(Pk, Sv_bar)));
    }

    sc.x0 = vec4(0.0, d_rl, 0.5, 0.0);
    CostSpec cost;
    cost.Q = sparse_diag(vec4(0.5, 0.5, 0.0, 0.0));
    cost.QN = pruned(SpMat(10.0 * sparse_identity(4)));
    cost.R = pruned(SpMat(10.0 * sparse_identity(2)));
    for (int k = 1; k <= sc.N; ++k)
    {
        cost.x_ref.push_back(vec4(0.5 * k, d_rl, 0.5, 0.0));
    }
    sc.x_ref = cost.x_ref;

    sc.prob = build_problem_from_graphs(HybZono::point(sc.x0), graphs, sys.S_bar, &sys.U_bar,
                                        cost, 4, 2);

    sc.params = SolverParams{};
    sc.params.rho = 100.0;
    sc.params.eps_p = 0.01;
    sc.params.k_restart = 1000;
    sc.params.k_ph1 = 5000;
    sc.params.eps_d = 0.1;
    sc.params.t_max = 1.0;
    sc.params.seed = seed;
    return sc;
}

bool verify_behavior(const BehaviorScenario& sc, const std::vector<TrajectoryStage>& traj,
                     double dyn_tol, double cont_tol)
{
    if (static_cast<int>(traj.size()) != sc.N + 1)
    {
        return false;
    }
    const double t = sc.heading_slope;

    auto domain_ok = [&](const Vec& x, const Vec& u, bool right_mode) {
        if (x(0) < -cont_tol || x(0) > kRoadLength + cont_tol)
        {
            return false;
        }
        if (std::abs(x(1)) > 0.51 + cont_tol)
        {
            return false;
        }
        const double sd = x(2), dd = x(3);
        if (sd < -cont_tol || sd > sc.v_max + cont_tol)
        {
            return false;
        }
        if (right_mode)
        {
            if (dd < -cont_tol || dd > t * sd + cont_tol)
            {
                return false;
            }
        }
        else
        {
            if (dd > cont_tol || dd < -t * sd - cont_tol)
            {
                return false;
            }
        }
        return std::abs(u(0)) <= 1.0 + cont_tol && std::abs(u(1)) <= 0.01 + cont_tol;
    };

    for (int k = 0; k < sc.N; ++k)
    {
        const Vec& x = traj[static_cast<size_t>(k)].x;
        const Vec& u = traj[static_cast<size_t>(k)].u;
        const Vec& xn = traj[static_cast<size_t>(k + 1)].x;
        if (x.size() != 4 || u.size() != 2)
        {
            return false;
        }
        bool stage_ok = false;
        for (size_t i = 0; i < sc.modes.size(); ++i)
        {
            const Vec pred = sc.modes[i].A * x + sc.modes[i].B * u + sc.modes[i].f;
            if ((xn - pred).cwiseAbs().maxCoeff() <= dyn_tol && domain_ok(x, u, i == 0))
            {
                stage_ok = true;
                break;
            }
        }
        if (!stage_ok)
        {
            return false;
        }
    }
    for (int k = 1; k <= sc.N; ++k)
    {
        const Vec& x = traj[static_cast<size_t>(k)].x;
        bool inside = false;
        for (const auto& bx : sc.free_boxes[static_cast<size_t>(k - 1)])
        {
            if (bx.contains(x(0), x(1), cont_tol))
            {
                inside = true;
                break;
            }
        }
        if (!inside)
        {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- trajectories

std::vector<TrajectoryStage> extract_trajectory(const LiftedLayout& layout, const Vec& z)
{
    if (z.size() != layout.total())
    {
        throw DimensionMismatch("extract_trajectory: lifted vector length mismatch.");
    }
    std::vector<TrajectoryStage> stages;
    for (int k = 0; k <= layout.N; ++k)
    {
        TrajectoryStage st;
        st.k = k;
        st.x = z.segment(layout.x_offset(k), layout.nx);
        if (k < layout.N && layout.nu > 0)
        {
            st.u = z.segment(layout.u_offset(k), layout.nu);
        }
        else
        {
            st.u = Vec(0);
        }
        stages.push_back(std::move(st));
    }
    return stages;
}

Vec stack_trajectory(const LiftedLayout& layout, const std::vector<TrajectoryStage>& stages)
{
    if (static_cast<int>(stages.size()) != layout.N + 1)
    {
        throw DimensionMismatch("stack_trajectory: stage count mismatch.");
    }
    Vec z(layout.total());
    for (int k = 0; k <= layout.N; ++k)
    {
        z.segment(layout.x_offset(k), layout.nx) = stages[static_cast<size_t>(k)].x;
        if (k < layout.N && layout.nu > 0)
        {
            z.segment(layout.u_offset(k), layout.nu) = stages[static_cast<size_t>(k)].u;
        }
    }
    return z;
}

Vec polish_solution(const LiftedPlanningProblem& prob, const SolverResult& res,
                    const SolverParams& params)
{
    const HybZono& Z = prob.Z;
    if (Z.nGb() == 0 || res.status != SolveStatus::Converged)
    {
        return res.z;
    }
    try
    {
        const HybZono slice = fix_binaries(Z, res.zeta.tail(Z.nGb()));
        SolverParams pp = params;
        pp.eps_p = 1e-10;
        pp.eps_d = 1e-8;
        pp.k_ph1 = 50000;
        pp.k_ph2 = 0;
        pp.t_max = std::numeric_limits<double>::infinity();
        std::pair<Vec, Vec> init{res.zeta.head(Z.nGc()), res.u.head(Z.nGc())};
        SolverResult polished = solve_convex_qp(slice, prob.P, prob.q, pp, init);
        if (polished.status != SolveStatus::Converged && polished.r_p > 1e-6)
        {
            return res.z;
        }
        // the affine-exact iterate carries the stage dynamics at solver precision
        return slice.Gc * polished.xi + slice.c;
    }
    catch (const std::exception&)
    {
        return res.z;
    }
}

// ---------------------------------------------------------------- CLI commands

int cmd_two_equilibrium(int steps, const std::string& union_kind, bool lifted, bool constrained,
                        const std::string& out_dir)
{
    try
    {
        UnionKind kind;
        if (union_kind == "sharp")
        {
            kind = UnionKind::Sharp;
        }
        else if (union_kind == "condensed")
        {
            kind = UnionKind::Condensed;
        }
        else if (union_kind == "zonotope")
        {
            kind = UnionKind::Zonotope;
        }
        else
        {
            std::cerr << "two-equilibrium: unknown union kind '" << union_kind << "'\n";
            return 1;
        }
        const TwoEquilibriumRun run = run_two_equilibrium(steps, kind, lifted, constrained);
        ensure_dir(out_dir);
        save_set(run.final_set, join(out_dir, "set.json"));
        write_complexity_csv(run.per_step, join(out_dir, "complexity.csv"));
        const SetComplexity sc = run.per_step.back();
        std::cout << "two-equilibrium " << union_kind << (lifted ? " lifted" : "")
                  << (constrained ? " constrained" : "") << " steps=" << steps << ": (n=" << sc.n
                  << ", n_Gc=" << sc.n_Gc << ", n_Gb=" << sc.n_Gb << ", n_C=" << sc.n_C
                  << ", nnz_G=" << sc.nnz_G << ", nnz_A=" << sc.nnz_A << ")\n";
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "two-equilibrium: " << e.what() << "\n";
        return 1;
    }
}

int cmd_random_milp(int count, int n, int nGc, int nGb, int nC, double density,
                    std::uint64_t seed, double t_max, const std::string& out_dir)
{
    try
    {
        if (count < 1 || n < 1 || nGc < 1 || nGb < 0 || nC < 0)
        {
            std::cerr << "random-milp: counts must be positive\n";
            return 1;
        }
        ensure_dir(out_dir);
        MilpDims dims{n, nGc, nGb, nC, density};
        std::vector<RunRecord> rows;
        int converged = 0, verified_count = 0;
        for (int i = 0; i < count; ++i)
        {
            const std::uint64_t si = instance_seed(seed, i);
            RngStream rng(si);
            const MilpInstance inst = random_milp_instance(dims, rng);
            SolverParams params;
            params.seed = si;
            params.t_max = t_max;
            const SpMat P0(n, n);
            const SolverResult res = admm_fp(inst.Z, P0, inst.q, params);
            const bool ok = res.status == SolveStatus::Converged &&
                            verify_milp_result(inst.Z, res, params.eps_p);
            converged += res.status == SolveStatus::Converged ? 1 : 0;
            verified_count += ok ? 1 : 0;
            rows.push_back({std::to_string(i), si, to_string(res.status), res.iterations,
                            res.phase1_iterations, res.wall_time, res.r_p, res.objective, ok});
        }
        write_report(rows, join(out_dir, "report.csv"));
        std::cout << "random-milp: " << converged << "/" << count << " converged, "
                  << verified_count << " verified\n";
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "random-milp: " << e.what() << "\n";
        return 1;
    }
}

int cmd_reach_avoid(int fs, std::uint64_t seed, double t_max, const std::string& out_dir)
{
    try
    {
        ReachAvoidScenario sc = build_reach_avoid(fs, seed);
        sc.params.t_max = t_max;
        const SolverResult res = admm_fp(sc.prob.Z, sc.prob.P, sc.prob.q, sc.params);
        const Vec z = polish_solution(sc.prob, res, sc.params);
        const auto traj = extract_trajectory(sc.prob.layout, z);
        const bool ok = res.status == SolveStatus::Converged &&
                        verify_reach_avoid(sc, traj, 1e-3, 10.0 * sc.params.eps_p);
        ensure_dir(out_dir);
        save_trajectory(traj, join(out_dir, "trajectory.json"));
        write_report({{"reach_avoid", seed, to_string(res.status), res.iterations,
                       res.phase1_iterations, res.wall_time, res.r_p, res.objective, ok}},
                     join(out_dir, "report.csv"));
        std::cout << "reach-avoid fs=" << fs << " seed=" << seed << ": " << to_string(res.status)
                  << (ok ? " (verified)" : "") << " in " << res.iterations << " iterations\n";
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "reach-avoid: " << e.what() << "\n";
        return 1;
    }
}

int cmd_behavior_planning(std::uint64_t seed, const std::string& warm_start_file,
                          const std::string& out_dir, double t_max)
{
    try
    {
        BehaviorScenario sc = build_behavior_scenario(seed);
        sc.params.t_max = t_max;
        std::optional<std::pair<Vec, Vec>> init;
        if (!warm_start_file.empty())
        {
            const auto prior = load_trajectory(warm_start_file);
            const Vec z_star = stack_trajectory(sc.prob.layout, prior);
            init = warm_start_from_point(sc.prob.Z, z_star, sc.params);
        }
        const SolverResult res = admm_fp(sc.prob.Z, sc.prob.P, sc.prob.q, sc.params, init);
        const Vec z = polish_solution(sc.prob, res, sc.params);
        const auto traj = extract_trajectory(sc.prob.layout, z);
        const bool ok =
            res.status == SolveStatus::Converged && verify_behavior(sc, traj, 1e-3, 0.02);
        ensure_dir(out_dir);
        save_trajectory(traj, join(out_dir, "trajectory.json"));
        write_report({{"behavior", seed, to_string(res.status), res.iterations,
                       res.phase1_iterations, res.wall_time, res.r_p, res.objective, ok}},
                     join(out_dir, "report.csv"));
        std::cout << "behavior-planning seed=" << seed << ": " << to_string(res.status)
                  << (ok ? " (verified)" : "") << " in " << res.iterations << " iterations\n";
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "behavior-planning: " << e.what() << "\n";
        return 1;
    }
}

int cmd_solve(const std::string& problem_path, const SolverParams& params,
              const std::string& out_dir)
{
    ProblemFile pf;
    try
    {
        pf = load_problem(problem_path);
    }
    catch (const std::exception& e)
    {
        std::cerr << "solve: cannot parse " << problem_path << ": " << e.what() << "\n";
        return 2;
    }
    try
    {
        const int n = pf.Z.n();
        const SpMat P = pf.P.has_value() ? *pf.P : SpMat(n, n);
        const Vec q = pf.q.has_value() ? *pf.q : Vec::Zero(n);
        const SolverResult res = admm_fp(pf.Z, P, q, params);

        ensure_dir(out_dir);
        nlohmann::json j;
        j["status"] = to_string(res.status);
        j["iterations"] = res.iterations;
        j["phase1_iterations"] = res.phase1_iterations;
        j["r_p"] = res.r_p;
        j["objective"] = res.objective;
        j["z"] = nlohmann::json::array();
        for (int i = 0; i < res.z.size(); ++i)
        {
            j["z"].push_back(res.z(i));
        }
        std::ofstream out(join(out_dir, "result.json"));
        out << j.dump(2) << "\n";
        write_report({{"solve", params.seed, to_string(res.status), res.iterations,
                       res.phase1_iterations, res.wall_time, res.r_p, res.objective,
                       res.status == SolveStatus::Converged}},
                     join(out_dir, "report.csv"));
        std::cout << "solve: " << to_string(res.status) << " r_p=" << res.r_p
                  << " objective=" << res.objective << "\n";
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "solve: " << e.what() << "\n";
        return 1;
    }
}

} // namespace bench
} // namespace zonoplan
