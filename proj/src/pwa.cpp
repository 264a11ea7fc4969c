#include "zonoplan/pwa.hpp"

#include <cmath>

namespace zonoplan
{

HybZono mode_graph(const PWAMode& mode)
{
    const int nx = static_cast<int>(mode.A.rows());
    const int nu = static_cast<int>(mode.B.cols());
    if (mode.A.cols() != nx || mode.B.rows() != nx || mode.f.size() != nx)
    {
        throw DimensionMismatch("mode_graph: inconsistent dynamics dimensions.");
    }
    if (mode.domain.n() != nx + nu)
    {
        throw DimensionMismatch("mode_graph: domain dimension must be nx + nu.");
    }

    // R = [I 0; 0 I; A B]
    std::vector<Triplet> trips;
    for (int i = 0; i < nx + nu; ++i)
    {
        trips.emplace_back(i, i, 1.0);
    }
    append_triplets(mode.A, trips, nx + nu, 0);
    append_triplets(mode.B, trips, nx + nu, nx);
    const SpMat R = make_sparse(2 * nx + nu, nx + nu, trips);

    Vec offset = Vec::Zero(2 * nx + nu);
    offset.tail(nx) = mode.f;
    return minkowski_sum(affine_map(R, mode.domain), HybZono::point(offset, mode.domain.form));
}

HybZono system_graph(const PWASystem& sys, UnionKind kind)
{
    if (sys.modes.empty())
    {
        throw InvalidArgument("system_graph: system has no modes.");
    }
    std::vector<HybZono> graphs;
    graphs.reserve(sys.modes.size());
    for (const auto& mode : sys.modes)
    {
        graphs.push_back(convert_form(mode_graph(mode), Form::ZeroOne));
    }
    switch (kind)
    {
    case UnionKind::Sharp:
        return union_sharp(graphs);
    case UnionKind::Condensed:
        return union_condensed(graphs);
    case UnionKind::Zonotope:
        for (const auto& g : graphs)
        {
            if (!g.is_zonotope())
            {
                throw ZonotopeUnionInapplicable(
                    "system_graph: zonotope union requires unconstrained zonotope mode graphs.");
            }
        }
        return union_zonotope(graphs);
    }
    throw InvalidArgument("system_graph: unknown union kind.");
}

HybZono constrain_graph(const HybZono& Psi, const HybZono& F_next)
{
    const int nx = F_next.n();
    if (nx > Psi.n())
    {
        throw DimensionMismatch("constrain_graph: F dimension exceeds graph dimension.");
    }
    std::vector<Triplet> trips;
    for (int i = 0; i < nx; ++i)
    {
        trips.emplace_back(i, Psi.n() - nx + i, 1.0);
    }
    return generalized_intersection(Psi, F_next, make_sparse(nx, Psi.n(), trips));
}

HybZono reach_step(const HybZono& Xk, const HybZono& Psi, const HybZono* U_bar)
{
    const int nx = Xk.n();
    const int nu = U_bar != nullptr ? U_bar->n() : 0;
    if (Psi.n() != 2 * nx + nu)
    {
        throw DimensionMismatch("reach_step: graph dimension must be 2*nx + nu.");
    }
    const HybZono XU = U_bar != nullptr ? cartesian_product(Xk, *U_bar) : Xk;

    std::vector<Triplet> trips;
    for (int i = 0; i < nx + nu; ++i)
    {
        trips.emplace_back(i, i, 1.0);
    }
    const SpMat R_front = make_sparse(nx + nu, Psi.n(), trips);
    const HybZono inter = generalized_intersection(Psi, XU, R_front);

    trips.clear();
    for (int i = 0; i < nx; ++i)
    {
        trips.emplace_back(i, nx + nu + i, 1.0);
    }
    return affine_map(make_sparse(nx, Psi.n(), trips), inter);
}

HybZono lifted_step(const HybZono& Zk, const HybZono& Psi_tilde, const HybZono& S_bar,
                    const HybZono* U_bar)
{
    const HybZono Zext = U_bar != nullptr
                             ? cartesian_product(cartesian_product(Zk, *U_bar), S_bar)
                             : cartesian_product(Zk, S_bar);
    const int m = Psi_tilde.n();
    if (Zext.n() < m)
    {
        throw DimensionMismatch("lifted_step: lifted vector shorter than the graph dimension.");
    }
    std::vector<Triplet> trips;
    for (int i = 0; i < m; ++i)
    {
        trips.emplace_back(i, Zext.n() - m + i, 1.0);
    }
    return generalized_intersection(Zext, Psi_tilde, make_sparse(m, Zext.n(), trips));
}

void require_psd(const SpMat& M, const char* name)
{
    if (M.rows() != M.cols())
    {
        throw DimensionMismatch(std::string(name) + ": cost matrix is not square.");
    }
    Eigen::MatrixXd D(M);
    if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, D.cwiseAbs().maxCoeff()))
    {
        throw InvalidArgument(std::string(name) + ": cost matrix is not symmetric.");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(D);
    if (ldlt.info() != Eigen::Success ||
        (ldlt.vectorD().array() < -1e-9 * std::max(1.0, D.cwiseAbs().maxCoeff())).any())
    {
        throw InvalidArgument(std::string(name) + ": cost matrix has a negative pivot.");
    }
}

std::pair<SpMat, Vec> assemble_cost(const CostSpec& cost, int N, int nx, int nu)
{
    require_psd(cost.Q, "Q");
    require_psd(cost.QN, "Q_N");
    if (nu > 0)
    {
        require_psd(cost.R, "R");
    }
    if (static_cast<int>(cost.x_ref.size()) != N)
    {
        throw DimensionMismatch("assemble_cost: x_ref must hold N reference states.");
    }

    LiftedLayout layout{nx, nu, N};
    std::vector<SpMat> blocks;
    blocks.reserve(static_cast<size_t>(2 * N + 1));
    Vec q = Vec::Zero(layout.total());

    blocks.push_back(cost.Q); // x_0 block; zero linear term
    for (int k = 1; k <= N; ++k)
    {
        if (nu > 0)
        {
            blocks.push_back(cost.R);
        }
        const SpMat& Qk = k == N ? cost.QN : cost.Q;
        blocks.push_back(Qk);
        q.segment(layout.x_offset(k), nx) = -(Qk * cost.x_ref[static_cast<size_t>(k - 1)]);
    }
    return {blkdiag(blocks), q};
}

LiftedPlanningProblem build_problem_from_graphs(const HybZono& X0,
                                                const std::vector<HybZono>& Psi_tilde,
                                                const HybZono& S_bar, const HybZono* U_bar,
                                                const CostSpec& cost, int nx, int nu)
{
    const int N = static_cast<int>(Psi_tilde.size());
    if (N < 1)
    {
        throw HorizonZero("build_problem: horizon must be at least 1.");
    }

    HybZono Z = convert_form(X0, Form::ZeroOne);
    const HybZono S01 = convert_form(S_bar, Form::ZeroOne);
    HybZono U01;
    if (U_bar != nullptr)
    {
        U01 = convert_form(*U_bar, Form::ZeroOne);
    }
    for (const auto& Psi : Psi_tilde)
    {
        Z = lifted_step(Z, convert_form(Psi, Form::ZeroOne), S01,
                        U_bar != nullptr ? &U01 : nullptr);
    }

    LiftedPlanningProblem prob;
    prob.layout = LiftedLayout{nx, nu, N};
    if (Z.n() != prob.layout.total())
    {
        throw DimensionMismatch("build_problem: lifted dimension bookkeeping failed.");
    }
    auto [P, q] = assemble_cost(cost, N, nx, nu);
    prob.Z = std::move(Z);
    prob.P = std::move(P);
    prob.q = std::move(q);
    return prob;
}

LiftedPlanningProblem build_problem(const PWASystem& sys, const HybZono& X0,
                                    const std::vector<std::optional<HybZono>>& F,
                                    const CostSpec& cost, UnionKind kind)
{
    const int N = static_cast<int>(F.size());
    if (N < 1)
    {
        throw HorizonZero("build_problem: horizon must be at least 1.");
    }
    const HybZono Psi = system_graph(sys, kind);
    std::vector<HybZono> graphs;
    graphs.reserve(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k)
    {
        if (F[static_cast<size_t>(k)].has_value())
        {
            graphs.push_back(
                constrain_graph(Psi, convert_form(*F[static_cast<size_t>(k)], Form::ZeroOne)));
        }
        else
        {
            graphs.push_back(Psi);
        }
    }
    return build_problem_from_graphs(X0, graphs, sys.S_bar, sys.nu > 0 ? &sys.U_bar : nullptr,
                                     cost, sys.nx, sys.nu);
}

} // namespace zonoplan
