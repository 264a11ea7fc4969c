#ifndef ZONOPLAN_PWA_HPP_
#define ZONOPLAN_PWA_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "hybzono.hpp"
#include "unions.hpp"

namespace zonoplan
{

/// One affine mode x+ = A x + B u + f valid on `domain` over (x, u).
struct PWAMode
{
    SpMat A, B;
    Vec f;
    HybZono domain;
};

/// PWA system with global state/input bounds. The union of the mode domains is
/// assumed separable into state and input components (caller's obligation;
/// not checked here).
struct PWASystem
{
    std::vector<PWAMode> modes;
    int nx = 0;
    int nu = 0;
    HybZono S_bar; // state bound
    HybZono U_bar; // input bound (dimension 0 when nu = 0)
};

enum class UnionKind
{
    Sharp,
    Condensed,
    Zonotope
};

struct CostSpec
{
    SpMat Q, R, QN;
    std::vector<Vec> x_ref; // references for x_1 .. x_N
};

/// Stage layout of the lifted vector (x_0, u_0, x_1, ..., u_{N-1}, x_N).
struct LiftedLayout
{
    int nx = 0, nu = 0, N = 0;

    int x_offset(int k) const { return k * (nx + nu); }
    int u_offset(int k) const { return k * (nx + nu) + nx; }
    int total() const { return (N + 1) * nx + N * nu; }
};

struct LiftedPlanningProblem
{
    HybZono Z;
    SpMat P;
    Vec q;
    LiftedLayout layout;
};

/// Graph of one mode: [I; 0; A, B] * domain + {(0, 0, f)} in dimension 2nx+nu.
HybZono mode_graph(const PWAMode& mode);

/// Union of the mode graphs via the selected identity (01-form output).
HybZono system_graph(const PWASystem& sys, UnionKind kind);

/// State-constrained graph: Psi ∩_{[0 0 I]} F_next.
HybZono constrain_graph(const HybZono& Psi, const HybZono& F_next);

/// One successor-set step X_{k+1} = [0 0 I](Psi ∩ (X_k x U_bar)); pass
/// U_bar = nullptr for autonomous systems.
HybZono reach_step(const HybZono& Xk, const HybZono& Psi, const HybZono* U_bar);

/// One lifted step Z_{k+1} = (Z_k x U_bar x S_bar) ∩ Psi_tilde over the
/// trailing (nx + nu + nx) coordinates; U_bar = nullptr when autonomous.
HybZono lifted_step(const HybZono& Zk, const HybZono& Psi_tilde, const HybZono& S_bar,
                    const HybZono* U_bar);

/// PSD check used on cost matrices: symmetry plus nonnegative pivots.
void require_psd(const SpMat& M, const char* name);

/// P = blkdiag(Q, R, Q, ..., R, Q_N); q carries -Q x_k^r per stage and
/// -Q_N x_N^r at the terminal block (zero linear term for x_0).
std::pair<SpMat, Vec> assemble_cost(const CostSpec& cost, int N, int nx, int nu);

/// Lifted problem from per-step constrained graphs (time-varying form).
LiftedPlanningProblem build_problem_from_graphs(const HybZono& X0,
                                                const std::vector<HybZono>& Psi_tilde,
                                                const HybZono& S_bar, const HybZono* U_bar,
                                                const CostSpec& cost, int nx, int nu);

/// Time-invariant convenience: shared system graph, optional per-step state
/// constraint sets F[k] acting on x_{k+1}.
LiftedPlanningProblem build_problem(const PWASystem& sys, const HybZono& X0,
                                    const std::vector<std::optional<HybZono>>& F,
                                    const CostSpec& cost, UnionKind kind);

} // namespace zonoplan

#endif
