#ifndef ZONOPLAN_SOLVER_HPP_
#define ZONOPLAN_SOLVER_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hybzono.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace zonoplan
{

struct SolverParams
{
    double rho = 10.0;
    double eps_p = 1e-3;
    int k_restart = 5000;
    int k_ph1 = 10000;
    int k_ph2 = 90000;
    int l_buf = 20;
    double eps_buf = 1e-3;
    double eps_d = 0.01; // dual tolerance, convex mode
    double t_max = std::numeric_limits<double>::infinity(); // seconds
    std::uint64_t seed = 0;
};

enum class SolveStatus
{
    Converged,
    IterLimit,
    TimeLimit
};

const char* to_string(SolveStatus s);

struct SolverResult
{
    Vec z;    // set-space point G*zeta + c
    Vec xi, zeta, u;
    double r_p = std::numeric_limits<double>::infinity();
    SolveStatus status = SolveStatus::IterLimit;
    int iterations = 0;
    int phase1_iterations = 0;
    double wall_time = 0.0;
    double objective = 0.0;
};

struct CondensedObjective
{
    SpMat P_tilde; // G^T P G
    Vec q_tilde;   // G^T (P c + q)
};

/// factor box description for projections and flips
struct FactorBox
{
    int nGc = 0;
    int nGb = 0;
    Form form = Form::Canonical;

    double lo() const { return form == Form::Canonical ? -1.0 : 0.0; }
    double hi() const { return 1.0; }
};

struct IterateState
{
    Vec xi, zeta, u;
    double r_p = std::numeric_limits<double>::infinity();
    int k = 0;
    int phase = 1;
};

/// circular buffer of recent primal residual norms for cycle detection
class CycleBuffer
{
public:
    explicit CycleBuffer(int capacity) : capacity_(capacity) {}

    /// true iff some stored residual is within eps_buf of r_p; r_p is pushed
    /// afterwards, evicting the oldest entry when full
    bool check_and_push(double r_p, double eps_buf);
    void clear();
    int size() const { return static_cast<int>(data_.size()); }

private:
    int capacity_ = 0;
    int head_ = 0;
    std::vector<double> data_;
};

bool detect_cycle(CycleBuffer& buf, double r_p, double eps_buf);

CondensedObjective condense_objective(const HybZono& Z, const SpMat& P, const Vec& q);

/// factorization of [[P_tilde + rho I, A^T], [A, 0]]
SymFactorization build_kkt(const SpMat& P_tilde, const SpMat& A, double rho);

/// clamp continuous entries to the form's interval; snap binary entries to the
/// nearer endpoint (ties to the upper endpoint)
Vec project_mibox(const Vec& v, int nGc, int nGb, Form form);

/// box-only projection used when solving convex relaxations
Vec project_box(const Vec& v, Form form);

enum class BinflipMode
{
    Perturb,
    Restart
};

/// Randomized flipping of binary entries of zeta driven by the fractionality
/// |xi_j - zeta_j| / (hi - lo). Perturb flips with that probability; restart
/// flips when f + max(rand(-0.3, 0.7), 0) > 0.5.
Vec binflip(const Vec& xi, const Vec& zeta, BinflipMode mode, RngStream& rng, const FactorBox& box);

IterateState phase1_step(const IterateState& state, const SymFactorization& kkt,
                         const Vec& q_tilde, const Vec& b, double rho, const FactorBox& box);

IterateState phase2_step(const IterateState& state, const SymFactorization& aat,
                         const SpMat& A, const Vec& b, const FactorBox& box);

/// ADMM-FP heuristic over a hybrid zonotope feasible set with objective
/// 0.5 z^T P z + q^T z. When init is absent the convex relaxation is solved
/// internally to produce the initial iterates.
SolverResult admm_fp(const HybZono& Z, const SpMat& P, const Vec& q, const SolverParams& params,
                     const std::optional<std::pair<Vec, Vec>>& init = std::nullopt);

/// Convex ADMM over a constrained zonotope (nGb = 0); converges when both the
/// primal residual and the dual residual rho*||zeta_k+1 - zeta_k||_inf meet
/// their tolerances.
SolverResult solve_convex_qp(const HybZono& Zcr, const SpMat& P, const Vec& q,
                             const SolverParams& params,
                             const std::optional<std::pair<Vec, Vec>>& init = std::nullopt);

/// Convex ADMM with the objective given directly in factor space.
SolverResult solve_convex_factor_qp(const HybZono& Zcr, const SpMat& P_tilde, const Vec& q_tilde,
                                    const SolverParams& params,
                                    const std::optional<std::pair<Vec, Vec>>& init = std::nullopt);

/// Initial iterates from projecting a candidate point onto CR(Z).
std::pair<Vec, Vec> warm_start_from_point(const HybZono& Z, const Vec& z_star,
                                          const SolverParams& params);

/// Substitute fixed binary factors, leaving a constrained zonotope over the
/// continuous factors.
HybZono fix_binaries(const HybZono& Z, const Vec& zeta_b);

} // namespace zonoplan

#endif
