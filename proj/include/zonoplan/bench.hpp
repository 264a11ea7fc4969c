#ifndef ZONOPLAN_BENCH_HPP_
#define ZONOPLAN_BENCH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "problem_io.hpp"
#include "pwa.hpp"
#include "rng.hpp"
#include "solver.hpp"

namespace zonoplan
{
namespace bench
{

// ---------------------------------------------------------------- two-equilibrium

/// Two-mode system with equilibria on either side of x1 = 0. The mode domains
/// are the half-boxes of [-2,2] x [-1,3]; the right half is encoded as the
/// mirror image of the left one so both 01-form centers stay dense.
PWASystem two_equilibrium_system();
HybZono two_equilibrium_x0();
HybZono two_equilibrium_state_box();

/// exact PWA map of the two-equilibrium system (mode by sign of x1)
Vec two_equilibrium_map(const Vec& x);

struct TwoEquilibriumRun
{
    HybZono final_set;
    std::vector<SetComplexity> per_step; // entries 0..steps
};

TwoEquilibriumRun run_two_equilibrium(int steps, UnionKind kind, bool lifted, bool constrained);

// ---------------------------------------------------------------- random MILP

struct MilpDims
{
    int n = 20;
    int nGc = 40;
    int nGb = 10;
    int nC = 10;
    double density = 0.3;
};

struct MilpInstance
{
    HybZono Z; // canonical form, feasibility forced via b = A xi*
    Vec q;     // linear objective; P = 0
};

MilpInstance random_milp_instance(const MilpDims& dims, RngStream& rng);

/// independent feasibility check of a heuristic result: xi satisfies the
/// equalities, zeta is box-feasible with integral binaries, and the two agree
bool verify_milp_result(const HybZono& Z, const SolverResult& res, double eps_p,
                        double residual_tol = 1e-3);

std::uint64_t instance_seed(std::uint64_t base_seed, int index);

// ---------------------------------------------------------------- reach-avoid

struct Box2
{
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;

    bool contains(double x, double y, double tol) const
    {
        return x >= xlo - tol && x <= xhi + tol && y >= ylo - tol && y <= yhi + tol;
    }
};

struct ReachAvoidScenario
{
    LiftedPlanningProblem prob;
    SpMat A, B; // discrete dynamics for the verifier
    std::vector<Box2> free_boxes;
    Vec x0, x_ref;
    double dt = 0.0;
    int N = 0;
    double v_max = 1.0;
    double a_max = 0.0;
    SolverParams params;
};

ReachAvoidScenario build_reach_avoid(int fs, std::uint64_t seed);

/// same problem with an obstacle-free corridor covering the whole rectangle
ReachAvoidScenario build_reach_avoid_trivial(int fs, std::uint64_t seed);

bool verify_reach_avoid(const ReachAvoidScenario& sc, const std::vector<TrajectoryStage>& traj,
                        double dyn_tol, double cont_tol);

// ---------------------------------------------------------------- behavior planning

struct BehaviorScenario
{
    LiftedPlanningProblem prob;
    std::vector<PWAMode> modes; // closed-loop lane-tracking modes (verifier view)
    std::vector<std::vector<Box2>> free_boxes; // per step k = 1..N over (s, d)
    Vec x0;
    std::vector<Vec> x_ref;
    double v_max = 1.0;
    double heading_slope = 0.0; // tan(30 deg)
    int N = 0;
    SolverParams params; // tuned values from the driving study
};

BehaviorScenario build_behavior_scenario(std::uint64_t seed);

bool verify_behavior(const BehaviorScenario& sc, const std::vector<TrajectoryStage>& traj,
                     double dyn_tol, double cont_tol);

// ---------------------------------------------------------------- trajectories

std::vector<TrajectoryStage> extract_trajectory(const LiftedLayout& layout, const Vec& z);
Vec stack_trajectory(const LiftedLayout& layout, const std::vector<TrajectoryStage>& stages);

/// Re-solve the convex slice with the returned binaries fixed, starting from
/// the heuristic iterates; the affine-exact iterate gives stage dynamics at
/// solver precision. Falls back to the raw point when the slice solve fails.
Vec polish_solution(const LiftedPlanningProblem& prob, const SolverResult& res,
                    const SolverParams& params);

// ---------------------------------------------------------------- CLI commands

int cmd_two_equilibrium(int steps, const std::string& union_kind, bool lifted, bool constrained,
                        const std::string& out_dir);
int cmd_random_milp(int count, int n, int nGc, int nGb, int nC, double density,
                    std::uint64_t seed, double t_max, const std::string& out_dir);
int cmd_reach_avoid(int fs, std::uint64_t seed, double t_max, const std::string& out_dir);
int cmd_behavior_planning(std::uint64_t seed, const std::string& warm_start_file,
                          const std::string& out_dir, double t_max = 1.0);
int cmd_solve(const std::string& problem_path, const SolverParams& params,
              const std::string& out_dir);

} // namespace bench
} // namespace zonoplan

#endif
