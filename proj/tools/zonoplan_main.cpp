#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "zonoplan/bench.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"hybrid zonotope planning and ADMM-FP benchmark harness"};
    app.require_subcommand(1);

    // shared flags
    std::uint64_t seed = 0;
    double rho = 10.0, eps_p = 1e-3, t_max = 1.0;
    std::string out_dir = ".";
    std::string union_kind = "condensed";
    std::string warm_start;

    auto add_common = [&](CLI::App* cmd, bool with_union = false) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--out", out_dir, "output directory");
        if (with_union)
        {
            cmd->add_option("--union", union_kind, "union identity: sharp|condensed|zonotope");
        }
    };

    // two-equilibrium
    int steps = 15;
    bool lifted = false, constrained = false;
    auto* te = app.add_subcommand("two-equilibrium", "two-equilibrium reachability study");
    te->add_option("--steps", steps, "number of reachability steps");
    te->add_flag("--lifted", lifted, "compute the lifted trajectory set");
    te->add_flag("--constrained", constrained, "apply the state constraint set");
    add_common(te, true);

    // random-milp
    int count = 100, n = 20, nGc = 40, nGb = 10, nC = 10;
    double density = 0.3;
    auto* rm = app.add_subcommand("random-milp", "random MILP feasibility benchmark");
    rm->add_option("--count", count, "number of instances");
    rm->add_option("--n", n, "set dimension");
    rm->add_option("--ngc", nGc, "continuous generators");
    rm->add_option("--ngb", nGb, "binary generators");
    rm->add_option("--nc", nC, "equality constraints");
    rm->add_option("--density", density, "matrix density");
    rm->add_option("--t-max", t_max, "per-instance time limit [s]");
    add_common(rm);

    // reach-avoid
    int fs = 1;
    double ra_tmax = 5.0;
    auto* ra = app.add_subcommand("reach-avoid", "double-integrator reach-avoid problem");
    ra->add_option("--fs", fs, "sampling factor (dt = 2/fs, N = 10 fs)");
    ra->add_option("--t-max", ra_tmax, "solver time limit [s]");
    add_common(ra);

    // behavior-planning
    double bp_tmax = 1.0;
    auto* bp = app.add_subcommand("behavior-planning", "two-lane driving scenario");
    bp->add_option("--warm-start", warm_start, "prior trajectory JSON to warm start from");
    bp->add_option("--t-max", bp_tmax, "solver time limit [s]");
    add_common(bp);

    // solve
    std::string problem_path;
    auto* sv = app.add_subcommand("solve", "solve a problem file with ADMM-FP");
    sv->add_option("--problem", problem_path, "problem JSON file")->required();
    sv->add_option("--rho", rho, "ADMM penalty");
    sv->add_option("--eps-p", eps_p, "primal tolerance");
    sv->add_option("--t-max", t_max, "time limit [s]");
    add_common(sv);

    CLI11_PARSE(app, argc, argv);

    using namespace zonoplan;
    if (te->parsed())
    {
        return bench::cmd_two_equilibrium(steps, union_kind, lifted, constrained, out_dir);
    }
    if (rm->parsed())
    {
        return bench::cmd_random_milp(count, n, nGc, nGb, nC, density, seed, t_max, out_dir);
    }
    if (ra->parsed())
    {
        return bench::cmd_reach_avoid(fs, seed, ra_tmax, out_dir);
    }
    if (bp->parsed())
    {
        return bench::cmd_behavior_planning(seed, warm_start, out_dir, bp_tmax);
    }
    if (sv->parsed())
    {
        SolverParams params;
        params.rho = rho;
        params.eps_p = eps_p;
        params.t_max = t_max;
        params.seed = seed;
        return bench::cmd_solve(problem_path, params, out_dir);
    }
    return 1;
}
