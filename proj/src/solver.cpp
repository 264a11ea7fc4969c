#include "zonoplan/solver.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace zonoplan
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double inf_norm(const Vec& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

} // namespace

const char* to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterLimit: return "IterLimit";
    case SolveStatus::TimeLimit: return "TimeLimit";
    }
    return "Unknown";
}

bool CycleBuffer::check_and_push(double r_p, double eps_buf)
{
    bool hit = false;
    for (double v : data_)
    {
        if (std::abs(v - r_p) <= eps_buf)
        {
            hit = true;
            break;
        }
    }
    if (capacity_ > 0)
    {
        if (static_cast<int>(data_.size()) < capacity_)
        {
            data_.push_back(r_p);
        }
        else
        {
            data_[static_cast<size_t>(head_)] = r_p;
            head_ = (head_ + 1) % capacity_;
        }
    }
    return hit;
}

void CycleBuffer::clear()
{
    data_.clear();
    head_ = 0;
}

bool detect_cycle(CycleBuffer& buf, double r_p, double eps_buf)
{
    return buf.check_and_push(r_p, eps_buf);
}

CondensedObjective condense_objective(const HybZono& Z, const SpMat& P, const Vec& q)
{
    if (P.rows() != Z.n() || P.cols() != Z.n() || q.size() != Z.n())
    {
        throw DimensionMismatch("condense_objective: P/q dimensions do not match the set.");
    }
    const SpMat G = Z.G();
    CondensedObjective out;
    out.P_tilde = pruned(SpMat(G.transpose() * P * G));
    out.q_tilde = G.transpose() * (P * Z.c + q);
    return out;
}

SymFactorization build_kkt(const SpMat& P_tilde, const SpMat& A, double rho)
{
    const int nG = static_cast<int>(P_tilde.rows());
    const int nC = static_cast<int>(A.rows());
    if (P_tilde.cols() != nG || (nC > 0 && A.cols() != nG))
    {
        throw DimensionMismatch("build_kkt: inconsistent dimensions.");
    }
    std::vector<Triplet> trips;
    append_triplets(P_tilde, trips, 0, 0);
    for (int i = 0; i < nG; ++i)
    {
        trips.emplace_back(i, i, rho);
    }
    if (nC > 0)
    {
        append_triplets(A, trips, nG, 0);
        SpMat At = A.transpose();
        append_triplets(At, trips, 0, nG);
    }
    SpMat M(nG + nC, nG + nC);
    M.setFromTriplets(trips.begin(), trips.end());
    return factorize_sym(M);
}

Vec project_mibox(const Vec& v, int nGc, int nGb, Form form)
{
    if (v.size() != nGc + nGb)
    {
        throw DimensionMismatch("project_mibox: vector length mismatch.");
    }
    const double lo = form == Form::Canonical ? -1.0 : 0.0;
    const double hi = 1.0;
    const double mid = 0.5 * (lo + hi);
    Vec out(v.size());
    for (int i = 0; i < nGc; ++i)
    {
        out(i) = std::min(hi, std::max(lo, v(i)));
    }
    for (int i = nGc; i < nGc + nGb; ++i)
    {
        out(i) = v(i) >= mid ? hi : lo; // tie at the midpoint snaps up
    }
    return out;
}

Vec project_box(const Vec& v, Form form)
{
    const double lo = form == Form::Canonical ? -1.0 : 0.0;
    Vec out(v.size());
    for (int i = 0; i < v.size(); ++i)
    {
        out(i) = std::min(1.0, std::max(lo, v(i)));
    }
    return out;
}

Vec binflip(const Vec& xi, const Vec& zeta, BinflipMode mode, RngStream& rng, const FactorBox& box)
{
    if (xi.size() != zeta.size() || xi.size() != box.nGc + box.nGb)
    {
        throw DimensionMismatch("binflip: vector length mismatch.");
    }
    const double lo = box.lo();
    const double hi = box.hi();
    const double span = hi - lo;
    const double mid = 0.5 * (lo + hi);
    Vec out = zeta;
    for (int j = box.nGc; j < box.nGc + box.nGb; ++j)
    {
        const double f = std::abs(xi(j) - zeta(j)) / span;
        bool flip = false;
        if (mode == BinflipMode::Perturb)
        {
            flip = rng.uniform(0.0, 1.0) < f;
        }
        else
        {
            flip = f + std::max(rng.uniform(-0.3, 0.7), 0.0) > 0.5;
        }
        if (flip)
        {
            out(j) = zeta(j) >= mid ? lo : hi;
        }
    }
    return out;
}

namespace
{

// shared per-iteration data for both solver modes
struct AdmmWork
{
    SpMat G;
    Vec c;
    SpMat A;
    Vec b;
    Vec q_tilde;
    SymFactorization kkt;            // [[P~+rho I, A^T],[A, 0]]
    std::optional<SymFactorization> aat; // A A^T, built on demand for phase 2
    FactorBox box;
    double rho = 0.0;
};

Vec phase1_xi(const AdmmWork& w, const Vec& zeta, const Vec& u)
{
    const int nG = static_cast<int>(w.G.cols());
    Vec rhs(nG + w.b.size());
    rhs.head(nG) = -w.q_tilde + w.rho * (zeta - u);
    rhs.tail(w.b.size()) = w.b;
    Vec sol = w.kkt.solve(rhs);
    return sol.head(nG);
}

Vec phase2_xi(const AdmmWork& w, const Vec& zeta, const Vec& u)
{
    Vec v = zeta - u;
    if (w.b.size() == 0)
    {
        return v;
    }
    Vec lam = w.aat->solve(w.A * v - w.b);
    return v - w.A.transpose() * lam;
}

void ensure_aat(AdmmWork& w)
{
    if (!w.aat.has_value())
    {
        if (w.b.size() == 0)
        {
            w.aat.emplace();
        }
        else
        {
            SpMat AAt = pruned(SpMat(w.A * w.A.transpose()));
            w.aat = factorize_sym(AAt);
        }
    }
}

// convex ADMM (box projection, primal + dual tolerances); shared by the
// relaxation warm start, projection QPs, and the public convex interface
SolverResult convex_admm(AdmmWork& w, const SolverParams& params,
                         const std::optional<std::pair<Vec, Vec>>& init,
                         const Clock::time_point& t0)
{
    const int nG = static_cast<int>(w.G.cols());
    SolverResult res;

    Vec zeta = init.has_value() ? init->first : Vec::Zero(nG);
    Vec u = init.has_value() ? init->second : Vec::Zero(nG);
    Vec xi = zeta;

    const int k_max = params.k_ph1 + params.k_ph2;
    double r_p = std::numeric_limits<double>::infinity();
    res.status = SolveStatus::IterLimit;

    int k = 0;
    while (k < k_max)
    {
        if (seconds_since(t0) > params.t_max)
        {
            res.status = SolveStatus::TimeLimit;
            break;
        }
        xi = phase1_xi(w, zeta, u);
        Vec zeta_new = project_box(xi + u, w.box.form);
        const double r_d = params.rho * inf_norm(zeta_new - zeta);
        zeta = zeta_new;
        u += xi - zeta;
        r_p = inf_norm(xi - zeta);
        ++k;
        if (r_p <= params.eps_p && r_d <= params.eps_d)
        {
            res.status = SolveStatus::Converged;
            break;
        }
    }

    res.xi = xi;
    res.zeta = zeta;
    res.u = u;
    res.r_p = r_p;
    res.iterations = k;
    res.phase1_iterations = k;
    res.z = w.G * zeta + w.c;
    res.wall_time = seconds_since(t0);
    return res;
}

AdmmWork assemble_work(const HybZono& Z, const SpMat& P_tilde, const Vec& q_tilde,
                       const SolverParams& params)
{
    AdmmWork w;
    w.G = Z.G();
    w.c = Z.c;
    w.A = Z.A();
    w.b = Z.b;
    w.q_tilde = q_tilde;
    w.box = FactorBox{Z.nGc(), Z.nGb(), Z.form};
    w.rho = params.rho;
    try
    {
        w.kkt = build_kkt(P_tilde, w.A, params.rho);
    }
    catch (const StructurallySingular&)
    {
        // redundant constraints make the KKT singular; drop them and retry
        auto [A2, b2] = remove_redundant_rows(w.A, w.b);
        w.A = A2;
        w.b = b2;
        w.kkt = build_kkt(P_tilde, w.A, params.rho);
    }
    return w;
}

double set_space_objective(const SpMat& P, const Vec& q, const Vec& z)
{
    return 0.5 * z.dot(P * z) + q.dot(z);
}

} // namespace

IterateState phase1_step(const IterateState& state, const SymFactorization& kkt,
                         const Vec& q_tilde, const Vec& b, double rho, const FactorBox& box)
{
    const int nG = box.nGc + box.nGb;
    Vec rhs(nG + b.size());
    rhs.head(nG) = -q_tilde + rho * (state.zeta - state.u);
    rhs.tail(b.size()) = b;
    Vec sol = kkt.solve(rhs);

    IterateState out = state;
    out.xi = sol.head(nG);
    out.zeta = project_mibox(out.xi + state.u, box.nGc, box.nGb, box.form);
    out.u = state.u + out.xi - out.zeta;
    out.r_p = inf_norm(out.xi - out.zeta);
    out.k = state.k + 1;
    return out;
}

IterateState phase2_step(const IterateState& state, const SymFactorization& aat,
                         const SpMat& A, const Vec& b, const FactorBox& box)
{
    Vec v = state.zeta - state.u;
    IterateState out = state;
    if (b.size() == 0)
    {
        out.xi = v;
    }
    else
    {
        Vec lam = aat.solve(A * v - b);
        out.xi = v - A.transpose() * lam;
    }
    out.zeta = project_mibox(out.xi + state.u, box.nGc, box.nGb, box.form);
    out.u = state.u + out.xi - out.zeta;
    out.r_p = inf_norm(out.xi - out.zeta);
    out.k = state.k + 1;
    return out;
}

SolverResult solve_convex_factor_qp(const HybZono& Zcr, const SpMat& P_tilde, const Vec& q_tilde,
                                    const SolverParams& params,
                                    const std::optional<std::pair<Vec, Vec>>& init)
{
    if (Zcr.nGb() != 0)
    {
        throw InvalidArgument("solve_convex_qp: set has binary generators.");
    }
    const auto t0 = Clock::now();
    AdmmWork w = assemble_work(Zcr, P_tilde, q_tilde, params);
    SolverResult res = convex_admm(w, params, init, t0);
    res.objective = 0.5 * res.zeta.dot(P_tilde * res.zeta) + q_tilde.dot(res.zeta);
    return res;
}

SolverResult solve_convex_qp(const HybZono& Zcr, const SpMat& P, const Vec& q,
                             const SolverParams& params,
                             const std::optional<std::pair<Vec, Vec>>& init)
{
    if (Zcr.nGb() != 0)
    {
        throw InvalidArgument("solve_convex_qp: set has binary generators.");
    }
    const auto t0 = Clock::now();
    const CondensedObjective cond = condense_objective(Zcr, P, q);
    AdmmWork w = assemble_work(Zcr, cond.P_tilde, cond.q_tilde, params);
    SolverResult res = convex_admm(w, params, init, t0);
    res.objective = set_space_objective(P, q, res.z);
    return res;
}

SolverResult admm_fp(const HybZono& Z, const SpMat& P, const Vec& q, const SolverParams& params,
                     const std::optional<std::pair<Vec, Vec>>& init)
{
    const auto t0 = Clock::now();
    const CondensedObjective cond = condense_objective(Z, P, q);
    AdmmWork w = assemble_work(Z, cond.P_tilde, cond.q_tilde, params);

    // initial iterates: supplied, or from the convex relaxation
    Vec zeta0, u0;
    if (init.has_value())
    {
        zeta0 = init->first;
        u0 = init->second;
    }
    else
    {
        AdmmWork w_cr = w;
        w_cr.box.nGc = w.box.nGc + w.box.nGb;
        w_cr.box.nGb = 0;
        SolverResult cr = convex_admm(w_cr, params, std::nullopt, t0);
        if (cr.status == SolveStatus::TimeLimit ||
            (cr.status == SolveStatus::IterLimit && cr.r_p > 10.0 * params.eps_p))
        {
            if (cr.status == SolveStatus::IterLimit)
            {
                std::cerr << "admm_fp: convex relaxation did not reach primal feasibility"
                             " (r_p = " << cr.r_p << "); the relaxation may be empty.\n";
            }
            cr.objective = set_space_objective(P, q, cr.z);
            return cr;
        }
        zeta0 = cr.zeta;
        u0 = cr.u;
    }

    RngStream rng(params.seed);
    CycleBuffer buf(params.l_buf);

    IterateState st;
    st.xi = zeta0;
    st.zeta = zeta0;
    st.u = u0;
    st.phase = 1;
    st.k = 0;

    int k_max = params.k_ph1;
    double r_best = std::numeric_limits<double>::infinity();
    int k_stall = 0;
    int iters_total = 0, iters_ph1 = 0;
    SolveStatus status = SolveStatus::IterLimit;
    ensure_aat(w); // AA^T factorization up front, as in the two-phase scheme

    while (true)
    {
        if (st.k >= k_max)
        {
            if (st.phase == 1)
            {
                st.phase = 2;
                st.k = 0;
                k_max = params.k_ph2;
                buf.clear();
                continue;
            }
            status = SolveStatus::IterLimit;
            break;
        }
        if (seconds_since(t0) > params.t_max)
        {
            status = SolveStatus::TimeLimit;
            break;
        }

        if (st.phase == 1)
        {
            st.xi = phase1_xi(w, st.zeta, st.u);
            ++iters_ph1;
        }
        else
        {
            st.xi = phase2_xi(w, st.zeta, st.u);
        }
        st.zeta = project_mibox(st.xi + st.u, w.box.nGc, w.box.nGb, w.box.form);
        st.u += st.xi - st.zeta;
        st.r_p = inf_norm(st.xi - st.zeta);
        ++st.k;
        ++iters_total;

        if (st.r_p <= params.eps_p)
        {
            status = SolveStatus::Converged;
            break;
        }

        // random perturbation if cycle detected
        if (detect_cycle(buf, st.r_p, params.eps_buf))
        {
            st.zeta = binflip(st.xi, st.zeta, BinflipMode::Perturb, rng, w.box);
            buf.clear();
        }

        // restart if failing to make progress
        if (st.r_p < r_best)
        {
            r_best = st.r_p;
            k_stall = 0;
        }
        else
        {
            ++k_stall;
        }
        if (k_stall >= params.k_restart)
        {
            st.zeta = binflip(st.xi, st.zeta, BinflipMode::Restart, rng, w.box);
            k_stall = 0;
            r_best = st.r_p;
            buf.clear();
        }
    }

    SolverResult res;
    res.xi = st.xi;
    res.zeta = st.zeta;
    res.u = st.u;
    res.r_p = st.r_p;
    res.status = status;
    res.iterations = iters_total;
    res.phase1_iterations = iters_ph1;
    res.z = w.G * st.zeta + Z.c;
    res.wall_time = seconds_since(t0);
    res.objective = set_space_objective(P, q, res.z);
    return res;
}

std::pair<Vec, Vec> warm_start_from_point(const HybZono& Z, const Vec& z_star,
                                          const SolverParams& params)
{
    if (z_star.size() != Z.n())
    {
        throw DimensionMismatch("warm_start_from_point: point dimension mismatch.");
    }
    const HybZono cr = convex_relaxation(Z);
    const SpMat G = cr.G();
    SpMat P_tilde = pruned(SpMat(G.transpose() * G));
    Vec q_tilde = G.transpose() * (cr.c - z_star);
    SolverResult res = solve_convex_factor_qp(cr, P_tilde, q_tilde, params);
    return {res.zeta, res.u};
}

HybZono fix_binaries(const HybZono& Z, const Vec& zeta_b)
{
    if (zeta_b.size() != Z.nGb())
    {
        throw DimensionMismatch("fix_binaries: binary vector length mismatch.");
    }
    Vec c = Z.c + Z.Gb * zeta_b;
    Vec b = Z.b - Z.Ab * zeta_b;
    return HybZono::constrained(Z.Gc, c, Z.Ac, b, Z.form);
}

} // namespace zonoplan
