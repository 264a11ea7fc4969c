#include "zonoplan/hybzono.hpp"
#include "zonoplan/solver.hpp"

#include <cmath>
#include <functional>

namespace zonoplan
{

namespace
{

// interval range of A_c * xi_c over the continuous box plus the unassigned
// binary contributions; used to prune partial binary assignments
struct RowBounds
{
    Vec lo, hi;
};

RowBounds continuous_row_bounds(const HybZono& Z)
{
    RowBounds rb;
    rb.lo = Vec::Zero(Z.nC());
    rb.hi = Vec::Zero(Z.nC());
    const double lo_f = Z.box_lo();
    for (int k = 0; k < Z.Ac.outerSize(); ++k)
    {
        for (SpMat::InnerIterator it(Z.Ac, k); it; ++it)
        {
            const double v = it.value();
            rb.lo(it.row()) += std::min(v * lo_f, v);
            rb.hi(it.row()) += std::max(v * lo_f, v);
        }
    }
    return rb;
}

bool certificate_ok(const HybZono& slice, const Vec& xc, const Vec& x, double tol)
{
    const Vec pt = slice.Gc * xc + slice.c;
    if ((pt - x).cwiseAbs().maxCoeff() > tol)
    {
        return false;
    }
    if (slice.nC() > 0)
    {
        const Vec r = slice.Ac * xc - slice.b;
        if (r.cwiseAbs().maxCoeff() > tol)
        {
            return false;
        }
    }
    return true;
}

} // namespace

bool contains_point(const HybZono& Z, const Vec& x, double tol)
{
    if (x.size() != Z.n())
    {
        throw DimensionMismatch("contains_point: point dimension mismatch.");
    }
    if (Z.nGb() > 20)
    {
        throw TooManyBinaries("contains_point: more than 20 binary generators; use the heuristic.");
    }

    SolverParams qp_params;
    qp_params.eps_p = std::clamp(tol * 1e-2, 1e-10, 1e-8);
    qp_params.eps_d = qp_params.eps_p;
    qp_params.k_ph1 = 30000;
    qp_params.k_ph2 = 0;

    const double bin_lo = Z.box_lo();
    const double bin_hi = Z.box_hi();
    const RowBounds rb = continuous_row_bounds(Z);

    // column view of Ab for incremental updates
    Eigen::MatrixXd Ab(Z.Ab);

    Vec xb(Z.nGb());
    // rhs' = b - Ab * (assigned binaries); remaining binary contribution bounds
    Vec rhs = Z.b;
    Vec rem_lo = Vec::Zero(Z.nC());
    Vec rem_hi = Vec::Zero(Z.nC());
    for (int j = 0; j < Z.nGb(); ++j)
    {
        for (int r = 0; r < Z.nC(); ++r)
        {
            const double v = Ab(r, j);
            rem_lo(r) += std::min(v * bin_lo, v * bin_hi);
            rem_hi(r) += std::max(v * bin_lo, v * bin_hi);
        }
    }

    const double prune_tol = std::max(tol, 1e-9);

    std::function<bool(int)> search = [&](int j) -> bool {
        // prune: every row must admit A_c xi_c + A_b xi_b = rhs residual
        for (int r = 0; r < Z.nC(); ++r)
        {
            if (rhs(r) < rb.lo(r) + rem_lo(r) - prune_tol ||
                rhs(r) > rb.hi(r) + rem_hi(r) + prune_tol)
            {
                return false;
            }
        }
        if (j == Z.nGb())
        {
            const HybZono slice = fix_binaries(Z, xb);
            if (slice.nGc() == 0)
            {
                const bool con_ok = slice.nC() == 0 || slice.b.cwiseAbs().maxCoeff() <= tol;
                return con_ok && (slice.c - x).cwiseAbs().maxCoeff() <= tol;
            }
            const SpMat& G = slice.Gc;
            SpMat P_tilde = pruned(SpMat(G.transpose() * G));
            Vec q_tilde = G.transpose() * (slice.c - x);
            try
            {
                // the best penalty for projection QPs varies with conditioning;
                // walk a fixed ladder until the certificate decides, tightening
                // the residual targets whenever a solve lands near the boundary
                for (const double rho : {1.0, 0.1, 0.01, 10.0})
                {
                    SolverParams qp = qp_params;
                    qp.rho = rho;
                    SolverResult res = solve_convex_factor_qp(slice, P_tilde, q_tilde, qp);
                    if (certificate_ok(slice, res.zeta, x, tol))
                    {
                        return true;
                    }
                    const double dist = (slice.Gc * res.zeta + slice.c - x).cwiseAbs().maxCoeff();
                    if (res.status == SolveStatus::Converged && dist > 1e3 * tol)
                    {
                        return false; // accurate solve, the point is genuinely outside
                    }
                    if (dist <= 1e3 * tol)
                    {
                        SolverParams tight = qp;
                        tight.eps_p = 1e-12;
                        tight.eps_d = 1e-12;
                        tight.k_ph1 = 200000;
                        res = solve_convex_factor_qp(slice, P_tilde, q_tilde, tight,
                                                     std::make_pair(res.zeta, res.u));
                        if (certificate_ok(slice, res.zeta, x, tol))
                        {
                            return true;
                        }
                        if (res.status == SolveStatus::Converged)
                        {
                            return false;
                        }
                    }
                }
                return false;
            }
            catch (const InconsistentSystem&)
            {
                return false; // this binary pattern admits no continuous factors
            }
        }
        for (double val : {bin_hi, bin_lo})
        {
            xb(j) = val;
            Vec rhs_saved = rhs;
            Vec lo_saved = rem_lo, hi_saved = rem_hi;
            for (int r = 0; r < Z.nC(); ++r)
            {
                const double v = Ab(r, j);
                rhs(r) -= v * val;
                rem_lo(r) -= std::min(v * bin_lo, v * bin_hi);
                rem_hi(r) -= std::max(v * bin_lo, v * bin_hi);
            }
            const bool found = search(j + 1);
            rhs = rhs_saved;
            rem_lo = lo_saved;
            rem_hi = hi_saved;
            if (found)
            {
                return true;
            }
        }
        return false;
    };

    return search(0);
}

} // namespace zonoplan
