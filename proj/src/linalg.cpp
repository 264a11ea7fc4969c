#include "zonoplan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zonoplan
{

namespace
{

bool all_finite(const Vec& v)
{
    return v.allFinite();
}

double inf_norm(const Vec& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

} // namespace

Vec SymFactorization::solve_once(const Vec& rhs) const
{
    if (ldlt_)
    {
        return ldlt_->solve(rhs);
    }
    return lu_->solve(rhs);
}

Vec SymFactorization::solve(const Vec& rhs) const
{
    if (rhs.size() != dim_)
    {
        throw DimensionMismatch("solve_sym: rhs length does not match factored dimension.");
    }
    if (dim_ == 0)
    {
        return Vec(0);
    }
    Vec x = solve_once(rhs);
    const double scale = std::max(1.0, inf_norm(rhs));
    // iterative refinement against the original matrix
    for (int it = 0; it < 4; ++it)
    {
        Vec r = rhs - M_ * x;
        if (!all_finite(r) || inf_norm(r) <= 1e-14 * scale)
        {
            break;
        }
        x += solve_once(r);
    }
    return x;
}

SymFactorization factorize_sym(const SpMat& M, double pivot_tol)
{
    if (M.rows() != M.cols())
    {
        throw DimensionMismatch("factorize_sym: matrix is not square.");
    }

    SymFactorization F;
    F.M_ = M;
    F.M_.makeCompressed();
    F.dim_ = static_cast<int>(M.rows());
    if (F.dim_ == 0)
    {
        return F;
    }

    auto probe_ok = [&](const SymFactorization& cand) -> bool {
        // residual check on a fixed probe right-hand side
        Vec ones = Vec::Ones(cand.dim_);
        Vec rhs = cand.M_ * ones;
        Vec x = cand.solve(rhs);
        if (!all_finite(x))
        {
            return false;
        }
        Vec r = rhs - cand.M_ * x;
        return inf_norm(r) <= 1e-8 * std::max(1.0, inf_norm(rhs));
    };

    // LDLT first
    auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
    ldlt->compute(F.M_);
    if (ldlt->info() == Eigen::Success)
    {
        const Vec d = ldlt->vectorD();
        const double dmax = d.size() > 0 ? d.cwiseAbs().maxCoeff() : 0.0;
        const double dmin = d.size() > 0 ? d.cwiseAbs().minCoeff() : 0.0;
        const bool pivots_ok = d.allFinite() && dmin > pivot_tol * std::max(1.0, dmax);
        F.ldlt_ = ldlt;
        if (pivots_ok && probe_ok(F))
        {
            return F;
        }
        F.rank_deficient_ = !pivots_ok;
        F.ldlt_.reset();
    }

    // LU fallback; pivots freely, so it also covers saddle systems where the
    // LDLT elimination order breaks down
    auto lu = std::make_shared<Eigen::SparseLU<SpMat>>();
    lu->compute(F.M_);
    if (lu->info() == Eigen::Success)
    {
        F.lu_ = lu;
        if (probe_ok(F))
        {
            return F;
        }
        F.lu_.reset();
    }

    throw StructurallySingular("factorize_sym: matrix is singular or numerically rank deficient.");
}

Vec solve_sym(const SymFactorization& F, const Vec& rhs)
{
    return F.solve(rhs);
}

std::pair<SpMat, Vec> remove_redundant_rows(const SpMat& A, const Vec& b, double tol)
{
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (m < 1)
    {
        throw DimensionMismatch("remove_redundant_rows: A has no rows.");
    }
    if (b.size() != m)
    {
        throw DimensionMismatch("remove_redundant_rows: b length does not match A.");
    }

    // dense row elimination with partial pivoting on [A | b]; pivot rows of the
    // original matrix are kept verbatim
    Eigen::MatrixXd W(m, n + 1);
    W.leftCols(n) = Eigen::MatrixXd(A);
    W.col(n) = b;

    std::vector<int> pivot_rows;
    std::vector<bool> used(m, false);

    for (int c = 0; c < n; ++c)
    {
        int best = -1;
        double best_abs = tol;
        for (int r = 0; r < m; ++r)
        {
            if (!used[r] && std::abs(W(r, c)) > best_abs)
            {
                best_abs = std::abs(W(r, c));
                best = r;
            }
        }
        if (best < 0)
        {
            continue;
        }
        used[best] = true;
        pivot_rows.push_back(best);
        const double piv = W(best, c);
        for (int r = 0; r < m; ++r)
        {
            if (!used[r] && W(r, c) != 0.0)
            {
                const double factor = W(r, c) / piv;
                W.row(r) -= factor * W.row(best);
                W(r, c) = 0.0;
            }
        }
    }

    for (int r = 0; r < m; ++r)
    {
        if (!used[r])
        {
            // eliminated to (near) zero coefficients; a nonzero rhs means 0 = beta
            if (W.row(r).head(n).cwiseAbs().maxCoeff() <= tol && std::abs(W(r, n)) > tol)
            {
                throw InconsistentSystem("remove_redundant_rows: contradictory rows (empty set).");
            }
        }
    }

    std::sort(pivot_rows.begin(), pivot_rows.end());

    std::vector<Triplet> trips;
    Vec b_out(static_cast<int>(pivot_rows.size()));
    for (size_t i = 0; i < pivot_rows.size(); ++i)
    {
        b_out(static_cast<int>(i)) = b(pivot_rows[i]);
    }
    // extract the kept rows from column-major storage
    for (int k = 0; k < A.outerSize(); ++k)
    {
        for (SpMat::InnerIterator it(A, k); it; ++it)
        {
            auto pos = std::lower_bound(pivot_rows.begin(), pivot_rows.end(), static_cast<int>(it.row()));
            if (pos != pivot_rows.end() && *pos == static_cast<int>(it.row()))
            {
                const int new_row = static_cast<int>(pos - pivot_rows.begin());
                trips.emplace_back(new_row, static_cast<int>(it.col()), it.value());
            }
        }
    }
    SpMat A_out = make_sparse(static_cast<int>(pivot_rows.size()), n, trips);
    return {A_out, b_out};
}

} // namespace zonoplan
