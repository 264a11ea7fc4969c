#ifndef ZONOPLAN_LINALG_HPP_
#define ZONOPLAN_LINALG_HPP_

#include <memory>
#include <utility>

#include "types.hpp"

namespace zonoplan
{

/// Factorization handle for a square sparse matrix with symmetric pattern.
/// Primary path is a fill-reducing LDLT; a sparse LU fallback covers saddle
/// systems whose elimination order hits a zero pivot. Solves apply iterative
/// refinement against the original matrix.
class SymFactorization
{
public:
    SymFactorization() = default;

    int dim() const { return dim_; }

    /// true when near-zero pivots were encountered (rank deficiency signal)
    bool rank_deficient() const { return rank_deficient_; }

    /// solve M x = rhs to relative residual <= 1e-10 on well-conditioned inputs
    Vec solve(const Vec& rhs) const;

private:
    friend SymFactorization factorize_sym(const SpMat& M, double pivot_tol);

    Vec solve_once(const Vec& rhs) const;

    SpMat M_;
    std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
    std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
    int dim_ = 0;
    bool rank_deficient_ = false;
};

/// Factorize a square sparse matrix with symmetric pattern.
/// Throws StructurallySingular when no usable factorization exists.
SymFactorization factorize_sym(const SpMat& M, double pivot_tol = kRankTol);

Vec solve_sym(const SymFactorization& F, const Vec& rhs);

/// Keep a maximal set of linearly independent rows of [A | b].
/// Returns (A', b') with full row rank such that {x : A'x = b'} = {x : Ax = b}
/// when the system is consistent. Throws InconsistentSystem when elimination
/// produces a row 0 = beta with |beta| > tol.
std::pair<SpMat, Vec> remove_redundant_rows(const SpMat& A, const Vec& b, double tol = kRankTol);

} // namespace zonoplan

#endif
