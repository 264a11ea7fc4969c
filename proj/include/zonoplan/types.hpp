#ifndef ZONOPLAN_TYPES_HPP_
#define ZONOPLAN_TYPES_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

namespace zonoplan
{

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

// entries with |value| below this are never stored
inline constexpr double kPruneTol = 1e-12;

// default pivot / rank tolerance
inline constexpr double kRankTol = 1e-9;

struct DimensionMismatch : std::invalid_argument
{
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct FormMismatch : std::invalid_argument
{
    explicit FormMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidInterval : std::invalid_argument
{
    explicit InvalidInterval(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidArgument : std::invalid_argument
{
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

struct StructurallySingular : std::runtime_error
{
    explicit StructurallySingular(const std::string& what) : std::runtime_error(what) {}
};

struct InconsistentSystem : std::runtime_error
{
    explicit InconsistentSystem(const std::string& what) : std::runtime_error(what) {}
};

struct TooManyBinaries : std::runtime_error
{
    explicit TooManyBinaries(const std::string& what) : std::runtime_error(what) {}
};

struct NotAZonotope : std::invalid_argument
{
    explicit NotAZonotope(const std::string& what) : std::invalid_argument(what) {}
};

struct ZonotopeUnionInapplicable : std::invalid_argument
{
    explicit ZonotopeUnionInapplicable(const std::string& what) : std::invalid_argument(what) {}
};

struct HorizonZero : std::invalid_argument
{
    explicit HorizonZero(const std::string& what) : std::invalid_argument(what) {}
};

// drop stored entries with |value| < kPruneTol
inline SpMat pruned(const SpMat& M)
{
    SpMat out = M;
    out.prune([](int, int, double v) { return std::abs(v) >= kPruneTol; });
    out.makeCompressed();
    return out;
}

// build a sparse matrix from triplets; duplicates coalesce by summation, then prune
inline SpMat make_sparse(int rows, int cols, const std::vector<Triplet>& triplets)
{
    SpMat M(rows, cols);
    M.setFromTriplets(triplets.begin(), triplets.end());
    return pruned(M);
}

inline SpMat sparse_identity(int n)
{
    SpMat I(n, n);
    I.setIdentity();
    return I;
}

inline SpMat sparse_from_dense(const Eigen::MatrixXd& D)
{
    return pruned(D.sparseView());
}

// append M's triplets into out with a row/column offset
inline void append_triplets(const SpMat& M, std::vector<Triplet>& out, int row0, int col0)
{
    for (int k = 0; k < M.outerSize(); ++k)
    {
        for (SpMat::InnerIterator it(M, k); it; ++it)
        {
            out.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), it.value());
        }
    }
}

inline SpMat hcat(const SpMat& A, const SpMat& B)
{
    if (A.rows() != B.rows())
    {
        throw DimensionMismatch("hcat: row counts differ.");
    }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(A.nonZeros() + B.nonZeros()));
    append_triplets(A, trips, 0, 0);
    append_triplets(B, trips, 0, static_cast<int>(A.cols()));
    return make_sparse(static_cast<int>(A.rows()), static_cast<int>(A.cols() + B.cols()), trips);
}

inline SpMat vcat(const SpMat& A, const SpMat& B)
{
    if (A.cols() != B.cols())
    {
        throw DimensionMismatch("vcat: column counts differ.");
    }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(A.nonZeros() + B.nonZeros()));
    append_triplets(A, trips, 0, 0);
    append_triplets(B, trips, static_cast<int>(A.rows()), 0);
    return make_sparse(static_cast<int>(A.rows() + B.rows()), static_cast<int>(A.cols()), trips);
}

inline SpMat blkdiag(const std::vector<SpMat>& blocks)
{
    int rows = 0, cols = 0;
    size_t nnz = 0;
    for (const auto& B : blocks)
    {
        rows += static_cast<int>(B.rows());
        cols += static_cast<int>(B.cols());
        nnz += static_cast<size_t>(B.nonZeros());
    }
    std::vector<Triplet> trips;
    trips.reserve(nnz);
    int r = 0, c = 0;
    for (const auto& B : blocks)
    {
        append_triplets(B, trips, r, c);
        r += static_cast<int>(B.rows());
        c += static_cast<int>(B.cols());
    }
    return make_sparse(rows, cols, trips);
}

inline Vec stack(const Vec& a, const Vec& b)
{
    Vec out(a.size() + b.size());
    out.head(a.size()) = a;
    out.tail(b.size()) = b;
    return out;
}

} // namespace zonoplan

#endif
