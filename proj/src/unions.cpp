#include "zonoplan/unions.hpp"

#include <cmath>

namespace zonoplan
{

namespace
{

void check_union_inputs(const std::vector<HybZono>& sets, const char* who)
{
    if (sets.empty())
    {
        throw InvalidArgument(std::string(who) + ": empty input list.");
    }
    const int n = sets.front().n();
    for (const auto& Z : sets)
    {
        if (Z.n() != n)
        {
            throw DimensionMismatch(std::string(who) + ": inconsistent dimensions.");
        }
        if (Z.form != Form::ZeroOne)
        {
            throw FormMismatch(std::string(who) + ": inputs must be in 01-form.");
        }
    }
}

} // namespace

HybZono union_sharp(const std::vector<HybZono>& sets)
{
    check_union_inputs(sets, "union_sharp");
    const int n = sets.front().n();
    const int N = static_cast<int>(sets.size());

    std::vector<Triplet> trips;
    int rows = 0, cols = 0;
    std::vector<int> indicator_cols;

    // Ac: per constituent [A_c, 0; [I; 0], I], then an all-zero row
    for (const auto& Z : sets)
    {
        append_triplets(Z.Ac, trips, rows, cols);
        rows += Z.nC();
        for (int i = 0; i < Z.nGc(); ++i)
        {
            trips.emplace_back(rows + i, cols + i, 1.0);
        }
        for (int i = 0; i < Z.nG(); ++i)
        {
            trips.emplace_back(rows + i, cols + Z.nGc() + i, 1.0);
        }
        rows += Z.nG();
        cols += Z.nGc() + Z.nG();
    }
    SpMat Ac = make_sparse(rows + 1, cols, trips);
    const int nGc = cols;

    // Ab: per constituent [A_b, -b; [0; I], -1], then the choose-one row
    trips.clear();
    rows = 0;
    cols = 0;
    for (const auto& Z : sets)
    {
        append_triplets(Z.Ab, trips, rows, cols);
        for (int i = 0; i < Z.nC(); ++i)
        {
            trips.emplace_back(rows + i, cols + Z.nGb(), -Z.b(i));
        }
        rows += Z.nC();
        for (int i = 0; i < Z.nGb(); ++i)
        {
            trips.emplace_back(rows + Z.nGc() + i, cols + i, 1.0);
        }
        for (int i = 0; i < Z.nG(); ++i)
        {
            trips.emplace_back(rows + i, cols + Z.nGb(), -1.0);
        }
        rows += Z.nG();
        cols += Z.nGb() + 1;
        indicator_cols.push_back(cols - 1);
    }
    for (int col : indicator_cols)
    {
        trips.emplace_back(rows, col, 1.0);
    }
    ++rows;
    SpMat Ab = make_sparse(rows, cols, trips);
    const int nGb = cols;

    Vec b = Vec::Zero(rows);
    b(rows - 1) = 1.0;

    // Gc = [G_c1 0 G_c2 0 ...], zero blocks absorb the slack factors
    trips.clear();
    cols = 0;
    for (const auto& Z : sets)
    {
        append_triplets(Z.Gc, trips, 0, cols);
        cols += Z.nGc() + Z.nG();
    }
    SpMat Gc = make_sparse(n, nGc, trips);

    // Gb = [G_b1 c_1 G_b2 c_2 ...]
    trips.clear();
    cols = 0;
    for (const auto& Z : sets)
    {
        append_triplets(Z.Gb, trips, 0, cols);
        cols += Z.nGb();
        for (int i = 0; i < n; ++i)
        {
            trips.emplace_back(i, cols, Z.c(i));
        }
        ++cols;
    }
    SpMat Gb = make_sparse(n, nGb, trips);

    (void)N;
    return HybZono(Gc, Gb, Vec::Zero(n), Ac, Ab, b, Form::ZeroOne);
}

HybZono union_condensed(const std::vector<HybZono>& sets)
{
    check_union_inputs(sets, "union_condensed");
    const int n = sets.front().n();

    std::vector<Triplet> trips;
    int rows = 0, cols = 0;
    std::vector<int> indicator_cols;

    // Ac: per constituent [1^T, nG; A_c, 0], then an all-zero row
    for (const auto& Z : sets)
    {
        for (int i = 0; i < Z.nGc(); ++i)
        {
            trips.emplace_back(rows, cols + i, 1.0);
        }
        trips.emplace_back(rows, cols + Z.nGc(), static_cast<double>(Z.nG()));
        ++rows;
        append_triplets(Z.Ac, trips, rows, cols);
        rows += Z.nC();
        cols += Z.nGc() + 1;
    }
    SpMat Ac = make_sparse(rows + 1, cols, trips);
    const int nGc = cols;

    // Ab: per constituent [1^T, -nG; A_b, -b], then the choose-one row
    trips.clear();
    rows = 0;
    cols = 0;
    for (const auto& Z : sets)
    {
        for (int i = 0; i < Z.nGb(); ++i)
        {
            trips.emplace_back(rows, cols + i, 1.0);
        }
        trips.emplace_back(rows, cols + Z.nGb(), -static_cast<double>(Z.nG()));
        ++rows;
        append_triplets(Z.Ab, trips, rows, cols);
        for (int i = 0; i < Z.nC(); ++i)
        {
            trips.emplace_back(rows + i, cols + Z.nGb(), -Z.b(i));
        }
        rows += Z.nC();
        cols += Z.nGb() + 1;
        indicator_cols.push_back(cols - 1);
    }
    for (int col : indicator_cols)
    {
        trips.emplace_back(rows, col, 1.0);
    }
    ++rows;
    SpMat Ab = make_sparse(rows, cols, trips);
    const int nGb = cols;

    Vec b = Vec::Zero(rows);
    b(rows - 1) = 1.0;

    // Gc = [G_c1 0 G_c2 0 ...] with one slack column per constituent
    trips.clear();
    cols = 0;
    for (const auto& Z : sets)
    {
        append_triplets(Z.Gc, trips, 0, cols);
        cols += Z.nGc() + 1;
    }
    SpMat Gc = make_sparse(n, nGc, trips);

    // Gb = [G_b1 c_1 G_b2 c_2 ...]
    trips.clear();
    cols = 0;
    for (const auto& Z : sets)
    {
        append_triplets(Z.Gb, trips, 0, cols);
        cols += Z.nGb();
        for (int i = 0; i < n; ++i)
        {
            trips.emplace_back(i, cols, Z.c(i));
        }
        ++cols;
    }
    SpMat Gb = make_sparse(n, nGb, trips);

    return HybZono(Gc, Gb, Vec::Zero(n), Ac, Ab, b, Form::ZeroOne);
}

HybZono union_zonotope(const std::vector<HybZono>& sets, double shared_tol)
{
    check_union_inputs(sets, "union_zonotope");
    const int n = sets.front().n();
    const int N = static_cast<int>(sets.size());
    for (const auto& Z : sets)
    {
        if (!Z.is_zonotope())
        {
            throw NotAZonotope("union_zonotope: all inputs must be unconstrained zonotopes.");
        }
    }

    // shared generator matrix and incidence
    std::vector<Vec> shared;
    std::vector<std::vector<char>> incidence; // per shared generator, one flag per set
    for (int i = 0; i < N; ++i)
    {
        Eigen::MatrixXd Gd(sets[i].Gc);
        for (int j = 0; j < Gd.cols(); ++j)
        {
            const Vec g = Gd.col(j);
            int found = -1;
            for (size_t s = 0; s < shared.size(); ++s)
            {
                if ((shared[s] - g).cwiseAbs().maxCoeff() <= shared_tol)
                {
                    found = static_cast<int>(s);
                    break;
                }
            }
            if (found < 0)
            {
                shared.push_back(g);
                incidence.emplace_back(N, 0);
                found = static_cast<int>(shared.size()) - 1;
            }
            incidence[static_cast<size_t>(found)][static_cast<size_t>(i)] = 1;
        }
    }
    const int nShared = static_cast<int>(shared.size());

    IncidenceMatrix inc;
    std::vector<Triplet> trips;
    inc.Nj.resize(nShared, 0);
    for (int jg = 0; jg < nShared; ++jg)
    {
        for (int i = 0; i < N; ++i)
        {
            if (incidence[jg][i])
            {
                trips.emplace_back(jg, i, 1.0);
                ++inc.Nj[jg];
            }
        }
    }
    inc.M = make_sparse(nShared, N, trips);

    // Gc = [G_shared 0]
    trips.clear();
    for (int jg = 0; jg < nShared; ++jg)
    {
        for (int i = 0; i < n; ++i)
        {
            trips.emplace_back(i, jg, shared[jg](i));
        }
    }
    SpMat Gc = make_sparse(n, 2 * nShared, trips);

    // Gb = [c_1 c_2 ...]
    trips.clear();
    for (int i = 0; i < N; ++i)
    {
        for (int r = 0; r < n; ++r)
        {
            trips.emplace_back(r, i, sets[i].c(r));
        }
    }
    SpMat Gb = make_sparse(n, N, trips);

    // Ac = [I Ntilde; 0 0], Ab = [-M; 1^T], b = [0; 1]
    trips.clear();
    for (int jg = 0; jg < nShared; ++jg)
    {
        trips.emplace_back(jg, jg, 1.0);
        trips.emplace_back(jg, nShared + jg, static_cast<double>(inc.Nj[jg]));
    }
    SpMat Ac = make_sparse(nShared + 1, 2 * nShared, trips);

    trips.clear();
    append_triplets(SpMat(-inc.M), trips, 0, 0);
    for (int i = 0; i < N; ++i)
    {
        trips.emplace_back(nShared, i, 1.0);
    }
    SpMat Ab = make_sparse(nShared + 1, N, trips);

    Vec b = Vec::Zero(nShared + 1);
    b(nShared) = 1.0;

    return HybZono(Gc, Gb, Vec::Zero(n), Ac, Ab, b, Form::ZeroOne);
}

} // namespace zonoplan
