#include "zonoplan/hybzono.hpp"

#include <cmath>

namespace zonoplan
{

HybZono::HybZono(const SpMat& Gc_in, const SpMat& Gb_in, const Vec& c_in,
                 const SpMat& Ac_in, const SpMat& Ab_in, const Vec& b_in, Form form_in)
    : Gc(pruned(Gc_in)), Gb(pruned(Gb_in)), c(c_in), Ac(pruned(Ac_in)), Ab(pruned(Ab_in)),
      b(b_in), form(form_in)
{
    const int n_dim = static_cast<int>(c.size());
    const int n_con = static_cast<int>(b.size());
    if (Gc.rows() != n_dim || Gb.rows() != n_dim)
    {
        throw DimensionMismatch("HybZono: generator row count does not match dimension.");
    }
    if (Ac.rows() != n_con || Ab.rows() != n_con)
    {
        throw DimensionMismatch("HybZono: constraint row count does not match b.");
    }
    if (Ac.cols() != Gc.cols() || Ab.cols() != Gb.cols())
    {
        throw DimensionMismatch("HybZono: constraint column count does not match generators.");
    }
}

HybZono HybZono::zonotope(const SpMat& G, const Vec& c, Form form)
{
    const int n = static_cast<int>(c.size());
    return HybZono(G, SpMat(n, 0), c, SpMat(0, G.cols()), SpMat(0, 0), Vec(0), form);
}

HybZono HybZono::constrained(const SpMat& G, const Vec& c, const SpMat& A, const Vec& b, Form form)
{
    const int n = static_cast<int>(c.size());
    return HybZono(G, SpMat(n, 0), c, A, SpMat(A.rows(), 0), b, form);
}

HybZono HybZono::point(const Vec& c, Form form)
{
    const int n = static_cast<int>(c.size());
    return HybZono(SpMat(n, 0), SpMat(n, 0), c, SpMat(0, 0), SpMat(0, 0), Vec(0), form);
}

HybZono HybZono::interval_box(const Vec& lo, const Vec& hi)
{
    if (lo.size() != hi.size())
    {
        throw DimensionMismatch("interval_box: bound lengths differ.");
    }
    const int n = static_cast<int>(lo.size());
    std::vector<Triplet> trips;
    for (int i = 0; i < n; ++i)
    {
        if (lo(i) > hi(i))
        {
            throw InvalidInterval("interval_box: lo > hi.");
        }
        trips.emplace_back(i, i, (hi(i) - lo(i)) / 2.0);
    }
    return zonotope(make_sparse(n, n, trips), (lo + hi) / 2.0, Form::Canonical);
}

Vec HybZono::map_factors(const Vec& xi) const
{
    if (xi.size() != nG())
    {
        throw DimensionMismatch("map_factors: factor length mismatch.");
    }
    return Gc * xi.head(nGc()) + Gb * xi.tail(nGb()) + c;
}

HybZono affine_map(const SpMat& R, const HybZono& Z, const Vec& s)
{
    Vec shift = s;
    if (shift.size() == 0)
    {
        shift = Vec::Zero(R.rows());
    }
    if (R.cols() != Z.n() || R.rows() != shift.size())
    {
        throw DimensionMismatch("affine_map: inconsistent input dimensions.");
    }
    return HybZono(pruned(R * Z.Gc), pruned(R * Z.Gb), R * Z.c + shift, Z.Ac, Z.Ab, Z.b, Z.form);
}

namespace
{

void require_same_form(const HybZono& Z1, const HybZono& Z2, const char* who)
{
    if (Z1.form != Z2.form)
    {
        throw FormMismatch(std::string(who) + ": operands use different factor forms.");
    }
}

} // namespace

HybZono minkowski_sum(const HybZono& Z1, const HybZono& Z2)
{
    require_same_form(Z1, Z2, "minkowski_sum");
    if (Z1.n() != Z2.n())
    {
        throw DimensionMismatch("minkowski_sum: dimensions differ.");
    }
    return HybZono(hcat(Z1.Gc, Z2.Gc), hcat(Z1.Gb, Z2.Gb), Z1.c + Z2.c,
                   blkdiag({Z1.Ac, Z2.Ac}), blkdiag({Z1.Ab, Z2.Ab}), stack(Z1.b, Z2.b), Z1.form);
}

HybZono cartesian_product(const HybZono& Z1, const HybZono& Z2)
{
    require_same_form(Z1, Z2, "cartesian_product");
    return HybZono(blkdiag({Z1.Gc, Z2.Gc}), blkdiag({Z1.Gb, Z2.Gb}), stack(Z1.c, Z2.c),
                   blkdiag({Z1.Ac, Z2.Ac}), blkdiag({Z1.Ab, Z2.Ab}), stack(Z1.b, Z2.b), Z1.form);
}

HybZono generalized_intersection(const HybZono& Z1, const HybZono& Z2, const SpMat& R)
{
    require_same_form(Z1, Z2, "generalized_intersection");
    if (R.rows() != Z2.n() || R.cols() != Z1.n())
    {
        throw DimensionMismatch("generalized_intersection: R must map Z1's space to Z2's space.");
    }

    const int n = Z1.n();
    const int nGc = Z1.nGc() + Z2.nGc();
    const int nGb = Z1.nGb() + Z2.nGb();

    std::vector<Triplet> trips;
    append_triplets(Z1.Gc, trips, 0, 0);
    SpMat Gc = make_sparse(n, nGc, trips);

    trips.clear();
    append_triplets(Z1.Gb, trips, 0, 0);
    SpMat Gb = make_sparse(n, nGb, trips);

    const SpMat RGc = pruned(R * Z1.Gc);
    const SpMat RGb = pruned(R * Z1.Gb);

    const int nC = Z1.nC() + Z2.nC() + Z2.n();
    trips.clear();
    append_triplets(Z1.Ac, trips, 0, 0);
    append_triplets(Z2.Ac, trips, Z1.nC(), Z1.nGc());
    append_triplets(RGc, trips, Z1.nC() + Z2.nC(), 0);
    append_triplets(SpMat(-Z2.Gc), trips, Z1.nC() + Z2.nC(), Z1.nGc());
    SpMat Ac = make_sparse(nC, nGc, trips);

    trips.clear();
    append_triplets(Z1.Ab, trips, 0, 0);
    append_triplets(Z2.Ab, trips, Z1.nC(), Z1.nGb());
    append_triplets(RGb, trips, Z1.nC() + Z2.nC(), 0);
    append_triplets(SpMat(-Z2.Gb), trips, Z1.nC() + Z2.nC(), Z1.nGb());
    SpMat Ab = make_sparse(nC, nGb, trips);

    Vec b(nC);
    b.head(Z1.nC()) = Z1.b;
    b.segment(Z1.nC(), Z2.nC()) = Z2.b;
    b.tail(Z2.n()) = Z2.c - R * Z1.c;

    return HybZono(Gc, Gb, Z1.c, Ac, Ab, b, Z1.form);
}

HybZono convex_relaxation(const HybZono& Z)
{
    return HybZono::constrained(Z.G(), Z.c, Z.A(), Z.b, Z.form);
}

HybZono convert_form(const HybZono& Z, Form target)
{
    if (Z.form == target)
    {
        return Z;
    }
    if (target == Form::ZeroOne)
    {
        // xi = 2*xi01 - 1
        const Vec ones_c = Vec::Ones(Z.nGc());
        const Vec ones_b = Vec::Ones(Z.nGb());
        Vec c = Z.c - Z.Gc * ones_c - Z.Gb * ones_b;
        Vec b = Z.b + Z.Ac * ones_c + Z.Ab * ones_b;
        return HybZono(pruned(2.0 * Z.Gc), pruned(2.0 * Z.Gb), c,
                       pruned(2.0 * Z.Ac), pruned(2.0 * Z.Ab), b, Form::ZeroOne);
    }
    // xi01 = (xi + 1) / 2
    const Vec ones_c = Vec::Ones(Z.nGc());
    const Vec ones_b = Vec::Ones(Z.nGb());
    Vec c = Z.c + 0.5 * (Z.Gc * ones_c + Z.Gb * ones_b);
    Vec b = Z.b - 0.5 * (Z.Ac * ones_c + Z.Ab * ones_b);
    return HybZono(pruned(0.5 * Z.Gc), pruned(0.5 * Z.Gb), c,
                   pruned(0.5 * Z.Ac), pruned(0.5 * Z.Ab), b, Form::Canonical);
}

std::pair<Vec, Vec> interval_hull(const HybZono& Z)
{
    Vec lo = Z.c;
    Vec hi = Z.c;
    auto accumulate = [&](const SpMat& G) {
        for (int k = 0; k < G.outerSize(); ++k)
        {
            for (SpMat::InnerIterator it(G, k); it; ++it)
            {
                const double v = it.value();
                if (Z.form == Form::Canonical)
                {
                    lo(it.row()) -= std::abs(v);
                    hi(it.row()) += std::abs(v);
                }
                else
                {
                    lo(it.row()) += std::min(v, 0.0);
                    hi(it.row()) += std::max(v, 0.0);
                }
            }
        }
    };
    accumulate(Z.Gc);
    accumulate(Z.Gb);
    return {lo, hi};
}

HybZono regular_polygon_zonotope(double r, int n_sides)
{
    if (n_sides % 2 != 0 || n_sides < 4)
    {
        throw InvalidArgument("regular_polygon_zonotope: number of sides must be even and >= 4.");
    }
    if (r <= 0.0)
    {
        throw InvalidArgument("regular_polygon_zonotope: radius must be positive.");
    }
    const int n_gens = n_sides / 2;
    const double len = r * std::sin(M_PI / n_sides);
    std::vector<Triplet> trips;
    for (int j = 0; j < n_gens; ++j)
    {
        const double phi = (2.0 * j + 1.0) * M_PI / n_sides;
        trips.emplace_back(0, j, len * std::cos(phi));
        trips.emplace_back(1, j, len * std::sin(phi));
    }
    return HybZono::zonotope(make_sparse(2, n_gens, trips), Vec::Zero(2), Form::Canonical);
}

SetComplexity complexity(const HybZono& Z)
{
    SetComplexity sc;
    sc.n = Z.n();
    sc.n_Gc = Z.nGc();
    sc.n_Gb = Z.nGb();
    sc.n_C = Z.nC();
    sc.nnz_G = Z.Gc.nonZeros() + Z.Gb.nonZeros();
    sc.nnz_A = Z.Ac.nonZeros() + Z.Ab.nonZeros();
    return sc;
}

} // namespace zonoplan
