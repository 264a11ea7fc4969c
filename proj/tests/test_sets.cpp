#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zonoplan/hybzono.hpp"
#include "zonoplan/rng.hpp"

#include "support/oracles.hpp"

using namespace zonoplan;
using oracles::Mat;

namespace
{

SpMat sp(const Mat& D)
{
    return sparse_from_dense(D);
}

HybZono unit_box(int n)
{
    return HybZono::interval_box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0));
}

bool matrices_equal(const SpMat& A, const SpMat& B)
{
    if (A.rows() != B.rows() || A.cols() != B.cols())
    {
        return false;
    }
    return (Mat(A) - Mat(B)).cwiseAbs().maxCoeff() == 0.0;
}

// random small hybrid zonotope generated with a consistent right-hand side so
// that factor samples drawn for b's construction are admissible
HybZono random_hybzono(RngStream& rng, int n, int nGc, int nGb, int nC, Form form)
{
    auto rnd_mat = [&](int r, int c) {
        Mat D(r, c);
        for (int i = 0; i < r; ++i)
        {
            for (int j = 0; j < c; ++j)
            {
                D(i, j) = rng.uniform(-1.0, 1.0);
            }
        }
        return sp(D);
    };
    const SpMat Gc = rnd_mat(n, nGc);
    const SpMat Gb = rnd_mat(n, nGb);
    const SpMat Ac = rnd_mat(nC, nGc);
    const SpMat Ab = rnd_mat(nC, nGb);
    Vec c(n);
    for (int i = 0; i < n; ++i)
    {
        c(i) = rng.uniform(-1.0, 1.0);
    }
    const double lo = form == Form::Canonical ? -1.0 : 0.0;
    Vec xc(nGc), xb(nGb);
    for (int i = 0; i < nGc; ++i)
    {
        xc(i) = rng.uniform(lo, 1.0);
    }
    for (int i = 0; i < nGb; ++i)
    {
        xb(i) = rng.uniform(0.0, 1.0) < 0.5 ? lo : 1.0;
    }
    const Vec b = Ac * xc + Ab * xb;
    return HybZono(Gc, Gb, c, Ac, Ab, b, form);
}

} // namespace

TEST_CASE("affine_map: identity leaves matrices unchanged")
{
    RngStream rng(1);
    const HybZono Z = random_hybzono(rng, 3, 4, 2, 2, Form::Canonical);
    const HybZono M = affine_map(sparse_identity(3), Z);
    CHECK(matrices_equal(M.Gc, Z.Gc));
    CHECK(matrices_equal(M.Gb, Z.Gb));
    CHECK(matrices_equal(M.Ac, Z.Ac));
    CHECK((M.c - Z.c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("affine_map: scaled and shifted unit square")
{
    const HybZono Z = unit_box(2);
    Vec s(2);
    s << 1.0, 1.0;
    const HybZono M = affine_map(sp(2.0 * Mat::Identity(2, 2)), Z, s);
    RngStream rng(2);
    for (int t = 0; t < 1000; ++t)
    {
        const Vec xi = oracles::sample_box_factors(Z, rng);
        const Vec p = M.map_factors(xi);
        CHECK(p.minCoeff() >= -1.0 - 1e-12);
        CHECK(p.maxCoeff() <= 3.0 + 1e-12);
        // witness maps through the operation unchanged
        CHECK(oracles::check_witness(M, xi, 2.0 * Z.map_factors(xi) + s, 1e-12));
    }
}

TEST_CASE("affine_map: dimension mismatch")
{
    CHECK_THROWS_AS((void)affine_map(sparse_identity(3), unit_box(2)), DimensionMismatch);
}

TEST_CASE("affine_map: graph-stack construction reproduces [G; A G]")
{
    // mode-graph style map [I; A] applied to a 2-generator box
    Mat A(2, 2);
    A << 0.75, 0.25, -0.25, 0.75;
    Mat R(4, 2);
    R.topRows(2) = Mat::Identity(2, 2);
    R.bottomRows(2) = A;
    const HybZono D = HybZono::zonotope(sp((Mat(2, 2) << 1, 0, 0, 2).finished()), Vec::Zero(2));
    const HybZono G = affine_map(sp(R), D);
    Mat expected(4, 2);
    expected.topRows(2) = Mat(D.Gc);
    expected.bottomRows(2) = A * Mat(D.Gc);
    CHECK((Mat(G.Gc) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("minkowski_sum: point shifts only the center")
{
    RngStream rng(3);
    const HybZono Z = random_hybzono(rng, 3, 4, 1, 2, Form::Canonical);
    Vec p(3);
    p << 1, -2, 0.5;
    const HybZono S = minkowski_sum(Z, HybZono::point(p));
    CHECK(matrices_equal(S.Gc, Z.Gc));
    CHECK(matrices_equal(S.Gb, Z.Gb));
    CHECK((S.c - (Z.c + p)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(S.nC() == Z.nC());
}

TEST_CASE("minkowski_sum: two unit boxes give the [-2,2] box")
{
    const HybZono S = minkowski_sum(unit_box(2), unit_box(2));
    const auto [lo, hi] = interval_hull(S);
    CHECK(lo.isApprox(Vec::Constant(2, -2.0)));
    CHECK(hi.isApprox(Vec::Constant(2, 2.0)));

    RngStream rng(4);
    for (int t = 0; t < 1000; ++t)
    {
        const Vec xi = oracles::sample_box_factors(S, rng);
        const Vec p = S.map_factors(xi);
        CHECK(p.cwiseAbs().maxCoeff() <= 2.0 + 1e-12);
    }
    // corner (2,2) is reachable with all factors at 1
    CHECK(oracles::check_witness(S, Vec::Ones(4), Vec::Constant(2, 2.0), 1e-12));

    // counts add
    RngStream rng2(5);
    const HybZono Z1 = random_hybzono(rng2, 2, 3, 1, 1, Form::Canonical);
    const HybZono Z2 = random_hybzono(rng2, 2, 2, 2, 2, Form::Canonical);
    const HybZono S2 = minkowski_sum(Z1, Z2);
    CHECK(S2.nC() == Z1.nC() + Z2.nC());
    CHECK(S2.nG() == Z1.nG() + Z2.nG());
}

TEST_CASE("minkowski_sum: form and dimension checks")
{
    const HybZono Z01 = convert_form(unit_box(2), Form::ZeroOne);
    CHECK_THROWS_AS((void)minkowski_sum(unit_box(2), Z01), FormMismatch);
    CHECK_THROWS_AS((void)minkowski_sum(unit_box(2), unit_box(3)), DimensionMismatch);
}

TEST_CASE("cartesian_product: zero-dimensional set is the identity")
{
    RngStream rng(6);
    const HybZono Z = random_hybzono(rng, 3, 4, 2, 2, Form::Canonical);
    const HybZono T = HybZono::point(Vec(0));
    const HybZono P = cartesian_product(Z, T);
    CHECK(P.n() == Z.n());
    CHECK(matrices_equal(P.Gc, Z.Gc));
    CHECK(matrices_equal(P.Ab, Z.Ab));
}

TEST_CASE("cartesian_product: interval blocks fill the rectangle")
{
    Vec l1(1), h1(1), l2(1), h2(1);
    l1 << -1.0;
    h1 << 1.0;
    l2 << 0.0;
    h2 << 2.0;
    const HybZono P =
        cartesian_product(HybZono::interval_box(l1, h1), HybZono::interval_box(l2, h2));
    RngStream rng(7);
    for (int t = 0; t < 500; ++t)
    {
        const Vec p = P.map_factors(oracles::sample_box_factors(P, rng));
        CHECK(p(0) >= -1.0 - 1e-12);
        CHECK(p(0) <= 1.0 + 1e-12);
        CHECK(p(1) >= -1e-12);
        CHECK(p(1) <= 2.0 + 1e-12);
    }
    CHECK(P.n() == 2);
}

TEST_CASE("generalized_intersection: self-intersection keeps members")
{
    RngStream rng(8);
    const HybZono Z = unit_box(2);
    const HybZono I = generalized_intersection(Z, Z, sparse_identity(2));
    for (int t = 0; t < 200; ++t)
    {
        const Vec xi = oracles::sample_box_factors(Z, rng);
        Vec xi2(4);
        xi2 << xi, xi; // witness duplicated across both operand slots
        CHECK(oracles::check_witness(I, xi2, Z.map_factors(xi), 1e-12));
    }
    CHECK(I.nC() == Z.nC() + Z.nC() + Z.n());
}

TEST_CASE("generalized_intersection: overlap of shifted boxes against a grid oracle")
{
    const HybZono Z1 = unit_box(2);
    Vec shift(2);
    shift << 1.0, 0.0;
    const HybZono Z2 = minkowski_sum(unit_box(2), HybZono::point(shift));
    const HybZono I = generalized_intersection(Z1, Z2, sparse_identity(2));

    // direct halfspace description of the overlap: x1 in [0,1], x2 in [-1,1]
    for (double x = -1.5; x <= 2.5; x += 0.4)
    {
        for (double y = -1.5; y <= 1.5; y += 0.3)
        {
            Vec p(2);
            p << x, y;
            const bool expected =
                x >= 0.0 - 1e-9 && x <= 1.0 + 1e-9 && y >= -1.0 - 1e-9 && y <= 1.0 + 1e-9;
            CHECK(contains_point(I, p, 1e-6) == expected);
        }
    }
}

TEST_CASE("convex_relaxation: constrained zonotope passes through")
{
    RngStream rng(9);
    const HybZono Z = random_hybzono(rng, 3, 4, 0, 2, Form::Canonical);
    const HybZono CR = convex_relaxation(Z);
    CHECK(CR.nGb() == 0);
    CHECK(matrices_equal(CR.Gc, Z.Gc));
}

TEST_CASE("convex_relaxation: two-point set becomes a segment")
{
    // single binary generator, canonical form: {-1, 1}
    const HybZono Z = HybZono(SpMat(1, 0), sparse_identity(1), Vec::Zero(1), SpMat(0, 0),
                              SpMat(0, 1), Vec(0), Form::Canonical);
    const HybZono CR = convex_relaxation(Z);
    CHECK(CR.nGb() == 0);
    CHECK(CR.nGc() == 1);
    const auto [lo, hi] = interval_hull(CR);
    CHECK(lo(0) == -1.0);
    CHECK(hi(0) == 1.0);
    CHECK(contains_point(CR, Vec::Zero(1), 1e-9));
}

TEST_CASE("convex_relaxation: member witnesses carry over unchanged")
{
    RngStream rng(10);
    for (int t = 0; t < 200; ++t)
    {
        auto rnd_mat = [&](int r, int c) {
            Mat D(r, c);
            for (int i = 0; i < r; ++i)
            {
                for (int j = 0; j < c; ++j)
                {
                    D(i, j) = rng.uniform(-1.0, 1.0);
                }
            }
            return sp(D);
        };
        const SpMat Gc = rnd_mat(3, 4);
        const SpMat Gb = rnd_mat(3, 3);
        const SpMat Ac = rnd_mat(2, 4);
        const SpMat Ab = rnd_mat(2, 3);
        Vec xc(4), xb(3);
        for (int i = 0; i < 4; ++i)
        {
            xc(i) = rng.uniform(-1.0, 1.0);
        }
        for (int i = 0; i < 3; ++i)
        {
            xb(i) = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        }
        const Vec b = Ac * xc + Ab * xb;
        const HybZono Z(Gc, Gb, Vec::Zero(3), Ac, Ab, b, Form::Canonical);
        const HybZono CR = convex_relaxation(Z);
        CHECK(CR.nGc() == Z.nG());
        CHECK(CR.nC() == Z.nC());
        Vec xi(7);
        xi << xc, xb;
        CHECK(oracles::check_witness(CR, xi, Z.map_factors(xi), 1e-12));
    }
}

TEST_CASE("convert_form: segment and round trip")
{
    const HybZono seg = HybZono::zonotope(sparse_identity(1), Vec::Zero(1));
    const HybZono seg01 = convert_form(seg, Form::ZeroOne);
    CHECK(Mat(seg01.Gc)(0, 0) == 2.0);
    CHECK(seg01.c(0) == -1.0);

    RngStream rng(11);
    const HybZono Z = random_hybzono(rng, 3, 4, 2, 2, Form::Canonical);
    const HybZono back = convert_form(convert_form(Z, Form::ZeroOne), Form::Canonical);
    CHECK(matrices_equal(back.Gc, Z.Gc));
    CHECK(matrices_equal(back.Gb, Z.Gb));
    CHECK(matrices_equal(back.Ac, Z.Ac));
    CHECK(matrices_equal(back.Ab, Z.Ab));
    CHECK((back.c - Z.c).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((back.b - Z.b).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("convert_form: membership is preserved through factor substitution")
{
    RngStream rng(12);
    const HybZono Z = random_hybzono(rng, 3, 5, 2, 2, Form::Canonical);
    const HybZono Z01 = convert_form(Z, Form::ZeroOne);
    int checked = 0;
    for (int t = 0; t < 1000; ++t)
    {
        // admissible canonical factors exist only on the constraint slice; use
        // the unconstrained subcase when sampling freely
        const HybZono Zu = random_hybzono(rng, 2, 3, 2, 0, Form::Canonical);
        const HybZono Zu01 = convert_form(Zu, Form::ZeroOne);
        const Vec xi = oracles::sample_box_factors(Zu, rng);
        const Vec xi01 = (xi.array() + 1.0) / 2.0;
        CHECK(oracles::check_witness(Zu01, xi01, Zu.map_factors(xi), 1e-12));
        const Vec back = 2.0 * xi01.array() - 1.0;
        CHECK(oracles::check_witness(Zu, back, Zu01.map_factors(xi01), 1e-12));
        ++checked;
        if (checked >= 1000)
        {
            break;
        }
    }
    (void)Z01;
}

TEST_CASE("contains_point: basics")
{
    RngStream rng(13);
    const HybZono Z = random_hybzono(rng, 2, 3, 2, 0, Form::Canonical);
    const HybZono Zz = HybZono::zonotope(Z.Gc, Z.c);
    CHECK(contains_point(Zz, Zz.c, 1e-9)); // center of an unconstrained zonotope

    const auto [lo, hi] = interval_hull(Z);
    Vec outside = hi;
    outside(0) += 1.0;
    CHECK(contains_point(Z, outside, 1e-9) == false);
}

TEST_CASE("contains_point: witness-constructed members of constrained sets")
{
    RngStream rng(14);
    for (int t = 0; t < 100; ++t)
    {
        auto rnd_mat = [&](int r, int c) {
            Mat D(r, c);
            for (int i = 0; i < r; ++i)
            {
                for (int j = 0; j < c; ++j)
                {
                    D(i, j) = rng.uniform(-1.0, 1.0);
                }
            }
            return sp(D);
        };
        const SpMat Gc = rnd_mat(2, 4);
        const SpMat Gb = rnd_mat(2, 2);
        const SpMat Ac = rnd_mat(1, 4);
        const SpMat Ab = rnd_mat(1, 2);
        Vec xc(4), xb(2);
        for (int i = 0; i < 4; ++i)
        {
            xc(i) = rng.uniform(-1.0, 1.0);
        }
        for (int i = 0; i < 2; ++i)
        {
            xb(i) = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        }
        const Vec b = Ac * xc + Ab * xb;
        const HybZono Z(Gc, Gb, Vec::Zero(2), Ac, Ab, b, Form::Canonical);
        Vec xi(6);
        xi << xc, xb;
        CHECK(contains_point(Z, Z.map_factors(xi), 1e-6));
    }
}

TEST_CASE("contains_point: binary cap")
{
    const int nb = 21;
    const HybZono Z(SpMat(1, 0), sp(Mat::Ones(1, nb)), Vec::Zero(1), SpMat(0, 0), SpMat(0, nb),
                    Vec(0), Form::Canonical);
    CHECK_THROWS_AS((void)contains_point(Z, Vec::Zero(1), 1e-9), TooManyBinaries);
}

TEST_CASE("interval_hull: unit box and constrained sets")
{
    const auto [lo, hi] = interval_hull(unit_box(2));
    CHECK(lo.isApprox(Vec::Constant(2, -1.0)));
    CHECK(hi.isApprox(Vec::Constant(2, 1.0)));

    RngStream rng(15);
    const HybZono Z = random_hybzono(rng, 3, 4, 2, 2, Form::Canonical);
    const auto [zlo, zhi] = interval_hull(Z);
    // the hull bounds every factor image, constraints ignored
    for (int t = 0; t < 1000; ++t)
    {
        const Vec p = Z.map_factors(oracles::sample_box_factors(Z, rng));
        for (int i = 0; i < 3; ++i)
        {
            CHECK(p(i) >= zlo(i) - 1e-12);
            CHECK(p(i) <= zhi(i) + 1e-12);
        }
    }
}

TEST_CASE("regular_polygon_zonotope: O(1,4) square")
{
    const HybZono O4 = regular_polygon_zonotope(1.0, 4);
    CHECK(O4.nGc() == 2);
    const Mat G(O4.Gc);
    // generators of length 1/sqrt(2) at 45 and 135 degrees
    for (int j = 0; j < 2; ++j)
    {
        CHECK(G.col(j).norm() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    // vertices on the unit circle
    for (double s1 : {-1.0, 1.0})
    {
        for (double s2 : {-1.0, 1.0})
        {
            CHECK((s1 * G.col(0) + s2 * G.col(1)).norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    const auto [lo, hi] = interval_hull(O4);
    CHECK(lo(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(hi(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regular_polygon_zonotope: homogeneity and vertex radii")
{
    const HybZono O1 = regular_polygon_zonotope(1.0, 6);
    const HybZono O2 = regular_polygon_zonotope(2.0, 6);
    CHECK((2.0 * Mat(O1.Gc) - Mat(O2.Gc)).cwiseAbs().maxCoeff() <= 1e-12);

    // all 2^3 sign patterns stay at radius <= r with the extreme ones exactly r
    const Mat G(O1.Gc);
    double max_norm = 0.0;
    for (int mask = 0; mask < 8; ++mask)
    {
        Vec v = Vec::Zero(2);
        for (int j = 0; j < 3; ++j)
        {
            v += ((mask >> j) & 1 ? 1.0 : -1.0) * G.col(j);
        }
        max_norm = std::max(max_norm, v.norm());
    }
    CHECK(max_norm == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)regular_polygon_zonotope(1.0, 5), InvalidArgument);
    CHECK_THROWS_AS((void)regular_polygon_zonotope(-1.0, 4), InvalidArgument);
}

TEST_CASE("affine_map composition collapses to a single map")
{
    RngStream rng(16);
    const HybZono Z = random_hybzono(rng, 3, 4, 2, 2, Form::Canonical);
    Mat R1(2, 3), R2(2, 2);
    for (int i = 0; i < 2; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            R1(i, j) = rng.uniform(-1.0, 1.0);
        }
        for (int j = 0; j < 2; ++j)
        {
            R2(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    Vec s1(2), s2(2);
    for (int i = 0; i < 2; ++i)
    {
        s1(i) = rng.uniform(-1.0, 1.0);
        s2(i) = rng.uniform(-1.0, 1.0);
    }
    const HybZono lhs = affine_map(sp(R2), affine_map(sp(R1), Z, s1), s2);
    const HybZono rhs = affine_map(sp(R2 * R1), Z, Vec(R2 * s1 + s2));
    CHECK((Mat(lhs.Gc) - Mat(rhs.Gc)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((Mat(lhs.Gb) - Mat(rhs.Gb)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((lhs.c - rhs.c).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("complexity: dense zonotope")
{
    const HybZono Z = HybZono::zonotope(sp((Mat(2, 3) << 1, 2, 3, 4, 5, 6).finished()),
                                        Vec::Zero(2));
    const SetComplexity sc = complexity(Z);
    CHECK(sc.nnz_G == 6);
    CHECK(sc.n_C == 0);
    CHECK(sc.n_Gc == 3);
}
