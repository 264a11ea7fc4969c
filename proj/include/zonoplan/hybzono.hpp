#ifndef ZONOPLAN_HYBZONO_HPP_
#define ZONOPLAN_HYBZONO_HPP_

#include <utility>

#include "types.hpp"

namespace zonoplan
{

/// Factor box convention: canonical uses [-1,1] / {-1,1}; zero-one uses [0,1] / {0,1}.
enum class Form
{
    Canonical,
    ZeroOne
};

struct SetComplexity
{
    int n = 0;
    int n_Gc = 0;
    int n_Gb = 0;
    int n_C = 0;
    long nnz_G = 0;
    long nnz_A = 0;

    bool operator==(const SetComplexity&) const = default;
};

/// Hybrid zonotope <Gc, Gb, c, Ac, Ab, b> with a form flag. Degenerates to a
/// constrained zonotope when nGb = 0 and to a zonotope when nGb = nC = 0. All
/// stored matrices are pruned; duplicate triplets coalesce at construction.
class HybZono
{
public:
    SpMat Gc, Gb; // n x nGc, n x nGb
    Vec c;        // n
    SpMat Ac, Ab; // nC x nGc, nC x nGb
    Vec b;        // nC
    Form form = Form::Canonical;

    HybZono() = default;
    HybZono(const SpMat& Gc_in, const SpMat& Gb_in, const Vec& c_in,
            const SpMat& Ac_in, const SpMat& Ab_in, const Vec& b_in, Form form_in);

    static HybZono zonotope(const SpMat& G, const Vec& c, Form form = Form::Canonical);
    static HybZono constrained(const SpMat& G, const Vec& c, const SpMat& A, const Vec& b,
                               Form form = Form::Canonical);
    static HybZono point(const Vec& c, Form form = Form::Canonical);
    /// axis-aligned box [lo, hi] as a zonotope in canonical form
    static HybZono interval_box(const Vec& lo, const Vec& hi);

    int n() const { return static_cast<int>(c.size()); }
    int nGc() const { return static_cast<int>(Gc.cols()); }
    int nGb() const { return static_cast<int>(Gb.cols()); }
    int nG() const { return nGc() + nGb(); }
    int nC() const { return static_cast<int>(b.size()); }

    bool is_zonotope() const { return nGb() == 0 && nC() == 0; }
    bool is_conzono() const { return nGb() == 0; }

    SpMat G() const { return hcat(Gc, Gb); }
    SpMat A() const { return hcat(Ac, Ab); }

    /// factor bounds of the mixed-integer box for this form
    double box_lo() const { return form == Form::Canonical ? -1.0 : 0.0; }
    double box_hi() const { return 1.0; }

    /// point for given factors (no admissibility check)
    Vec map_factors(const Vec& xi) const;
};

HybZono affine_map(const SpMat& R, const HybZono& Z, const Vec& s = Vec());
HybZono minkowski_sum(const HybZono& Z1, const HybZono& Z2);
HybZono cartesian_product(const HybZono& Z1, const HybZono& Z2);
/// generalized intersection Z1 ∩_R Z2; R maps Z1's space into Z2's space
HybZono generalized_intersection(const HybZono& Z1, const HybZono& Z2, const SpMat& R);
HybZono convex_relaxation(const HybZono& Z);
HybZono convert_form(const HybZono& Z, Form target);

/// outer interval hull ignoring constraints
std::pair<Vec, Vec> interval_hull(const HybZono& Z);

/// regular n-gon zonotope inner approximation of a circle of radius r;
/// generator j sits at angle (2j+1)*pi/n with vertices on the circle
HybZono regular_polygon_zonotope(double r, int n_sides);

SetComplexity complexity(const HybZono& Z);

/// membership test backed by binary enumeration (nGb <= 20) with a convex
/// projection QP per surviving pattern; throws TooManyBinaries above the cap
bool contains_point(const HybZono& Z, const Vec& x, double tol);

} // namespace zonoplan

#endif
