#ifndef ZONOPLAN_UNIONS_HPP_
#define ZONOPLAN_UNIONS_HPP_

#include <vector>

#include "hybzono.hpp"

namespace zonoplan
{

/// Incidence of shared generators across the constituents of a zonotope union.
struct IncidenceMatrix
{
    SpMat M;              // n_Gshared x N, entries in {0,1}
    std::vector<int> Nj;  // row sums of M
};

/// Sharpness-preserving union of hybrid zonotopes in 01-form.
HybZono union_sharp(const std::vector<HybZono>& sets);

/// Lower-complexity union of hybrid zonotopes in 01-form (not sharp in general).
HybZono union_condensed(const std::vector<HybZono>& sets);

/// Union of zonotopes in 01-form with shared-generator deduplication.
/// Generators match when columns agree entrywise within shared_tol (default exact).
HybZono union_zonotope(const std::vector<HybZono>& sets, double shared_tol = 0.0);

} // namespace zonoplan

#endif
