#ifndef DMTL_INVARIANTS_HPP
#define DMTL_INVARIANTS_HPP

#include <string>
#include <vector>

#include "dmtl/engine.hpp"

namespace dmtl {

/// Every finite endpoint in the model is a multiple of d = gcd(num(Π,D)).
/// With `check_bounds`, it also lies in [M_l, M_r] (nonrecursive Π only).
/// Returns one message per violation.
std::vector<std::string> check_grid_bounds(const CanonicalModel& m, const Program& p, const DataInstance& d,
                                           bool check_bounds = true);

/// Every finite left (right) endpoint of a P-fact equals some left (right)
/// data endpoint plus an element of le(P) (ri(P)). Requires a nonrecursive
/// normal-form program.
std::vector<std::string> check_le_ri(const CanonicalModel& m, const Program& p, const DataInstance& d);

}  // namespace dmtl

#endif  // DMTL_INVARIANTS_HPP
