#ifndef DMTL_CHASE_HPP
#define DMTL_CHASE_HPP

#include <cstddef>
#include <utility>

#include "dmtl/engine.hpp"

namespace dmtl {

/// Default round cap: 10·(|rules| + |facts|).
std::size_t default_round_cap(const Program& p, const DataInstance& d);

/// Applies closure rounds (every rule instance, then coalescing) until a
/// fixpoint, a ⊥ fact, or `round_cap` rounds. Sound at any cap; complete
/// when the status is Fixpoint. Accepts recursive normal-form programs.
std::pair<CanonicalModel, EvalStatus> chase(const Program& p, const DataInstance& d, std::size_t round_cap);

}  // namespace dmtl

#endif  // DMTL_CHASE_HPP
