#ifndef DMTL_NORMALIZE_HPP
#define DMTL_NORMALIZE_HPP

#include "dmtl/syntax.hpp"

namespace dmtl {

struct NormalizeOptions {
    /// Split closed and half-open ranges into punctual and open pieces.
    /// Turned off for the SQL translation, which works on whole ranges.
    bool split_ranges = true;
};

/// Rewrites a program into rules of the shapes
///   P ← P1 ∧ … ∧ Pn (plus inequalities),  P ← P1 S_ϱ P2,  P ← P1 U_ϱ P2,
///   P ← ⊞_ϱ P1,  P ← ⊟_ϱ P1
/// using fresh predicates `_nf<k>`. Certain answers over the original
/// predicates are preserved.
Program normalize(const Program& p, const NormalizeOptions& opts = {});

}  // namespace dmtl

#endif  // DMTL_NORMALIZE_HPP
