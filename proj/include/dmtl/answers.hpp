#ifndef DMTL_ANSWERS_HPP
#define DMTL_ANSWERS_HPP

#include <string>
#include <vector>

#include "dmtl/engine.hpp"

namespace dmtl {

struct Answer {
    Tuple tuple;  // one constant per goal argument
    Interval interval;

    friend bool operator==(const Answer&, const Answer&) = default;
};

/// Maximal intervals of every goal instance, sorted by tuple then ≺.
/// Throws ValidationError for a predicate outside the model's signature.
std::vector<Answer> answers(const CanonicalModel& m, const Query& q);

/// (c, ι) is a certain answer: the model is inconsistent, or ι lies inside
/// a maximal interval of Q(c).
bool certain_answer(const CanonicalModel& m, const Query& q, const Tuple& c, const Interval& iota);

/// The same verdict obtained by adding
///   ⊥ ← _goal ∧ ⊟[0,t₁⟩ Q(c) ∧ ⊞(0,t₂⟩ Q(c)   and   _goal@[o,o]
/// for an origin o ∈ ι and checking consistency. Requires the augmented
/// program to be nonrecursive.
bool answer_via_reduction(const Program& p, const DataInstance& d, const Query& q, const Tuple& c,
                          const Interval& iota);

/// `Q(c1,...,cn)@<interval>` lines.
std::string to_text(const std::string& predicate, const std::vector<Answer>& as,
                    TimeFormat fmt = TimeFormat::Seconds);

}  // namespace dmtl

#endif  // DMTL_ANSWERS_HPP
