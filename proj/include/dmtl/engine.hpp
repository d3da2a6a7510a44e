#ifndef DMTL_ENGINE_HPP
#define DMTL_ENGINE_HPP

#include <map>
#include <optional>
#include <string>

#include "dmtl/syntax.hpp"
#include "dmtl/table.hpp"

namespace dmtl {

/// Predicate → coalesced, TOA-sorted table with positional attributes.
using TableMap = std::map<std::string, TemporalTable>;

struct CanonicalModel {
    TableMap tables;
    /// The ≺-least interval on which ⊥ was derived, if any.
    std::optional<Interval> inconsistency;
    /// Every predicate of the program and data, with its arity.
    std::map<std::string, std::size_t> signature;

    bool consistent() const { return !inconsistency.has_value(); }
    /// nullptr when the predicate has no facts.
    const TemporalTable* table(const std::string& predicate) const;
    /// Total number of rows over all tables.
    std::size_t fact_count() const;
};

struct EvalStatus {
    enum class Kind { Fixpoint, CapReached, Inconsistent };
    Kind kind = Kind::Fixpoint;
    std::size_t rounds = 0;
};

struct EvalOptions {
    /// Worker threads for independent rules of a stratum; 0 or 1 runs inline.
    unsigned threads = 1;
};

/// Data facts as coalesced tables, one per predicate.
TableMap data_tables(const DataInstance& d);

/// All firings of a normal-form rule over coalesced input tables, as a
/// TOA table over the head's positional attributes (zero attributes for ⊥).
/// Throws ContractError for a rule outside normal form.
TemporalTable apply_rule(const Rule& rule, const TableMap& tables);

/// Stratified bottom-up materialisation of a nonrecursive normal-form
/// program. Throws ContractError on recursive or non-normal programs.
CanonicalModel eval_nonrecursive(const Program& p, const DataInstance& d, const EvalOptions& opts = {});

/// Serializes a model as sorted facts, one per line.
std::string to_text(const CanonicalModel& m, TimeFormat fmt = TimeFormat::Seconds);

}  // namespace dmtl

#endif  // DMTL_ENGINE_HPP
