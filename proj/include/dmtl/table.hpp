#ifndef DMTL_TABLE_HPP
#define DMTL_TABLE_HPP

#include <string>
#include <vector>

#include "dmtl/interval.hpp"
#include "dmtl/syntax.hpp"

namespace dmtl {

using Tuple = std::vector<std::string>;

struct TupleHash {
    std::size_t operator()(const Tuple& t) const noexcept;
};

struct Row {
    Tuple tuple;
    Interval interval;

    friend bool operator==(const Row&, const Row&) = default;
};

/// Rows of constants plus an interval column. Operations expect the
/// temporal ordering assumption: rows with equal tuples appear in
/// ≺-nondecreasing interval order.
struct TemporalTable {
    std::vector<std::string> attrs;
    std::vector<Row> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

/// The rows of one tuple, in table order.
struct Group {
    Tuple tuple;
    std::vector<Interval> intervals;
};

bool is_toa(const TemporalTable& t);
/// No two rows with equal tuples have intersecting intervals.
bool is_coalesced(const TemporalTable& t);

/// Groups rows by tuple in order of first appearance. Throws
/// IntegrityError on a TOA violation.
std::vector<Group> group_rows(const TemporalTable& t);
TemporalTable from_groups(std::vector<std::string> attrs, const std::vector<Group>& groups);

/// Stable per-tuple sort establishing TOA; duplicate rows are dropped.
TemporalTable sort_toa(const TemporalTable& t);

/// Merges intersecting or adjacent same-tuple rows into maximal intervals.
/// Single pass; throws IntegrityError when the input violates TOA.
TemporalTable coalesce_table(const TemporalTable& t);

/// Natural join on shared attribute names; intervals intersected. Output
/// attributes: those of `a`, then those of `b` not in `a`. Inputs must be
/// TOA and coalesced.
TemporalTable temporal_join(const TemporalTable& a, const TemporalTable& b);

/// Projection onto `attrs` (a subset of t.attrs, any order), merging the
/// collapsed groups in ≺ order; exact duplicate rows are dropped.
TemporalTable project(const TemporalTable& t, const std::vector<std::string>& attrs);

/// Union of two tables over the same attributes, TOA preserved.
TemporalTable union_tables(const TemporalTable& a, const TemporalTable& b);

/// Positional attribute names a0…a(n−1) used for stored predicate tables.
std::vector<std::string> positional_attrs(std::size_t arity);

/// Rows of a stored predicate table matching `atom` (constants and repeated
/// variables), with one attribute per distinct variable.
TemporalTable atom_view(const TemporalTable& stored, const Atom& atom);

/// The zero-attribute table holding ⊤ over (−∞, ∞).
TemporalTable universal_table();

std::string to_text(const TemporalTable& t);

}  // namespace dmtl

#endif  // DMTL_TABLE_HPP
