#include "dmtl/invariants.hpp"

#include <set>

#include "dmtl/analysis.hpp"

namespace dmtl {

namespace {

template <typename F>
void each_interval(const CanonicalModel& m, F&& f) {
    for (const auto& [pred, t] : m.tables)
        for (const auto& r : t.rows) f(pred, r.interval);
    if (m.inconsistency) f(std::string(kBottomName), *m.inconsistency);
}

}  // namespace

std::vector<std::string> check_grid_bounds(const CanonicalModel& m, const Program& p, const DataInstance& d,
                                           bool check_bounds) {
    std::vector<std::string> out;
    std::vector<TimePoint> nums = program_numbers(p);
    std::vector<TimePoint> dn = data_numbers(d);
    nums.insert(nums.end(), dn.begin(), dn.end());
    if (nums.empty()) return out;
    TimePoint g = gcd_dyadic(nums);
    std::optional<Bounds> b;
    if (check_bounds && !dn.empty()) b = bounds(p, d);
    each_interval(m, [&](const std::string& pred, const Interval& iv) {
        for (const TimePoint* t : {&iv.lo(), &iv.hi()}) {
            if (!t->is_finite()) continue;
            if (!t->is_multiple_of(g))
                out.push_back(pred + "@" + iv.to_string() + ": endpoint off the grid of " + g.to_string());
            if (b && (*t < b->m_l || b->m_r < *t))
                out.push_back(pred + "@" + iv.to_string() + ": endpoint outside [" + b->m_l.to_string() + "," +
                              b->m_r.to_string() + "]");
        }
    });
    return out;
}

std::vector<std::string> check_le_ri(const CanonicalModel& m, const Program& p, const DataInstance& d) {
    std::vector<std::string> out;
    std::set<std::string> data_preds;
    std::set<TimePoint> lefts, rights;
    for (const auto& f : d.facts) {
        data_preds.insert(f.atom.predicate);
        if (f.interval.lo().is_finite()) lefts.insert(f.interval.lo());
        if (f.interval.hi().is_finite()) rights.insert(f.interval.hi());
    }
    auto offsets = le_ri(p, data_preds);
    auto explained = [](const TimePoint& t, const std::set<TimePoint>& base, const std::set<TimePoint>& deltas) {
        for (const auto& n : deltas)
            if (base.count(t - n)) return true;
        return false;
    };
    each_interval(m, [&](const std::string& pred, const Interval& iv) {
        auto it = offsets.find(pred);
        static const EndpointOffsets data_only{{TimePoint(0)}, {TimePoint(0)}};
        const EndpointOffsets& o = it == offsets.end() ? data_only : it->second;
        if (iv.lo().is_finite() && !explained(iv.lo(), lefts, o.le))
            out.push_back(pred + "@" + iv.to_string() + ": left endpoint not explained by le");
        if (iv.hi().is_finite() && !explained(iv.hi(), rights, o.ri))
            out.push_back(pred + "@" + iv.to_string() + ": right endpoint not explained by ri");
    });
    return out;
}

}  // namespace dmtl
