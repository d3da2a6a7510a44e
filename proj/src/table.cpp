#include "dmtl/table.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

std::size_t index_of(const std::vector<std::string>& attrs, const std::string& name) {
    auto it = std::find(attrs.begin(), attrs.end(), name);
    if (it == attrs.end()) throw ContractError("unknown attribute " + name);
    return static_cast<std::size_t>(it - attrs.begin());
}

/// Index of each group by tuple, in first-appearance order.
template <typename F>
void for_each_group_slot(const TemporalTable& t, F&& f) {
    std::unordered_map<Tuple, std::size_t, TupleHash> slot;
    for (const auto& r : t.rows) {
        auto [it, inserted] = slot.emplace(r.tuple, slot.size());
        f(it->second, inserted, r);
    }
}

bool disjoint_sorted(const std::vector<Interval>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (intersect(xs[i - 1], xs[i])) return false;
    return true;
}

/// Merges sorted interval lists into one sorted list without duplicates.
std::vector<Interval> merge_sorted(const std::vector<const std::vector<Interval>*>& lists) {
    std::vector<Interval> out;
    if (lists.size() == 1) {
        out = *lists[0];
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    using Item = std::pair<std::size_t, std::size_t>;  // list, position
    auto later = [&](const Item& x, const Item& y) {
        const Interval& a = (*lists[x.first])[x.second];
        const Interval& b = (*lists[y.first])[y.second];
        if (precedes(b, a)) return true;
        if (precedes(a, b)) return false;
        return x.first > y.first;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(later)> heap(later);
    for (std::size_t i = 0; i < lists.size(); ++i)
        if (!lists[i]->empty()) heap.emplace(i, 0);
    while (!heap.empty()) {
        auto [l, p] = heap.top();
        heap.pop();
        const Interval& iv = (*lists[l])[p];
        if (out.empty() || !(out.back() == iv)) out.push_back(iv);
        if (p + 1 < lists[l]->size()) heap.emplace(l, p + 1);
    }
    return out;
}

}  // namespace

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& s : t) h ^= std::hash<std::string>{}(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

bool is_toa(const TemporalTable& t) {
    std::unordered_map<Tuple, const Interval*, TupleHash> last;
    for (const auto& r : t.rows) {
        auto [it, inserted] = last.emplace(r.tuple, &r.interval);
        if (!inserted) {
            if (precedes(r.interval, *it->second)) return false;
            it->second = &r.interval;
        }
    }
    return true;
}

bool is_coalesced(const TemporalTable& t) {
    std::vector<Group> groups;
    try {
        groups = group_rows(t);
    } catch (const IntegrityError&) {
        auto sorted = sort_toa(t);
        if (sorted.size() != t.size()) return false;
        groups = group_rows(sorted);
    }
    return std::all_of(groups.begin(), groups.end(), [](const Group& g) { return disjoint_sorted(g.intervals); });
}

std::vector<Group> group_rows(const TemporalTable& t) {
    std::vector<Group> groups;
    for_each_group_slot(t, [&](std::size_t slot, bool inserted, const Row& r) {
        if (inserted) groups.push_back({r.tuple, {}});
        auto& ivs = groups[slot].intervals;
        if (!ivs.empty() && precedes(r.interval, ivs.back()))
            throw IntegrityError("table violates the temporal ordering assumption at " + r.interval.to_string());
        ivs.push_back(r.interval);
    });
    return groups;
}

TemporalTable from_groups(std::vector<std::string> attrs, const std::vector<Group>& groups) {
    TemporalTable out;
    out.attrs = std::move(attrs);
    std::size_t n = 0;
    for (const auto& g : groups) n += g.intervals.size();
    out.rows.reserve(n);
    for (const auto& g : groups)
        for (const auto& iv : g.intervals) out.rows.push_back({g.tuple, iv});
    return out;
}

TemporalTable sort_toa(const TemporalTable& t) {
    std::vector<Group> groups;
    for_each_group_slot(t, [&](std::size_t slot, bool inserted, const Row& r) {
        if (inserted) groups.push_back({r.tuple, {}});
        groups[slot].intervals.push_back(r.interval);
    });
    for (auto& g : groups) {
        auto& ivs = g.intervals;
        if (!std::is_sorted(ivs.begin(), ivs.end(), precedes)) std::stable_sort(ivs.begin(), ivs.end(), precedes);
        ivs.erase(std::unique(ivs.begin(), ivs.end()), ivs.end());
    }
    return from_groups(t.attrs, groups);
}

TemporalTable coalesce_table(const TemporalTable& t) {
    TemporalTable out;
    out.attrs = t.attrs;
    std::unordered_map<Tuple, std::pair<std::size_t, const Interval*>, TupleHash> last;  // output row, last input
    for (const auto& r : t.rows) {
        auto it = last.find(r.tuple);
        if (it == last.end()) {
            last.emplace(r.tuple, std::make_pair(out.rows.size(), &r.interval));
            out.rows.push_back(r);
            continue;
        }
        if (precedes(r.interval, *it->second.second))
            throw IntegrityError("table violates the temporal ordering assumption at " + r.interval.to_string());
        it->second.second = &r.interval;
        Interval& acc = out.rows[it->second.first].interval;
        if (auto u = union_if_interval(acc, r.interval)) {
            acc = *u;
        } else {
            it->second.first = out.rows.size();
            out.rows.push_back(r);
        }
    }
    return out;
}

TemporalTable temporal_join(const TemporalTable& a, const TemporalTable& b) {
    std::vector<std::size_t> a_shared, b_shared, b_extra;
    TemporalTable out;
    out.attrs = a.attrs;
    for (std::size_t j = 0; j < b.attrs.size(); ++j) {
        auto it = std::find(a.attrs.begin(), a.attrs.end(), b.attrs[j]);
        if (it == a.attrs.end()) {
            b_extra.push_back(j);
            out.attrs.push_back(b.attrs[j]);
        } else {
            a_shared.push_back(static_cast<std::size_t>(it - a.attrs.begin()));
            b_shared.push_back(j);
        }
    }
    std::vector<Group> ga = group_rows(a), gb = group_rows(b);
    for (const auto* gs : {&ga, &gb})
        for (const auto& g : *gs)
            if (!disjoint_sorted(g.intervals)) throw IntegrityError("temporal join needs coalesced inputs");
    std::unordered_map<Tuple, std::vector<std::size_t>, TupleHash> index;
    for (std::size_t k = 0; k < gb.size(); ++k) {
        Tuple key;
        for (auto j : b_shared) key.push_back(gb[k].tuple[j]);
        index[key].push_back(k);
    }
    for (const auto& g : ga) {
        Tuple key;
        for (auto i : a_shared) key.push_back(g.tuple[i]);
        auto it = index.find(key);
        if (it == index.end()) continue;
        for (std::size_t k : it->second) {
            const Group& h = gb[k];
            Tuple tuple = g.tuple;
            for (auto j : b_extra) tuple.push_back(h.tuple[j]);
            std::size_t i = 0, j = 0;
            while (i < g.intervals.size() && j < h.intervals.size()) {
                const Interval& x = g.intervals[i];
                const Interval& y = h.intervals[j];
                if (auto z = intersect(x, y)) out.rows.push_back({tuple, *z});
                if (ends_before(x, y)) ++i;
                else if (ends_before(y, x)) ++j;
                else {
                    ++i;
                    ++j;
                }
            }
        }
    }
    return out;
}

TemporalTable project(const TemporalTable& t, const std::vector<std::string>& attrs) {
    std::vector<std::size_t> pick;
    for (const auto& a : attrs) pick.push_back(index_of(t.attrs, a));
    std::vector<Group> groups = group_rows(t);
    std::vector<Tuple> keys;
    std::vector<std::vector<const std::vector<Interval>*>> members;
    std::unordered_map<Tuple, std::size_t, TupleHash> slot;
    for (const auto& g : groups) {
        Tuple key;
        for (auto i : pick) key.push_back(g.tuple[i]);
        auto [it, inserted] = slot.emplace(key, keys.size());
        if (inserted) {
            keys.push_back(key);
            members.emplace_back();
        }
        members[it->second].push_back(&g.intervals);
    }
    std::vector<Group> out;
    out.reserve(keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k) out.push_back({keys[k], merge_sorted(members[k])});
    return from_groups(attrs, out);
}

TemporalTable union_tables(const TemporalTable& a, const TemporalTable& b) {
    if (a.attrs != b.attrs) throw ContractError("union of tables with different attributes");
    std::vector<Group> ga = group_rows(a), gb = group_rows(b);
    std::unordered_map<Tuple, std::size_t, TupleHash> slot;
    std::vector<Tuple> keys;
    std::vector<std::vector<const std::vector<Interval>*>> members;
    for (const auto* gs : {&ga, &gb})
        for (const auto& g : *gs) {
            auto [it, inserted] = slot.emplace(g.tuple, keys.size());
            if (inserted) {
                keys.push_back(g.tuple);
                members.emplace_back();
            }
            members[it->second].push_back(&g.intervals);
        }
    std::vector<Group> out;
    out.reserve(keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k) out.push_back({keys[k], merge_sorted(members[k])});
    return from_groups(a.attrs, out);
}

std::vector<std::string> positional_attrs(std::size_t arity) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity; ++i) out.push_back("a" + std::to_string(i));
    return out;
}

TemporalTable atom_view(const TemporalTable& stored, const Atom& atom) {
    TemporalTable out;
    out.attrs = atom.variables();
    std::vector<std::size_t> first;  // column of each variable's first occurrence
    for (const auto& v : out.attrs)
        for (std::size_t i = 0; i < atom.args.size(); ++i)
            if (atom.args[i].is_variable() && atom.args[i].name == v) {
                first.push_back(i);
                break;
            }
    for (const auto& r : stored.rows) {
        bool ok = true;
        for (std::size_t i = 0; i < atom.args.size() && ok; ++i) {
            const Term& term = atom.args[i];
            if (!term.is_variable()) {
                ok = r.tuple[i] == term.name;
            } else {
                std::size_t v = static_cast<std::size_t>(
                    std::find(out.attrs.begin(), out.attrs.end(), term.name) - out.attrs.begin());
                ok = r.tuple[i] == r.tuple[first[v]];
            }
        }
        if (!ok) continue;
        Tuple t;
        t.reserve(first.size());
        for (auto i : first) t.push_back(r.tuple[i]);
        out.rows.push_back({std::move(t), r.interval});
    }
    return out;
}

TemporalTable universal_table() {
    TemporalTable t;
    t.rows.push_back({{}, Interval::all()});
    return t;
}

std::string to_text(const TemporalTable& t) {
    std::string out;
    for (const auto& r : t.rows) {
        out += '(';
        for (std::size_t i = 0; i < r.tuple.size(); ++i) {
            if (i) out += ',';
            out += r.tuple[i];
        }
        out += ")@" + r.interval.to_string() + "\n";
    }
    return out;
}

}  // namespace dmtl
