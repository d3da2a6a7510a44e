#include "dmtl/engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>

#include "dmtl/analysis.hpp"
#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

using K = Formula::Kind;

TemporalTable view(const Formula& f, const TableMap& tables) {
    if (f.kind == K::Top) return universal_table();
    auto it = tables.find(f.atom.predicate);
    if (it == tables.end()) {
        TemporalTable empty;
        empty.attrs = f.atom.variables();
        return empty;
    }
    return atom_view(it->second, f.atom);
}

/// Maps a table over variables to the head's positional tuple.
TemporalTable to_head(const TemporalTable& t, const std::optional<Atom>& head) {
    if (!head) return project(t, {});
    TemporalTable p = project(t, head->variables());
    TemporalTable out;
    out.attrs = positional_attrs(head->arity());
    std::vector<std::ptrdiff_t> source;
    for (const auto& term : head->args)
        source.push_back(term.is_variable()
                             ? std::find(p.attrs.begin(), p.attrs.end(), term.name) - p.attrs.begin()
                             : -1);
    out.rows.reserve(p.rows.size());
    for (auto& r : p.rows) {
        Tuple tuple;
        tuple.reserve(source.size());
        for (std::size_t i = 0; i < source.size(); ++i)
            tuple.push_back(source[i] < 0 ? head->args[i].name : r.tuple[static_cast<std::size_t>(source[i])]);
        out.rows.push_back({std::move(tuple), std::move(r.interval)});
    }
    return out;
}

TemporalTable apply_horn(const Rule& rule, const TableMap& tables) {
    TemporalTable acc = universal_table();
    for (const auto& lit : rule.body) {
        if (lit.kind != K::Atom) continue;
        acc = temporal_join(acc, view(lit, tables));
        if (acc.empty()) {
            TemporalTable none;
            none.attrs = rule.head ? positional_attrs(rule.head->arity()) : std::vector<std::string>{};
            return none;
        }
    }
    for (const auto& lit : rule.body) {
        if (lit.kind != K::Inequality) continue;
        auto column = [&](const Term& t) -> std::ptrdiff_t {
            if (!t.is_variable()) return -1;
            return std::find(acc.attrs.begin(), acc.attrs.end(), t.name) - acc.attrs.begin();
        };
        std::ptrdiff_t cl = column(lit.lhs), cr = column(lit.rhs);
        std::erase_if(acc.rows, [&](const Row& r) {
            const std::string& a = cl < 0 ? lit.lhs.name : r.tuple[static_cast<std::size_t>(cl)];
            const std::string& b = cr < 0 ? lit.rhs.name : r.tuple[static_cast<std::size_t>(cr)];
            return a == b;
        });
    }
    return to_head(acc, rule.head);
}

/// True when `iv` lies entirely before the start of `c`.
bool ends_before_start(const Interval& iv, const Interval& c) {
    if (iv.hi() != c.lo()) return iv.hi() < c.lo();
    return !iv.hi_closed() || !c.lo_closed();
}

TemporalTable apply_since_until(const Rule& rule, const TableMap& tables) {
    const Formula& f = rule.body[0];
    const bool since = f.kind == K::Since;
    const Range& range = *f.range;
    TemporalTable left = view(f.children[0], tables);
    TemporalTable right = view(f.children[1], tables);

    std::vector<std::size_t> left_shared, right_shared, right_extra;
    TemporalTable out;
    out.attrs = left.attrs;
    for (std::size_t j = 0; j < right.attrs.size(); ++j) {
        auto it = std::find(left.attrs.begin(), left.attrs.end(), right.attrs[j]);
        if (it == left.attrs.end()) {
            right_extra.push_back(j);
            out.attrs.push_back(right.attrs[j]);
        } else {
            left_shared.push_back(static_cast<std::size_t>(it - left.attrs.begin()));
            right_shared.push_back(j);
        }
    }
    std::vector<Group> groups = group_rows(right);
    std::unordered_map<Tuple, std::vector<std::size_t>, TupleHash> index;
    for (std::size_t k = 0; k < groups.size(); ++k) {
        Tuple key;
        for (auto j : right_shared) key.push_back(groups[k].tuple[j]);
        index[key].push_back(k);
    }
    for (const auto& r1 : left.rows) {
        Tuple key;
        for (auto i : left_shared) key.push_back(r1.tuple[i]);
        auto it = index.find(key);
        if (it == index.end()) continue;
        const Interval c = closure(r1.interval);
        for (std::size_t k : it->second) {
            const Group& g = groups[k];
            auto first = std::partition_point(g.intervals.begin(), g.intervals.end(),
                                              [&](const Interval& iv) { return ends_before_start(iv, c); });
            for (auto p = first; p != g.intervals.end(); ++p) {
                if (c.hi() < p->lo()) break;
                auto x = intersect(c, *p);
                if (!x) continue;
                Interval shifted = since ? plus_o(*x, range) : minus_o(*x, range);
                auto z = intersect(shifted, c);
                if (!z) continue;
                Tuple tuple = r1.tuple;
                for (auto j : right_extra) tuple.push_back(g.tuple[j]);
                out.rows.push_back({std::move(tuple), *z});
            }
        }
    }
    return to_head(sort_toa(out), rule.head);
}

TemporalTable apply_box(const Rule& rule, const TableMap& tables) {
    const Formula& f = rule.body[0];
    const Range& range = *f.range;
    TemporalTable in = view(f.children[0], tables);
    TemporalTable out;
    out.attrs = in.attrs;
    for (const auto& r : in.rows) {
        if (!fits(range, r.interval)) continue;
        auto z = f.kind == K::BoxPlus ? minus_c(r.interval, range) : plus_c(r.interval, range);
        if (z) out.rows.push_back({r.tuple, *z});
    }
    return to_head(sort_toa(out), rule.head);
}

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

const TemporalTable* CanonicalModel::table(const std::string& predicate) const {
    auto it = tables.find(predicate);
    return it == tables.end() ? nullptr : &it->second;
}

std::size_t CanonicalModel::fact_count() const {
    std::size_t n = 0;
    for (const auto& [_, t] : tables) n += t.size();
    return n;
}

TableMap data_tables(const DataInstance& d) {
    TableMap out;
    for (const auto& f : d.facts) {
        auto& t = out[f.atom.predicate];
        if (t.attrs.empty()) t.attrs = positional_attrs(f.atom.arity());
        Tuple tuple;
        for (const auto& a : f.atom.args) tuple.push_back(a.name);
        t.rows.push_back({std::move(tuple), f.interval});
    }
    for (auto& [_, t] : out) t = coalesce_table(sort_toa(t));
    return out;
}

TemporalTable apply_rule(const Rule& rule, const TableMap& tables) {
    auto shape = normal_shape(rule);
    if (!shape) throw ContractError("rule is not in normal form: " + to_text(rule));
    switch (*shape) {
        case RuleShape::Horn: return apply_horn(rule, tables);
        case RuleShape::Since:
        case RuleShape::Until: return apply_since_until(rule, tables);
        case RuleShape::BoxPlus:
        case RuleShape::BoxMinus: return apply_box(rule, tables);
    }
    return {};
}

CanonicalModel eval_nonrecursive(const Program& p, const DataInstance& d, const EvalOptions& opts) {
    if (!is_normal_form(p)) throw ContractError("evaluation needs a normal-form program");
    std::vector<std::string> order = topological_order(p);
    std::map<std::string, std::size_t> level = depths(p);
    std::map<std::string, std::vector<const Rule*>> by_head;
    for (const auto& r : p.rules) by_head[r.head ? r.head->predicate : kBottomName].push_back(&r);

    CanonicalModel m;
    m.signature = predicate_arities(p, &d);
    m.tables = data_tables(d);
    std::map<std::size_t, std::vector<std::string>> strata;
    for (const auto& pred : order) strata[level[pred]].push_back(pred);

    for (const auto& [_, preds] : strata) {
        std::vector<const Rule*> rules;
        for (const auto& pred : preds)
            for (const Rule* r : by_head[pred]) rules.push_back(r);
        std::vector<TemporalTable> results(rules.size());
        parallel_for(rules.size(), opts.threads, [&](std::size_t i) { results[i] = apply_rule(*rules[i], m.tables); });

        std::size_t i = 0;
        for (const auto& pred : preds) {
            const bool bottom = pred == kBottomName;
            TemporalTable acc;
            auto existing = m.tables.find(pred);
            if (!bottom && existing != m.tables.end()) acc = existing->second;
            else acc.attrs = results[i].attrs;
            for (std::size_t n = 0; n < by_head[pred].size(); ++n, ++i)
                acc = union_tables(acc, results[i]);
            acc = coalesce_table(acc);
            if (bottom) {
                if (!acc.empty()) {
                    Interval least = acc.rows.front().interval;
                    for (const auto& r : acc.rows)
                        if (precedes(r.interval, least)) least = r.interval;
                    m.inconsistency = least;
                    return m;
                }
                continue;
            }
            if (!acc.empty()) m.tables[pred] = std::move(acc);
        }
    }
    return m;
}

std::string to_text(const CanonicalModel& m, TimeFormat fmt) {
    std::string out;
    for (const auto& [pred, t] : m.tables) {
        std::vector<Row> rows = t.rows;
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.tuple != b.tuple) return a.tuple < b.tuple;
            return precedes(a.interval, b.interval);
        });
        for (const auto& r : rows) {
            Atom a{pred, {}};
            for (const auto& c : r.tuple) a.args.push_back(Term::constant(c));
            out += to_text(a, TermStyle::Data) + "@" + r.interval.to_string(fmt) + "\n";
        }
    }
    if (m.inconsistency) out += "BOT@" + m.inconsistency->to_string(fmt) + "\n";
    return out;
}

}  // namespace dmtl
