#include "dmtl/chase.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

using K = Formula::Kind;
using Facts = std::map<Tuple, std::vector<Interval>>;  // sorted, pairwise disjoint
using State = std::map<std::string, Facts>;
using Binding = std::unordered_map<std::string, std::string>;

const std::string kBottom = "\x01bottom";

/// Sorts and merges a list of intervals into maximal disjoint ones.
std::vector<Interval> coalesce(std::vector<Interval> xs) {
    std::sort(xs.begin(), xs.end(), precedes);
    std::vector<Interval> out;
    for (auto& x : xs) {
        if (!out.empty())
            if (auto u = union_if_interval(out.back(), x)) {
                out.back() = *u;
                continue;
            }
        out.push_back(std::move(x));
    }
    return out;
}

bool match(const Atom& a, const Tuple& t, Binding& b, std::vector<std::string>& bound) {
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        const Term& term = a.args[i];
        if (!term.is_variable()) {
            if (term.name != t[i]) return false;
            continue;
        }
        auto it = b.find(term.name);
        if (it == b.end()) {
            b.emplace(term.name, t[i]);
            bound.push_back(term.name);
        } else if (it->second != t[i]) {
            return false;
        }
    }
    return true;
}

void unbind(Binding& b, std::vector<std::string>& bound) {
    for (const auto& v : bound) b.erase(v);
    bound.clear();
}

Tuple instantiate(const Atom& a, const Binding& b) {
    Tuple t;
    for (const auto& term : a.args) t.push_back(term.is_variable() ? b.at(term.name) : term.name);
    return t;
}

std::string value(const Term& t, const Binding& b) { return t.is_variable() ? b.at(t.name) : t.name; }

/// Intervals of `xs` (sorted, disjoint) that may meet `c`.
template <typename F>
void overlapping(const std::vector<Interval>& xs, const Interval& c, F&& f) {
    auto first = std::lower_bound(xs.begin(), xs.end(), c, [](const Interval& x, const Interval& c) {
        return x.hi() < c.lo() || (x.hi() == c.lo() && !(x.hi_closed() && c.lo_closed()));
    });
    for (auto it = first; it != xs.end() && !(c.hi() < it->lo()); ++it) f(*it);
}

struct Round {
    const State& state;
    std::map<std::string, std::map<Tuple, std::vector<Interval>>> derived;

    const Facts* facts(const std::string& pred) const {
        auto it = state.find(pred);
        return it == state.end() ? nullptr : &it->second;
    }

    void emit(const Rule& r, const Binding& b, const Interval& iv) {
        if (!r.head) {
            derived[kBottom][{}].push_back(iv);
            return;
        }
        derived[r.head->predicate][instantiate(*r.head, b)].push_back(iv);
    }

    /// Enumerates instances of a literal: ⊤ or an atom with its interval.
    template <typename F>
    void each_instance(const Formula& lit, Binding& b, F&& f) {
        if (lit.kind == K::Top) {
            f(Interval::all());
            return;
        }
        const Facts* fs = facts(lit.atom.predicate);
        if (!fs) return;
        for (const auto& [tuple, ivs] : *fs) {
            std::vector<std::string> bound;
            if (match(lit.atom, tuple, b, bound))
                for (const auto& iv : ivs) f(iv);
            unbind(b, bound);
        }
    }

    void horn(const Rule& r, std::size_t i, Binding& b, const Interval& acc) {
        if (i == r.body.size()) {
            for (const auto& lit : r.body)
                if (lit.kind == K::Inequality && value(lit.lhs, b) == value(lit.rhs, b)) return;
            emit(r, b, acc);
            return;
        }
        const Formula& lit = r.body[i];
        if (lit.kind != K::Atom) {
            horn(r, i + 1, b, acc);
            return;
        }
        const Facts* fs = facts(lit.atom.predicate);
        if (!fs) return;
        for (const auto& [tuple, ivs] : *fs) {
            std::vector<std::string> bound;
            if (match(lit.atom, tuple, b, bound))
                overlapping(ivs, acc, [&](const Interval& iv) {
                    if (auto x = intersect(acc, iv)) horn(r, i + 1, b, *x);
                });
            unbind(b, bound);
        }
    }

    void since_until(const Rule& r) {
        const Formula& f = r.body[0];
        const Range& range = *f.range;
        Binding b;
        each_instance(f.children[0], b, [&](const Interval& i1) {
            Interval c = closure(i1);
            each_instance(f.children[1], b, [&](const Interval& i2) {
                auto x = intersect(c, i2);
                if (!x) return;
                auto z = intersect(f.kind == K::Since ? plus_o(*x, range) : minus_o(*x, range), c);
                if (z) emit(r, b, *z);
            });
        });
    }

    void box(const Rule& r) {
        const Formula& f = r.body[0];
        const Range& range = *f.range;
        Binding b;
        each_instance(f.children[0], b, [&](const Interval& iv) {
            if (!fits(range, iv)) return;
            auto z = f.kind == K::BoxPlus ? minus_c(iv, range) : plus_c(iv, range);
            if (z) emit(r, b, *z);
        });
    }
};

}  // namespace

std::size_t default_round_cap(const Program& p, const DataInstance& d) {
    return 10 * (p.rules.size() + d.facts.size());
}

std::pair<CanonicalModel, EvalStatus> chase(const Program& p, const DataInstance& d, std::size_t round_cap) {
    if (!is_normal_form(p)) throw ContractError("chase needs a normal-form program");
    State state;
    {
        std::map<std::string, std::map<Tuple, std::vector<Interval>>> raw;
        for (const auto& f : d.facts) {
            Tuple t;
            for (const auto& a : f.atom.args) t.push_back(a.name);
            raw[f.atom.predicate][t].push_back(f.interval);
        }
        for (auto& [pred, by_tuple] : raw)
            for (auto& [t, ivs] : by_tuple) state[pred][t] = coalesce(std::move(ivs));
    }
    std::map<std::string, std::size_t> arity;
    for (const auto& f : d.facts) arity[f.atom.predicate] = f.atom.arity();
    for (const auto& r : p.rules)
        if (r.head) arity[r.head->predicate] = r.head->arity();

    EvalStatus status;
    std::optional<Interval> bottom;
    while (true) {
        if (status.rounds >= round_cap) {
            status.kind = EvalStatus::Kind::CapReached;
            break;
        }
        Round round{state, {}};
        for (const auto& r : p.rules) {
            switch (*normal_shape(r)) {
                case RuleShape::Horn: {
                    Binding b;
                    round.horn(r, 0, b, Interval::all());
                    break;
                }
                case RuleShape::Since:
                case RuleShape::Until: round.since_until(r); break;
                case RuleShape::BoxPlus:
                case RuleShape::BoxMinus: round.box(r); break;
            }
        }
        ++status.rounds;
        auto bot = round.derived.find(kBottom);
        if (bot != round.derived.end()) {
            auto ivs = coalesce(bot->second[{}]);
            bottom = ivs.front();
            status.kind = EvalStatus::Kind::Inconsistent;
            break;
        }
        bool changed = false;
        for (auto& [pred, by_tuple] : round.derived)
            for (auto& [t, ivs] : by_tuple) {
                auto& current = state[pred][t];
                ivs.insert(ivs.end(), current.begin(), current.end());
                auto merged = coalesce(std::move(ivs));
                if (merged != current) {
                    current = std::move(merged);
                    changed = true;
                }
            }
        if (!changed) {
            status.kind = EvalStatus::Kind::Fixpoint;
            break;
        }
    }

    CanonicalModel m;
    m.signature = predicate_arities(p, &d);
    for (const auto& [pred, by_tuple] : state) {
        TemporalTable t;
        t.attrs = positional_attrs(arity[pred]);
        for (const auto& [tuple, ivs] : by_tuple)
            for (const auto& iv : ivs) t.rows.push_back({tuple, iv});
        if (!t.empty()) m.tables[pred] = std::move(t);
    }
    m.inconsistency = bottom;
    return {std::move(m), status};
}

}  // namespace dmtl
