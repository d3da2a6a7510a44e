#include "dmtl/answers.hpp"

#include <algorithm>

#include "dmtl/errors.hpp"
#include "dmtl/normalize.hpp"

namespace dmtl {

namespace {

Atom ground(const Atom& goal, const Tuple& c) {
    if (c.size() != goal.arity()) throw ValidationError("answer tuple arity does not match " + goal.predicate);
    Atom a{goal.predicate, {}};
    for (const auto& v : c) a.args.push_back(Term::constant(v));
    return a;
}

TimePoint origin(const Interval& i) {
    if (i.lo().is_finite() && i.lo_closed()) return i.lo();
    if (i.hi().is_finite() && i.hi_closed()) return i.hi();
    if (i.lo().is_finite() && i.hi().is_finite()) return (i.lo() + i.hi()).halved();
    if (i.lo().is_finite()) return i.lo() + TimePoint(1);
    if (i.hi().is_finite()) return i.hi() - TimePoint(1);
    return TimePoint(0);
}

}  // namespace

std::vector<Answer> answers(const CanonicalModel& m, const Query& q) {
    auto sig = m.signature.find(q.goal.predicate);
    if (sig == m.signature.end()) throw ValidationError("unknown predicate " + q.goal.predicate);
    if (sig->second != q.goal.arity())
        throw ValidationError("predicate " + q.goal.predicate + " has arity " + std::to_string(sig->second));
    std::vector<Answer> out;
    const TemporalTable* t = m.table(q.goal.predicate);
    if (!t) return out;
    for (const auto& r : t->rows) {
        bool ok = true;
        for (std::size_t i = 0; i < q.goal.args.size() && ok; ++i) {
            const Term& term = q.goal.args[i];
            if (!term.is_variable()) {
                ok = r.tuple[i] == term.name;
                continue;
            }
            for (std::size_t j = 0; j < i && ok; ++j)
                if (q.goal.args[j] == term) ok = r.tuple[j] == r.tuple[i];
        }
        if (ok) out.push_back({r.tuple, r.interval});
    }
    std::sort(out.begin(), out.end(), [](const Answer& a, const Answer& b) {
        if (a.tuple != b.tuple) return a.tuple < b.tuple;
        return precedes(a.interval, b.interval);
    });
    return out;
}

bool certain_answer(const CanonicalModel& m, const Query& q, const Tuple& c, const Interval& iota) {
    if (!m.consistent()) return true;
    Query exact{ground(q.goal, c)};
    for (const auto& a : answers(m, exact))
        if (a.interval.contains(iota)) return true;
    return false;
}

bool answer_via_reduction(const Program& p, const DataInstance& d, const Query& q, const Tuple& c,
                          const Interval& iota) {
    Atom goal = ground(q.goal, c);
    TimePoint o = origin(iota);
    TimePoint t1 = o - iota.lo();
    TimePoint t2 = iota.hi() - o;

    Rule r;
    r.body.push_back(Formula::make_atom(Atom{"_goal", {}}));
    r.body.push_back(Formula::unary(Formula::Kind::BoxMinus, Range(0, true, t1, iota.lo_closed()),
                                    Formula::make_atom(goal)));
    if (!t2.is_zero())
        r.body.push_back(Formula::unary(Formula::Kind::BoxPlus, Range(0, false, t2, iota.hi_closed()),
                                        Formula::make_atom(goal)));
    Program augmented = p;
    augmented.rules.push_back(std::move(r));
    DataInstance extended = d;
    extended.facts.push_back({Atom{"_goal", {}}, Interval::point(o)});
    return !eval_nonrecursive(normalize(augmented), extended).consistent();
}

std::string to_text(const std::string& predicate, const std::vector<Answer>& as, TimeFormat fmt) {
    std::string out;
    for (const auto& a : as) {
        Atom atom{predicate, {}};
        for (const auto& v : a.tuple) atom.args.push_back(Term::constant(v));
        out += to_text(atom, TermStyle::Data) + "@" + a.interval.to_string(fmt) + "\n";
    }
    return out;
}

}  // namespace dmtl
