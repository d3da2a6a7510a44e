#include "dmtl/analysis.hpp"

#include <algorithm>
#include <functional>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

std::string head_name(const Rule& r) { return r.head ? r.head->predicate : kBottomName; }

void collect_numbers(const Formula& f, std::vector<TimePoint>& out) {
    if (f.range) {
        out.push_back(f.range->r1());
        if (f.range->r2().is_finite()) out.push_back(f.range->r2());
    }
    for (const auto& c : f.children) collect_numbers(c, out);
}

std::set<TimePoint> shifted(const std::set<TimePoint>& s, const TimePoint& by, bool negate) {
    std::set<TimePoint> out;
    if (!by.is_finite()) return out;
    for (const auto& x : s) out.insert(negate ? x - by : x + by);
    return out;
}

void absorb(std::set<TimePoint>& into, const std::set<TimePoint>& from) { into.insert(from.begin(), from.end()); }

}  // namespace

DependenceGraph dependence(const Program& p) {
    DependenceGraph g;
    for (const auto& r : p.rules) {
        auto& edges = g[head_name(r)];
        for (const auto& q : body_predicates(r)) edges.insert(q);
    }
    return g;
}

std::vector<std::string> topological_order(const Program& p) {
    DependenceGraph g = dependence(p);
    std::vector<std::string> order;
    std::map<std::string, int> state;  // 1 = on stack, 2 = done
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        int& s = state[v];
        if (s == 2) return;
        if (s == 1) throw ContractError("program is recursive through " + v);
        s = 1;
        auto it = g.find(v);
        if (it != g.end())
            for (const auto& w : it->second) visit(w);
        state[v] = 2;
        if (g.count(v)) order.push_back(v);
    };
    for (const auto& [v, _] : g) visit(v);
    return order;
}

bool is_nonrecursive(const Program& p) {
    try {
        topological_order(p);
        return true;
    } catch (const ContractError&) {
        return false;
    }
}

std::map<std::string, std::size_t> depths(const Program& p) {
    DependenceGraph g = dependence(p);
    std::map<std::string, std::size_t> out;
    for (const auto& [v, edges] : g)
        for (const auto& w : edges) out.emplace(w, 0);
    for (const auto& v : topological_order(p)) {
        std::size_t d = 0;
        for (const auto& w : g[v]) d = std::max(d, out[w] + 1);
        out[v] = d;
    }
    return out;
}

std::size_t depth(const Program& p) {
    std::size_t d = 0;
    for (const auto& [_, v] : depths(p)) d = std::max(d, v);
    return d;
}

std::size_t depth(const Program& p, const std::string& predicate) {
    auto all = depths(p);
    auto it = all.find(predicate);
    return it == all.end() ? 0 : it->second;
}

std::set<std::string> dependence_cone(const Program& p, const std::string& q) {
    DependenceGraph g = dependence(p);
    std::set<std::string> seen{q};
    std::vector<std::string> stack{q};
    while (!stack.empty()) {
        std::string v = stack.back();
        stack.pop_back();
        auto it = g.find(v);
        if (it == g.end()) continue;
        for (const auto& w : it->second)
            if (seen.insert(w).second) stack.push_back(w);
    }
    return seen;
}

std::vector<TimePoint> program_numbers(const Program& p) {
    std::vector<TimePoint> out;
    for (const auto& r : p.rules) {
        for (const auto& hb : r.head_boxes) {
            out.push_back(hb.range.r1());
            if (hb.range.r2().is_finite()) out.push_back(hb.range.r2());
        }
        for (const auto& f : r.body) collect_numbers(f, out);
    }
    return out;
}

std::vector<TimePoint> data_numbers(const DataInstance& d) {
    std::vector<TimePoint> out;
    for (const auto& f : d.facts) {
        if (f.interval.lo().is_finite()) out.push_back(f.interval.lo());
        if (f.interval.hi().is_finite()) out.push_back(f.interval.hi());
    }
    return out;
}

Bounds bounds(const Program& p, const DataInstance& d) {
    std::size_t dep = depth(p);
    std::vector<TimePoint> dn = data_numbers(d);
    if (dn.empty()) throw InvalidValue("data instance has no finite timestamp");
    std::vector<TimePoint> pn = program_numbers(p);
    TimePoint k = 0;
    for (const auto& x : pn) k = max(k, x);
    auto [lo, hi] = std::minmax_element(dn.begin(), dn.end());
    TimePoint spread = k.times(static_cast<std::int64_t>(dep));
    std::vector<TimePoint> all = pn;
    all.insert(all.end(), dn.begin(), dn.end());
    return {*lo - spread, *hi + spread, gcd_dyadic(all)};
}

std::map<std::string, EndpointOffsets> le_ri(const Program& p, const std::set<std::string>& data_predicates) {
    if (!is_normal_form(p)) throw ContractError("le/ri needs a normal-form program");
    std::map<std::string, EndpointOffsets> out;
    std::map<std::string, std::vector<const Rule*>> by_head;
    for (const auto& r : p.rules) by_head[head_name(r)].push_back(&r);
    auto offsets = [&](const Formula& f) -> EndpointOffsets {
        if (f.kind == Formula::Kind::Top) return {};
        auto it = out.find(f.atom.predicate);
        if (it != out.end()) return it->second;
        return {{TimePoint(0)}, {TimePoint(0)}};
    };
    for (const auto& pred : topological_order(p)) {
        EndpointOffsets acc;
        if (data_predicates.count(pred)) {
            acc.le.insert(TimePoint(0));
            acc.ri.insert(TimePoint(0));
        }
        for (const Rule* r : by_head[pred]) {
            const Formula& f = r->body[0];
            switch (*normal_shape(*r)) {
                case RuleShape::Horn:
                    for (const auto& lit : r->body) {
                        if (!lit.is_atom_like()) continue;
                        EndpointOffsets o = offsets(lit);
                        absorb(acc.le, o.le);
                        absorb(acc.ri, o.ri);
                    }
                    break;
                case RuleShape::Since:
                case RuleShape::Until: {
                    bool since = f.kind == Formula::Kind::Since;
                    const Range& rg = *f.range;
                    EndpointOffsets a = offsets(f.children[0]);
                    EndpointOffsets b = offsets(f.children[1]);
                    const TimePoint& left_shift = since ? rg.r1() : rg.r2();
                    const TimePoint& right_shift = since ? rg.r2() : rg.r1();
                    absorb(acc.le, shifted(a.le, left_shift, !since));
                    absorb(acc.le, shifted(b.le, left_shift, !since));
                    absorb(acc.le, a.le);
                    absorb(acc.ri, shifted(a.ri, right_shift, !since));
                    absorb(acc.ri, shifted(b.ri, right_shift, !since));
                    absorb(acc.ri, a.ri);
                    break;
                }
                case RuleShape::BoxMinus: {
                    EndpointOffsets a = offsets(f.children[0]);
                    absorb(acc.le, shifted(a.le, f.range->r2(), false));
                    absorb(acc.ri, shifted(a.ri, f.range->r1(), false));
                    break;
                }
                case RuleShape::BoxPlus: {
                    EndpointOffsets a = offsets(f.children[0]);
                    absorb(acc.le, shifted(a.le, f.range->r1(), true));
                    absorb(acc.ri, shifted(a.ri, f.range->r2(), true));
                    break;
                }
            }
        }
        out[pred] = std::move(acc);
    }
    for (const auto& [v, edges] : dependence(p))
        for (const auto& w : edges)
            if (!out.count(w)) out[w] = {{TimePoint(0)}, {TimePoint(0)}};
    return out;
}

}  // namespace dmtl
