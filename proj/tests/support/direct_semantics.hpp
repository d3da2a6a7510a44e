#ifndef DMTL_TEST_DIRECT_SEMANTICS_HPP
#define DMTL_TEST_DIRECT_SEMANTICS_HPP

// Direct evaluator of nonrecursive programs in the full surface language,
// written against the point-wise semantics of the operators rather than the
// chase rules. Every number must lie on a 1/4 grid, so truth values are
// constant on each grid point and on each open cell between neighbouring
// grid points. Time is sampled on a 1/8 lattice: even indices are grid
// points, odd indices stand for the open cell around them. Truth is
// assumed constant beyond a margin around the data, and elements past the
// window are clamped to its ends.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dmtl/syntax.hpp"
#include "interval_oracle.hpp"

namespace oracle {

class DirectModel {
public:
    using Truth = std::vector<char>;

    DirectModel(const dmtl::Program& p, const dmtl::DataInstance& d, int horizon) {
        double margin = 2;
        for (const auto& r : p.rules) {
            for (const auto& hb : r.head_boxes) margin += finite_sum(hb.range);
            for (const auto& f : r.body) margin += range_sum(f);
        }
        lo_ = -8 * static_cast<long>(std::ceil(margin));
        hi_ = 8 * (horizon + static_cast<long>(std::ceil(margin)));
        size_ = static_cast<std::size_t>(hi_ - lo_ + 1);

        for (const auto& f : d.facts) {
            std::vector<std::string> tuple;
            for (const auto& t : f.atom.args) tuple.push_back(t.name);
            constants_.insert(tuple.begin(), tuple.end());
            mark(facts_[{f.atom.predicate, tuple}], from(f.interval));
        }
        for (const auto& r : p.rules)
            for (const auto& f : r.body) collect_constants(f);
        for (const auto& r : p.rules)
            if (r.head)
                for (const auto& t : r.head->args)
                    if (!t.is_variable()) constants_.insert(t.name);

        std::vector<const dmtl::Rule*> order;
        for (const auto& r : p.rules) order.push_back(&r);
        // Generated programs define P_i from P_j with j < i.
        std::stable_sort(order.begin(), order.end(), [](const dmtl::Rule* a, const dmtl::Rule* b) {
            if (a->is_bottom() != b->is_bottom()) return b->is_bottom();
            if (a->is_bottom()) return false;
            return a->head->predicate < b->head->predicate;
        });
        for (const auto* r : order) apply(*r);
    }

    bool consistent() const { return consistent_; }

    /// Ground atoms of `predicate` with their truth vectors (nonempty ones).
    std::map<std::vector<std::string>, Truth> atoms(const std::string& predicate) const {
        std::map<std::vector<std::string>, Truth> out;
        for (const auto& [key, truth] : facts_)
            if (key.first == predicate && std::find(truth.begin(), truth.end(), 1) != truth.end())
                out[key.second] = truth;
        return out;
    }

    /// Truth vector of an interval set given as rows.
    Truth cover(const std::vector<dmtl::Interval>& ivs) const {
        Truth t;
        for (const auto& iv : ivs) mark(t, from(iv));
        if (t.empty()) t.assign(size_, 0);
        return t;
    }

    double time_of(std::size_t k) const { return static_cast<double>(lo_ + static_cast<long>(k)) / 8; }

private:
    using Key = std::pair<std::string, std::vector<std::string>>;
    using K = dmtl::Formula::Kind;

    long lo_, hi_;
    std::size_t size_;
    std::map<Key, Truth> facts_;
    std::set<std::string> constants_;
    bool consistent_ = true;

    static double finite_sum(const dmtl::Range& r) {
        double s = 0;
        for (double x : {r.r1().to_double(), r.r2().to_double()})
            if (std::isfinite(x)) s += x;
        return s;
    }

    static double range_sum(const dmtl::Formula& f) {
        double s = f.range ? finite_sum(*f.range) : 0;
        for (const auto& c : f.children) s += range_sum(c);
        return s;
    }

    void collect_constants(const dmtl::Formula& f) {
        for (const auto& t : f.atom.args)
            if (!t.is_variable()) constants_.insert(t.name);
        for (const auto* t : {&f.lhs, &f.rhs})
            if (f.kind == K::Inequality && !t->is_variable()) constants_.insert(t->name);
        for (const auto& c : f.children) collect_constants(c);
    }

    /// Inclusive index range of elements meeting `s`, clamped to the window.
    std::pair<long, long> span(const Iv& s) const {
        long a, b;
        constexpr long kFarIndex = 1L << 40;
        if (!std::isfinite(s.lo)) a = -kFarIndex;
        else {
            long k = std::lround(s.lo * 8);
            a = (k % 2 == 0 && !s.lc) ? k + 1 : k;
        }
        if (!std::isfinite(s.hi)) b = kFarIndex;
        else {
            long k = std::lround(s.hi * 8);
            b = (k % 2 == 0 && !s.hc) ? k - 1 : k;
        }
        if (a > b) return {1, 0};
        a = std::clamp(a, lo_, hi_);
        b = std::clamp(b, lo_, hi_);
        return {a - lo_, b - lo_};
    }

    void mark(Truth& t, const Iv& s) const {
        if (t.empty()) t.assign(size_, 0);
        auto [a, b] = span(s);
        for (long k = a; k <= b; ++k) t[static_cast<std::size_t>(k)] = 1;
    }

    /// The element's real set.
    Iv element(std::size_t k) const {
        long i = lo_ + static_cast<long>(k);
        if (i % 2 == 0) return {i / 8.0, i / 8.0, true, true};
        return {(i - 1) / 8.0, (i + 1) / 8.0, false, false};
    }

    static bool odd(long i) { return (i % 2 + 2) % 2 == 1; }
    bool is_cell(std::size_t k) const { return odd(lo_ + static_cast<long>(k)); }

    /// {t − k | k ∈ ϱ} or {t + k | k ∈ ϱ} for the element's sample time.
    Iv shifted(std::size_t k, const Iv& r, bool past) const {
        double t = static_cast<double>(lo_ + static_cast<long>(k)) / 8;
        if (past) return {t - r.hi, t - r.lo, r.hc, r.lc};
        return {t + r.lo, t + r.hi, r.lc, r.hc};
    }

    using Assignment = std::map<std::string, std::string>;

    std::string value(const dmtl::Term& t, const Assignment& a) const {
        return t.is_variable() ? a.at(t.name) : t.name;
    }

    Truth eval(const dmtl::Formula& f, const Assignment& a) const {
        switch (f.kind) {
            case K::Top: return Truth(size_, 1);
            case K::Atom: {
                std::vector<std::string> tuple;
                for (const auto& t : f.atom.args) tuple.push_back(value(t, a));
                auto it = facts_.find({f.atom.predicate, tuple});
                return it == facts_.end() ? Truth(size_, 0) : it->second;
            }
            case K::Inequality: return Truth(size_, value(f.lhs, a) != value(f.rhs, a));
            case K::And: {
                Truth out(size_, 1);
                for (const auto& c : f.children) {
                    Truth x = eval(c, a);
                    for (std::size_t k = 0; k < size_; ++k) out[k] = out[k] && x[k];
                }
                return out;
            }
            case K::BoxPlus:
            case K::BoxMinus:
            case K::DiamondPlus:
            case K::DiamondMinus: {
                Truth x = eval(f.children[0], a);
                bool past = f.kind == K::BoxMinus || f.kind == K::DiamondMinus;
                bool all = f.kind == K::BoxPlus || f.kind == K::BoxMinus;
                Iv r = from(*f.range);
                Truth out(size_, 0);
                for (std::size_t k = 0; k < size_; ++k) {
                    auto [lo, hi] = span(shifted(k, r, past));
                    bool v = all;
                    for (long j = lo; j <= hi; ++j)
                        if (all ? !x[static_cast<std::size_t>(j)] : x[static_cast<std::size_t>(j)]) {
                            v = !all;
                            break;
                        }
                    out[k] = v;
                }
                return out;
            }
            case K::Since:
            case K::Until: return since_until(f, a);
        }
        return Truth(size_, 0);
    }

    /// A S_ϱ B at t: some s with t − s ∈ ϱ has B, and A holds on (s, t).
    Truth since_until(const dmtl::Formula& f, const Assignment& a) const {
        Truth left = eval(f.children[0], a), right = eval(f.children[1], a);
        bool past = f.kind == K::Since;
        Iv r = from(*f.range);
        bool zero_in = r.has(0);
        bool small_in = r.lo == 0 && r.hi > 0;  // ϱ meets (0, 1/8)
        Truth out(size_, 0);
        for (std::size_t k = 0; k < size_; ++k) {
            if (right[k] && (zero_in || (small_in && is_cell(k) && left[k]))) {
                out[k] = 1;
                continue;
            }
            if (is_cell(k) && !left[k]) continue;
            auto [lo, hi] = span(shifted(k, r, past));
            long self = static_cast<long>(k);
            // At an edge the witness may lie in the tail itself.
            bool edge = past ? k == 0 : k + 1 == size_;
            if (edge && lo <= self && self <= hi && right[k] && left[k]) {
                out[k] = 1;
                continue;
            }
            if (past) {
                // Walk s from t towards the past while A holds in between.
                for (long j = self - 1; j >= 0; --j) {
                    auto uj = static_cast<std::size_t>(j);
                    if (j >= lo && j <= hi && right[uj] && (!is_cell(uj) || left[uj])) {
                        out[k] = 1;
                        break;
                    }
                    if (!left[uj]) break;
                }
            } else {
                for (long j = self + 1; j < static_cast<long>(size_); ++j) {
                    auto uj = static_cast<std::size_t>(j);
                    if (j >= lo && j <= hi && right[uj] && (!is_cell(uj) || left[uj])) {
                        out[k] = 1;
                        break;
                    }
                    if (!left[uj]) break;
                }
            }
        }
        return out;
    }

    void enumerate(const std::vector<std::string>& vars, std::size_t i, Assignment& a,
                   const std::function<void(const Assignment&)>& fn) const {
        if (i == vars.size()) {
            fn(a);
            return;
        }
        for (const auto& c : constants_) {
            a[vars[i]] = c;
            enumerate(vars, i + 1, a, fn);
        }
    }

    void apply(const dmtl::Rule& r) {
        std::set<std::string> var_set;
        for (const auto& f : r.body)
            for (const auto& v : f.all_variables()) var_set.insert(v);
        std::vector<std::string> vars(var_set.begin(), var_set.end());
        std::map<Key, Truth> derived;
        Assignment a;
        enumerate(vars, 0, a, [&](const Assignment& asg) {
            Truth body(size_, 1);
            for (const auto& f : r.body) {
                Truth x = eval(f, asg);
                for (std::size_t k = 0; k < size_; ++k) body[k] = body[k] && x[k];
            }
            if (r.is_bottom()) {
                if (std::find(body.begin(), body.end(), 1) != body.end()) consistent_ = false;
                return;
            }
            std::vector<std::string> tuple;
            for (const auto& t : r.head->args) tuple.push_back(value(t, asg));
            Truth& target = derived[{r.head->predicate, tuple}];
            if (target.empty()) target.assign(size_, 0);
            for (std::size_t k = 0; k < size_; ++k) {
                if (!body[k]) continue;
                Iv e = element(k);
                if (k == 0) e.lo = -kInf;  // the edge elements stand for the tails
                if (k + 1 == size_) e.hi = kInf;
                for (const auto& hb : r.head_boxes) {
                    Iv q = from(hb.range);
                    // e ±° ϱ
                    if (hb.future) e = {e.lo + q.lo, e.hi + q.hi, e.lc && q.lc, e.hc && q.hc};
                    else e = {e.lo - q.hi, e.hi - q.lo, e.lc && q.hc, e.hc && q.lc};
                }
                mark(target, e);
            }
        });
        for (auto& [key, truth] : derived) {
            Truth& t = facts_[key];
            if (t.empty()) t.assign(size_, 0);
            for (std::size_t k = 0; k < size_; ++k) t[k] = t[k] || truth[k];
        }
    }
};

}  // namespace oracle

#endif  // DMTL_TEST_DIRECT_SEMANTICS_HPP
