#include "dmtl/normalize.hpp"

#include <algorithm>
#include <cctype>

namespace dmtl {

namespace {

using K = Formula::Kind;

constexpr const char* kFreshPrefix = "_nf";

std::size_t max_fresh_index(const Formula& f) {
    std::size_t best = 0;
    if (f.kind == K::Atom) {
        const std::string& n = f.atom.predicate;
        if (n.rfind(kFreshPrefix, 0) == 0 && n.size() > 3 &&
            std::all_of(n.begin() + 3, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            best = std::stoul(n.substr(3));
    }
    for (const auto& c : f.children) best = std::max(best, max_fresh_index(c));
    return best;
}

/// Removes every inequality from `f`, appending it to `out`. An inequality
/// that is itself an operand is replaced by TOP.
void hoist_inequalities(Formula& f, std::vector<Formula>& out) {
    if (f.kind == K::Inequality) {
        out.push_back(f);
        f = Formula::top();
        return;
    }
    if (f.kind == K::And) {
        std::vector<Formula> kept;
        for (auto& c : f.children) {
            if (c.kind == K::Inequality) {
                out.push_back(c);
                continue;
            }
            hoist_inequalities(c, out);
            kept.push_back(std::move(c));
        }
        if (kept.empty()) kept.push_back(Formula::top());
        f.children = std::move(kept);
        return;
    }
    for (auto& c : f.children) hoist_inequalities(c, out);
}

class Normalizer {
public:
    Normalizer(const Program& p, const NormalizeOptions& opts) : opts_(opts) {
        for (const auto& r : p.rules)
            for (const auto& f : r.body) counter_ = std::max(counter_, max_fresh_index(f));
        for (const auto& r : p.rules)
            if (r.head) counter_ = std::max(counter_, max_fresh_index(Formula::make_atom(*r.head)));
    }

    Program run(const Program& p) {
        for (const auto& r : p.rules) rule(r);
        Program out;
        out.rules = std::move(out_);
        out.normal_form = is_normal_form(out);
        return out;
    }

private:
    const NormalizeOptions& opts_;
    std::size_t counter_ = 0;
    std::vector<Rule> out_;
    int line_ = 0;

    Atom fresh(const std::vector<std::string>& vars) {
        Atom a;
        a.predicate = kFreshPrefix + std::to_string(++counter_);
        for (const auto& v : vars) a.args.push_back(Term::var(v));
        return a;
    }

    std::vector<Range> pieces(const Range& r) const {
        return opts_.split_ranges ? split_range(r) : std::vector<Range>{r};
    }

    void push(std::optional<Atom> head, std::vector<Formula> body) {
        Rule r;
        r.head = std::move(head);
        r.body = std::move(body);
        r.line = line_;
        out_.push_back(std::move(r));
    }

    void rule(const Rule& r) {
        line_ = r.line;
        if (r.head_boxes.empty() || r.is_bottom()) {
            emit(r.head, r.body);
            return;
        }
        // B1 B2 … Bk P ← body becomes F1 ← body, F(i+1) ← ⊤ S/U_ϱi Fi, P ← ⊤ S/U_ϱk Fk.
        std::vector<std::string> vars = r.head->variables();
        Atom current = fresh(vars);
        emit(current, r.body);
        for (std::size_t i = 0; i < r.head_boxes.size(); ++i) {
            const HeadBox& hb = r.head_boxes[i];
            Atom target = i + 1 == r.head_boxes.size() ? *r.head : fresh(vars);
            Formula lit = Formula::binary(hb.future ? K::Since : K::Until, Formula::top(), hb.range,
                                          Formula::make_atom(current));
            emit(target, {lit});
            current = target;
        }
    }

    /// Emits rules equivalent to head ← body.
    void emit(const std::optional<Atom>& head, std::vector<Formula> body) {
        std::vector<Formula> inequalities;
        for (auto& f : body) {
            if (f.kind == K::Inequality) continue;
            hoist_inequalities(f, inequalities);
        }
        std::vector<Formula> literals;
        for (auto& f : body) {
            if (f.kind == K::Inequality) inequalities.push_back(std::move(f));
            else if (f.kind == K::And)
                for (auto& c : f.children) literals.push_back(std::move(c));
            else literals.push_back(std::move(f));
        }
        if (literals.size() == 1 && inequalities.empty() && literals[0].is_temporal()) {
            Formula f = literals[0];
            for (auto& c : f.children) c = lift(c);
            emit_temporal(head, f);
            return;
        }
        std::vector<Formula> out;
        for (auto& f : literals) {
            Formula a = lift(f);
            if (a.kind == K::Top) continue;
            out.push_back(std::move(a));
        }
        if (out.empty()) out.push_back(Formula::top());
        for (auto& q : inequalities) out.push_back(std::move(q));
        push(head, std::move(out));
    }

    /// Emits rules for head ← f where f is temporal with atom-like operands.
    void emit_temporal(const std::optional<Atom>& head, const Formula& f) {
        switch (f.kind) {
            case K::DiamondPlus:
            case K::DiamondMinus:
                emit_temporal(head, Formula::binary(f.kind == K::DiamondMinus ? K::Since : K::Until, Formula::top(),
                                                    *f.range, f.children[0]));
                return;
            case K::Since:
            case K::Until:
                for (const auto& piece : pieces(*f.range)) {
                    if (piece.r2().is_zero()) push(head, {f.children[1]});
                    else push(head, {Formula::binary(f.kind, f.children[0], piece, f.children[1])});
                }
                return;
            case K::BoxPlus:
            case K::BoxMinus: {
                if (f.children[0].kind == K::Top) {
                    push(head, {Formula::top()});
                    return;
                }
                std::vector<Range> ps = pieces(*f.range);
                if (ps.size() == 1) {
                    if (ps[0].r2().is_zero()) push(head, {f.children[0]});
                    else push(head, {Formula::unary(f.kind, ps[0], f.children[0])});
                    return;
                }
                std::vector<Formula> conj;
                std::vector<std::string> vars = f.children[0].atom_variables();
                for (const auto& piece : ps) {
                    if (piece.r2().is_zero()) {
                        conj.push_back(f.children[0]);
                        continue;
                    }
                    Atom a = fresh(vars);
                    push(a, {Formula::unary(f.kind, piece, f.children[0])});
                    conj.push_back(Formula::make_atom(a));
                }
                push(head, std::move(conj));
                return;
            }
            default:
                push(head, {f});
        }
    }

    /// An atom-like formula standing for `f`, defined by fresh rules when needed.
    Formula lift(const Formula& f) {
        switch (f.kind) {
            case K::Atom:
            case K::Top:
                return f;
            case K::And: {
                std::vector<Formula> parts;
                for (const auto& c : f.children)
                    if (c.kind != K::Top) parts.push_back(c);
                if (parts.empty()) return Formula::top();
                if (parts.size() == 1) return lift(parts[0]);
                Atom a = fresh(f.atom_variables());
                emit(a, parts);
                return Formula::make_atom(a);
            }
            default:
                break;
        }
        if ((f.kind == K::DiamondPlus || f.kind == K::DiamondMinus || f.kind == K::BoxPlus ||
             f.kind == K::BoxMinus) &&
            f.children[0].kind == K::Top)
            return Formula::top();
        Atom a = fresh(f.atom_variables());
        emit(a, {f});
        return Formula::make_atom(a);
    }
};

}  // namespace

Program normalize(const Program& p, const NormalizeOptions& opts) {
    Normalizer n(p, opts);
    return n.run(p);
}

}  // namespace dmtl
