#include "dmtl/syntax.hpp"

#include <algorithm>
#include <cctype>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

void push_unique(std::vector<std::string>& out, const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void collect_vars(const Formula& f, bool include_inequalities, std::vector<std::string>& out) {
    switch (f.kind) {
        case Formula::Kind::Atom:
            for (const auto& t : f.atom.args)
                if (t.is_variable()) push_unique(out, t.name);
            break;
        case Formula::Kind::Inequality:
            if (!include_inequalities) break;
            if (f.lhs.is_variable()) push_unique(out, f.lhs.name);
            if (f.rhs.is_variable()) push_unique(out, f.rhs.name);
            break;
        default:
            for (const auto& c : f.children) collect_vars(c, include_inequalities, out);
    }
}

void collect_preds(const Formula& f, std::set<std::string>& out) {
    if (f.kind == Formula::Kind::Atom) out.insert(f.atom.predicate);
    for (const auto& c : f.children) collect_preds(c, out);
}

bool is_keyword(const std::string& s) {
    return s == "TOP" || s == "BOT" || s == "SINCE" || s == "UNTIL" || s == "ALWAYS" || s == "SOMETIME" ||
           s == "inf";
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

const char* op_keyword(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::BoxPlus: return "ALWAYS+";
        case Formula::Kind::BoxMinus: return "ALWAYS-";
        case Formula::Kind::DiamondPlus: return "SOMETIME+";
        case Formula::Kind::DiamondMinus: return "SOMETIME-";
        case Formula::Kind::Since: return "SINCE";
        case Formula::Kind::Until: return "UNTIL";
        default: return "";
    }
}

bool is_binary(const Formula& f) {
    return f.kind == Formula::Kind::Since || f.kind == Formula::Kind::Until;
}

std::string operand_text(const Formula& f, bool tight) {
    std::string s = to_text(f);
    return tight && is_binary(f) ? "(" + s + ")" : s;
}

}  // namespace

bool Atom::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::vector<std::string> Atom::variables() const {
    std::vector<std::string> out;
    for (const auto& t : args)
        if (t.is_variable()) push_unique(out, t.name);
    return out;
}

Formula Formula::make_atom(Atom a) {
    Formula f;
    f.kind = Kind::Atom;
    f.atom = std::move(a);
    return f;
}

Formula Formula::top() { return Formula{}; }

Formula Formula::inequality(Term a, Term b) {
    Formula f;
    f.kind = Kind::Inequality;
    f.lhs = std::move(a);
    f.rhs = std::move(b);
    return f;
}

Formula Formula::unary(Kind k, Range r, Formula sub) {
    Formula f;
    f.kind = k;
    f.range = std::move(r);
    f.children.push_back(std::move(sub));
    return f;
}

Formula Formula::binary(Kind k, Formula left, Range r, Formula right) {
    Formula f;
    f.kind = k;
    f.range = std::move(r);
    f.children.push_back(std::move(left));
    f.children.push_back(std::move(right));
    return f;
}

Formula Formula::conjunction(std::vector<Formula> parts) {
    Formula f;
    f.kind = Kind::And;
    f.children = std::move(parts);
    return f;
}

std::vector<std::string> Formula::atom_variables() const {
    std::vector<std::string> out;
    collect_vars(*this, false, out);
    return out;
}

std::vector<std::string> Formula::all_variables() const {
    std::vector<std::string> out;
    collect_vars(*this, true, out);
    return out;
}

std::optional<RuleShape> normal_shape(const Rule& r, bool require_normal_ranges) {
    if (!r.head_boxes.empty() || r.body.empty()) return std::nullopt;
    if (r.body.size() == 1) {
        const Formula& f = r.body[0];
        switch (f.kind) {
            case Formula::Kind::Since:
            case Formula::Kind::Until:
                if (!f.children[0].is_atom_like() || !f.children[1].is_atom_like()) return std::nullopt;
                if ((require_normal_ranges && !f.range->is_normal()) || f.range->r2().is_zero()) return std::nullopt;
                return f.kind == Formula::Kind::Since ? RuleShape::Since : RuleShape::Until;
            case Formula::Kind::BoxPlus:
            case Formula::Kind::BoxMinus:
                if (!f.children[0].is_atom_like() || (require_normal_ranges && !f.range->is_normal()))
                    return std::nullopt;
                return f.kind == Formula::Kind::BoxPlus ? RuleShape::BoxPlus : RuleShape::BoxMinus;
            default:
                break;
        }
    }
    bool has_positive = false;
    for (const auto& f : r.body) {
        if (f.is_atom_like()) has_positive = true;
        else if (f.kind != Formula::Kind::Inequality) return std::nullopt;
    }
    if (!has_positive) return std::nullopt;
    return RuleShape::Horn;
}

bool is_normal_form(const Program& p) {
    return std::all_of(p.rules.begin(), p.rules.end(), [](const Rule& r) { return normal_shape(r).has_value(); });
}

std::map<std::string, std::size_t> predicate_arities(const Program& p, const DataInstance* d) {
    std::map<std::string, std::size_t> out;
    auto note = [&](const Atom& a) {
        auto [it, inserted] = out.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
            throw ValidationError("predicate " + a.predicate + " used with arities " + std::to_string(it->second) +
                                  " and " + std::to_string(a.arity()));
    };
    std::vector<const Formula*> stack;
    for (const auto& r : p.rules) {
        if (r.head) note(*r.head);
        for (const auto& f : r.body) stack.push_back(&f);
        while (!stack.empty()) {
            const Formula* f = stack.back();
            stack.pop_back();
            if (f->kind == Formula::Kind::Atom) note(f->atom);
            for (const auto& c : f->children) stack.push_back(&c);
        }
    }
    if (d)
        for (const auto& fact : d->facts) note(fact.atom);
    return out;
}

std::set<std::string> head_predicates(const Program& p) {
    std::set<std::string> out;
    for (const auto& r : p.rules)
        if (r.head) out.insert(r.head->predicate);
    return out;
}

std::set<std::string> body_predicates(const Rule& r) {
    std::set<std::string> out;
    for (const auto& f : r.body) collect_preds(f, out);
    return out;
}

std::string to_text(const Term& t, TermStyle style) {
    if (t.is_variable()) return t.name;
    bool bare = is_identifier(t.name) && !is_keyword(t.name) &&
                (style == TermStyle::Data || std::isupper(static_cast<unsigned char>(t.name[0])));
    if (!bare && style == TermStyle::Data && !t.name.empty() &&
        std::all_of(t.name.begin(), t.name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        bare = true;
    return bare ? t.name : quoted(t.name);
}

std::string to_text(const Atom& a, TermStyle style) {
    std::string out = a.predicate;
    if (a.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        out += to_text(a.args[i], style);
    }
    return out + ')';
}

std::string to_text(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Atom: return to_text(f.atom);
        case Formula::Kind::Top: return "TOP";
        case Formula::Kind::Inequality: return to_text(f.lhs) + " != " + to_text(f.rhs);
        case Formula::Kind::BoxPlus:
        case Formula::Kind::BoxMinus:
        case Formula::Kind::DiamondPlus:
        case Formula::Kind::DiamondMinus:
            return std::string(op_keyword(f.kind)) + f.range->to_string() + " " + operand_text(f.children[0], true);
        case Formula::Kind::Since:
        case Formula::Kind::Until:
            return operand_text(f.children[0], false) + " " + op_keyword(f.kind) + f.range->to_string() + " " +
                   operand_text(f.children[1], true);
        case Formula::Kind::And: {
            std::string out = "(";
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) out += ", ";
                out += to_text(f.children[i]);
            }
            return out + ")";
        }
    }
    return {};
}

std::string to_text(const Rule& r) {
    std::string out;
    for (const auto& hb : r.head_boxes)
        out += std::string(hb.future ? "ALWAYS+" : "ALWAYS-") + hb.range.to_string() + " ";
    out += r.head ? to_text(*r.head) : "BOT";
    out += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += ", ";
        out += to_text(r.body[i]);
    }
    return out + ".";
}

std::string to_text(const Program& p) {
    std::string out;
    for (const auto& r : p.rules) out += to_text(r) + "\n";
    return out;
}

std::string to_text(const Fact& f, TimeFormat fmt) {
    return to_text(f.atom, TermStyle::Data) + "@" + f.interval.to_string(fmt) + ".";
}

std::string to_text(const DataInstance& d, TimeFormat fmt) {
    std::string out;
    for (const auto& f : d.facts) out += to_text(f, fmt) + "\n";
    return out;
}

}  // namespace dmtl
