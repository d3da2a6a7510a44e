#ifndef DMTL_SYNTAX_HPP
#define DMTL_SYNTAX_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmtl/interval.hpp"

namespace dmtl {

struct Term {
    enum class Kind : std::uint8_t { Variable, Constant };

    Kind kind = Kind::Constant;
    std::string name;

    static Term var(std::string n) { return {Kind::Variable, std::move(n)}; }
    static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
    bool is_variable() const { return kind == Kind::Variable; }

    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    bool is_ground() const;
    /// Distinct variables in order of first occurrence.
    std::vector<std::string> variables() const;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// A body literal. Which members are meaningful depends on `kind`:
/// Atom uses `atom`; Inequality uses `lhs`/`rhs`; the four unary
/// operators use `range` and one child; Since/Until use `range` and two
/// children (left, right); And uses any number of children.
struct Formula {
    enum class Kind : std::uint8_t {
        Atom,
        Top,
        Inequality,
        BoxPlus,
        BoxMinus,
        DiamondPlus,
        DiamondMinus,
        Since,
        Until,
        And,
    };

    Kind kind = Kind::Top;
    Atom atom;
    Term lhs;
    Term rhs;
    std::optional<Range> range;
    std::vector<Formula> children;

    static Formula make_atom(Atom a);
    static Formula top();
    static Formula inequality(Term a, Term b);
    static Formula unary(Kind k, Range r, Formula sub);
    static Formula binary(Kind k, Formula left, Range r, Formula right);
    static Formula conjunction(std::vector<Formula> parts);

    bool is_atom_like() const { return kind == Kind::Atom || kind == Kind::Top; }
    bool is_temporal() const {
        return kind != Kind::Atom && kind != Kind::Top && kind != Kind::Inequality && kind != Kind::And;
    }
    /// Variables occurring in atoms (not in inequalities), first-occurrence order.
    std::vector<std::string> atom_variables() const;
    std::vector<std::string> all_variables() const;

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// ALWAYS+ (future) or ALWAYS- prefix on a rule head.
struct HeadBox {
    bool future = true;
    Range range;

    friend bool operator==(const HeadBox&, const HeadBox&) = default;
};

struct Rule {
    std::vector<HeadBox> head_boxes;  // outermost first
    std::optional<Atom> head;         // nullopt means ⊥
    std::vector<Formula> body;
    int line = 0;

    bool is_bottom() const { return !head.has_value(); }
    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head_boxes == b.head_boxes && a.head == b.head && a.body == b.body;
    }
};

struct Program {
    std::vector<Rule> rules;
    bool normal_form = false;
};

struct Fact {
    Atom atom;
    Interval interval;
};

struct DataInstance {
    std::vector<Fact> facts;
};

struct Query {
    Atom goal;
};

/// Rule shapes accepted by the evaluators.
enum class RuleShape { Horn, Since, Until, BoxPlus, BoxMinus };

/// The normal-form shape of a rule, or nullopt when it is not in normal form.
/// With `require_normal_ranges` false, closed and half-open ranges are
/// accepted too (the shape the SQL translation works on).
std::optional<RuleShape> normal_shape(const Rule& r, bool require_normal_ranges = true);
bool is_normal_form(const Program& p);

/// Predicate name → arity over the program and (optionally) data.
/// Throws ValidationError on an arity clash.
std::map<std::string, std::size_t> predicate_arities(const Program& p, const DataInstance* d = nullptr);
/// Predicates occurring in some rule head.
std::set<std::string> head_predicates(const Program& p);
/// Predicates of the atoms directly in a rule body, including nested ones.
std::set<std::string> body_predicates(const Rule& r);

/// How constants are rendered: in program text non-uppercase constants
/// must be quoted to stay constants; in data and answers every term is
/// ground so identifiers are left bare.
enum class TermStyle { Program, Data };

std::string to_text(const Term& t, TermStyle style = TermStyle::Program);
std::string to_text(const Atom& a, TermStyle style = TermStyle::Program);
std::string to_text(const Formula& f);
std::string to_text(const Rule& r);
std::string to_text(const Program& p);
std::string to_text(const Fact& f, TimeFormat fmt = TimeFormat::Seconds);
std::string to_text(const DataInstance& d, TimeFormat fmt = TimeFormat::Seconds);

}  // namespace dmtl

#endif  // DMTL_SYNTAX_HPP
