#include "dmtl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

enum class Tok {
    Ident,
    Number,
    String,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Turnstile,
    Neq,
    At,
    AlwaysPlus,
    AlwaysMinus,
    SometimePlus,
    SometimeMinus,
    Since,
    Until,
    Top,
    Bot,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run(bool& reserved_pragma) {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments(reserved_pragma);
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_space_and_comments(bool& reserved_pragma) {
        while (pos_ < src_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '%') {
                std::size_t end = src_.find('\n', pos_);
                std::string_view comment = src_.substr(pos_, end == std::string_view::npos ? end : end - pos_);
                if (comment.rfind("%!reserved", 0) == 0) reserved_pragma = true;
                advance(comment.size());
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    bool inf_ahead(std::size_t offset) const {
        return src_.substr(pos_ + offset, 3) == "inf" && !ident_char(peek(offset + 3));
    }

    Token number(int line, int col) {
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') advance();
        if (inf_ahead(0)) {
            advance(3);
            return {Tok::Number, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        auto digits = [&] {
            while (digit(peek())) advance();
        };
        digits();
        if (peek() == '.' && digit(peek(1))) {
            advance();
            digits();
        }
        while (peek() == ':' && digit(peek(1))) {
            advance();
            digits();
            if (peek() == '.' && digit(peek(1))) {
                advance();
                digits();
            }
        }
        char u = peek();
        if ((u == 's' || u == 'm' || u == 'h' || u == 'd') && !ident_char(peek(1))) advance();
        if (ident_char(peek())) fail("malformed number");
        return {Tok::Number, std::string(src_.substr(start, pos_ - start)), line, col};
    }

    Token next() {
        int line = line_, col = col_;
        char c = peek();
        auto single = [&](Tok k) {
            advance();
            return Token{k, std::string(1, c), line, col};
        };
        switch (c) {
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '[': return single(Tok::LBrack);
            case ']': return single(Tok::RBrack);
            case ',': return single(Tok::Comma);
            case '.': return single(Tok::Dot);
            case '@': return single(Tok::At);
            default: break;
        }
        if (c == ':' && peek(1) == '-') {
            advance(2);
            return {Tok::Turnstile, ":-", line, col};
        }
        if (c == '!' && peek(1) == '=') {
            advance(2);
            return {Tok::Neq, "!=", line, col};
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            advance();
            std::string text;
            while (true) {
                if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string");
                char d = peek();
                if (d == '\\' && (peek(1) == quote || peek(1) == '\\')) {
                    text += peek(1);
                    advance(2);
                    continue;
                }
                advance();
                if (d == quote) break;
                text += d;
            }
            return {Tok::String, text, line, col};
        }
        if (digit(c) || ((c == '-' || c == '+') && (digit(peek(1)) || inf_ahead(1)))) return number(line, col);
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (ident_char(peek())) advance();
            std::string word(src_.substr(start, pos_ - start));
            if (word == "ALWAYS" || word == "SOMETIME") {
                char sign = peek();
                if (sign != '+' && sign != '-') fail(word + " must be followed by + or -");
                advance();
                bool always = word == "ALWAYS";
                Tok k = always ? (sign == '+' ? Tok::AlwaysPlus : Tok::AlwaysMinus)
                               : (sign == '+' ? Tok::SometimePlus : Tok::SometimeMinus);
                return {k, word + sign, line, col};
            }
            if (word == "SINCE") return {Tok::Since, word, line, col};
            if (word == "UNTIL") return {Tok::Until, word, line, col};
            if (word == "TOP") return {Tok::Top, word, line, col};
            if (word == "BOT") return {Tok::Bot, word, line, col};
            return {Tok::Ident, word, line, col};
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

enum class Mode { Program, Data };

class Parser {
public:
    Parser(std::vector<Token> toks, Mode mode) : toks_(std::move(toks)), mode_(mode) {}

    bool at_end() const { return cur().kind == Tok::End; }

    Rule rule() {
        Rule r;
        r.line = cur().line;
        bool top_head = false;
        while (cur().kind == Tok::AlwaysPlus || cur().kind == Tok::AlwaysMinus) {
            bool future = cur().kind == Tok::AlwaysPlus;
            next();
            r.head_boxes.push_back({future, range()});
        }
        if (cur().kind == Tok::SometimePlus || cur().kind == Tok::SometimeMinus)
            fail("diamond operator in a rule head is not allowed");
        if (cur().kind == Tok::Bot) {
            next();
        } else if (cur().kind == Tok::Top) {
            next();
            top_head = true;
        } else {
            r.head = atom();
        }
        if (cur().kind == Tok::Since || cur().kind == Tok::Until)
            fail("SINCE/UNTIL in a rule head is not allowed");
        expect(Tok::Turnstile, "':-'");
        r.body = conjunction();
        expect(Tok::Dot, "'.' at end of rule");
        if (top_head) r.body.clear();  // marker: caller drops the rule
        return r;
    }

    Fact fact() {
        Atom a = atom();
        expect(Tok::At, "'@'");
        Interval iv = interval();
        expect(Tok::Dot, "'.' at end of fact");
        return {std::move(a), std::move(iv)};
    }

    Atom query() {
        Atom a = atom();
        if (cur().kind == Tok::Dot) next();
        if (!at_end()) fail("unexpected input after query atom");
        return a;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t ahead) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    void next() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = cur();
        std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + " (near " + near + ")", t.line, t.col);
    }

    void expect(Tok k, const char* what) {
        if (cur().kind != k) fail(std::string("expected ") + what);
        next();
    }

    std::vector<Formula> conjunction() {
        std::vector<Formula> parts;
        parts.push_back(literal());
        while (cur().kind == Tok::Comma) {
            next();
            parts.push_back(literal());
        }
        return parts;
    }

    bool term_token(const Token& t) const {
        return t.kind == Tok::Ident || t.kind == Tok::String || t.kind == Tok::Number;
    }

    Formula literal() {
        if (term_token(cur()) && peek(1).kind == Tok::Neq) {
            Term a = term();
            next();
            Term b = term();
            return Formula::inequality(std::move(a), std::move(b));
        }
        Formula left = unary();
        while (cur().kind == Tok::Since || cur().kind == Tok::Until) {
            auto k = cur().kind == Tok::Since ? Formula::Kind::Since : Formula::Kind::Until;
            next();
            Range r = range();
            Formula right = unary();
            left = Formula::binary(k, std::move(left), std::move(r), std::move(right));
        }
        return left;
    }

    Formula unary() {
        Formula::Kind k;
        switch (cur().kind) {
            case Tok::AlwaysPlus: k = Formula::Kind::BoxPlus; break;
            case Tok::AlwaysMinus: k = Formula::Kind::BoxMinus; break;
            case Tok::SometimePlus: k = Formula::Kind::DiamondPlus; break;
            case Tok::SometimeMinus: k = Formula::Kind::DiamondMinus; break;
            default: return primary();
        }
        next();
        Range r = range();
        return Formula::unary(k, std::move(r), unary());
    }

    Formula primary() {
        switch (cur().kind) {
            case Tok::Top: next(); return Formula::top();
            case Tok::Bot: fail("BOT may only appear as a rule head");
            case Tok::LParen: {
                next();
                std::vector<Formula> parts = conjunction();
                expect(Tok::RParen, "')'");
                if (parts.size() == 1) return std::move(parts[0]);
                return Formula::conjunction(std::move(parts));
            }
            case Tok::Ident: return Formula::make_atom(atom());
            default: fail("expected a body literal");
        }
    }

    Atom atom() {
        if (cur().kind != Tok::Ident) fail("expected a predicate name");
        Atom a;
        a.predicate = cur().text;
        next();
        if (cur().kind == Tok::LParen) {
            next();
            a.args.push_back(term());
            while (cur().kind == Tok::Comma) {
                next();
                a.args.push_back(term());
            }
            expect(Tok::RParen, "')'");
        }
        return a;
    }

    Term term() {
        const Token& t = cur();
        Term out;
        switch (t.kind) {
            case Tok::String:
            case Tok::Number:
                out = Term::constant(t.text);
                break;
            case Tok::Ident:
                if (t.text[0] == '_') fail("identifiers may not start with '_'");
                if (mode_ == Mode::Program && std::islower(static_cast<unsigned char>(t.text[0])))
                    out = Term::var(t.text);
                else
                    out = Term::constant(t.text);
                break;
            default:
                fail("expected a term");
        }
        next();
        return out;
    }

    TimePoint bound() {
        const Token& t = cur();
        if (t.kind != Tok::Number && !(t.kind == Tok::Ident && t.text == "inf")) fail("expected a time value");
        try {
            TimePoint v = TimePoint::parse(t.text);
            next();
            return v;
        } catch (const InvalidValue& e) {
            fail(e.what());
        }
    }

    Interval interval() {
        bool lo_closed;
        if (cur().kind == Tok::LBrack) lo_closed = true;
        else if (cur().kind == Tok::LParen) lo_closed = false;
        else fail("expected '[' or '(' opening an interval");
        const Token start = cur();
        next();
        TimePoint lo = bound();
        expect(Tok::Comma, "','");
        TimePoint hi = bound();
        bool hi_closed;
        if (cur().kind == Tok::RBrack) hi_closed = true;
        else if (cur().kind == Tok::RParen) hi_closed = false;
        else fail("expected ']' or ')' closing an interval");
        next();
        auto iv = Interval::make(lo, lo_closed, hi, hi_closed);
        if (!iv) throw ParseError("empty interval (lo > hi or degenerate brackets)", start.line, start.col);
        return *iv;
    }

    Range range() {
        const Token start = cur();
        Interval iv = interval();
        if (iv.lo().is_negative()) throw ParseError("range endpoints must be nonnegative", start.line, start.col);
        return Range(iv);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Mode mode_;
};

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

void check_zero_range_operands(const Formula& f, bool under_zero_left, int line) {
    if (f.kind == Formula::Kind::Inequality && under_zero_left)
        throw ValidationError(at_line(line) +
                              "inequality inside the left operand of SINCE/UNTIL with a range containing 0");
    if ((f.kind == Formula::Kind::Since || f.kind == Formula::Kind::Until) && f.range->contains_zero()) {
        std::vector<std::string> right = f.children[1].atom_variables();
        for (const auto& v : f.children[0].atom_variables())
            if (std::find(right.begin(), right.end(), v) == right.end())
                throw ValidationError(at_line(line) + "variable " + v +
                                      " in the left operand of SINCE/UNTIL with a range containing 0 must also "
                                      "occur in the right operand");
    }
    for (std::size_t i = 0; i < f.children.size(); ++i) {
        bool zero_left = under_zero_left;
        if ((f.kind == Formula::Kind::Since || f.kind == Formula::Kind::Until) && i == 0 &&
            f.range->contains_zero())
            zero_left = true;
        check_zero_range_operands(f.children[i], zero_left, line);
    }
}

}  // namespace

void validate_program(const Program& p, const ParseOptions& opts) {
    auto check_name = [&](const std::string& name, int line) {
        if (!opts.allow_reserved_names && !name.empty() && name[0] == '_')
            throw ValidationError(at_line(line) + "predicate names starting with '_' are reserved: " + name);
    };
    for (const auto& r : p.rules) {
        if (r.body.empty()) throw ValidationError(at_line(r.line) + "rule body is empty");
        std::vector<std::string> bound;
        for (const auto& f : r.body)
            for (const auto& v : f.atom_variables())
                if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
        auto is_bound = [&](const std::string& v) { return std::find(bound.begin(), bound.end(), v) != bound.end(); };
        if (r.head) {
            check_name(r.head->predicate, r.line);
            for (const auto& v : r.head->variables())
                if (!is_bound(v)) throw ValidationError(at_line(r.line) + "head variable " + v + " not in body");
        }
        for (const auto& f : r.body) {
            for (const auto& v : f.all_variables())
                if (!is_bound(v))
                    throw ValidationError(at_line(r.line) + "variable " + v +
                                          " occurs only in an inequality");
            check_zero_range_operands(f, false, r.line);
        }
        for (const auto& pred : body_predicates(r)) check_name(pred, r.line);
    }
    predicate_arities(p);
}

Program parse_program(std::string_view text, const ParseOptions& opts) {
    bool pragma = false;
    Parser parser(Lexer(text).run(pragma), Mode::Program);
    ParseOptions effective = opts;
    effective.allow_reserved_names = opts.allow_reserved_names || pragma;
    Program p;
    while (!parser.at_end()) {
        Rule r = parser.rule();
        if (r.body.empty()) continue;  // TOP head: vacuous rule
        p.rules.push_back(std::move(r));
    }
    validate_program(p, effective);
    p.normal_form = is_normal_form(p);
    return p;
}

DataInstance parse_data(std::string_view text) {
    bool pragma = false;
    Parser parser(Lexer(text).run(pragma), Mode::Data);
    DataInstance d;
    while (!parser.at_end()) d.facts.push_back(parser.fact());
    predicate_arities(Program{}, &d);
    return d;
}

Query parse_query(std::string_view text) {
    bool pragma = false;
    Parser parser(Lexer(text).run(pragma), Mode::Program);
    return {parser.query()};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Program load_program(const std::filesystem::path& path, const ParseOptions& opts) {
    std::string text = read_file(path);
    try {
        return parse_program(text, opts);
    } catch (const Error& e) {
        throw ValidationError(path.string() + ":" + e.what());
    }
}

DataInstance load_data(const std::filesystem::path& path) {
    std::string text = read_file(path);
    try {
        return parse_data(text);
    } catch (const Error& e) {
        throw ValidationError(path.string() + ":" + e.what());
    }
}

}  // namespace dmtl
