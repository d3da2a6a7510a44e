#include "dmtl/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "dmtl/errors.hpp"
#include "dmtl/parser.hpp"

namespace dmtl {

namespace {

std::string pow2(std::size_t e) { return (Integer(1) << static_cast<unsigned>(e)).str(); }

Fact prop_fact(const std::string& pred, Interval iv) { return Fact{Atom{pred, {}}, std::move(iv)}; }

Interval closed_open(std::size_t lo_exp, std::size_t hi_exp, bool lo_zero) {
    TimePoint lo = lo_zero ? TimePoint(0) : TimePoint::dyadic(Integer(1) << static_cast<unsigned>(lo_exp), 0);
    return Interval(lo, true, TimePoint::dyadic(Integer(1) << static_cast<unsigned>(hi_exp), 0), false);
}

bool eval_from(const Qbf& q, std::size_t level, std::vector<bool>& assignment) {
    if (level == 0) {
        for (const auto& clause : q.clauses) {
            bool sat = false;
            for (int lit : clause) {
                bool v = assignment[static_cast<std::size_t>(std::abs(lit) - 1)];
                if (lit > 0 ? v : !v) sat = true;
            }
            if (!sat) return false;
        }
        return true;
    }
    std::size_t var = level - 1;
    bool forall = q.prefix[var] == Quantifier::Forall;
    for (bool v : {true, false}) {
        assignment[var] = v;
        bool r = eval_from(q, level - 1, assignment);
        if (forall && !r) return false;
        if (!forall && r) return true;
    }
    return forall;
}

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::Input: return "input";
        case GateKind::And: return "and";
        case GateKind::Or: return "or";
    }
    return "?";
}

}  // namespace

void validate(const Qbf& q) {
    if (q.prefix.empty()) throw ValidationError("QBF without variables");
    const int n = static_cast<int>(q.prefix.size());
    for (const auto& clause : q.clauses) {
        if (clause.empty()) throw ValidationError("empty clause");
        for (int lit : clause)
            if (lit == 0 || std::abs(lit) > n) throw ValidationError("literal " + std::to_string(lit) + " out of range");
    }
}

Qbf parse_qdimacs(std::istream& in) {
    std::string line;
    int declared = -1;
    std::size_t declared_clauses = 0;
    std::vector<std::pair<Quantifier, std::vector<int>>> blocks;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    int lineno = 0;
    auto fail = [&](const std::string& msg) { throw ParseError(msg, lineno, 1); };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head == "c") continue;
        if (head == "p") {
            std::string fmt;
            if (!(ls >> fmt >> declared >> declared_clauses) || fmt != "cnf" || declared < 1)
                fail("expected `p cnf <variables> <clauses>`");
            continue;
        }
        if (declared < 0) fail("missing problem line");
        if (head == "a" || head == "e") {
            if (!clauses.empty() || !current.empty()) fail("quantifier line after clauses");
            std::vector<int> vars;
            int v = 0;
            while (ls >> v && v != 0) {
                if (v < 1 || v > declared) fail("variable out of range");
                vars.push_back(v);
            }
            if (v != 0) fail("quantifier line not terminated by 0");
            blocks.emplace_back(head == "a" ? Quantifier::Forall : Quantifier::Exists, std::move(vars));
            continue;
        }
        std::istringstream cs(line);
        long lit = 0;
        while (cs >> lit) {
            if (lit == 0) {
                if (current.empty()) fail("empty clause");
                clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (std::labs(lit) > declared) fail("literal out of range");
                current.push_back(static_cast<int>(lit));
            }
        }
        if (!cs.eof()) fail("malformed clause line");
    }
    if (declared < 0) throw ParseError("missing problem line", lineno, 1);
    if (!current.empty()) throw ParseError("clause not terminated by 0", lineno, 1);
    if (clauses.size() != declared_clauses)
        throw ParseError("expected " + std::to_string(declared_clauses) + " clauses, found " +
                             std::to_string(clauses.size()),
                         lineno, 1);

    // Outermost first: free variables, then the blocks in order.
    std::vector<int> order;
    std::vector<Quantifier> kinds;
    std::vector<bool> bound(static_cast<std::size_t>(declared) + 1, false);
    for (const auto& [k, vars] : blocks)
        for (int v : vars) {
            if (bound[static_cast<std::size_t>(v)]) throw ParseError("variable " + std::to_string(v) + " quantified twice", lineno, 1);
            bound[static_cast<std::size_t>(v)] = true;
        }
    for (int v = 1; v <= declared; ++v)
        if (!bound[static_cast<std::size_t>(v)]) {
            order.push_back(v);
            kinds.push_back(Quantifier::Exists);
        }
    for (const auto& [k, vars] : blocks)
        for (int v : vars) {
            order.push_back(v);
            kinds.push_back(k);
        }
    const int n = declared;
    std::vector<int> index(static_cast<std::size_t>(n) + 1);
    Qbf q;
    q.prefix.resize(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) {
        int p = n - 1 - pos;  // innermost gets p_0
        index[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = p;
        q.prefix[static_cast<std::size_t>(p)] = kinds[static_cast<std::size_t>(pos)];
    }
    for (auto& clause : clauses) {
        std::vector<int> renamed;
        for (int lit : clause) {
            int p = index[static_cast<std::size_t>(std::abs(lit))] + 1;
            renamed.push_back(lit > 0 ? p : -p);
        }
        q.clauses.push_back(std::move(renamed));
    }
    validate(q);
    return q;
}

std::string to_qdimacs(const Qbf& q) {
    std::ostringstream out;
    out << "p cnf " << q.variables() << ' ' << q.clauses.size() << '\n';
    for (std::size_t i = q.variables(); i-- > 0;) {
        std::size_t j = i;
        while (j > 0 && q.prefix[j - 1] == q.prefix[i]) --j;
        out << (q.prefix[i] == Quantifier::Forall ? 'a' : 'e');
        for (std::size_t v = i + 1; v-- > j;) out << ' ' << v + 1;
        out << " 0\n";
        i = j;
    }
    for (const auto& clause : q.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

bool qbf_eval(const Qbf& q) {
    validate(q);
    if (q.variables() > 20) throw ContractError("qbf_eval: more than 20 variables");
    std::vector<bool> assignment(q.variables(), false);
    return eval_from(q, q.variables(), assignment);
}

Reduction qbf_to_program(const Qbf& q) {
    validate(q);
    const std::size_t n = q.variables() - 1;
    std::ostringstream rules;
    auto both = [&](const std::string& text) {
        // Writes a rule for P and its NP twin.
        rules << text << '\n';
        std::string neg;
        for (std::size_t i = 0; i < text.size(); ++i) {
            bool word_start = text[i] == 'P' && (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1])));
            neg += word_start ? "NP" : std::string(1, text[i]);
        }
        rules << neg << '\n';
    };
    for (std::size_t i = 0; i <= n; ++i) {
        const std::string p = "P" + std::to_string(i);
        both(p + " :- " + p + "_" + std::to_string(n) + ".");
        for (std::size_t j = i; j < n; ++j) {
            std::string from = p + "_" + std::to_string(j), to = p + "_" + std::to_string(j + 1);
            both(to + " :- " + from + ".");
            both("ALWAYS+[" + pow2(j + 1) + "," + pow2(j + 1) + "] " + to + " :- " + from + ".");
        }
    }
    for (std::size_t k = 0; k < q.clauses.size(); ++k)
        for (int lit : q.clauses[k])
            rules << 'C' << k << " :- " << (lit > 0 ? "P" : "NP") << std::abs(lit) - 1 << ".\n";
    rules << "F0 :- ";
    if (q.clauses.empty()) rules << "TOP";
    for (std::size_t k = 0; k < q.clauses.size(); ++k) rules << (k ? ", C" : "C") << k;
    rules << ".\n";
    for (std::size_t i = 0; i <= n; ++i) {
        std::string fi = "F" + std::to_string(i), fn = "F" + std::to_string(i + 1), pi = std::to_string(i);
        if (q.prefix[i] == Quantifier::Exists) {
            rules << "ALWAYS+[0," << pow2(i) << "] " << fn << " :- " << fi << ", P" << pi << ".\n";
            rules << "ALWAYS-[0," << pow2(i) << "] " << fn << " :- " << fi << ", NP" << pi << ".\n";
        } else {
            rules << "ALWAYS+[0," << pow2(i + 1) << ") " << fn << " :- ALWAYS+[0," << pow2(i) << ") P" << pi
                  << ", ALWAYS+[0," << pow2(i + 1) << ") " << fi << ".\n";
        }
    }
    rules << "BOT :- ALWAYS+[0," << pow2(n + 1) << ") F" << n + 1 << ".\n";

    Reduction r;
    r.program = parse_program(rules.str());
    for (std::size_t i = 0; i <= n; ++i) {
        std::string suffix = std::to_string(i) + "_" + std::to_string(i);
        r.data.facts.push_back(prop_fact("P" + suffix, closed_open(0, i, true)));
        r.data.facts.push_back(prop_fact("NP" + suffix, closed_open(i, i + 1, false)));
    }
    return r;
}

Qbf random_qbf(std::mt19937_64& rng, std::size_t n, std::size_t clauses) {
    Qbf q;
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> var(1, static_cast<int>(n) + 1);
    std::uniform_int_distribution<int> width(1, 3);
    for (std::size_t i = 0; i <= n; ++i) q.prefix.push_back(coin(rng) ? Quantifier::Forall : Quantifier::Exists);
    for (std::size_t k = 0; k < clauses; ++k) {
        std::vector<int> clause;
        for (int w = width(rng); w > 0; --w) clause.push_back(coin(rng) ? var(rng) : -var(rng));
        q.clauses.push_back(std::move(clause));
    }
    return q;
}

void validate(const MonotoneCircuit& c) {
    if (c.gates.empty()) throw ValidationError("circuit without gates");
    int expected = c.gates.begin()->first;
    if (expected < 0) throw ValidationError("negative gate id");
    for (const auto& [id, g] : c.gates) {
        if (id != expected) throw ValidationError("gate ids are not consecutive at " + std::to_string(id));
        ++expected;
        if (g.kind == GateKind::Input) continue;
        for (int in : {g.in0, g.in1})
            if (!c.gates.count(in) || in >= id)
                throw ValidationError("gate " + std::to_string(id) + " has an invalid input " + std::to_string(in));
    }
}

MonotoneCircuit parse_circuit(std::istream& in) {
    MonotoneCircuit c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = line.substr(0, line.find('#'));
        std::istringstream ls(line);
        int id = 0;
        std::string kind;
        if (!(ls >> id)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError("expected a gate id", lineno, 1);
        }
        if (!(ls >> kind)) throw ParseError("expected a gate kind", lineno, 1);
        Gate g;
        if (kind == "input") {
            std::string v;
            if (!(ls >> v) || (v != "T" && v != "F")) throw ParseError("input gate needs T or F", lineno, 1);
            g.value = v == "T";
        } else if (kind == "and" || kind == "or") {
            g.kind = kind == "and" ? GateKind::And : GateKind::Or;
            if (!(ls >> g.in0 >> g.in1)) throw ParseError("gate needs two inputs", lineno, 1);
        } else {
            throw ParseError("unknown gate kind `" + kind + "`", lineno, 1);
        }
        std::string extra;
        if (ls >> extra) throw ParseError("trailing text `" + extra + "`", lineno, 1);
        if (!c.gates.emplace(id, g).second) throw ParseError("duplicate gate " + std::to_string(id), lineno, 1);
    }
    validate(c);
    return c;
}

std::string to_text(const MonotoneCircuit& c) {
    std::ostringstream out;
    for (const auto& [id, g] : c.gates) {
        out << id << ' ' << kind_name(g.kind);
        if (g.kind == GateKind::Input)
            out << ' ' << (g.value ? 'T' : 'F');
        else
            out << ' ' << g.in0 << ' ' << g.in1;
        out << '\n';
    }
    return out.str();
}

bool circuit_eval(const MonotoneCircuit& c) {
    validate(c);
    std::map<int, bool> value;
    for (const auto& [id, g] : c.gates) {
        switch (g.kind) {
            case GateKind::Input: value[id] = g.value; break;
            case GateKind::And: value[id] = value.at(g.in0) && value.at(g.in1); break;
            case GateKind::Or: value[id] = value.at(g.in0) || value.at(g.in1); break;
        }
    }
    return value.at(c.output());
}

std::int64_t circuit_scale(const MonotoneCircuit& c) {
    std::int64_t n = 1;
    while (n <= c.output()) n *= 2;
    return n;
}

namespace {

/// 2·config + gate/N.
TimePoint slot(const MonotoneCircuit& c, int config, int gate) {
    const std::int64_t big_n = circuit_scale(c);
    unsigned k = 0;
    while ((std::int64_t{1} << k) < big_n) ++k;
    return TimePoint::dyadic(Integer(2 * config) * big_n + gate, k);
}

}  // namespace

TimePoint gate_time(const MonotoneCircuit& c, int gate) { return slot(c, gate, gate); }

CircuitReduction circuit_to_program(const MonotoneCircuit& c, bool consistency_variant) {
    validate(c);
    std::string rules =
        "T :- SOMETIME-[2,2] T.\n"
        "F :- SOMETIME-[2,2] F.\n"
        "T :- SOMETIME-[0,1] (I0, T), D.\n"
        "T :- SOMETIME-[0,1] (I1, T), D.\n"
        "F :- SOMETIME-[0,1] (I0, F), SOMETIME-[0,1] (I1, F), D.\n"
        "F :- SOMETIME-[0,1] (I0, F), C.\n"
        "F :- SOMETIME-[0,1] (I1, F), C.\n"
        "T :- SOMETIME-[0,1] (I0, T), SOMETIME-[0,1] (I1, T), C.\n";
    if (consistency_variant) rules += "BOT :- P, T.\n";

    Interval goal = Interval::point(gate_time(c, c.output()));
    CircuitReduction r{parse_program(rules), {}, prop_fact("T", goal)};
    auto at = [&](int config, int gate) { return Interval::point(slot(c, config, gate)); };
    for (const auto& [id, g] : c.gates) {
        switch (g.kind) {
            case GateKind::Input: r.data.facts.push_back(prop_fact(g.value ? "T" : "F", at(id, id))); break;
            case GateKind::Or: r.data.facts.push_back(prop_fact("D", at(id, id))); break;
            case GateKind::And: r.data.facts.push_back(prop_fact("C", at(id, id))); break;
        }
        if (g.kind != GateKind::Input) {
            r.data.facts.push_back(prop_fact("I0", at(id, g.in0)));
            r.data.facts.push_back(prop_fact("I1", at(id, g.in1)));
        }
    }
    if (consistency_variant) r.data.facts.push_back(prop_fact("P", goal));
    return r;
}

std::size_t circuit_round_cap(const MonotoneCircuit& c) { return static_cast<std::size_t>(8 * circuit_scale(c)); }

MonotoneCircuit random_circuit(std::mt19937_64& rng, std::size_t inputs, std::size_t gates) {
    if (inputs < 1) throw ContractError("random_circuit: at least one input gate");
    MonotoneCircuit c;
    std::uniform_int_distribution<int> coin(0, 1);
    int id = 0;
    for (std::size_t i = 0; i < inputs; ++i, ++id) c.gates[id] = Gate{GateKind::Input, coin(rng) == 1, 0, 0};
    for (std::size_t i = 0; i < gates; ++i, ++id) {
        std::uniform_int_distribution<int> pick(0, id - 1);
        Gate g{coin(rng) ? GateKind::And : GateKind::Or, false, pick(rng), pick(rng)};
        c.gates[id] = g;
    }
    return c;
}

}  // namespace dmtl
