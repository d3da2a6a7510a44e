#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "dmtl/analysis.hpp"
#include "dmtl/answers.hpp"
#include "dmtl/chase.hpp"
#include "dmtl/engine.hpp"
#include "dmtl/errors.hpp"
#include "dmtl/invariants.hpp"
#include "dmtl/normalize.hpp"
#include "dmtl/parser.hpp"
#include "dmtl/reductions.hpp"

using namespace dmtl;

namespace {

std::set<std::string> rule_texts(const Program& p) {
    std::set<std::string> out;
    for (const auto& r : p.rules) out.insert(to_text(r));
    return out;
}

bool qbf_consistent(const Qbf& q) {
    Reduction r = qbf_to_program(q);
    return eval_nonrecursive(normalize(r.program), r.data).consistent();
}

MonotoneCircuit circuit(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit(in);
}

MonotoneCircuit figure_circuit() {
    return circuit("0 input T\n1 input F\n2 input T\n3 or 0 1\n4 and 1 2\n5 and 3 4\n");
}

bool entailed(const CircuitReduction& r, const MonotoneCircuit& c, const std::string& pred = "T") {
    auto [m, status] = chase(normalize(r.program), r.data, circuit_round_cap(c));
    return certain_answer(m, Query{Atom{pred, {}}}, {}, r.goal.interval);
}

/// Predicates lying on a dependence cycle.
std::set<std::string> recursive_predicates(const Program& p) {
    DependenceGraph g = dependence(p);
    std::set<std::string> out;
    for (const auto& [start, _] : g) {
        std::set<std::string> seen;
        std::vector<std::string> stack(g.at(start).begin(), g.at(start).end());
        while (!stack.empty()) {
            std::string x = stack.back();
            stack.pop_back();
            if (x == start) out.insert(start);
            if (!seen.insert(x).second || !g.count(x)) continue;
            stack.insert(stack.end(), g.at(x).begin(), g.at(x).end());
        }
    }
    return out;
}

}  // namespace

TEST(Qbf, ExistsProgramIsTheConstruction) {
    Qbf q{{Quantifier::Exists}, {{1}}};
    Reduction r = qbf_to_program(q);
    std::set<std::string> expected = rule_texts(parse_program(
        "P0 :- P0_0.\nNP0 :- NP0_0.\nC0 :- P0.\nF0 :- C0.\n"
        "ALWAYS+[0,1] F1 :- F0, P0.\nALWAYS-[0,1] F1 :- F0, NP0.\nBOT :- ALWAYS+[0,2) F1.\n"));
    EXPECT_EQ(rule_texts(r.program), expected);
    EXPECT_EQ(to_text(r.data), to_text(parse_data("P0_0@[0,1).\nNP0_0@[1,2).\n")));
    EXPECT_TRUE(is_nonrecursive(r.program));
}

TEST(Qbf, ExistsIsInconsistentForallIsConsistent) {
    EXPECT_FALSE(qbf_consistent(Qbf{{Quantifier::Exists}, {{1}}}));
    EXPECT_TRUE(qbf_consistent(Qbf{{Quantifier::Forall}, {{1}}}));
}

TEST(Qbf, CopyRulesTileTheTimeline) {
    Qbf q{{Quantifier::Exists, Quantifier::Exists, Quantifier::Exists}, {{1}}};
    Reduction r = qbf_to_program(q);
    CanonicalModel m = eval_nonrecursive(normalize(r.program), r.data);
    auto rows = [&](const std::string& p) {
        std::string out;
        for (const auto& row : m.table(p)->rows) out += row.interval.to_string() + " ";
        return out;
    };
    EXPECT_EQ(rows("P0"), "[0,1) [2,3) [4,5) [6,7) ");
    EXPECT_EQ(rows("NP1"), "[2,4) [6,8) ");
    EXPECT_EQ(rows("P2"), "[0,4) ");
}

TEST(Qbf, EvalExamples) {
    EXPECT_TRUE(qbf_eval(Qbf{{Quantifier::Exists}, {{1}}}));
    EXPECT_FALSE(qbf_eval(Qbf{{Quantifier::Forall}, {{1}}}));
    // ∀p ∃q (p ∨ q) ∧ (¬p ∨ q) with q = p_0, p = p_1.
    EXPECT_TRUE(qbf_eval(Qbf{{Quantifier::Exists, Quantifier::Forall}, {{2, 1}, {-2, 1}}}));
    // ∃q ∀p (p ∨ q) ∧ (¬p ∨ ¬q).
    EXPECT_FALSE(qbf_eval(Qbf{{Quantifier::Forall, Quantifier::Exists}, {{1, 2}, {-1, -2}}}));
}

TEST(Qbf, QdimacsRoundTrip) {
    std::istringstream in("c sample\np cnf 3 2\na 3 0\ne 1 2 0\n1 -3 0\n2 3 0\n");
    Qbf q = parse_qdimacs(in);
    ASSERT_EQ(q.variables(), 3u);
    // 3 is outermost (p_2); 1 and 2 become p_1 and p_0.
    EXPECT_EQ(q.prefix[2], Quantifier::Forall);
    EXPECT_EQ(q.prefix[0], Quantifier::Exists);
    EXPECT_EQ(q.clauses, (std::vector<std::vector<int>>{{2, -3}, {1, 3}}));
    std::istringstream again(to_qdimacs(q));
    Qbf r = parse_qdimacs(again);
    EXPECT_EQ(r.prefix, q.prefix);
    EXPECT_EQ(r.clauses, q.clauses);
    EXPECT_EQ(qbf_eval(q), qbf_eval(r));
}

TEST(Qbf, QdimacsErrors) {
    for (const char* text : {"1 2 0\n", "p cnf 2 1\n1 3 0\n", "p cnf 2 1\n1 2\n", "p cnf 2 2\n1 0\n",
                             "p cnf 2 1\n1 0\ne 1 0\n", "p cnf 2 1\ne 1 0\na 1 0\n1 0\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(parse_qdimacs(in), ParseError) << text;
    }
    EXPECT_THROW(validate(Qbf{{Quantifier::Exists}, {{}}}), ValidationError);
    EXPECT_THROW(qbf_eval(Qbf{std::vector<Quantifier>(21, Quantifier::Exists), {{1}}}), ContractError);
}

TEST(Qbf, RandomFormulasMatchOracle) {
    std::mt19937_64 rng(2024);
    int satisfiable = 0;
    for (int round = 0; round < 100; ++round) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
        std::size_t k = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        Qbf q = random_qbf(rng, n, k);
        Reduction r = qbf_to_program(q);
        ASSERT_TRUE(is_nonrecursive(r.program));
        Program np = normalize(r.program);
        CanonicalModel m = eval_nonrecursive(np, r.data);
        bool truth = qbf_eval(q);
        satisfiable += truth;
        EXPECT_EQ(m.consistent(), !truth) << "round " << round << "\n" << to_qdimacs(q);
        auto grid = check_grid_bounds(m, np, r.data);
        EXPECT_TRUE(grid.empty()) << grid.front();
        auto prov = check_le_ri(m, np, r.data);
        EXPECT_TRUE(prov.empty()) << prov.front();
    }
    EXPECT_GT(satisfiable, 10);
    EXPECT_LT(satisfiable, 90);
}

TEST(Circuit, EvalExamples) {
    EXPECT_TRUE(circuit_eval(circuit("0 input T\n1 input F\n2 or 0 1\n")));
    EXPECT_FALSE(circuit_eval(circuit("0 input T\n1 input F\n2 and 0 1\n")));
    EXPECT_FALSE(circuit_eval(figure_circuit()));
}

TEST(Circuit, FigureCircuit) {
    MonotoneCircuit c = figure_circuit();
    EXPECT_EQ(circuit_scale(c), 8);
    CircuitReduction r = circuit_to_program(c);
    EXPECT_EQ(r.goal.interval.to_string(), "[10.625,10.625]");
    EXPECT_FALSE(entailed(r, c));
    EXPECT_TRUE(entailed(r, c, "F"));
    // Gate 3 = OR(T, F) is true at its own slot.
    auto [m, status] = chase(normalize(r.program), r.data, circuit_round_cap(c));
    EXPECT_TRUE(certain_answer(m, Query{Atom{"T", {}}}, {}, Interval::point(gate_time(c, 3))));
    EXPECT_FALSE(certain_answer(m, Query{Atom{"T", {}}}, {}, Interval::point(gate_time(c, 4))));
}

TEST(Circuit, DataFollowsTheConstruction) {
    MonotoneCircuit c = circuit("0 input T\n1 input F\n2 and 0 1\n");
    CircuitReduction r = circuit_to_program(c);
    EXPECT_EQ(circuit_scale(c), 4);
    EXPECT_EQ(to_text(r.data), to_text(parse_data("T@[0,0].\nF@[2.25,2.25].\nC@[4.5,4.5].\n"
                                                  "I0@[4,4].\nI1@[4.25,4.25].\n")));
}

TEST(Circuit, SingleInputGate) {
    MonotoneCircuit c = circuit("1 input T\n");
    EXPECT_EQ(circuit_scale(c), 2);
    CircuitReduction r = circuit_to_program(c);
    EXPECT_EQ(r.goal.interval.to_string(), "[2.5,2.5]");
    EXPECT_TRUE(entailed(r, c));
}

TEST(Circuit, AndOfTrueAndFalse) {
    MonotoneCircuit c = circuit("0 input T\n1 input F\n2 and 0 1\n");
    CircuitReduction r = circuit_to_program(c);
    EXPECT_TRUE(entailed(r, c, "F"));
    EXPECT_FALSE(entailed(r, c, "T"));
}

TEST(Circuit, RecursionOnlyThroughTruthValues) {
    CircuitReduction r = circuit_to_program(figure_circuit(), true);
    EXPECT_EQ(recursive_predicates(r.program), (std::set<std::string>{"F", "T"}));
    Program copies_removed;
    for (const auto& rule : r.program.rules)
        if (!(rule.body.size() == 1 && rule.body[0].kind == Formula::Kind::DiamondMinus)) copies_removed.rules.push_back(rule);
    EXPECT_EQ(copies_removed.rules.size(), r.program.rules.size() - 2);
    // Without the copy rules the remaining recursion is bounded.
    auto [m, status] = chase(normalize(copies_removed), r.data, 1000);
    EXPECT_EQ(status.kind, EvalStatus::Kind::Fixpoint);
}

TEST(Circuit, ParseErrors) {
    for (const char* text : {"0 input X\n", "0 input T\n1 and 0\n", "0 input T\n1 xor 0 0\n", "0 input T\n0 input F\n",
                             "0 input T\n2 or 0 0\n", "0 input T\n1 or 0 1\n", "0 input T extra\n"}) {
        std::istringstream in(text);
        EXPECT_ANY_THROW(parse_circuit(in)) << text;
    }
    MonotoneCircuit c = figure_circuit();
    std::istringstream again(to_text(c));
    EXPECT_EQ(to_text(parse_circuit(again)), to_text(c));
}

TEST(Circuit, RandomCircuitsMatchOracle) {
    std::mt19937_64 rng(99);
    int trues = 0;
    for (int round = 0; round < 100; ++round) {
        std::size_t inputs = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        std::size_t gates = std::uniform_int_distribution<std::size_t>(0, 16 - inputs)(rng);
        MonotoneCircuit c = random_circuit(rng, inputs, gates);
        bool value = circuit_eval(c);
        trues += value;
        CircuitReduction r = circuit_to_program(c);
        EXPECT_EQ(entailed(r, c), value) << "round " << round << "\n" << to_text(c);
        CircuitReduction v = circuit_to_program(c, true);
        auto [m, status] = chase(normalize(v.program), v.data, circuit_round_cap(c));
        EXPECT_EQ(status.kind == EvalStatus::Kind::Inconsistent, value) << "round " << round << "\n" << to_text(c);
    }
    EXPECT_GT(trues, 10);
    EXPECT_LT(trues, 90);
}
