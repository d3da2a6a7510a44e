#ifndef DMTL_REDUCTIONS_HPP
#define DMTL_REDUCTIONS_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dmtl/syntax.hpp"

namespace dmtl {

enum class Quantifier { Exists, Forall };

/// Q_n p_n … Q_0 p_0 φ₀ with φ₀ in CNF. `prefix[i]` quantifies p_i, so
/// the outermost variable is the last one. A literal is +(j+1) for p_j
/// and −(j+1) for ¬p_j.
struct Qbf {
    std::vector<Quantifier> prefix;
    std::vector<std::vector<int>> clauses;

    std::size_t variables() const { return prefix.size(); }
};

/// Throws ValidationError for an empty prefix, an empty clause or a
/// literal over an unknown variable.
void validate(const Qbf& q);

/// QDIMACS subset: `p cnf V C`, quantifier lines `a …0` / `e …0`
/// outermost first, then clauses. Variables are renumbered so that the
/// innermost quantified one becomes p_0; free variables are existential
/// and outermost.
Qbf parse_qdimacs(std::istream& in);
std::string to_qdimacs(const Qbf& q);

/// Truth value by expansion of the quantifier tree. Throws ContractError
/// above 20 variables.
bool qbf_eval(const Qbf& q);

struct Reduction {
    Program program;
    DataInstance data;
};

/// Propositional program and data that are consistent iff φ is false.
/// Predicates: P{i}, NP{i} for p_i and ¬p_i, P{i}_{j} and NP{i}_{j} for
/// the copies, C{k} per clause and F{i} per quantifier level.
Reduction qbf_to_program(const Qbf& q);

/// Random QBF over n+1 variables with the given clause count and up to
/// three literals per clause.
Qbf random_qbf(std::mt19937_64& rng, std::size_t n, std::size_t clauses);

enum class GateKind { Input, And, Or };

struct Gate {
    GateKind kind = GateKind::Input;
    bool value = false;  // input gates only
    int in0 = 0;
    int in1 = 0;
};

/// Gates keyed by consecutive ids; inputs of a gate have smaller ids; the
/// gate with the largest id is the output.
struct MonotoneCircuit {
    std::map<int, Gate> gates;

    int output() const { return gates.rbegin()->first; }
};

/// Throws ValidationError on gaps in the ids, negative ids or edges that
/// do not go from lower to higher ids.
void validate(const MonotoneCircuit& c);

/// Lines `id input T|F`, `id and a b`, `id or a b`; `#` starts a comment.
MonotoneCircuit parse_circuit(std::istream& in);
std::string to_text(const MonotoneCircuit& c);

bool circuit_eval(const MonotoneCircuit& c);

/// N = 2^k, the least power of two above the largest gate id.
std::int64_t circuit_scale(const MonotoneCircuit& c);

/// 2n + n/N for gate n.
TimePoint gate_time(const MonotoneCircuit& c, int gate);

struct CircuitReduction {
    Program program;
    DataInstance data;
    Fact goal;  // T@[2n+n/N] for the output gate n
};

/// Program and data with T@goal entailed iff the circuit evaluates to
/// true. With `consistency_variant`, also P@goal and ⊥ ← P ∧ T, so the
/// pair is inconsistent iff the circuit evaluates to true.
CircuitReduction circuit_to_program(const MonotoneCircuit& c, bool consistency_variant = false);

/// Chase round cap for a circuit program: 8·N.
std::size_t circuit_round_cap(const MonotoneCircuit& c);

/// Random circuit with `inputs` input gates followed by `gates` AND/OR
/// gates, ids from 0.
MonotoneCircuit random_circuit(std::mt19937_64& rng, std::size_t inputs, std::size_t gates);

}  // namespace dmtl

#endif  // DMTL_REDUCTIONS_HPP
