#ifndef DMTL_ANALYSIS_HPP
#define DMTL_ANALYSIS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dmtl/syntax.hpp"

namespace dmtl {

/// P ⋖ Q iff some rule has P in the head and Q in the body. ⊥ heads are
/// recorded under the name "BOT".
using DependenceGraph = std::map<std::string, std::set<std::string>>;

inline constexpr const char* kBottomName = "BOT";

DependenceGraph dependence(const Program& p);
bool is_nonrecursive(const Program& p);

/// depth_Π(P) for every predicate of Π (0 for body-only predicates).
/// Throws ContractError on recursive programs.
std::map<std::string, std::size_t> depths(const Program& p);
std::size_t depth(const Program& p);
std::size_t depth(const Program& p, const std::string& predicate);

/// Head predicates ordered so that every predicate follows those it
/// depends on. Throws ContractError on recursive programs.
std::vector<std::string> topological_order(const Program& p);

/// Predicates Q is reachable to via ⋖, including Q itself.
std::set<std::string> dependence_cone(const Program& p, const std::string& q);

/// Finite numbers occurring in range endpoints of the program.
std::vector<TimePoint> program_numbers(const Program& p);
/// Finite interval endpoints occurring in the data.
std::vector<TimePoint> data_numbers(const DataInstance& d);

struct Bounds {
    TimePoint m_l;
    TimePoint m_r;
    TimePoint d;  // gcd(num(Π, D))
};

/// M_l = min D − K·depth(Π), M_r = max D + K·depth(Π), d = gcd(num(Π,D)).
/// Throws ContractError on recursion, InvalidValue when D has no finite
/// endpoint.
Bounds bounds(const Program& p, const DataInstance& d);

struct EndpointOffsets {
    std::set<TimePoint> le;
    std::set<TimePoint> ri;
};

/// Offsets relating derived endpoints to data endpoints: every finite left
/// (right) endpoint of a P-fact equals a left (right) data endpoint plus an
/// element of le(P) (ri(P)). Requires a nonrecursive normal-form program.
/// Predicates listed in `data_predicates` also get offset 0.
std::map<std::string, EndpointOffsets> le_ri(const Program& p,
                                             const std::set<std::string>& data_predicates = {});

}  // namespace dmtl

#endif  // DMTL_ANALYSIS_HPP
