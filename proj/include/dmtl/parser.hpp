#ifndef DMTL_PARSER_HPP
#define DMTL_PARSER_HPP

#include <filesystem>
#include <string_view>

#include "dmtl/syntax.hpp"

namespace dmtl {

struct ParseOptions {
    /// Accept `_`-prefixed predicate names (normalizer output). A program
    /// text can also opt in with a `%!reserved` comment line.
    bool allow_reserved_names = false;
};

/// Parses `.dmtl` program text. Throws ParseError (syntax, with line and
/// column) or ValidationError (safety, arity, reserved names).
Program parse_program(std::string_view text, const ParseOptions& opts = {});

/// Parses `.dfacts` text: one `Pred(c1,...,cn)@<interval>.` per fact.
/// Every identifier is a constant here.
DataInstance parse_data(std::string_view text);

/// Parses a query atom such as `HeatAffectedCounty(v)`; lowercase
/// identifiers are variables as in programs.
Query parse_query(std::string_view text);

/// File wrappers; error messages are prefixed with the path.
Program load_program(const std::filesystem::path& path, const ParseOptions& opts = {});
DataInstance load_data(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

/// Re-checks rule safety and arity consistency of a program assembled in
/// code. Throws ValidationError.
void validate_program(const Program& p, const ParseOptions& opts = {});

}  // namespace dmtl

#endif  // DMTL_PARSER_HPP
