#ifndef DMTL_SQLGEN_HPP
#define DMTL_SQLGEN_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dmtl/answers.hpp"
#include "dmtl/ingest.hpp"
#include "dmtl/syntax.hpp"

namespace dmtl {

enum class CoalesceVariant { Counting, Window };

CoalesceVariant parse_coalesce_variant(std::string_view text);

/// An extensional predicate defined by a source query whose projection
/// has the argument columns `attrs` and the two interval columns. A row
/// (ledge, redge) reads as [ledge, redge) under carry-forward and as
/// (ledge, redge] under carry-back.
struct Mapping {
    std::string predicate;
    std::string sql;
    std::vector<std::string> attrs;
    std::string ledge = "ledge";
    std::string redge = "redge";
    Convention convention = Convention::CarryBack;
};

/// Mapping file: a JSON array of objects with fields predicate, sql,
/// attrs, ledge, redge and convention ("carry-forward" or "carry-back").
std::vector<Mapping> parse_mappings(std::string_view json_text);
std::vector<Mapping> load_mappings(const std::filesystem::path& path);

struct SqlView {
    std::string name;
    std::vector<std::string> columns;  // argument columns, then ledge, redge
    std::string sql;                   // the defining SELECT
};

struct SqlPlan {
    std::vector<SqlView> views;  // dependency order
    std::string final_query;
    std::vector<std::string> answer_columns;
    Convention convention = Convention::CarryBack;

    /// BEGIN; one CREATE TEMP TABLE per view; the final SELECT; COMMIT;
    std::string to_sql() const;
    /// {"views": [...], "final_query": ..., "answer_columns": [...], "convention": ...}
    std::string sidecar_json() const;
};

struct RewriteOptions {
    CoalesceVariant variant = CoalesceVariant::Counting;
    /// Coalesce mapped views too; off when sources are known coalesced.
    bool coalesce_mapped = true;
};

/// SQL plan answering `q` over the mapped sources. The program is
/// normalized with closed ranges kept; interval arithmetic follows the
/// half-open row model, so bracket information is not tracked.
/// Throws ContractError on a recursive program, ValidationError on an
/// unmapped extensional predicate or an arity clash, and SqlGenError on
/// shapes the row model cannot express (box ranges with infinite end,
/// mixed conventions).
SqlPlan rewrite(const Program& p, const std::vector<Mapping>& m, const Query& q, const RewriteOptions& opts = {});

/// SELECT computing maximal intervals of `view` per tuple of `attrs`.
std::string coalesce_sql(const std::string& view, const std::vector<std::string>& attrs, CoalesceVariant variant);

/// Structural check of emitted SQL: balanced parentheses and quotes and
/// statements of the emitted kinds. Returns problems found.
std::vector<std::string> check_sql_text(std::string_view sql);

/// Loads CSV files into tables of a SQLite database (created when
/// missing). Every column is stored as text except `time_columns`,
/// converted to seconds, and columns whose values all parse as numbers.
void load_csv_into_sqlite(const std::filesystem::path& db, const std::string& table,
                          const std::filesystem::path& csv, const std::vector<std::string>& time_columns);

/// Runs the plan in one transaction and reads the final rows back as
/// answers under the plan's convention, sorted like `answers`.
std::vector<Answer> execute_sqlite(const SqlPlan& plan, const std::filesystem::path& db);

}  // namespace dmtl

#endif  // DMTL_SQLGEN_HPP
