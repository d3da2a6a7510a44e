#ifndef DMTL_INGEST_HPP
#define DMTL_INGEST_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dmtl/syntax.hpp"
#include "dmtl/table.hpp"

namespace dmtl {

/// How consecutive readings t_i, t_{i+1} become an interval.
enum class Convention {
    CarryForward,  // [t_i, t_{i+1}), governed by the value at t_i
    CarryBack,     // (t_i, t_{i+1}], governed by the value at t_{i+1}
};

Convention parse_convention(std::string_view text);
std::string to_string(Convention c);

/// RFC 4180 CSV with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines;  // source line of each row

    /// Index of a header column; throws IngestError when missing.
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable load_csv(const std::filesystem::path& path);

/// `YYYY-MM-DD HH:MM:SS[.frac]` (or with `T`) as seconds since the Unix
/// epoch, otherwise any time literal accepted by TimePoint::parse.
TimePoint parse_timestamp(std::string_view text);

enum class Comparator { Less, LessEq, Greater, GreaterEq };

Comparator parse_comparator(std::string_view text);

/// True iff `value cmp threshold` on exact decimals. Throws InvalidValue
/// when either side is not a decimal number.
bool compare_decimal(std::string_view value, Comparator cmp, std::string_view threshold);

struct Condition {
    std::string column;
    Comparator cmp = Comparator::Greater;
    std::string threshold;
};

/// P(keys...) holds over an interval when all conditions hold on the
/// governing reading.
struct ThresholdRule {
    std::string predicate;
    std::vector<Condition> conditions;
};

enum class NullPolicy {
    IgnoreRow,  // readings with a null in a tested column are dropped before pairing
    SkipPair,   // the reading keeps its timestamp; intervals it governs are not emitted
};

struct IngestConfig {
    std::string timestamp_column;
    std::vector<std::string> key_columns;
    std::vector<ThresholdRule> rules;
    Convention convention = Convention::CarryForward;
    NullPolicy null_policy = NullPolicy::SkipPair;
    bool assume_sorted = false;
};

/// Predicate → table with one attribute per key column. Readings are
/// sorted per partition unless `assume_sorted`; equal timestamps within a
/// partition are an error.
std::map<std::string, TemporalTable> ingest_csv(const CsvTable& csv, const IngestConfig& cfg);
std::map<std::string, TemporalTable> ingest_csv(const std::filesystem::path& path, const IngestConfig& cfg);

/// P(columns...) over (−∞, ∞) for every row; duplicates dropped.
struct MetadataRule {
    std::string predicate;
    std::vector<std::string> columns;
};

struct MetadataConfig {
    std::vector<MetadataRule> rules;
};

std::map<std::string, TemporalTable> ingest_metadata_csv(const CsvTable& csv, const MetadataConfig& cfg);
std::map<std::string, TemporalTable> ingest_metadata_csv(const std::filesystem::path& path, const MetadataConfig& cfg);

/// Facts of the tables, predicates in name order.
DataInstance to_data(const std::map<std::string, TemporalTable>& tables);

/// k copies of `d`, the i-th shifted by i·period. Throws ContractError
/// when the period is shorter than the span of the finite endpoints.
DataInstance replicate(const DataInstance& d, std::size_t k, const TimePoint& period);

/// JSON configs. A series config has fields timestamp, keys, convention,
/// null_policy, assume_sorted and rules [{predicate, conditions:
/// [{column, op, value}]}]; a metadata config has kind "metadata" and
/// rules [{predicate, columns}].
IngestConfig parse_ingest_config(std::string_view json_text);
MetadataConfig parse_metadata_config(std::string_view json_text);

/// A sources file lists CSV inputs with their configs:
///   {"sources": [{"csv": "weather.csv", "config": {...}}, ...]}
/// Paths are relative to the sources file. The result is the union of
/// all ingested facts.
DataInstance load_sources(const std::filesystem::path& path);

}  // namespace dmtl

#endif  // DMTL_INGEST_HPP
