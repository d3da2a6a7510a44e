#include "dmtl/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <regex>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "dmtl/errors.hpp"
#include "dmtl/parser.hpp"

namespace dmtl {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using json = nlohmann::json;

bool is_null(const std::string& v) { return v.empty() || v == "NULL" || v == "null" || v == "NA" || v == "NaN"; }

std::optional<Rational> parse_decimal(std::string_view s) {
    static const std::regex re(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
    std::cmatch m;
    if (!std::regex_match(s.begin(), s.end(), m, re)) return std::nullopt;
    std::string whole = m[2].str(), frac = m[3].str();
    if (whole.empty() && frac.empty()) return std::nullopt;
    std::string digits = whole + frac;
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    Integer mantissa(digits.empty() ? "0" : digits);
    long exp10 = -static_cast<long>(frac.size());
    if (m[4].matched) exp10 += std::stol(m[4].str());
    if (exp10 > 4000 || exp10 < -4000) return std::nullopt;
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exp10)));
    Rational r = exp10 >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
    return m[1].str() == "-" ? -r : r;
}

std::string key_of(const std::vector<std::string>& row, const std::vector<std::size_t>& cols) {
    std::string k;
    for (auto c : cols) {
        k += row[c];
        k += '\x1f';
    }
    return k;
}

Comparator comparator_from_json(const json& j) {
    return parse_comparator(j.get<std::string>());
}

std::string scalar_text(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.dump();
    throw IngestError("threshold must be a string or a number");
}

}  // namespace

Convention parse_convention(std::string_view text) {
    if (text == "carry-forward") return Convention::CarryForward;
    if (text == "carry-back") return Convention::CarryBack;
    throw IngestError("unknown convention '" + std::string(text) + "'");
}

std::string to_string(Convention c) { return c == Convention::CarryForward ? "carry-forward" : "carry-back"; }

std::size_t CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IngestError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_started = false, have_header = false;
    int line = 1, record_line = 1;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            if (!have_header) {
                t.header = std::move(record);
                have_header = true;
            } else {
                if (record.size() != t.header.size())
                    throw IngestError("line " + std::to_string(record_line) + ": expected " +
                                      std::to_string(t.header.size()) + " fields, got " +
                                      std::to_string(record.size()));
                t.rows.push_back(std::move(record));
                t.lines.push_back(record_line);
            }
        }
        record.clear();
        record_line = line;
    };
    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r' && in.peek() == '\n') {
            continue;
        } else if (c == '\n') {
            ++line;
            end_record();
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw IngestError("line " + std::to_string(record_line) + ": unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    return t;
}

CsvTable load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    try {
        return read_csv(in);
    } catch (const IngestError& e) {
        throw IngestError(path.string() + ": " + e.what());
    }
}

TimePoint parse_timestamp(std::string_view text) {
    static const std::regex re(R"((\d{4})-(\d{2})-(\d{2})[ T](\d{2}):(\d{2})(?::(\d{2})(\.\d+)?)?)");
    std::cmatch m;
    if (!std::regex_match(text.begin(), text.end(), m, re)) return TimePoint::parse(text);
    using namespace std::chrono;
    year_month_day ymd{year{std::stoi(m[1].str())}, month{static_cast<unsigned>(std::stoi(m[2].str()))},
                       day{static_cast<unsigned>(std::stoi(m[3].str()))}};
    if (!ymd.ok()) throw InvalidValue("invalid date '" + std::string(text) + "'");
    long h = std::stol(m[4].str()), mi = std::stol(m[5].str()), s = m[6].matched ? std::stol(m[6].str()) : 0;
    if (h > 23 || mi > 59 || s > 60) throw InvalidValue("invalid time '" + std::string(text) + "'");
    std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    TimePoint t(days * 86400 + h * 3600 + mi * 60 + s);
    if (m[7].matched) t = t + TimePoint::parse("0" + m[7].str());
    return t;
}

Comparator parse_comparator(std::string_view text) {
    if (text == "<") return Comparator::Less;
    if (text == "<=") return Comparator::LessEq;
    if (text == ">") return Comparator::Greater;
    if (text == ">=") return Comparator::GreaterEq;
    throw IngestError("unknown comparator '" + std::string(text) + "'");
}

bool compare_decimal(std::string_view value, Comparator cmp, std::string_view threshold) {
    auto a = parse_decimal(value), b = parse_decimal(threshold);
    if (!a) throw InvalidValue("not a number: '" + std::string(value) + "'");
    if (!b) throw InvalidValue("not a number: '" + std::string(threshold) + "'");
    switch (cmp) {
        case Comparator::Less: return *a < *b;
        case Comparator::LessEq: return *a <= *b;
        case Comparator::Greater: return *a > *b;
        case Comparator::GreaterEq: return *a >= *b;
    }
    return false;
}

std::map<std::string, TemporalTable> ingest_csv(const CsvTable& csv, const IngestConfig& cfg) {
    std::size_t ts = csv.column(cfg.timestamp_column);
    std::vector<std::size_t> keys;
    for (const auto& k : cfg.key_columns) keys.push_back(csv.column(k));
    struct Test {
        std::size_t col;
        Comparator cmp;
        std::string threshold;
    };
    std::vector<std::vector<Test>> tests;
    std::set<std::size_t> tested;
    for (const auto& r : cfg.rules) {
        auto& ts_rule = tests.emplace_back();
        for (const auto& c : r.conditions) {
            if (!parse_decimal(c.threshold)) throw IngestError("threshold of " + r.predicate + " is not a number");
            ts_rule.push_back({csv.column(c.column), c.cmp, c.threshold});
            tested.insert(ts_rule.back().col);
        }
    }

    struct Reading {
        TimePoint t;
        std::size_t row;
    };
    std::map<std::string, std::vector<Reading>> partitions;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        if (cfg.null_policy == NullPolicy::IgnoreRow &&
            std::any_of(tested.begin(), tested.end(), [&](std::size_t c) { return is_null(row[c]); }))
            continue;
        TimePoint t;
        try {
            t = parse_timestamp(row[ts]);
        } catch (const Error& e) {
            throw IngestError("line " + std::to_string(csv.lines[i]) + ": " + e.what());
        }
        if (!t.is_finite()) throw IngestError("line " + std::to_string(csv.lines[i]) + ": infinite timestamp");
        auto [it, fresh] = partitions.try_emplace(key_of(row, keys));
        if (fresh) order.push_back(it->first);
        it->second.push_back({t, i});
    }

    std::map<std::string, TemporalTable> out;
    for (const auto& r : cfg.rules) out[r.predicate].attrs = cfg.key_columns;
    std::sort(order.begin(), order.end());
    for (const auto& key : order) {
        auto& rs = partitions[key];
        if (!cfg.assume_sorted)
            std::stable_sort(rs.begin(), rs.end(), [](const Reading& a, const Reading& b) { return a.t < b.t; });
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (!(rs[i - 1].t < rs[i].t))
                throw IngestError("line " + std::to_string(csv.lines[rs[i].row]) +
                                  (rs[i - 1].t == rs[i].t ? ": repeated timestamp" : ": timestamps not increasing"));
        for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
            const Reading& gov = cfg.convention == Convention::CarryForward ? rs[i] : rs[i + 1];
            const auto& row = csv.rows[gov.row];
            Tuple tuple;
            for (auto c : keys) tuple.push_back(row[c]);
            Interval iv = cfg.convention == Convention::CarryForward ? Interval(rs[i].t, true, rs[i + 1].t, false)
                                                                     : Interval(rs[i].t, false, rs[i + 1].t, true);
            for (std::size_t k = 0; k < cfg.rules.size(); ++k) {
                bool holds = true;
                for (const auto& test : tests[k]) {
                    if (is_null(row[test.col])) {
                        holds = false;
                        break;
                    }
                    try {
                        holds = compare_decimal(row[test.col], test.cmp, test.threshold);
                    } catch (const InvalidValue& e) {
                        throw IngestError("line " + std::to_string(csv.lines[gov.row]) + ": " + e.what());
                    }
                    if (!holds) break;
                }
                if (holds) out[cfg.rules[k].predicate].rows.push_back({tuple, iv});
            }
        }
    }
    return out;
}

std::map<std::string, TemporalTable> ingest_csv(const std::filesystem::path& path, const IngestConfig& cfg) {
    CsvTable csv = load_csv(path);
    try {
        return ingest_csv(csv, cfg);
    } catch (const IngestError& e) {
        throw IngestError(path.string() + ": " + e.what());
    }
}

std::map<std::string, TemporalTable> ingest_metadata_csv(const CsvTable& csv, const MetadataConfig& cfg) {
    std::map<std::string, TemporalTable> out;
    for (const auto& r : cfg.rules) {
        std::vector<std::size_t> cols;
        for (const auto& c : r.columns) cols.push_back(csv.column(c));
        TemporalTable& t = out[r.predicate];
        t.attrs = r.columns;
        std::set<Tuple> seen;
        for (const auto& row : csv.rows) {
            Tuple tuple;
            for (auto c : cols) tuple.push_back(row[c]);
            if (seen.insert(tuple).second) t.rows.push_back({tuple, Interval::all()});
        }
    }
    return out;
}

std::map<std::string, TemporalTable> ingest_metadata_csv(const std::filesystem::path& path, const MetadataConfig& cfg) {
    CsvTable csv = load_csv(path);
    try {
        return ingest_metadata_csv(csv, cfg);
    } catch (const IngestError& e) {
        throw IngestError(path.string() + ": " + e.what());
    }
}

DataInstance to_data(const std::map<std::string, TemporalTable>& tables) {
    DataInstance d;
    for (const auto& [pred, t] : tables)
        for (const auto& r : t.rows) {
            Atom a{pred, {}};
            for (const auto& c : r.tuple) a.args.push_back(Term::constant(c));
            d.facts.push_back({std::move(a), r.interval});
        }
    return d;
}

DataInstance replicate(const DataInstance& d, std::size_t k, const TimePoint& period) {
    std::optional<TimePoint> lo, hi;
    for (const auto& f : d.facts)
        for (const auto* t : {&f.interval.lo(), &f.interval.hi()})
            if (t->is_finite()) {
                lo = lo ? min(*lo, *t) : *t;
                hi = hi ? max(*hi, *t) : *t;
            }
    if (k > 1 && lo && period < *hi - *lo)
        throw ContractError("replication period " + period.to_string() + " is shorter than the data span " +
                            (*hi - *lo).to_string());
    DataInstance out;
    out.facts.reserve(d.facts.size() * k);
    for (std::size_t i = 0; i < k; ++i) {
        TimePoint shift = period.times(static_cast<std::int64_t>(i));
        for (const auto& f : d.facts) {
            const Interval& iv = f.interval;
            out.facts.push_back({f.atom, Interval(iv.lo() + shift, iv.lo_closed(), iv.hi() + shift, iv.hi_closed())});
        }
    }
    return out;
}

IngestConfig parse_ingest_config(std::string_view json_text) {
    try {
        json j = json::parse(json_text);
        IngestConfig c;
        c.timestamp_column = j.at("timestamp").get<std::string>();
        c.key_columns = j.value("keys", std::vector<std::string>{});
        c.convention = parse_convention(j.value("convention", std::string("carry-forward")));
        std::string np = j.value("null_policy", std::string("skip-pair"));
        if (np == "skip-pair") c.null_policy = NullPolicy::SkipPair;
        else if (np == "ignore-row") c.null_policy = NullPolicy::IgnoreRow;
        else throw IngestError("unknown null policy '" + np + "'");
        c.assume_sorted = j.value("assume_sorted", false);
        for (const auto& r : j.at("rules")) {
            ThresholdRule rule;
            rule.predicate = r.at("predicate").get<std::string>();
            for (const auto& cond : r.at("conditions"))
                rule.conditions.push_back(
                    {cond.at("column").get<std::string>(), comparator_from_json(cond.at("op")), scalar_text(cond.at("value"))});
            c.rules.push_back(std::move(rule));
        }
        return c;
    } catch (const json::exception& e) {
        throw IngestError(std::string("ingest config: ") + e.what());
    }
}

MetadataConfig parse_metadata_config(std::string_view json_text) {
    try {
        json j = json::parse(json_text);
        MetadataConfig c;
        for (const auto& r : j.at("rules"))
            c.rules.push_back({r.at("predicate").get<std::string>(), r.at("columns").get<std::vector<std::string>>()});
        return c;
    } catch (const json::exception& e) {
        throw IngestError(std::string("metadata config: ") + e.what());
    }
}

DataInstance load_sources(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw IngestError(path.string() + ": " + e.what());
    }
    std::map<std::string, TemporalTable> all;
    auto base = path.parent_path();
    for (const auto& s : j.at("sources")) {
        auto csv = base / s.at("csv").get<std::string>();
        const json& cfg = s.at("config");
        bool metadata = cfg.value("kind", std::string("series")) == "metadata";
        auto tables = metadata ? ingest_metadata_csv(csv, parse_metadata_config(cfg.dump()))
                               : ingest_csv(csv, parse_ingest_config(cfg.dump()));
        for (auto& [pred, t] : tables) {
            auto& dst = all[pred];
            if (dst.attrs.empty()) dst.attrs = t.attrs;
            for (auto& r : t.rows) dst.rows.push_back(std::move(r));
        }
    }
    return to_data(all);
}

}  // namespace dmtl
