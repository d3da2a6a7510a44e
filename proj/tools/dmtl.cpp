// Command-line front end: answering, consistency, normalization, SQL
// rewriting, ingestion, benchmarking and reduction fixtures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmtl/analysis.hpp"
#include "dmtl/answers.hpp"
#include "dmtl/chase.hpp"
#include "dmtl/engine.hpp"
#include "dmtl/errors.hpp"
#include "dmtl/ingest.hpp"
#include "dmtl/normalize.hpp"
#include "dmtl/parser.hpp"
#include "dmtl/reductions.hpp"
#include "dmtl/sqlgen.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dmtl;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInconsistent = 2, kUnknown = 3 };

struct Common {
    std::size_t cap = 0;  // 0: default cap
    unsigned threads = 1;
    std::string format = "text";
    std::string time = "seconds";
    std::string output;
};

struct Inputs {
    std::string program;
    std::string data;
    std::string sources;
};

TimeFormat time_format(const Common& c) { return c.time == "clock" ? TimeFormat::Clock : TimeFormat::Seconds; }

void write_output(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw Error("cannot write " + c.output);
    out << text;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

DataInstance load_inputs_data(const Inputs& in) {
    if (!in.data.empty() && !in.sources.empty()) throw ValidationError("--data and --sources are exclusive");
    if (!in.sources.empty()) return load_sources(in.sources);
    if (!in.data.empty()) return load_data(in.data);
    throw ValidationError("one of --data or --sources is required");
}

struct Evaluation {
    CanonicalModel model;
    EvalStatus status;
};

Evaluation evaluate(const Program& raw, const DataInstance& d, const Common& c) {
    Program p = normalize(raw);
    if (is_nonrecursive(p)) {
        EvalOptions opts;
        opts.threads = c.threads;
        CanonicalModel m = eval_nonrecursive(p, d, opts);
        EvalStatus s;
        if (!m.consistent()) s.kind = EvalStatus::Kind::Inconsistent;
        return {std::move(m), s};
    }
    std::size_t cap = c.cap ? c.cap : default_round_cap(p, d);
    auto [m, s] = chase(p, d, cap);
    return {std::move(m), s};
}

json answers_json(const std::string& pred, const std::vector<Answer>& as, TimeFormat fmt) {
    json arr = json::array();
    for (const auto& a : as) arr.push_back({{"predicate", pred}, {"tuple", a.tuple}, {"interval", a.interval.to_string(fmt)}});
    return arr;
}

int report_status(const Evaluation& e, const Common& c, const std::optional<json>& extra, const std::string& text) {
    TimeFormat fmt = time_format(c);
    if (e.status.kind == EvalStatus::Kind::Inconsistent) {
        std::string witness = e.model.inconsistency ? e.model.inconsistency->to_string(fmt) : "";
        if (c.format == "json")
            write_output(c, json{{"status", "INCONSISTENT"}, {"witness", witness}}.dump(2) + "\n");
        else
            write_output(c, "INCONSISTENT: BOT@" + witness + "\n");
        return kInconsistent;
    }
    bool unknown = e.status.kind == EvalStatus::Kind::CapReached;
    if (c.format == "json") {
        json j{{"status", unknown ? "UNKNOWN" : "CONSISTENT"}, {"rounds", e.status.rounds}};
        if (extra) j["answers"] = *extra;
        write_output(c, j.dump(2) + "\n");
    } else {
        write_output(c, text);
    }
    if (unknown) {
        std::cerr << "UNKNOWN: round cap reached after " << e.status.rounds << " rounds; results are sound but may be incomplete\n";
        return kUnknown;
    }
    return kOk;
}

int cmd_answer(const Inputs& in, const std::string& query, const Common& c) {
    Program p = load_program(in.program);
    DataInstance d = load_inputs_data(in);
    Query q = parse_query(query);
    Evaluation e = evaluate(p, d, c);
    if (e.status.kind == EvalStatus::Kind::Inconsistent) return report_status(e, c, std::nullopt, "");
    auto as = answers(e.model, q);
    return report_status(e, c, answers_json(q.goal.predicate, as, time_format(c)),
                         to_text(q.goal.predicate, as, time_format(c)));
}

int cmd_check(const Inputs& in, const Common& c) {
    Program p = load_program(in.program);
    DataInstance d = load_inputs_data(in);
    Evaluation e = evaluate(p, d, c);
    std::string verdict = e.status.kind == EvalStatus::Kind::CapReached ? "UNKNOWN\n" : "CONSISTENT\n";
    return report_status(e, c, std::nullopt, verdict);
}

int cmd_normalize(const std::string& program, const Common& c) {
    Program p = normalize(load_program(program));
    write_output(c, to_text(p));
    return kOk;
}

void load_tables(const fs::path& tables, const fs::path& db) {
    json j = json::parse(read_file(tables));
    for (const auto& t : j.at("tables")) {
        fs::path csv = tables.parent_path() / t.at("csv").get<std::string>();
        load_csv_into_sqlite(db, t.at("name").get<std::string>(), csv,
                             t.value("time_columns", std::vector<std::string>{}));
    }
}

int cmd_rewrite_sql(const Inputs& in, const std::string& mappings, const std::string& query, const std::string& coalesce,
                    bool coalesce_mapped, const std::string& execute, const std::string& tables, const Common& c) {
    Program p = load_program(in.program);
    Query q = parse_query(query);
    RewriteOptions opts;
    opts.variant = parse_coalesce_variant(coalesce);
    opts.coalesce_mapped = coalesce_mapped;
    SqlPlan plan = rewrite(p, load_mappings(mappings), q, opts);
    std::string sql = plan.to_sql();
    for (const auto& problem : check_sql_text(sql)) throw SqlGenError("emitted SQL: " + problem);
    if (c.output.empty()) {
        if (execute.empty()) std::cout << sql;
    } else {
        write_file(c.output, sql);
        write_file(c.output + ".json", plan.sidecar_json());
    }
    if (execute.empty()) return kOk;

    const std::string prefix = "sqlite:";
    if (execute.rfind(prefix, 0) != 0) throw ValidationError("--execute expects sqlite:PATH");
    fs::path db = execute.substr(prefix.size());
    if (!tables.empty()) {
        fs::remove(db);
        load_tables(tables, db);
    }
    auto sql_answers = execute_sqlite(plan, db);
    TimeFormat fmt = time_format(c);
    std::string text = to_text(q.goal.predicate, sql_answers, fmt);
    if (!in.data.empty() || !in.sources.empty()) {
        Evaluation e = evaluate(p, load_inputs_data(in), c);
        if (e.status.kind != EvalStatus::Kind::Fixpoint) throw Error("native evaluation did not reach a fixpoint");
        auto native = answers(e.model, q);
        auto same_ends = [](const std::vector<Answer>& a, const std::vector<Answer>& b) {
            return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Answer& x, const Answer& y) {
                return x.tuple == y.tuple && x.interval.lo() == y.interval.lo() && x.interval.hi() == y.interval.hi();
            });
        };
        if (native != sql_answers && same_ends(native, sql_answers)) {
            std::cerr << "MATCH-ENDPOINTS: " << native.size()
                      << " answers agree with native evaluation up to endpoint brackets\n";
        } else if (native != sql_answers) {
            std::cerr << "MISMATCH: SQL answers differ from native answers\n--- SQL\n"
                      << text << "--- native\n"
                      << to_text(q.goal.predicate, native, fmt);
            return kUsage;
        } else {
            std::cerr << "MATCH: " << native.size() << " answers agree with native evaluation\n";
        }
    }
    if (c.format == "json")
        std::cout << json{{"answers", answers_json(q.goal.predicate, sql_answers, fmt)}}.dump(2) << "\n";
    else
        std::cout << text;
    return kOk;
}

int cmd_ingest(const std::string& sources, const std::string& csv, const std::string& config, const Common& c) {
    DataInstance d;
    if (!sources.empty()) {
        d = load_sources(sources);
    } else if (!csv.empty() && !config.empty()) {
        std::string text = read_file(config);
        if (json::parse(text).value("kind", std::string()) == "metadata")
            d = to_data(ingest_metadata_csv(csv, parse_metadata_config(text)));
        else
            d = to_data(ingest_csv(csv, parse_ingest_config(text)));
    } else {
        throw ValidationError("ingest needs --sources, or a CSV with --config");
    }
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& f : d.facts)
            arr.push_back({{"predicate", f.atom.predicate},
                           {"tuple", [&] {
                                std::vector<std::string> t;
                                for (const auto& a : f.atom.args) t.push_back(a.name);
                                return t;
                            }()},
                           {"interval", f.interval.to_string(time_format(c))}});
        write_output(c, arr.dump(2) + "\n");
    } else {
        write_output(c, to_text(d, time_format(c)));
    }
    return kOk;
}

struct BenchRow {
    std::size_t scale;
    std::size_t intervals;
    double ingest_ms;
    double wall_ms;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(const Inputs& in, const std::string& query, std::vector<std::size_t> scales, std::size_t repeat,
              double timeout_s, const Common& c) {
    if (scales.empty()) throw ValidationError("--scales is empty");
    if (!std::is_sorted(scales.begin(), scales.end()) || std::adjacent_find(scales.begin(), scales.end()) != scales.end())
        throw ValidationError("--scales must be strictly ascending");
    Program p = normalize(load_program(in.program));
    if (!is_nonrecursive(p)) throw ContractError("bench needs a nonrecursive program");
    Query q = parse_query(query);
    EvalOptions opts;
    opts.threads = c.threads;

    std::vector<BenchRow> rows;
    for (std::size_t k : scales) {
        auto t0 = std::chrono::steady_clock::now();
        DataInstance base = load_inputs_data(in);
        std::vector<TimePoint> ends = data_numbers(base);
        if (ends.empty()) throw ValidationError("bench needs data with finite endpoints");
        auto [lo, hi] = std::minmax_element(ends.begin(), ends.end());
        TimePoint period = (*hi - *lo) + TimePoint(1);
        DataInstance d = replicate(base, k, period);
        double ingest_ms = ms_since(t0);

        double best = 0;
        for (std::size_t r = 0; r < std::max<std::size_t>(repeat, 1); ++r) {
            auto task = std::async(std::launch::async, [&] {
                auto s = std::chrono::steady_clock::now();
                CanonicalModel m = eval_nonrecursive(p, d, opts);
                answers(m, q);
                return ms_since(s);
            });
            if (task.wait_for(std::chrono::duration<double>(timeout_s)) == std::future_status::timeout) {
                std::cerr << "error: scale " << k << " exceeded the timeout of " << timeout_s << "s\n";
                std::fflush(nullptr);
                std::_Exit(kUsage);
            }
            double ms = task.get();
            best = r == 0 ? ms : std::min(best, ms);
        }
        rows.push_back({k, d.facts.size(), ingest_ms, best});
    }

    std::ostringstream csv;
    csv << "scale,interval_count,ingest_ms,wall_ms\n";
    for (const auto& r : rows) csv << r.scale << ',' << r.intervals << ',' << r.ingest_ms << ',' << r.wall_ms << '\n';
    write_output(c, csv.str());

    // Least-squares fit wall_ms = a + b·scale.
    double n = static_cast<double>(rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        double x = static_cast<double>(r.scale);
        sx += x;
        sy += r.wall_ms;
        sxx += x * x;
        sxy += x * r.wall_ms;
    }
    double denom = n * sxx - sx * sx;
    double slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0;
    double intercept = (sy - slope * sx) / n;
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone &= rows[i].wall_ms >= rows[i - 1].wall_ms;
    std::ostringstream report;
    report << "slope_ms_per_scale=" << slope << "\nintercept_ms=" << intercept
           << "\nratio_last_first=" << rows.back().wall_ms / std::max(rows.front().wall_ms, 1e-9)
           << "\nmonotone=" << (monotone ? "true" : "false") << '\n';
    if (c.output.empty())
        std::cerr << report.str();
    else
        write_file(c.output + ".slope.txt", report.str());
    return kOk;
}

void write_reduction(const fs::path& prefix, const Program& p, const DataInstance& d, const json& sidecar) {
    write_file(prefix.string() + ".dmtl", to_text(p));
    write_file(prefix.string() + ".dfacts", to_text(d));
    write_file(prefix.string() + ".json", sidecar.dump(2) + "\n");
}

int cmd_gen_qbf(const std::string& from, std::uint64_t seed, std::size_t vars, std::size_t clauses, const std::string& prefix) {
    Qbf q;
    if (!from.empty()) {
        std::ifstream f(from);
        if (!f) throw Error("cannot read " + from);
        q = parse_qdimacs(f);
    } else {
        if (vars < 1) throw ValidationError("--vars must be at least 1");
        std::mt19937_64 rng(seed);
        q = random_qbf(rng, vars - 1, clauses);
    }
    Reduction r = qbf_to_program(q);
    bool truth = qbf_eval(q);
    write_file(prefix + ".qdimacs", to_qdimacs(q));
    json side{{"satisfiable", truth}, {"expected", truth ? "INCONSISTENT" : "CONSISTENT"}};
    if (from.empty()) side["seed"] = seed;
    write_reduction(prefix, r.program, r.data, side);
    std::cout << (truth ? "INCONSISTENT" : "CONSISTENT") << "\n";
    return kOk;
}

int cmd_gen_circuit(const std::string& from, std::uint64_t seed, std::size_t inputs, std::size_t gates,
                    bool consistency, const std::string& prefix) {
    MonotoneCircuit circ;
    if (!from.empty()) {
        std::ifstream f(from);
        if (!f) throw Error("cannot read " + from);
        circ = parse_circuit(f);
    } else {
        std::mt19937_64 rng(seed);
        circ = random_circuit(rng, inputs, gates);
    }
    CircuitReduction r = circuit_to_program(circ, consistency);
    bool value = circuit_eval(circ);
    write_file(prefix + ".circuit", to_text(circ));
    json side{{"value", value},
              {"goal", to_text(r.goal)},
              {"cap", circuit_round_cap(circ)},
              {"scale", circuit_scale(circ)}};
    if (from.empty()) side["seed"] = seed;
    if (consistency) side["expected"] = value ? "INCONSISTENT" : "CONSISTENT";
    write_reduction(prefix, r.program, r.data, side);
    std::cout << (value ? "T" : "F") << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"datalogMTL reasoning engine"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--cap", common.cap, "Round cap for recursive programs (default 10*(rules+facts))");
    app.add_option("--threads", common.threads, "Worker threads for the engine")->check(CLI::Range(1u, 256u));
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--time", common.time, "Time rendering")->check(CLI::IsMember({"seconds", "clock"}));
    app.add_option("-o,--output", common.output, "Output file");

    Inputs in;
    auto add_inputs = [&](CLI::App* sub, bool need_data) {
        sub->add_option("program", in.program, "Program file (.dmtl)")->required()->check(CLI::ExistingFile);
        auto* data = sub->add_option("--data", in.data, "Data file (.dfacts)")->check(CLI::ExistingFile);
        auto* sources = sub->add_option("--sources", in.sources, "CSV sources file (.json)")->check(CLI::ExistingFile);
        data->excludes(sources);
        if (need_data) sub->callback([data, sources] {
            if (data->count() + sources->count() == 0) throw CLI::RequiredError("--data or --sources");
        });
    };

    std::string query;
    auto* answer = app.add_subcommand("answer", "Maximal intervals of a query atom");
    add_inputs(answer, true);
    answer->add_option("query", query, "Query atom, e.g. HeatAffectedCounty(v)")->required();

    auto* check = app.add_subcommand("check", "Consistency of a program with data");
    add_inputs(check, true);

    auto* norm = app.add_subcommand("normalize", "Print the normal form of a program");
    norm->add_option("program", in.program)->required()->check(CLI::ExistingFile);

    std::string mappings, coalesce = "counting", execute, tables;
    bool no_coalesce_mapped = false;
    auto* rw = app.add_subcommand("rewrite-sql", "Rewrite a nonrecursive query into SQL");
    add_inputs(rw, false);
    rw->add_option("query", query)->required();
    rw->add_option("--mappings", mappings, "Mappings file (.json)")->required()->check(CLI::ExistingFile);
    rw->add_option("--coalesce", coalesce, "Coalescing variant")->check(CLI::IsMember({"counting", "window"}));
    rw->add_flag("--no-coalesce-mapped", no_coalesce_mapped, "Treat mapped sources as already coalesced");
    auto* exec = rw->add_option("--execute", execute, "Run the plan, e.g. sqlite:/tmp/w.db");
    rw->add_option("--tables", tables, "CSV tables to load before executing (.json)")
        ->check(CLI::ExistingFile)
        ->needs(exec);

    std::string sources, csv, config;
    auto* ing = app.add_subcommand("ingest", "Turn CSV logs into interval facts");
    ing->add_option("--sources", sources, "Sources file (.json)")->check(CLI::ExistingFile);
    ing->add_option("csv", csv, "CSV file")->check(CLI::ExistingFile);
    ing->add_option("--config", config, "Ingest config (.json)")->check(CLI::ExistingFile);

    std::vector<std::size_t> scales{1, 2, 4, 8};
    std::size_t repeat = 3;
    double timeout_s = 300;
    auto* bench = app.add_subcommand("bench", "Time evaluation over replicated data");
    add_inputs(bench, true);
    bench->add_option("query", query)->required();
    bench->add_option("--scales", scales, "Replication factors, ascending")->delimiter(',');
    bench->add_option("--repeat", repeat, "Runs per scale; the fastest is reported");
    bench->add_option("--timeout", timeout_s, "Seconds allowed per run");

    std::uint64_t seed = 1;
    std::string from, prefix;
    std::size_t vars = 3, clauses = 4, inputs = 3, gates = 5;
    bool consistency = false;
    auto* gq = app.add_subcommand("gen-qbf", "Write a QBF reduction fixture");
    gq->add_option("--seed", seed);
    gq->add_option("--from", from, "QDIMACS input instead of a random formula")->check(CLI::ExistingFile);
    gq->add_option("--vars", vars);
    gq->add_option("--clauses", clauses);
    gq->add_option("prefix", prefix, "Output path prefix")->required();

    auto* gc = app.add_subcommand("gen-circuit", "Write a monotone circuit reduction fixture");
    gc->add_option("--seed", seed);
    gc->add_option("--from", from, "Circuit file instead of a random circuit")->check(CLI::ExistingFile);
    gc->add_option("--inputs", inputs);
    gc->add_option("--gates", gates);
    gc->add_flag("--consistency", consistency, "Add P@goal and BOT :- P, T");
    gc->add_option("prefix", prefix, "Output path prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*answer) return cmd_answer(in, query, common);
        if (*check) return cmd_check(in, common);
        if (*norm) return cmd_normalize(in.program, common);
        if (*rw) return cmd_rewrite_sql(in, mappings, query, coalesce, !no_coalesce_mapped, execute, tables, common);
        if (*ing) return cmd_ingest(sources, csv, config, common);
        if (*bench) return cmd_bench(in, query, scales, repeat, timeout_s, common);
        if (*gq) return cmd_gen_qbf(from, seed, vars, clauses, prefix);
        if (*gc) return cmd_gen_circuit(from, seed, inputs, gates, consistency, prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
