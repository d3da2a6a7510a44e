#include "dmtl/sqlgen.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>
#include <sqlite3.h>

#include "dmtl/analysis.hpp"
#include "dmtl/errors.hpp"
#include "dmtl/normalize.hpp"
#include "dmtl/parser.hpp"

namespace dmtl {

namespace {

using json = nlohmann::json;
using K = Formula::Kind;

const std::string kPosInf = "1e999";
const std::string kNegInf = "-1e999";

std::string num(const TimePoint& t) {
    if (t.is_pos_inf()) return kPosInf;
    if (t.is_neg_inf()) return kNegInf;
    return t.to_string();
}

std::string literal(const std::string& c) {
    static const std::regex numeric(R"(-?\d+(\.\d+)?)");
    if (std::regex_match(c, numeric)) return c;
    std::string out = "'";
    for (char ch : c) {
        if (ch == '\'') out += '\'';
        out += ch;
    }
    return out + "'";
}

std::string plus(const std::string& e, const TimePoint& r) { return r.is_zero() ? e : e + " + " + num(r); }
std::string minus(const std::string& e, const TimePoint& r) { return r.is_zero() ? e : e + " - " + num(r); }

/// Greatest (or least) of the expressions, dropping the neutral infinity.
std::string extremum(std::vector<std::string> xs, bool greatest) {
    const std::string& neutral = greatest ? kNegInf : kPosInf;
    const char* cmp = greatest ? " >= " : " <= ";
    std::vector<std::string> kept;
    for (auto& x : xs)
        if (x != neutral && std::find(kept.begin(), kept.end(), x) == kept.end()) kept.push_back(std::move(x));
    if (kept.empty()) return neutral;
    if (kept.size() == 1) return kept[0];
    std::string out = "CASE";
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        out += " WHEN ";
        for (std::size_t j = i + 1; j < kept.size(); ++j) out += (j > i + 1 ? " AND " : "") + kept[i] + cmp + kept[j];
        out += " THEN " + kept[i];
    }
    return out + " ELSE " + kept.back() + " END";
}

std::string mx(const std::string& a, const std::string& b) { return extremum({a, b}, true); }
std::string mn(const std::string& a, const std::string& b) { return extremum({a, b}, false); }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string view_name(const std::string& pred) { return "V_" + pred; }
std::string star_name(const std::string& pred) { return "V_" + pred + "_star"; }

/// Distinct names, avoiding the interval columns.
std::vector<std::string> dedupe(const std::vector<std::string>& names) {
    std::set<std::string> taken{"ledge", "redge"};
    std::vector<std::string> out;
    for (const auto& n : names) {
        std::string name = n;
        for (int k = 2; taken.count(name); ++k) name = n + "_" + std::to_string(k);
        taken.insert(name);
        out.push_back(name);
    }
    return out;
}

/// One operand of a rule: a table alias with its atom, or ⊤.
struct Operand {
    const Atom* atom = nullptr;
    std::string alias;
    std::string ledge = kNegInf;
    std::string redge = kPosInf;
};

class RuleTranslator {
public:
    RuleTranslator(const std::map<std::string, std::vector<std::string>>& columns) : columns_(columns) {}

    Operand add(const Formula& f) {
        Operand op;
        if (f.kind == K::Top) return op;
        if (f.kind != K::Atom) throw ContractError("rule is not in normal form: " + to_text(f));
        op.atom = &f.atom;
        op.alias = "T" + std::to_string(sources_.size() + 1);
        op.ledge = op.alias + ".ledge";
        op.redge = op.alias + ".redge";
        const auto& cols = columns_.at(f.atom.predicate);
        for (std::size_t j = 0; j < f.atom.args.size(); ++j) {
            const Term& t = f.atom.args[j];
            std::string ref = op.alias + "." + cols[j];
            if (!t.is_variable()) conds_.push_back(ref + " = " + literal(t.name));
            else if (auto it = bound_.find(t.name); it != bound_.end()) conds_.push_back(it->second + " = " + ref);
            else bound_[t.name] = ref;
        }
        sources_.push_back(star_name(f.atom.predicate) + " AS " + op.alias);
        return op;
    }

    void inequality(const Formula& f) {
        conds_.push_back(term(f.lhs) + " <> " + term(f.rhs));
    }

    void guard(std::string g) { guards_.push_back(std::move(g)); }

    std::string select(const Atom& head, const std::vector<std::string>& head_cols, const std::string& ledge,
                       const std::string& redge) const {
        std::vector<std::string> items;
        for (std::size_t i = 0; i < head.args.size(); ++i) items.push_back(term(head.args[i]) + " AS " + head_cols[i]);
        items.push_back(ledge + " AS ledge");
        items.push_back(redge + " AS redge");
        std::string sql = "SELECT " + join(items, ",\n  ");
        if (!sources_.empty()) sql += "\nFROM " + join(sources_, ", ");
        std::vector<std::string> where = guards_;
        where.insert(where.end(), conds_.begin(), conds_.end());
        if (!where.empty()) sql += "\nWHERE " + join(where, "\n  AND ");
        return sql;
    }

    /// Source column of the first occurrence of a variable.
    std::string first_column(const std::string& var) const {
        const std::string& ref = bound_.at(var);
        return ref.substr(ref.find('.') + 1);
    }

private:
    std::string term(const Term& t) const {
        if (!t.is_variable()) return literal(t.name);
        auto it = bound_.find(t.name);
        if (it == bound_.end()) throw ValidationError("variable " + t.name + " is not bound by a body atom");
        return it->second;
    }

    const std::map<std::string, std::vector<std::string>>& columns_;
    std::vector<std::string> sources_;
    std::vector<std::string> guards_;
    std::vector<std::string> conds_;
    std::map<std::string, std::string> bound_;
};

struct RuleSql {
    std::string sql;
    std::vector<std::string> head_columns;  // names suggested by this rule
};

RuleSql translate(const Rule& r, const std::map<std::string, std::vector<std::string>>& columns,
                  const std::vector<std::string>* head_cols) {
    if (!r.head_boxes.empty()) throw ContractError("rule is not in normal form: " + to_text(r));
    auto shape = normal_shape(r, false);
    if (!shape) throw ContractError("rule is not in normal form: " + to_text(r));
    RuleTranslator tr(columns);
    std::string ledge, redge;
    switch (*shape) {
        case RuleShape::Horn: {
            std::vector<Operand> ops;
            for (const auto& f : r.body)
                if (f.kind != K::Inequality) ops.push_back(tr.add(f));
            for (const auto& f : r.body)
                if (f.kind == K::Inequality) tr.inequality(f);
            std::vector<std::string> ls, rs;
            std::size_t real = 0;
            for (const auto& op : ops) {
                ls.push_back(op.ledge);
                rs.push_back(op.redge);
                real += op.atom != nullptr;
            }
            ledge = extremum(ls, true);
            redge = extremum(rs, false);
            if (real == 2) {
                tr.guard(ledge + " < " + redge);
            } else if (real > 2) {
                for (const auto& a : ops)
                    for (const auto& b : ops)
                        if (&a != &b && a.atom && b.atom) tr.guard(a.ledge + " < " + b.redge);
            }
            break;
        }
        case RuleShape::BoxMinus:
        case RuleShape::BoxPlus: {
            const Range& q = *r.body[0].range;
            if (!q.r2().is_finite()) throw SqlGenError("box range with infinite end: " + to_text(r));
            Operand a = tr.add(r.body[0].children[0]);
            if (*shape == RuleShape::BoxMinus) {
                ledge = plus(a.ledge, q.r2());
                redge = plus(a.redge, q.r1());
            } else {
                ledge = minus(a.ledge, q.r1());
                redge = minus(a.redge, q.r2());
            }
            if (a.atom) {
                tr.guard(a.redge + " - " + a.ledge + " >= " + num(q.r2() - q.r1()));
                tr.guard(ledge + " < " + redge);
            }
            break;
        }
        case RuleShape::Since:
        case RuleShape::Until: {
            const Formula& f = r.body[0];
            const Range& q = *f.range;
            bool since = *shape == RuleShape::Since;
            Operand a = tr.add(f.children[0]);
            Operand b = tr.add(f.children[1]);
            if (!a.atom) {
                ledge = since ? plus(b.ledge, q.r1()) : minus(b.ledge, q.r2());
                redge = since ? plus(b.redge, q.r2()) : minus(b.redge, q.r1());
                break;
            }
            std::string lo = mx(a.ledge, b.ledge), hi = mn(a.redge, b.redge);
            tr.guard(lo + " <= " + hi);
            ledge = mx(since ? plus(lo, q.r1()) : minus(lo, q.r2()), a.ledge);
            redge = mn(since ? plus(hi, q.r2()) : minus(hi, q.r1()), a.redge);
            tr.guard(ledge + " < " + redge);
            break;
        }
    }
    RuleSql out;
    const Atom& head = *r.head;
    for (std::size_t i = 0; i < head.args.size(); ++i) {
        const Term& t = head.args[i];
        out.head_columns.push_back(t.is_variable() ? tr.first_column(t.name) : "c" + std::to_string(i));
    }
    out.head_columns = dedupe(out.head_columns);
    out.sql = tr.select(head, head_cols ? *head_cols : out.head_columns, ledge, redge);
    return out;
}

std::string counting_coalesce(const std::string& v, const std::vector<std::string>& attrs) {
    auto eq = [&](const std::string& a, const std::string& b) {
        std::string s;
        for (const auto& c : attrs) s += " AND " + a + "." + c + " = " + b + "." + c;
        return s;
    };
    std::vector<std::string> t_cols, l_cols;
    for (const auto& c : attrs) {
        t_cols.push_back("T." + c + " AS " + c);
        l_cols.push_back("V_l." + c + " AS " + c);
    }
    auto select_list = [](std::vector<std::string> cols, const std::string& last) {
        cols.push_back(last);
        return join(cols, ", ");
    };
    std::ostringstream s;
    s << "WITH V_l AS MATERIALIZED (\n"
      << "  SELECT DISTINCT " << select_list(t_cols, "T.ledge AS ledge") << " FROM " << v << " T WHERE\n"
      << "  (SELECT COUNT(*) FROM " << v << " S WHERE S.ledge >= T.ledge" << eq("S", "T") << ") =\n"
      << "  (SELECT COUNT(*) FROM " << v << " S WHERE S.redge >= T.ledge" << eq("S", "T") << ")\n"
      << "), V_r AS MATERIALIZED (\n"
      << "  SELECT DISTINCT " << select_list(t_cols, "T.redge AS redge") << " FROM " << v << " T WHERE\n"
      << "  (SELECT COUNT(*) FROM " << v << " S WHERE S.redge <= T.redge" << eq("S", "T") << ") =\n"
      << "  (SELECT COUNT(*) FROM " << v << " S WHERE S.ledge <= T.redge" << eq("S", "T") << ")\n"
      << ")\n"
      << "SELECT " << select_list(l_cols, "V_l.ledge AS ledge") << ",\n"
      << "  (SELECT MIN(V_r.redge) FROM V_r WHERE V_r.redge >= V_l.ledge" << eq("V_l", "V_r") << ") AS redge\n"
      << "FROM V_l";
    return s.str();
}

std::string window_coalesce(const std::string& v, const std::vector<std::string>& attrs) {
    std::string cols = attrs.empty() ? "" : join(attrs, ", ") + ", ";
    std::string part = attrs.empty() ? "" : "PARTITION BY " + join(attrs, ", ") + " ";
    std::ostringstream s;
    s << "WITH W1 AS (\n"
      << "  SELECT " << cols << "ledge, redge,\n"
      << "    MAX(redge) OVER (" << part
      << "ORDER BY ledge, redge ROWS BETWEEN UNBOUNDED PRECEDING AND 1 PRECEDING) AS prev_redge\n"
      << "  FROM " << v << "\n"
      << "), W2 AS (\n"
      << "  SELECT " << cols << "ledge, redge,\n"
      << "    SUM(CASE WHEN prev_redge IS NULL OR ledge > prev_redge THEN 1 ELSE 0 END) OVER (" << part
      << "ORDER BY ledge, redge ROWS UNBOUNDED PRECEDING) AS grp\n"
      << "  FROM W1\n"
      << ")\n"
      << "SELECT " << cols << "MIN(ledge) AS ledge, MAX(redge) AS redge\n"
      << "FROM W2\n"
      << "GROUP BY " << cols << "grp";
    return s.str();
}

struct Db {
    sqlite3* handle = nullptr;
    explicit Db(const std::filesystem::path& path, int flags) {
        if (sqlite3_open_v2(path.string().c_str(), &handle, flags, nullptr) != SQLITE_OK) {
            std::string msg = handle ? sqlite3_errmsg(handle) : "out of memory";
            sqlite3_close(handle);
            throw SqlGenError("cannot open " + path.string() + ": " + msg);
        }
    }
    ~Db() { sqlite3_close(handle); }
    Db(const Db&) = delete;
    Db& operator=(const Db&) = delete;

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(handle, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown error";
            sqlite3_free(err);
            throw SqlGenError("sqlite: " + msg + "\nin: " + sql.substr(0, 400));
        }
    }
};

struct Stmt {
    sqlite3_stmt* handle = nullptr;
    Stmt(Db& db, const std::string& sql) {
        if (sqlite3_prepare_v2(db.handle, sql.c_str(), -1, &handle, nullptr) != SQLITE_OK)
            throw SqlGenError(std::string("sqlite: ") + sqlite3_errmsg(db.handle) + "\nin: " + sql.substr(0, 400));
    }
    ~Stmt() { sqlite3_finalize(handle); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;
};

}  // namespace

CoalesceVariant parse_coalesce_variant(std::string_view text) {
    if (text == "counting") return CoalesceVariant::Counting;
    if (text == "window") return CoalesceVariant::Window;
    throw SqlGenError("unknown coalescing variant '" + std::string(text) + "'");
}

std::vector<Mapping> parse_mappings(std::string_view json_text) {
    std::vector<Mapping> out;
    try {
        json j = json::parse(json_text);
        for (const auto& e : j) {
            Mapping m;
            m.predicate = e.at("predicate").get<std::string>();
            m.sql = e.at("sql").get<std::string>();
            m.attrs = e.value("attrs", std::vector<std::string>{});
            m.ledge = e.value("ledge", std::string("ledge"));
            m.redge = e.value("redge", std::string("redge"));
            m.convention = parse_convention(e.value("convention", std::string("carry-back")));
            out.push_back(std::move(m));
        }
    } catch (const json::exception& e) {
        throw SqlGenError(std::string("mappings: ") + e.what());
    }
    return out;
}

std::vector<Mapping> load_mappings(const std::filesystem::path& path) {
    try {
        return parse_mappings(read_file(path));
    } catch (const SqlGenError& e) {
        throw SqlGenError(path.string() + ": " + e.what());
    }
}

std::string coalesce_sql(const std::string& view, const std::vector<std::string>& attrs, CoalesceVariant variant) {
    return variant == CoalesceVariant::Counting ? counting_coalesce(view, attrs) : window_coalesce(view, attrs);
}

SqlPlan rewrite(const Program& input, const std::vector<Mapping>& mappings, const Query& q,
                const RewriteOptions& opts) {
    Program p = normalize(input, {.split_ranges = false});
    std::vector<std::string> order = topological_order(p);
    auto arities = predicate_arities(p);
    std::set<std::string> heads = head_predicates(p);

    std::map<std::string, std::vector<const Mapping*>> by_pred;
    for (const auto& m : mappings) by_pred[m.predicate].push_back(&m);

    SqlPlan plan;
    std::map<std::string, std::vector<std::string>> columns;
    std::optional<Convention> conv;
    for (const auto& [pred, ms] : by_pred) {
        if (heads.count(pred)) throw ValidationError("predicate " + pred + " is both mapped and defined by rules");
        std::size_t arity = ms.front()->attrs.size();
        if (auto it = arities.find(pred); it != arities.end() && it->second != arity)
            throw ValidationError("mapping of " + pred + " has " + std::to_string(arity) + " attributes, expected " +
                                  std::to_string(it->second));
        std::vector<std::string> parts;
        std::vector<std::string> cols = dedupe(ms.front()->attrs);
        for (const Mapping* m : ms) {
            if (m->attrs.size() != arity) throw ValidationError("mappings of " + pred + " disagree on arity");
            if (conv && *conv != m->convention) throw SqlGenError("mappings mix interval conventions");
            conv = m->convention;
            std::vector<std::string> items;
            for (std::size_t i = 0; i < arity; ++i) items.push_back("T1." + m->attrs[i] + " AS " + cols[i]);
            items.push_back("T1." + m->ledge + " AS ledge");
            items.push_back("T1." + m->redge + " AS redge");
            parts.push_back("SELECT " + join(items, ", ") + "\nFROM (" + m->sql + ") AS T1\nWHERE T1." + m->ledge +
                            " < T1." + m->redge);
        }
        columns[pred] = cols;
        plan.views.push_back({view_name(pred), cols, join(parts, "\nUNION\n")});
        std::string star = opts.coalesce_mapped
                               ? coalesce_sql(view_name(pred), cols, opts.variant)
                               : "SELECT * FROM " + view_name(pred);
        plan.views.push_back({star_name(pred), cols, star});
    }
    plan.convention = conv.value_or(Convention::CarryBack);

    const std::string& goal = q.goal.predicate;
    if (!heads.count(goal) && !by_pred.count(goal)) throw ValidationError("unknown predicate " + goal);
    std::set<std::string> cone = dependence_cone(p, goal);
    for (const auto& pred : cone)
        if (!heads.count(pred) && !by_pred.count(pred))
            throw ValidationError("extensional predicate " + pred + " has no mapping");

    for (const auto& pred : order) {
        if (!cone.count(pred)) continue;
        std::vector<std::string> parts;
        const std::vector<std::string>* cols = nullptr;
        for (const auto& r : p.rules) {
            if (r.is_bottom() || r.head->predicate != pred) continue;
            RuleSql rs = translate(r, columns, cols);
            if (!cols) cols = &(columns[pred] = rs.head_columns);
            parts.push_back(rs.sql);
        }
        plan.views.push_back({view_name(pred), *cols, join(parts, "\nUNION\n")});
        plan.views.push_back({star_name(pred), *cols, coalesce_sql(view_name(pred), *cols, opts.variant)});
    }

    const auto& qcols = columns.at(goal);
    if (qcols.size() != q.goal.args.size())
        throw ValidationError("query " + to_text(q.goal) + " has arity " + std::to_string(q.goal.args.size()) +
                              ", expected " + std::to_string(qcols.size()));
    std::vector<std::string> conds, items;
    std::map<std::string, std::string> seen;
    for (std::size_t i = 0; i < qcols.size(); ++i) {
        const Term& t = q.goal.args[i];
        if (!t.is_variable()) conds.push_back(qcols[i] + " = " + literal(t.name));
        else if (auto it = seen.find(t.name); it != seen.end()) conds.push_back(qcols[i] + " = " + it->second);
        else seen[t.name] = qcols[i];
        items.push_back(qcols[i]);
    }
    plan.answer_columns = qcols;
    std::vector<std::string> order_by = items;
    order_by.push_back("ledge");
    items.push_back("ledge");
    items.push_back("redge");
    plan.final_query = "SELECT " + join(items, ", ") + "\nFROM " + star_name(goal);
    if (!conds.empty()) plan.final_query += "\nWHERE " + join(conds, " AND ");
    plan.final_query += "\nORDER BY " + join(order_by, ", ");
    return plan;
}

std::string SqlPlan::to_sql() const {
    std::string out = "BEGIN;\n";
    for (const auto& v : views) out += "\nCREATE TEMP TABLE " + v.name + " AS\n" + v.sql + ";\n";
    out += "\n" + final_query + ";\n\nCOMMIT;\n";
    return out;
}

std::string SqlPlan::sidecar_json() const {
    json j;
    j["views"] = json::array();
    for (const auto& v : views) j["views"].push_back({{"name", v.name}, {"columns", v.columns}});
    j["final_query"] = final_query;
    j["answer_columns"] = answer_columns;
    j["convention"] = to_string(convention);
    return j.dump(2) + "\n";
}

std::vector<std::string> check_sql_text(std::string_view sql) {
    std::vector<std::string> problems;
    std::vector<std::string> statements;
    std::string current;
    int depth = 0;
    bool in_string = false;
    for (char c : sql) {
        if (in_string) {
            current += c;
            if (c == '\'') in_string = false;
            continue;
        }
        if (c == '\'') in_string = true;
        else if (c == '(') ++depth;
        else if (c == ')' && --depth < 0) {
            problems.push_back("unbalanced ')'");
            depth = 0;
        }
        if (c == ';' && depth == 0) {
            statements.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (in_string) problems.push_back("unterminated string literal");
    if (depth != 0) problems.push_back("unbalanced '('");
    auto trim = [](const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        return b == std::string::npos ? std::string() : s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
    };
    if (!trim(current).empty()) problems.push_back("trailing text without ';'");
    static const std::regex create(R"(CREATE TEMP TABLE \w+ AS\s+(SELECT|WITH)\b[\s\S]*)");
    static const std::regex query(R"((SELECT|WITH)\b[\s\S]*\bFROM\b[\s\S]*)");
    for (std::size_t i = 0; i < statements.size(); ++i) {
        std::string s = trim(statements[i]);
        if (s == "BEGIN" || s == "COMMIT") continue;
        if (std::regex_match(s, create) || std::regex_match(s, query)) continue;
        problems.push_back("statement " + std::to_string(i + 1) + " is not of an emitted kind: " + s.substr(0, 60));
    }
    if (statements.empty() || trim(statements.front()) != "BEGIN") problems.push_back("missing BEGIN");
    if (statements.empty() || trim(statements.back()) != "COMMIT") problems.push_back("missing COMMIT");
    return problems;
}

void load_csv_into_sqlite(const std::filesystem::path& db_path, const std::string& table,
                          const std::filesystem::path& csv_path, const std::vector<std::string>& time_columns) {
    CsvTable csv = load_csv(csv_path);
    std::vector<bool> is_time(csv.header.size(), false), numeric(csv.header.size(), true);
    for (const auto& c : time_columns) is_time[csv.column(c)] = true;
    static const std::regex number(R"(\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*)");
    for (const auto& row : csv.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            if (!row[i].empty() && !std::regex_match(row[i], number)) numeric[i] = false;

    Db db(db_path, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
    std::vector<std::string> defs, marks;
    for (std::size_t i = 0; i < csv.header.size(); ++i) {
        defs.push_back("\"" + csv.header[i] + "\" " + (is_time[i] || numeric[i] ? "NUMERIC" : "TEXT"));
        marks.push_back("?");
    }
    db.exec("DROP TABLE IF EXISTS \"" + table + "\"");
    db.exec("CREATE TABLE \"" + table + "\" (" + join(defs, ", ") + ")");
    db.exec("BEGIN");
    Stmt ins(db, "INSERT INTO \"" + table + "\" VALUES (" + join(marks, ", ") + ")");
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            int col = static_cast<int>(i) + 1;
            if (row[i].empty()) {
                sqlite3_bind_null(ins.handle, col);
            } else if (is_time[i]) {
                TimePoint t;
                try {
                    t = parse_timestamp(row[i]);
                } catch (const Error& e) {
                    throw IngestError(csv_path.string() + ": line " + std::to_string(csv.lines[r]) + ": " + e.what());
                }
                sqlite3_bind_double(ins.handle, col, t.to_double());
            } else {
                sqlite3_bind_text(ins.handle, col, row[i].c_str(), -1, SQLITE_TRANSIENT);
            }
        }
        if (sqlite3_step(ins.handle) != SQLITE_DONE) throw SqlGenError(sqlite3_errmsg(db.handle));
        sqlite3_reset(ins.handle);
    }
    db.exec("COMMIT");
}

std::vector<Answer> execute_sqlite(const SqlPlan& plan, const std::filesystem::path& db_path) {
    Db db(db_path, SQLITE_OPEN_READWRITE);
    db.exec("BEGIN");
    for (const auto& v : plan.views) db.exec("CREATE TEMP TABLE " + v.name + " AS\n" + v.sql);
    std::vector<Answer> out;
    {
        Stmt st(db, plan.final_query);
        int n = static_cast<int>(plan.answer_columns.size());
        int rc;
        while ((rc = sqlite3_step(st.handle)) == SQLITE_ROW) {
            Answer a{{}, Interval::all()};
            for (int i = 0; i < n; ++i) {
                const unsigned char* txt = sqlite3_column_text(st.handle, i);
                a.tuple.push_back(txt ? reinterpret_cast<const char*>(txt) : "");
            }
            TimePoint lo = TimePoint::from_double(sqlite3_column_double(st.handle, n));
            TimePoint hi = TimePoint::from_double(sqlite3_column_double(st.handle, n + 1));
            bool forward = plan.convention == Convention::CarryForward;
            auto iv = Interval::make(lo, forward, hi, !forward);
            if (!iv) continue;
            a.interval = *iv;
            out.push_back(std::move(a));
        }
        if (rc != SQLITE_DONE) throw SqlGenError(std::string("sqlite: ") + sqlite3_errmsg(db.handle));
    }
    db.exec("COMMIT");
    std::sort(out.begin(), out.end(), [](const Answer& a, const Answer& b) {
        if (a.tuple != b.tuple) return a.tuple < b.tuple;
        return precedes(a.interval, b.interval);
    });
    return out;
}

}  // namespace dmtl
