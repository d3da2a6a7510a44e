#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dmtl/errors.hpp"
#include "dmtl/ingest.hpp"
#include "dmtl/parser.hpp"
#include "interval_oracle.hpp"

using namespace dmtl;

namespace {

const std::string kFixtures = std::string(DMTL_SOURCE_DIR) + "/fixtures/";

CsvTable csv(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

IngestConfig siemens_config() {
    IngestConfig c;
    c.timestamp_column = "time";
    c.key_columns = {"turbine"};
    c.rules = {{"ActivePowerAbove1_5", {{"active_power", Comparator::Greater, "1.5"}}}};
    c.convention = Convention::CarryForward;
    return c;
}

}  // namespace

TEST(Csv, QuotingAndLineEndings) {
    CsvTable t = csv("a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n2,\"multi\nline\",\r\n\n3,,z\n");
    ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0][1], "x, y");
    EXPECT_EQ(t.rows[0][2], "say \"hi\"");
    EXPECT_EQ(t.rows[1][1], "multi\nline");
    EXPECT_EQ(t.rows[1][2], "");
    EXPECT_EQ(t.rows[2][2], "z");
    EXPECT_EQ(t.lines, (std::vector<int>{2, 3, 6}));
}

TEST(Csv, FieldCountMismatchReportsLine) {
    try {
        csv("a,b\n1,2\n3\n");
        FAIL();
    } catch (const IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(csv("a\n\"open\n"), IngestError);
}

TEST(Ingest, Timestamps) {
    EXPECT_EQ(parse_timestamp("2013-02-15 15:14"), TimePoint(1360941240));
    EXPECT_EQ(parse_timestamp("2013-02-15T15:14:30.5"), TimePoint::parse("1360941270.5"));
    EXPECT_EQ(parse_timestamp("1970-01-01 00:00:00"), TimePoint(0));
    EXPECT_EQ(parse_timestamp("12:20:48"), TimePoint(44448));
    EXPECT_EQ(parse_timestamp("17.25"), TimePoint::parse("17.25"));
    EXPECT_THROW(parse_timestamp("2013-02-30 00:00"), InvalidValue);
    EXPECT_THROW(parse_timestamp("noon"), InvalidValue);
}

TEST(Ingest, ExactDecimalComparison) {
    EXPECT_TRUE(compare_decimal("0.15", Comparator::LessEq, "0.15"));
    EXPECT_FALSE(compare_decimal("0.150000000000000001", Comparator::LessEq, "0.15"));
    EXPECT_TRUE(compare_decimal("1.5e0", Comparator::GreaterEq, "1.5"));
    EXPECT_TRUE(compare_decimal("-2", Comparator::Less, "-1.99"));
    EXPECT_TRUE(compare_decimal("1e2", Comparator::Greater, "99.9999"));
    EXPECT_THROW(compare_decimal("abc", Comparator::Less, "1"), InvalidValue);
}

TEST(Ingest, SiemensCarryForward) {
    auto out = ingest_csv(csv("turbine,time,active_power\ntb0,12:20:48,2\ntb0,12:20:49,1.8\ntb0,12:20:52,1.7\n"),
                          siemens_config());
    const auto& t = out.at("ActivePowerAbove1_5");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].tuple, Tuple{"tb0"});
    EXPECT_EQ(t.rows[0].interval.to_string(TimeFormat::Clock), "[12:20:48,12:20:49)");
    EXPECT_EQ(t.rows[1].interval.to_string(TimeFormat::Clock), "[12:20:49,12:20:52)");
}

TEST(Ingest, WeatherCarryBack) {
    IngestConfig c;
    c.timestamp_column = "dateTime";
    c.key_columns = {"stationId"};
    c.convention = Convention::CarryBack;
    c.rules = {{"NorthWind", {{"windDir", Comparator::Less, "45"}}}};
    auto out = ingest_csv(csv("stationId,dateTime,windDir\nKBVY,15:14,10\nKMNI,15:21,240\nKBVY,15:24,10\nKMNI,15:31,220\n"), c);
    const auto& t = out.at("NorthWind");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0].tuple, Tuple{"KBVY"});
    EXPECT_EQ(t.rows[0].interval.to_string(TimeFormat::Clock), "(15:14:00,15:24:00]");
}

TEST(Ingest, SingleRowGivesNoIntervals) {
    auto out = ingest_csv(csv("turbine,time,active_power\ntb0,12:20:48,2\n"), siemens_config());
    EXPECT_TRUE(out.at("ActivePowerAbove1_5").rows.empty());
}

TEST(Ingest, UnsortedInputIsSortedPerPartition) {
    auto out = ingest_csv(csv("turbine,time,active_power\ntb1,5,2\ntb0,3,2\ntb0,1,2\ntb1,4,2\ntb0,2,2\n"), siemens_config());
    const auto& t = out.at("ActivePowerAbove1_5");
    EXPECT_TRUE(is_toa(t));
    EXPECT_EQ(to_text(t), to_text(TemporalTable{{"turbine"},
                                                {{{"tb0"}, Interval::parse("[1,2)")},
                                                 {{"tb0"}, Interval::parse("[2,3)")},
                                                 {{"tb1"}, Interval::parse("[4,5)")}}}));
    IngestConfig sorted = siemens_config();
    sorted.assume_sorted = true;
    EXPECT_THROW(ingest_csv(csv("turbine,time,active_power\ntb0,3,2\ntb0,1,2\n"), sorted), IngestError);
}

TEST(Ingest, Errors) {
    EXPECT_THROW(ingest_csv(csv("turbine,time\ntb0,1\n"), siemens_config()), IngestError);
    EXPECT_THROW(ingest_csv(csv("turbine,time,active_power\ntb0,1,2\ntb0,1,3\n"), siemens_config()), IngestError);
    try {
        ingest_csv(csv("turbine,time,active_power\ntb0,1,2\ntb0,soon,3\n"), siemens_config());
        FAIL();
    } catch (const IngestError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(ingest_csv(csv("turbine,time,active_power\ntb0,1,high\ntb0,2,3\n"), siemens_config()), IngestError);
}

TEST(Ingest, NullPolicies) {
    std::string text = "turbine,time,active_power\ntb0,1,2\ntb0,2,\ntb0,3,2\ntb0,4,2\n";
    IngestConfig skip = siemens_config();
    auto a = ingest_csv(csv(text), skip).at("ActivePowerAbove1_5");
    EXPECT_EQ(to_text(a), to_text(TemporalTable{{"turbine"},
                                                {{{"tb0"}, Interval::parse("[1,2)")}, {{"tb0"}, Interval::parse("[3,4)")}}}));
    IngestConfig ignore = siemens_config();
    ignore.null_policy = NullPolicy::IgnoreRow;
    auto b = ingest_csv(csv(text), ignore).at("ActivePowerAbove1_5");
    EXPECT_EQ(to_text(b), to_text(TemporalTable{{"turbine"},
                                                {{{"tb0"}, Interval::parse("[1,3)")}, {{"tb0"}, Interval::parse("[3,4)")}}}));
}

TEST(Ingest, ConjunctiveConditions) {
    IngestConfig c = siemens_config();
    c.rules = {{"Band", {{"active_power", Comparator::GreaterEq, "1"}, {"active_power", Comparator::Less, "2"}}}};
    auto t = ingest_csv(csv("turbine,time,active_power\ntb0,0,0.5\ntb0,1,1\ntb0,2,2\ntb0,3,1.99\ntb0,4,0\n"), c).at("Band");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].interval, Interval::parse("[1,2)"));
    EXPECT_EQ(t.rows[1].interval, Interval::parse("[3,4)"));
}

TEST(Ingest, CountBoundAndToaOnRandomSeries) {
    std::mt19937 rng(77);
    for (int round = 0; round < 100; ++round) {
        std::ostringstream text;
        text << "turbine,time,active_power\n";
        std::size_t rows = 0;
        std::set<std::string> parts;
        for (const char* tb : {"tb0", "tb1", "tb2"}) {
            int n = static_cast<int>(rng() % 6);
            int t = 0;
            for (int i = 0; i < n; ++i) {
                t += 1 + static_cast<int>(rng() % 4);
                text << tb << "," << t << "," << rng() % 4 << "\n";
                ++rows;
                parts.insert(tb);
            }
        }
        IngestConfig c = siemens_config();
        c.rules = {{"Any", {{"active_power", Comparator::GreaterEq, "0"}}},
                   {"High", {{"active_power", Comparator::Greater, "1.5"}}}};
        CsvTable table = csv(text.str());
        auto out = ingest_csv(table, c);
        EXPECT_TRUE(is_toa(out.at("Any")));
        EXPECT_TRUE(is_toa(out.at("High")));
        EXPECT_EQ(out.at("Any").rows.size(), rows - parts.size());
        EXPECT_LE(out.at("High").rows.size(), rows - parts.size());
    }
}

TEST(Ingest, ConventionsDifferOnlyAtReadings) {
    // Carry-back over values shifted one reading later governs the same
    // pairs as carry-forward, so coverage agrees off the reading instants.
    std::mt19937 rng(91);
    for (int round = 0; round < 100; ++round) {
        int n = 2 + static_cast<int>(rng() % 8);
        std::vector<int> times, values;
        int t = 0;
        for (int i = 0; i < n; ++i) {
            t += 1 + static_cast<int>(rng() % 3);
            times.push_back(t);
            values.push_back(static_cast<int>(rng() % 3));
        }
        std::ostringstream fwd, back;
        fwd << "turbine,time,active_power\n";
        back << "turbine,time,active_power\n";
        for (int i = 0; i < n; ++i) {
            fwd << "tb0," << times[i] << "," << values[i] << "\n";
            back << "tb0," << times[i] << "," << (i == 0 ? 0 : values[i - 1]) << "\n";
        }
        IngestConfig cf = siemens_config(), cb = siemens_config();
        cb.convention = Convention::CarryBack;
        auto a = ingest_csv(csv(fwd.str()), cf).at("ActivePowerAbove1_5");
        auto b = ingest_csv(csv(back.str()), cb).at("ActivePowerAbove1_5");
        for (double x : oracle::grid(0, t + 1, 0.25)) {
            bool reading = std::find(times.begin(), times.end(), static_cast<int>(x)) != times.end() &&
                           x == static_cast<int>(x);
            if (reading) continue;
            auto covers = [&](const TemporalTable& tt) {
                return std::any_of(tt.rows.begin(), tt.rows.end(),
                                   [&](const Row& r) { return oracle::from(r.interval).has(x); });
            };
            EXPECT_EQ(covers(a), covers(b)) << fwd.str() << " at " << x;
        }
    }
}

TEST(Ingest, Metadata) {
    MetadataConfig c{{{"LocatedInCounty", {"station_id", "county"}}, {"LocatedInState", {"station_id", "state"}}}};
    auto out = ingest_metadata_csv(csv("station_id,county,state\nKBVY,Essex,MA\nKMNI,Essex,MA\nKBVY,Essex,MA\n"), c);
    const auto& t = out.at("LocatedInCounty");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].tuple, (Tuple{"KBVY", "Essex"}));
    EXPECT_EQ(t.rows[0].interval, Interval::all());
    EXPECT_EQ(out.at("LocatedInState").rows.size(), 2u);
    auto empty = ingest_metadata_csv(csv(""), MetadataConfig{});
    EXPECT_TRUE(empty.empty());
    auto header_only = ingest_metadata_csv(csv("station_id,county\n"), MetadataConfig{{{"L", {"station_id", "county"}}}});
    EXPECT_TRUE(header_only.at("L").rows.empty());
}

TEST(Ingest, Replicate) {
    DataInstance d = load_data(kFixtures + "example1/data.dfacts");
    EXPECT_EQ(to_text(replicate(d, 1, TimePoint(86400))), to_text(d));
    DataInstance two = replicate(d, 2, TimePoint(86400));
    ASSERT_EQ(two.facts.size(), 6u);
    for (std::size_t i = 0; i < 3; ++i) {
        const Interval& a = d.facts[i].interval;
        const Interval& b = two.facts[3 + i].interval;
        EXPECT_EQ(two.facts[3 + i].atom, d.facts[i].atom);
        if (a.lo().is_finite()) EXPECT_EQ(b.lo(), a.lo() + TimePoint(86400));
        else EXPECT_EQ(b, a);
    }
    EXPECT_THROW(replicate(d, 2, TimePoint(10)), ContractError);
}

TEST(Ingest, ConfigFilesAndSources) {
    IngestConfig c = parse_ingest_config(R"({"timestamp": "t", "keys": ["k"], "convention": "carry-back",
        "null_policy": "ignore-row", "rules": [{"predicate": "P", "conditions": [{"column": "v", "op": ">=", "value": 0.15}]}]})");
    EXPECT_EQ(c.convention, Convention::CarryBack);
    EXPECT_EQ(c.null_policy, NullPolicy::IgnoreRow);
    ASSERT_EQ(c.rules.size(), 1u);
    EXPECT_EQ(c.rules[0].conditions[0].threshold, "0.15");
    EXPECT_THROW(parse_ingest_config(R"({"timestamp": "t", "rules": [], "convention": "sideways"})"), IngestError);
    DataInstance d = load_sources(kFixtures + "weather/sources.json");
    std::map<std::string, std::size_t> per;
    for (const auto& f : d.facts) ++per[f.atom.predicate];
    EXPECT_EQ(per["LocatedInCounty"], 7u);
    EXPECT_GT(per["TempAbove24"], 100u);
    EXPECT_GT(per["HurricaneForceWind"], 0u);
    EXPECT_GT(per["NorthWind"], 0u);
}
