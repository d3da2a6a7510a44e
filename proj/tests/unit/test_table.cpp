#include <gtest/gtest.h>

#include "dmtl/errors.hpp"
#include "dmtl/table.hpp"
#include "table_oracle.hpp"

using namespace dmtl;

namespace {

Interval iv(const char* s) { return Interval::parse(s); }

TemporalTable table(std::vector<std::string> attrs, std::vector<Row> rows) { return {std::move(attrs), std::move(rows)}; }

}  // namespace

TEST(Table, CoalesceExamples) {
    auto t = table({"x"}, {{{"a"}, iv("[0,1]")}, {{"a"}, iv("(1,2)")}, {{"b"}, iv("[5,5]")}});
    auto c = coalesce_table(t);
    EXPECT_EQ(c.rows, (std::vector<Row>{{{"a"}, iv("[0,2)")}, {{"b"}, iv("[5,5]")}}));
    auto gap = table({"x"}, {{{"a"}, iv("(0,1)")}, {{"a"}, iv("(1,2)")}});
    EXPECT_EQ(coalesce_table(gap).rows, gap.rows);
    auto bad = table({"x"}, {{{"a"}, iv("[3,4]")}, {{"a"}, iv("[0,1]")}});
    EXPECT_THROW(coalesce_table(bad), IntegrityError);
}

TEST(Table, JoinExamples) {
    auto a = table({"x"}, {{{"a"}, iv("[0,4]")}});
    auto b = table({"x"}, {{{"a"}, iv("(2,6)")}});
    EXPECT_EQ(temporal_join(a, b).rows, (std::vector<Row>{{{"a"}, iv("(2,4]")}}));
    auto c = table({"x"}, {{{"b"}, iv("(2,6)")}});
    EXPECT_TRUE(temporal_join(a, c).empty());
}

TEST(Table, ProjectRestoresOrder) {
    auto t = table({"x"}, {{{"a"}, iv("[1,1]")}, {{"b"}, iv("[0,0]")}});
    auto p = project(t, {});
    EXPECT_EQ(p.rows, (std::vector<Row>{{{}, iv("[0,0]")}, {{}, iv("[1,1]")}}));
    EXPECT_TRUE(is_toa(p));
}

TEST(Table, UnionOfDisjointTables) {
    auto a = table({"x"}, {{{"a"}, iv("[0,1]")}});
    auto b = table({"x"}, {{{"b"}, iv("[0,1]")}});
    auto u = union_tables(a, b);
    EXPECT_EQ(u.size(), 2u);
    EXPECT_TRUE(is_toa(u));
    EXPECT_THROW(union_tables(a, table({"y"}, {})), ContractError);
}

TEST(Table, AtomView) {
    auto t = table({"a0", "a1"}, {{{"a", "a"}, iv("[0,1]")}, {{"a", "b"}, iv("[0,1]")}});
    auto v = atom_view(t, Atom{"P", {Term::var("x"), Term::var("x")}});
    EXPECT_EQ(v.attrs, (std::vector<std::string>{"x"}));
    EXPECT_EQ(v.rows, (std::vector<Row>{{{"a"}, iv("[0,1]")}}));
    auto w = atom_view(t, Atom{"P", {Term::constant("a"), Term::var("y")}});
    EXPECT_EQ(w.size(), 2u);
}

TEST(TableOracle, CoalesceMatchesPointSets) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        auto t = oracle::random_toa_table(rng, {"x"}, 14);
        ASSERT_TRUE(is_toa(t));
        auto c = coalesce_table(t);
        EXPECT_TRUE(is_toa(c));
        EXPECT_TRUE(oracle::maximal(c));
        EXPECT_EQ(oracle::points(c), oracle::points(t));
        EXPECT_EQ(coalesce_table(c).rows, c.rows);
    }
}

TEST(TableOracle, CoalesceLargeGroups) {
    std::mt19937_64 rng(12);
    TemporalTable t{{"x"}, {}};
    for (int i = 0; i < 1000; ++i) t.rows.push_back({{"a"}, oracle::random_interval(rng, false)});
    t = sort_toa(t);
    auto c = coalesce_table(t);
    EXPECT_TRUE(oracle::maximal(c));
    EXPECT_EQ(oracle::points(c), oracle::points(t));
}

TEST(TableOracle, JoinMatchesCrossProduct) {
    std::mt19937_64 rng(13);
    const std::vector<std::vector<std::string>> schemas{{}, {"x"}, {"y"}, {"x", "y"}, {"y", "z"}};
    std::uniform_int_distribution<std::size_t> pick(0, schemas.size() - 1);
    for (int round = 0; round < 200; ++round) {
        auto a = oracle::random_coalesced_table(rng, schemas[pick(rng)]);
        auto b = oracle::random_coalesced_table(rng, schemas[pick(rng)]);
        auto j = temporal_join(a, b);
        std::vector<std::string> attrs;
        auto expected = oracle::join_points(a, b, attrs);
        EXPECT_EQ(j.attrs, attrs);
        EXPECT_EQ(oracle::points(j), expected);
        EXPECT_TRUE(is_toa(j));
    }
}

TEST(TableOracle, ProjectMatchesNaive) {
    std::mt19937_64 rng(14);
    for (int round = 0; round < 200; ++round) {
        auto t = oracle::random_toa_table(rng, {"x", "y"}, 14);
        std::vector<std::vector<std::string>> targets{{}, {"x"}, {"y"}, {"y", "x"}};
        for (const auto& attrs : targets) {
            auto p = project(t, attrs);
            EXPECT_TRUE(is_toa(p));
            EXPECT_EQ(oracle::canonical_rows(p.rows), oracle::naive_project(t, attrs));
            EXPECT_EQ(oracle::canonical_rows(p.rows).size(), p.size());
        }
    }
}

TEST(TableOracle, UnionMatchesNaive) {
    std::mt19937_64 rng(15);
    for (int round = 0; round < 200; ++round) {
        auto a = oracle::random_toa_table(rng, {"x"}, 10);
        auto b = oracle::random_toa_table(rng, {"x"}, 10);
        auto u = union_tables(a, b);
        EXPECT_TRUE(is_toa(u));
        EXPECT_EQ(oracle::canonical_rows(u.rows), oracle::naive_union(a, b));
        EXPECT_EQ(oracle::points(coalesce_table(u)), oracle::points(u));
    }
}
