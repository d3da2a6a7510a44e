#include <gtest/gtest.h>

#include "dmtl/errors.hpp"
#include "dmtl/time_point.hpp"

using dmtl::TimePoint;

TEST(TimePoint, AddsExactly) {
    EXPECT_EQ(TimePoint::parse("1.5") + TimePoint::parse("0.25"), TimePoint::parse("1.75"));
    EXPECT_EQ(TimePoint::parse("0.625") + TimePoint::parse("0.375"), TimePoint(1));
    EXPECT_EQ(TimePoint(3) + TimePoint::pos_inf(), TimePoint::pos_inf());
    EXPECT_EQ(TimePoint(3) - TimePoint::pos_inf(), TimePoint::neg_inf());
}

TEST(TimePoint, OppositeInfinitiesAreUndefined) {
    EXPECT_THROW(TimePoint::pos_inf() + TimePoint::neg_inf(), dmtl::UndefinedSum);
    EXPECT_THROW(TimePoint::neg_inf() + TimePoint::pos_inf(), dmtl::UndefinedSum);
    EXPECT_THROW(TimePoint::pos_inf() - TimePoint::pos_inf(), dmtl::UndefinedSum);
}

TEST(TimePoint, ReducedFormIsUnique) {
    TimePoint a = TimePoint::dyadic(6, 2);
    TimePoint b = TimePoint::dyadic(3, 1);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.exponent(), 1u);
    EXPECT_EQ(TimePoint::dyadic(0, 5).exponent(), 0u);
    EXPECT_EQ(TimePoint::dyadic(8, 2), TimePoint(2));
}

TEST(TimePoint, CrossChecksAgainstCommonDenominator) {
    for (int a = -64; a <= 64; a += 7)
        for (int b = -64; b <= 64; b += 5)
            for (unsigned ea = 0; ea < 5; ++ea)
                for (unsigned eb = 0; eb < 5; ++eb) {
                    TimePoint x = TimePoint::dyadic(a, ea), y = TimePoint::dyadic(b, eb);
                    long long common = (static_cast<long long>(a) << (8 - ea)) + (static_cast<long long>(b) << (8 - eb));
                    EXPECT_EQ(x + y, TimePoint::dyadic(common, 8));
                    EXPECT_EQ(x < y, (static_cast<long long>(a) << (8 - ea)) < (static_cast<long long>(b) << (8 - eb)));
                }
}

TEST(TimePoint, OrdersInfinities) {
    EXPECT_LT(TimePoint::neg_inf(), TimePoint(-1000000));
    EXPECT_LT(TimePoint(1000000), TimePoint::pos_inf());
    EXPECT_EQ(TimePoint::pos_inf(), TimePoint::pos_inf());
}

TEST(TimePoint, ParsesUnitsAndClock) {
    EXPECT_EQ(TimePoint::parse("30m"), TimePoint(1800));
    EXPECT_EQ(TimePoint::parse("1.5m"), TimePoint(90));
    EXPECT_EQ(TimePoint::parse("6.5m"), TimePoint(390));
    EXPECT_EQ(TimePoint::parse("24h"), TimePoint(86400));
    EXPECT_EQ(TimePoint::parse("1d"), TimePoint(86400));
    EXPECT_EQ(TimePoint::parse("13:00:00"), TimePoint(46800));
    EXPECT_EQ(TimePoint::parse("13:01:17"), TimePoint(46877));
    EXPECT_EQ(TimePoint::parse("15:14"), TimePoint(54840));
    EXPECT_EQ(TimePoint::parse("-inf"), TimePoint::neg_inf());
    EXPECT_EQ(TimePoint::parse("inf"), TimePoint::pos_inf());
}

TEST(TimePoint, RejectsNonDyadicLiterals) {
    EXPECT_THROW(TimePoint::parse("0.1"), dmtl::InvalidValue);
    EXPECT_THROW(TimePoint::parse("0.1s"), dmtl::InvalidValue);
    EXPECT_THROW(TimePoint::parse("abc"), dmtl::InvalidValue);
    EXPECT_NO_THROW(TimePoint::parse("0.1m"));
}

TEST(TimePoint, Formats) {
    EXPECT_EQ(TimePoint::parse("10.625").to_string(), "10.625");
    EXPECT_EQ(TimePoint(-3).to_string(), "-3");
    EXPECT_EQ(TimePoint::pos_inf().to_string(), "inf");
    EXPECT_EQ(TimePoint(46877).to_clock(), "13:01:17");
    EXPECT_EQ(TimePoint::parse("0.5").to_clock(), "00:00:00.5");
}

TEST(TimePoint, MultiplesOf) {
    EXPECT_TRUE(TimePoint(6).is_multiple_of(TimePoint(2)));
    EXPECT_TRUE(TimePoint::parse("1.5").is_multiple_of(TimePoint::parse("0.5")));
    EXPECT_FALSE(TimePoint::parse("1.25").is_multiple_of(TimePoint::parse("0.5")));
    EXPECT_EQ(TimePoint(3).times(-4), TimePoint(-12));
    EXPECT_EQ(TimePoint(3).halved(), TimePoint::parse("1.5"));
}
