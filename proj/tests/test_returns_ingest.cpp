#include "gmfit/errors.hpp"
#include "gmfit/returns_ingest.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace gmfit {
namespace {

PriceSeries parse(const std::string& text, std::string name = "DAX") {
    std::istringstream in(text);
    return load_prices(in, std::move(name));
}

PriceSeries closes(const std::vector<double>& prices) {
    PriceSeries s{{}, "test"};
    auto day = std::chrono::sys_days{parse_date("2003-04-14")};
    for (double p : prices) {
        s.observations.push_back({Date{day}, p});
        day += std::chrono::days{1};
    }
    return s;
}

const char* kTwoRows = "date,close\n2003-04-14,2831.01\n2003-04-15,2870.40\n";

TEST(ParseDate, AcceptsIsoAndRejectsGarbage) {
    EXPECT_EQ(format_date(parse_date("2003-04-14")), "2003-04-14");
    EXPECT_THROW(parse_date("2003-4-14"), DomainError);
    EXPECT_THROW(parse_date("2003-02-30"), DomainError);
    EXPECT_THROW(parse_date("14/04/2003"), DomainError);
}

TEST(LoadPrices, TwoRows) {
    const PriceSeries s = parse(kTwoRows);
    ASSERT_EQ(s.observations.size(), 2u);
    EXPECT_EQ(s.source_name, "DAX");
    EXPECT_EQ(s.observations[0].date, parse_date("2003-04-14"));
    EXPECT_EQ(s.observations[0].close, 2831.01);
    EXPECT_EQ(s.observations[1].close, 2870.40);
}

TEST(LoadPrices, ReversedRowsAreSorted) {
    EXPECT_EQ(parse("date,close\n2003-04-15,2870.40\n2003-04-14,2831.01\n"), parse(kTwoRows));
}

TEST(LoadPrices, HeaderCaseAndExtraColumns) {
    const PriceSeries s = parse(
        "Open,High,Close,Date,Volume\r\n1,2,2831.01,2003-04-14,5\r\n1,2, 2870.40 ,2003-04-15,6\r\n\n");
    EXPECT_EQ(s, parse(kTwoRows));
}

TEST(LoadPrices, Errors) {
    EXPECT_THROW(parse("date,close\n2003-04-14,0\n"), ParseError);
    EXPECT_THROW(parse("date,close\n2003-04-14,-3\n"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("date,close\n"), ParseError);
    EXPECT_THROW(parse("when,price\n2003-04-14,1\n"), ParseError);
    EXPECT_THROW(parse("date,close\n2003-04-14,1\n2003-04-14,2\n"), ParseError);
    EXPECT_THROW(parse("date,close\n2003-04-14,nan\n"), ParseError);
}

TEST(LoadPrices, ReportsLineNumber) {
    try {
        parse("date,close\n2003-04-14,1\n2003-04-15,abc\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(SlicePeriod, Windows) {
    const PriceSeries s = parse(kTwoRows);
    EXPECT_EQ(slice_period(s, parse_date("2000-01-01"), parse_date("2010-01-01")), s);
    EXPECT_EQ(slice_period(s, parse_date("2003-04-14"), parse_date("2003-04-15")), s);
    EXPECT_THROW(slice_period(s, parse_date("2005-01-01"), parse_date("2006-01-01")),
                 InsufficientData);
    EXPECT_THROW(slice_period(s, parse_date("2003-04-15"), parse_date("2003-04-15")),
                 InsufficientData);
    EXPECT_THROW(slice_period(s, parse_date("2003-04-16"), parse_date("2003-04-14")), DomainError);
}

TEST(LogReturns, Basics) {
    EXPECT_EQ(log_returns(closes({100, 100})).values, std::vector<double>{0.0});
    EXPECT_NEAR(log_returns(closes({100, 100 * std::numbers::e})).values[0], 1.0, 1e-15);
    const auto r = log_returns(closes({100, 105, 99.75})).values;
    ASSERT_EQ(r.size(), 2u);
    // 50-digit logarithms of 1.05 and 0.95.
    EXPECT_NEAR(r[0], 0.048790164169432003065, 1e-16);
    EXPECT_NEAR(r[1], -0.051293294387550533426, 1e-16);
    EXPECT_THROW(log_returns(closes({100})), InsufficientData);
}

TEST(LogReturns, CarriesProvenance) {
    const ReturnSample r = log_returns(parse(kTwoRows));
    EXPECT_EQ(r.source_name, "DAX");
    EXPECT_EQ(r.period_start, parse_date("2003-04-14"));
    EXPECT_EQ(r.period_end, parse_date("2003-04-15"));
}

TEST(LogReturns, TelescopingScaleAndLength) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> step(0.0, 0.015);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> prices{1000.0};
        for (int t = 0; t < 250; ++t) prices.push_back(prices.back() * std::exp(step(rng)));
        const auto r = log_returns(closes(prices)).values;
        ASSERT_EQ(r.size(), prices.size() - 1);
        double sum = 0.0;
        for (double v : r) sum += v;
        EXPECT_NEAR(sum, std::log(prices.back() / prices.front()), 1e-12);

        std::vector<double> scaled;
        for (double p : prices) scaled.push_back(p * 37.3);
        const auto rs = log_returns(closes(scaled)).values;
        for (std::size_t t = 0; t < r.size(); ++t) EXPECT_NEAR(rs[t], r[t], 1e-12);
    }
}

}  // namespace
}  // namespace gmfit
