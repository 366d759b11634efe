#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gmfit {

using Date = std::chrono::year_month_day;

/// Parses yyyy-mm-dd. Throws DomainError on anything else or an invalid calendar date.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

struct PriceObservation {
    Date date;
    double close = 0.0;

    friend bool operator==(const PriceObservation&, const PriceObservation&) = default;
};

/// Closing prices with strictly increasing dates and positive closes.
struct PriceSeries {
    std::vector<PriceObservation> observations;
    std::string source_name;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

/// Log daily differences ln(close[t+1] / close[t]) of consecutive trading rows.
struct ReturnSample {
    std::vector<double> values;
    std::string source_name;
    Date period_start;
    Date period_end;

    std::size_t size() const noexcept { return values.size(); }
};

/// Reads a CSV with a header row naming "date" and "close" (case-insensitive,
/// other columns ignored). Rows are returned sorted by date.
/// Throws ParseError for malformed input, duplicate dates or non-positive closes.
PriceSeries load_prices(std::istream& input, std::string source_name);

/// Keeps observations with start <= date <= end.
/// Throws DomainError if start > end, InsufficientData if fewer than 2 rows remain.
PriceSeries slice_period(const PriceSeries& series, const Date& start, const Date& end);

/// Throws InsufficientData for fewer than 2 observations.
ReturnSample log_returns(const PriceSeries& series);

}  // namespace gmfit
