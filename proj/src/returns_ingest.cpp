#include "gmfit/returns_ingest.hpp"

#include "gmfit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>

namespace gmfit {

namespace {

std::string_view trim(std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

template <typename Int>
bool parse_digits(std::string_view s, Int& out) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::optional<double> parse_double(std::string_view s) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    text = trim(text);
    int year = 0;
    unsigned month = 0;
    unsigned day = 0;
    const bool shape_ok = text.size() == 10 && text[4] == '-' && text[7] == '-' &&
                          parse_digits(text.substr(0, 4), year) &&
                          parse_digits(text.substr(5, 2), month) &&
                          parse_digits(text.substr(8, 2), day);
    const Date date{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!shape_ok || !date.ok()) {
        throw DomainError("invalid date '" + std::string(text) + "', expected yyyy-mm-dd");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

PriceSeries load_prices(std::istream& input, std::string source_name) {
    std::string line;
    std::size_t line_no = 0;

    std::optional<std::size_t> date_col;
    std::optional<std::size_t> close_col;
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::string_view header = line;
        if (line_no == 1 && header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
        const auto fields = split_commas(header);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string name = lowercase(fields[c]);
            if (name == "date" && !date_col) date_col = c;
            if (name == "close" && !close_col) close_col = c;
        }
        if (!date_col || !close_col) {
            throw ParseError(line_no, "header must contain 'date' and 'close' columns");
        }
        break;
    }
    if (!date_col) throw ParseError(0, "empty price file");

    PriceSeries series{{}, std::move(source_name)};
    const std::size_t needed = std::max(*date_col, *close_col) + 1;
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() < needed) {
            throw ParseError(line_no, "expected at least " + std::to_string(needed) + " fields");
        }
        Date date;
        try {
            date = parse_date(fields[*date_col]);
        } catch (const DomainError& e) {
            throw ParseError(line_no, e.what());
        }
        const auto close = parse_double(fields[*close_col]);
        if (!close || !std::isfinite(*close)) {
            throw ParseError(line_no, "unparsable close '" + std::string(fields[*close_col]) + "'");
        }
        if (!(*close > 0.0)) {
            throw ParseError(line_no, "non-positive close " + std::string(fields[*close_col]));
        }
        series.observations.push_back({date, *close});
    }
    if (series.observations.empty()) throw ParseError(0, "price file has no data rows");

    std::stable_sort(series.observations.begin(), series.observations.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });
    const auto dup = std::adjacent_find(series.observations.begin(), series.observations.end(),
                                        [](const auto& a, const auto& b) { return a.date == b.date; });
    if (dup != series.observations.end()) {
        throw ParseError(0, "duplicate date " + format_date(dup->date));
    }
    return series;
}

PriceSeries slice_period(const PriceSeries& series, const Date& start, const Date& end) {
    if (end < start) throw DomainError("period start is after period end");
    PriceSeries out{{}, series.source_name};
    for (const auto& obs : series.observations) {
        if (start <= obs.date && obs.date <= end) out.observations.push_back(obs);
    }
    if (out.observations.size() < 2) {
        throw InsufficientData("period " + format_date(start) + " .. " + format_date(end) +
                               " holds " + std::to_string(out.observations.size()) +
                               " observation(s); at least 2 are needed");
    }
    return out;
}

ReturnSample log_returns(const PriceSeries& series) {
    const auto& obs = series.observations;
    if (obs.size() < 2) {
        throw InsufficientData("at least 2 price observations are needed for a return");
    }
    ReturnSample sample{{}, series.source_name, obs.front().date, obs.back().date};
    sample.values.reserve(obs.size() - 1);
    for (std::size_t t = 0; t + 1 < obs.size(); ++t) {
        sample.values.push_back(std::log(obs[t + 1].close / obs[t].close));
    }
    return sample;
}

}  // namespace gmfit
