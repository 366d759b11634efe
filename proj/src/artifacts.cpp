#include "gmfit/artifacts.hpp"

#include "gmfit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

namespace gmfit {

namespace {

std::string fixed3(double v) {
    // Keep "-0.000" out of the tables.
    if (std::abs(v) < 0.0005) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

ReportTable build_report(const ReturnSample& sample, const FitConfig& config) {
    const FitResult mixture = fit(sample.values, config);

    FitConfig baseline_config = config;
    baseline_config.k = 1;
    baseline_config.restarts = 1;
    const FitResult baseline = fit(sample.values, baseline_config);

    ReportTable report;
    report.source_name = sample.source_name;
    report.period_start = sample.period_start;
    report.period_end = sample.period_end;
    report.rows.assign(mixture.model.components().begin(), mixture.model.components().end());
    report.mixture_ks = ks_test(mixture.model, sample.values);
    report.baseline = baseline.model[0];
    report.baseline_ks = ks_test(baseline.model, sample.values);
    report.log_likelihood = mixture.final_log_likelihood();
    report.iterations = mixture.iterations;
    report.converged = mixture.converged;
    report.restart_index = mixture.restart_index;
    report.warnings = mixture.warnings;
    return report;
}

std::string format_report_text(const ReportTable& report) {
    std::ostringstream out;
    out << "Mixture model for " << report.source_name << "\n";
    out << "period " << format_date(report.period_start) << " .. "
        << format_date(report.period_end) << ", n = " << report.mixture_ks.n << " log returns\n\n";
    out << "               Weight     Mean   Standard Deviation\n";
    for (std::size_t j = 0; j < report.rows.size(); ++j) {
        const auto& r = report.rows[j];
        std::string label = "Component " + std::to_string(j + 1);
        label.resize(std::max<std::size_t>(label.size(), 13), ' ');
        out << label << pad_left(fixed3(r.weight), 8) << pad_left(fixed3(r.mean), 9)
            << pad_left(fixed3(r.std), 21) << "\n";
    }
    out << "\nlog-likelihood " << full(report.log_likelihood) << ", " << report.iterations
        << " iterations, " << (report.converged ? "converged" : "not converged")
        << ", restart " << report.restart_index << "\n";
    out << "Gaussian mixture   KSSTAT=" << fixed3(report.mixture_ks.statistic)
        << "  D=" << full(report.mixture_ks.statistic) << "  p=" << full(report.mixture_ks.p_value)
        << "\n";
    out << "Gaussian baseline  KSSTAT=" << fixed3(report.baseline_ks.statistic)
        << "  D=" << full(report.baseline_ks.statistic)
        << "  p=" << full(report.baseline_ks.p_value) << "  mean=" << fixed3(report.baseline.mean)
        << "  std=" << fixed3(report.baseline.std) << "\n";
    return out.str();
}

std::string format_report_json(const ReportTable& report) {
    using nlohmann::json;
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"weight", r.weight}, {"mean", r.mean}, {"std", r.std}});
    }
    const auto ks = [](const KsResult& k) {
        return json{{"statistic", k.statistic}, {"p_value", k.p_value}, {"n", k.n}};
    };
    json doc{
        {"source_name", report.source_name},
        {"period_start", format_date(report.period_start)},
        {"period_end", format_date(report.period_end)},
        {"components", rows},
        {"ks", ks(report.mixture_ks)},
        {"baseline",
         {{"mean", report.baseline.mean}, {"std", report.baseline.std}, {"ks", ks(report.baseline_ks)}}},
        {"log_likelihood", report.log_likelihood},
        {"iterations", report.iterations},
        {"converged", report.converged},
        {"restart_index", report.restart_index},
        {"warnings", report.warnings},
    };
    return doc.dump(2) + "\n";
}

double Histogram::at(double x) const {
    const double end = origin + width * static_cast<double>(density.size());
    if (x < origin || x > end) return 0.0;
    const auto bin = static_cast<std::size_t>(std::floor((x - origin) / width));
    return density[std::min(bin, density.size() - 1)];
}

Histogram freedman_diaconis_histogram(std::span<const double> sample) {
    if (sample.empty()) throw DomainError("sample must be nonempty");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    const double lo = sorted.front();
    const double span = sorted.back() - lo;

    double width = 2.0 * (sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25)) *
                   std::cbrt(1.0 / n);
    if (!(width > 0.0)) width = 3.49 * sample_moments(sorted).std * std::cbrt(1.0 / n);

    Histogram hist;
    hist.origin = lo;
    if (!(span > 0.0) || !(width > 0.0)) {
        // Degenerate sample: one unit-mass bin centered on the value.
        hist.width = 1.0;
        hist.origin = lo - 0.5;
        hist.density = {1.0};
        return hist;
    }
    const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width)));
    hist.width = span / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double x : sorted) {
        const auto bin = static_cast<std::size_t>(std::floor((x - lo) / hist.width));
        ++counts[std::min(bin, bins - 1)];
    }
    hist.density.reserve(bins);
    for (std::size_t c : counts) hist.density.push_back(static_cast<double>(c) / (n * hist.width));
    return hist;
}

PlotData make_plot_data(const MixtureModel& model, std::span<const double> sample) {
    const Moments moments = sample_moments(sample);
    const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
    double lo = *min_it - 3.0 * moments.std;
    double hi = *max_it + 3.0 * moments.std;
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const Histogram hist = freedman_diaconis_histogram(sample);
    const bool has_baseline = moments.std > 0.0;

    PlotData data;
    const std::size_t m = PlotData::kGridPoints;
    data.components.assign(model.size(), std::vector<double>(m));
    for (std::size_t g = 0; g < m; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(m - 1);
        data.x.push_back(x);
        data.hist_density.push_back(hist.at(x));
        double total = 0.0;
        for (std::size_t j = 0; j < model.size(); ++j) {
            const auto& c = model[j];
            const double v = c.weight * gaussian_pdf(x, c.mean, c.std);
            data.components[j][g] = v;
            total += v;
        }
        data.mixture_pdf.push_back(total);
        data.gaussian_baseline.push_back(
            has_baseline ? gaussian_pdf(x, moments.mean, moments.std) : 0.0);
    }
    return data;
}

void write_plot_tsv(std::ostream& out, const PlotData& data) {
    out << "x\thist_density\tmixture_pdf";
    for (std::size_t j = 0; j < data.components.size(); ++j) out << "\tcomponent_" << j + 1;
    out << "\tgaussian_baseline\n";
    for (std::size_t g = 0; g < data.x.size(); ++g) {
        out << full(data.x[g]) << '\t' << full(data.hist_density[g]) << '\t'
            << full(data.mixture_pdf[g]);
        for (const auto& column : data.components) out << '\t' << full(column[g]);
        out << '\t' << full(data.gaussian_baseline[g]) << '\n';
    }
}

std::vector<double> synthesize_returns(const MixtureModel& model, std::size_t count,
                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& c : model.components()) cumulative.push_back(acc += c.weight);

    std::vector<double> draws;
    draws.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t j = std::min<std::size_t>(it - cumulative.begin(), model.size() - 1);
        draws.push_back(model[j].mean + model[j].std * standard_normal(rng));
    }
    return draws;
}

void write_price_csv(std::ostream& out, std::span<const double> returns, Date start_date,
                     double start_price) {
    using std::chrono::sys_days;
    using std::chrono::weekday;
    if (!(start_price > 0.0)) throw DomainError("start price must be positive");

    const auto next_weekday = [](sys_days d) {
        while (weekday{d} == std::chrono::Saturday || weekday{d} == std::chrono::Sunday) {
            d += std::chrono::days{1};
        }
        return d;
    };
    sys_days day = next_weekday(sys_days{start_date});
    double cumulative = 0.0;
    out << "date,close\n";
    out << format_date(Date{day}) << ',' << full(start_price) << '\n';
    for (double r : returns) {
        cumulative += r;
        day = next_weekday(day + std::chrono::days{1});
        out << format_date(Date{day}) << ',' << full(start_price * std::exp(cumulative)) << '\n';
    }
}

}  // namespace gmfit
