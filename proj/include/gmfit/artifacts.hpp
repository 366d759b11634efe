#pragma once

#include "gmfit/em_fit.hpp"
#include "gmfit/gmm_core.hpp"
#include "gmfit/gof.hpp"
#include "gmfit/returns_ingest.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gmfit {

/// Component table for one index, plus KS diagnostics of the mixture and of
/// a single-Gaussian baseline fitted to the same returns.
struct ReportTable {
    std::string source_name;
    Date period_start;
    Date period_end;
    std::vector<GaussianComponent> rows;  // ascending weight
    KsResult mixture_ks;
    GaussianComponent baseline;
    KsResult baseline_ks;
    double log_likelihood = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t restart_index = 0;
    std::vector<std::string> warnings;
};

/// Fits the mixture and the k = 1 baseline and evaluates both with KS.
ReportTable build_report(const ReturnSample& sample, const FitConfig& config);

/// Table with 3-decimal Weight / Mean / Standard Deviation columns.
std::string format_report_text(const ReportTable& report);
std::string format_report_json(const ReportTable& report);

/// Equal-width bins over [min, max] with density normalization.
struct Histogram {
    double origin = 0.0;
    double width = 1.0;
    std::vector<double> density;

    double at(double x) const;
};

/// Freedman-Diaconis bin width 2 IQR n^(-1/3); falls back to Scott's rule when the IQR is 0.
Histogram freedman_diaconis_histogram(std::span<const double> sample);

struct PlotData {
    static constexpr std::size_t kGridPoints = 512;

    std::vector<double> x;
    std::vector<double> hist_density;
    std::vector<double> mixture_pdf;
    std::vector<std::vector<double>> components;  // weighted, one column per component
    std::vector<double> gaussian_baseline;
};

/// Curves on 512 points spanning [min - 3 sd, max + 3 sd] of the sample.
PlotData make_plot_data(const MixtureModel& model, std::span<const double> sample);

/// TSV: x, hist_density, mixture_pdf, component_1..component_k, gaussian_baseline.
void write_plot_tsv(std::ostream& out, const PlotData& data);

/// count seeded draws: component chosen by weight, then a Gaussian draw.
std::vector<double> synthesize_returns(const MixtureModel& model, std::size_t count,
                                       std::uint64_t seed);

/// Price CSV in load_prices format: P_t = start_price * exp(cumulative return),
/// dated on consecutive weekdays from start_date (moved forward off a weekend).
void write_price_csv(std::ostream& out, std::span<const double> returns, Date start_date,
                     double start_price);

}  // namespace gmfit
