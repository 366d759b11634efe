#include "gmfit/gof.hpp"

#include "gmfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmfit {

EmpiricalCdf::EmpiricalCdf(std::span<const double> sample) : n_(sample.size()) {
    if (sample.empty()) throw DomainError("sample must be nonempty");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(n_);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const bool last_of_run = i + 1 == sorted.size() || sorted[i + 1] != sorted[i];
        if (last_of_run) {
            points_.push_back(sorted[i]);
            heights_.push_back(static_cast<double>(i + 1) / n);
        }
    }
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(points_.begin(), points_.end(), x);
    if (it == points_.begin()) return 0.0;
    return heights_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

EmpiricalCdf empirical_cdf(std::span<const double> sample) { return EmpiricalCdf(sample); }

double ks_statistic(const MixtureModel& model, std::span<const double> sample) {
    if (sample.empty()) throw DomainError("sample must be nonempty");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = mixture_cdf(model, sorted[i]);
        const double above = std::abs(f - static_cast<double>(i + 1) / n);
        const double below = std::abs(f - static_cast<double>(i) / n);
        d = std::max({d, above, below});
    }
    return d;
}

double kolmogorov_q(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    constexpr double kTermCutoff = 1e-12;
    double sum = 0.0;
    if (lambda < 0.5) {
        // The alternating series needs O(1/lambda) terms here; use the
        // theta-function dual 1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        for (int k = 1;; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * c);
            sum += term;
            if (term < kTermCutoff * sum || term == 0.0) break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
    }
    double sign = 1.0;
    for (int k = 1;; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < kTermCutoff) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double statistic, std::size_t n) {
    if (!(statistic >= 0.0 && statistic <= 1.0)) {
        throw DomainError("KS statistic must lie in [0, 1]");
    }
    if (n == 0) throw DomainError("n must be >= 1");
    const double root_n = std::sqrt(static_cast<double>(n));
    const double lambda = (root_n + 0.12 + 0.11 / root_n) * statistic;
    return kolmogorov_q(lambda);
}

KsResult ks_test(const MixtureModel& model, std::span<const double> sample) {
    const double d = ks_statistic(model, sample);
    return {d, ks_pvalue(d, sample.size()), sample.size()};
}

}  // namespace gmfit
