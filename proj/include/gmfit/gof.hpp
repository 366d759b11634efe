#pragma once

#include "gmfit/gmm_core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace gmfit {

/// Right-continuous empirical distribution function of a sample.
/// Tied observations merge into one taller step.
class EmpiricalCdf {
public:
    /// Throws DomainError on an empty sample.
    explicit EmpiricalCdf(std::span<const double> sample);

    /// Fraction of observations <= x.
    double operator()(double x) const;

    /// Distinct observations, ascending.
    std::span<const double> points() const noexcept { return points_; }
    /// heights()[i] is the value of the function at points()[i].
    std::span<const double> heights() const noexcept { return heights_; }
    std::size_t n() const noexcept { return n_; }

private:
    std::vector<double> points_;
    std::vector<double> heights_;
    std::size_t n_ = 0;
};

EmpiricalCdf empirical_cdf(std::span<const double> sample);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Exact sup-distance between the model CDF and the empirical CDF of the sample.
double ks_statistic(const MixtureModel& model, std::span<const double> sample);

/// Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), in [0, 1].
double kolmogorov_q(double lambda);

/// Asymptotic one-sample p-value with lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * statistic.
/// The parameters are usually estimated from the same sample, so this is not an
/// exact test level; it is reported as-is.
double ks_pvalue(double statistic, std::size_t n);

KsResult ks_test(const MixtureModel& model, std::span<const double> sample);

}  // namespace gmfit
