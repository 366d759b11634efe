#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gmfit {

/// One mixture component. Invariants: std > 0, 0 <= weight <= 1.
struct GaussianComponent {
    double weight = 1.0;
    double mean = 0.0;
    double std = 1.0;

    friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;
};

/// Weighted sum of univariate Gaussians.
///
/// The checked constructor accepts weights summing to 1 within 1e-6 and
/// rescales them to sum to 1 exactly (up to rounding); larger deviations
/// throw DomainError. Use from_rounded() for tabulated models whose weights
/// were printed at low precision.
class MixtureModel {
public:
    static constexpr double kWeightSumTolerance = 1e-6;

    explicit MixtureModel(std::vector<GaussianComponent> components);

    /// Rescales any nonnegative weights with a positive sum.
    static MixtureModel from_rounded(std::vector<GaussianComponent> components);

    std::span<const GaussianComponent> components() const noexcept { return components_; }
    std::size_t size() const noexcept { return components_.size(); }
    const GaussianComponent& operator[](std::size_t j) const { return components_[j]; }

    friend bool operator==(const MixtureModel&, const MixtureModel&) = default;

private:
    struct Unchecked {};
    MixtureModel(Unchecked, std::vector<GaussianComponent> components);

    std::vector<GaussianComponent> components_;
};

/// Row-major n x k matrix of posterior probabilities g_ij.
class ResponsibilityMatrix {
public:
    ResponsibilityMatrix() = default;
    ResponsibilityMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(entries_).subspan(i * cols_, cols_);
    }

    /// Sum over observations for component j.
    double column_sum(std::size_t j) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

double gaussian_pdf(double x, double mean, double std);
double gaussian_log_pdf(double x, double mean, double std);
double gaussian_cdf(double x, double mean, double std);

double mixture_pdf(const MixtureModel& model, double x);
double mixture_cdf(const MixtureModel& model, double x);

/// ln of the mixture density at x via log-sum-exp; finite even far in the tails.
double mixture_log_pdf(const MixtureModel& model, double x);

/// Sum over observations of ln(mixture density). Throws DomainError on an empty sample.
double log_likelihood(const MixtureModel& model, std::span<const double> sample);

ResponsibilityMatrix posterior(const MixtureModel& model, std::span<const double> sample);

/// Posterior responsibilities together with the log-likelihood of the same model;
/// both fall out of one log-sum-exp pass.
struct PosteriorPass {
    ResponsibilityMatrix resp;
    double log_likelihood = 0.0;
};

PosteriorPass posterior_with_log_likelihood(const MixtureModel& model,
                                            std::span<const double> sample);

}  // namespace gmfit
