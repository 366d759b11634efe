#pragma once

#include "gmfit/gmm_core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gmfit {

struct FitConfig {
    std::size_t k = 4;
    double epsilon = 1e-8;          // stop once the log-likelihood gain drops below this
    std::size_t max_iterations = 1000;
    std::size_t restarts = 8;
    std::uint64_t seed = 20030414;

    /// Throws DomainError on k == 0, epsilon <= 0, max_iterations == 0 or restarts == 0.
    void validate() const;
};

struct FitResult {
    MixtureModel model;
    /// loglik_trace[0] is the initial model; entry t follows the t-th EM iteration.
    std::vector<double> loglik_trace;
    std::size_t iterations = 0;
    bool converged = false;
    std::uint64_t seed_used = 0;
    std::size_t restart_index = 0;
    /// One message per discarded (collapsed) restart.
    std::vector<std::string> warnings;

    double final_log_likelihood() const { return loglik_trace.back(); }
};

struct LoglikTerms {
    double term_weights = 0.0;   // sum g_ij ln p_j
    double term_density = 0.0;   // sum g_ij ln f(x_i; theta_j)
    double term_entropy = 0.0;   // sum g_ij ln g_ij

    /// Equals the log-likelihood when the responsibilities are the model's own posterior.
    double combined() const { return term_weights + term_density - term_entropy; }
};

/// Population (1/n) mean and standard deviation.
struct Moments {
    double mean = 0.0;
    double std = 0.0;
};
Moments sample_moments(std::span<const double> sample);

/// Linear-interpolation quantile of an ascending-sorted sample, p in [0, 1].
double sorted_quantile(std::span<const double> sorted, double p);

/// Starting point for one restart: means at the (2r-1)/(2k) quantiles
/// (r = 1..k), jittered by uniform noise of half-width
/// 0.25 * restart_index * std / k; all stds equal the sample std; uniform weights.
MixtureModel init_model(std::span<const double> sample, std::size_t k, std::uint64_t seed,
                        std::size_t restart_index);

ResponsibilityMatrix e_step(const MixtureModel& model, std::span<const double> sample);

/// Closed-form maximization given responsibilities. Stds are floored at
/// 1e-8 times the sample std. Throws ComponentCollapse when a column sum is below 1e-300.
MixtureModel m_step(const ResponsibilityMatrix& resp, std::span<const double> sample);

LoglikTerms loglik_decomposition(const MixtureModel& model, const ResponsibilityMatrix& resp,
                                 std::span<const double> sample);

/// Runs a single EM restart to convergence. Throws ComponentCollapse.
FitResult fit_single(std::span<const double> sample, const FitConfig& config,
                     std::size_t restart_index);

/// Best of config.restarts EM runs by final log-likelihood (ties go to the
/// lower restart index). Components are returned sorted by ascending weight.
FitResult fit(std::span<const double> sample, const FitConfig& config);

/// Sorts components by ascending weight, then mean, then std.
MixtureModel sort_by_weight(const MixtureModel& model);

}  // namespace gmfit
