#include "gmfit/em_fit.hpp"

#include "gmfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

namespace gmfit {

namespace {

constexpr double kCollapseThreshold = 1e-300;
constexpr double kStdFloorFraction = 1e-8;
constexpr double kJitterFraction = 0.25;

// Uniform in [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementation.
double symmetric_unit(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

}  // namespace

void FitConfig::validate() const {
    if (k == 0) throw DomainError("k must be >= 1");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    if (max_iterations == 0) throw DomainError("max_iterations must be >= 1");
    if (restarts == 0) throw DomainError("restarts must be >= 1");
}

Moments sample_moments(std::span<const double> sample) {
    if (sample.empty()) throw DomainError("sample must be nonempty");
    const double n = static_cast<double>(sample.size());
    double sum = 0.0;
    for (double x : sample) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / n)};
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DomainError("sample must be nonempty");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

MixtureModel init_model(std::span<const double> sample, std::size_t k, std::uint64_t seed,
                        std::size_t restart_index) {
    if (k == 0) throw DomainError("k must be >= 1");
    if (sample.size() < k) {
        throw DomainError("sample of size " + std::to_string(sample.size()) +
                          " is smaller than k = " + std::to_string(k));
    }
    const Moments moments = sample_moments(sample);
    if (!(moments.std > 0.0)) throw DomainError("sample has zero variance");

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart_index)};
    std::mt19937_64 rng(seq);
    const double jitter = kJitterFraction * moments.std / static_cast<double>(k) *
                          static_cast<double>(restart_index);

    std::vector<GaussianComponent> components;
    components.reserve(k);
    const double weight = 1.0 / static_cast<double>(k);
    for (std::size_t r = 1; r <= k; ++r) {
        const double p = static_cast<double>(2 * r - 1) / static_cast<double>(2 * k);
        double mean = sorted_quantile(sorted, p);
        if (restart_index > 0) mean += jitter * symmetric_unit(rng);
        components.push_back({weight, mean, moments.std});
    }
    return MixtureModel::from_rounded(std::move(components));
}

ResponsibilityMatrix e_step(const MixtureModel& model, std::span<const double> sample) {
    return posterior(model, sample);
}

MixtureModel m_step(const ResponsibilityMatrix& resp, std::span<const double> sample) {
    if (resp.rows() != sample.size()) {
        throw DomainError("responsibility rows (" + std::to_string(resp.rows()) +
                          ") do not match sample size (" + std::to_string(sample.size()) + ")");
    }
    if (resp.cols() == 0) throw DomainError("responsibilities have no components");
    const Moments moments = sample_moments(sample);
    const double std_floor = kStdFloorFraction * moments.std;
    const double n = static_cast<double>(sample.size());

    std::vector<GaussianComponent> components;
    components.reserve(resp.cols());
    for (std::size_t j = 0; j < resp.cols(); ++j) {
        const double mass = resp.column_sum(j);
        if (!(mass >= kCollapseThreshold)) throw ComponentCollapse(j + 1);

        double weighted_sum = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) weighted_sum += resp(i, j) * sample[i];
        const double mean = weighted_sum / mass;

        double weighted_ss = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            const double d = sample[i] - mean;
            weighted_ss += resp(i, j) * d * d;
        }
        // The weighted mean squared deviation is the variance; std is its root.
        double std = std::sqrt(weighted_ss / mass);
        if (!(std >= std_floor)) std = std_floor;
        if (!(std > 0.0)) throw DomainError("sample has zero variance");

        components.push_back({mass / n, mean, std});
    }
    return MixtureModel::from_rounded(std::move(components));
}

LoglikTerms loglik_decomposition(const MixtureModel& model, const ResponsibilityMatrix& resp,
                                 std::span<const double> sample) {
    if (resp.rows() != sample.size() || resp.cols() != model.size()) {
        throw DomainError("responsibility matrix shape does not match model and sample");
    }
    LoglikTerms terms;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = 0; j < model.size(); ++j) {
            const double g = resp(i, j);
            if (g == 0.0) continue;  // x ln x -> 0
            const auto& c = model[j];
            terms.term_weights += g * std::log(c.weight);
            terms.term_density += g * gaussian_log_pdf(sample[i], c.mean, c.std);
            terms.term_entropy += g * std::log(g);
        }
    }
    return terms;
}

FitResult fit_single(std::span<const double> sample, const FitConfig& config,
                     std::size_t restart_index) {
    config.validate();
    MixtureModel model = init_model(sample, config.k, config.seed, restart_index);
    PosteriorPass pass = posterior_with_log_likelihood(model, sample);

    FitResult result{model, {pass.log_likelihood}, 0, false, config.seed, restart_index, {}};
    while (result.iterations < config.max_iterations) {
        model = m_step(pass.resp, sample);
        ++result.iterations;
        pass = posterior_with_log_likelihood(model, sample);
        if (!std::isfinite(pass.log_likelihood)) {
            throw FitError("non-finite log-likelihood at iteration " +
                           std::to_string(result.iterations));
        }
        const double gain = pass.log_likelihood - result.loglik_trace.back();
        result.loglik_trace.push_back(pass.log_likelihood);
        if (gain < config.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.model = std::move(model);
    return result;
}

MixtureModel sort_by_weight(const MixtureModel& model) {
    std::vector<GaussianComponent> components(model.components().begin(),
                                              model.components().end());
    std::stable_sort(components.begin(), components.end(),
                     [](const GaussianComponent& a, const GaussianComponent& b) {
                         if (a.weight != b.weight) return a.weight < b.weight;
                         if (a.mean != b.mean) return a.mean < b.mean;
                         return a.std < b.std;
                     });
    return MixtureModel::from_rounded(std::move(components));
}

FitResult fit(std::span<const double> sample, const FitConfig& config) {
    config.validate();
    if (sample.size() < config.k) {
        throw DomainError("sample of size " + std::to_string(sample.size()) +
                          " is smaller than k = " + std::to_string(config.k));
    }

    std::vector<std::string> warnings;
    std::optional<FitResult> best;
    // Restarts run in index order; a strict comparison keeps the lowest index on ties.
    for (std::size_t r = 0; r < config.restarts; ++r) {
        try {
            FitResult candidate = fit_single(sample, config, r);
            if (!best || candidate.final_log_likelihood() > best->final_log_likelihood()) {
                best = std::move(candidate);
            }
        } catch (const ComponentCollapse& e) {
            warnings.push_back("restart " + std::to_string(r) + " discarded: " + e.what());
        } catch (const FitError& e) {
            warnings.push_back("restart " + std::to_string(r) + " discarded: " + e.what());
        }
    }
    if (!best) {
        throw FitError("all " + std::to_string(config.restarts) + " restarts collapsed");
    }
    best->model = sort_by_weight(best->model);
    best->warnings = std::move(warnings);
    return std::move(*best);
}

}  // namespace gmfit
