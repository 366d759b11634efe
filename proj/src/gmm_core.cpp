#include "gmfit/gmm_core.hpp"

#include "gmfit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gmfit {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // ln(sqrt(2*pi))

void require_positive_std(double std) {
    if (!(std > 0.0) || !std::isfinite(std)) {
        throw DomainError("standard deviation must be positive and finite, got " +
                          std::to_string(std));
    }
}

void validate_component(const GaussianComponent& c, std::size_t j) {
    const std::string label = "component " + std::to_string(j + 1) + ": ";
    if (!(c.std > 0.0) || !std::isfinite(c.std)) {
        throw DomainError(label + "std must be > 0");
    }
    if (!std::isfinite(c.mean)) {
        throw DomainError(label + "mean must be finite");
    }
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
        throw DomainError(label + "weight must be >= 0");
    }
}

double weight_sum(const std::vector<GaussianComponent>& components) {
    double sum = 0.0;
    for (const auto& c : components) sum += c.weight;
    return sum;
}

void rescale(std::vector<GaussianComponent>& components, double sum) {
    for (auto& c : components) c.weight /= sum;
}

void require_nonempty(std::span<const double> sample) {
    if (sample.empty()) throw DomainError("sample must be nonempty");
}

}  // namespace

MixtureModel::MixtureModel(std::vector<GaussianComponent> components) {
    if (components.empty()) throw DomainError("mixture needs at least one component");
    for (std::size_t j = 0; j < components.size(); ++j) {
        validate_component(components[j], j);
        if (components[j].weight > 1.0) {
            throw DomainError("component " + std::to_string(j + 1) + ": weight must be <= 1");
        }
    }
    const double sum = weight_sum(components);
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        throw DomainError("weights must sum to 1 (within 1e-6), got " + std::to_string(sum));
    }
    rescale(components, sum);
    components_ = std::move(components);
}

MixtureModel::MixtureModel(Unchecked, std::vector<GaussianComponent> components)
    : components_(std::move(components)) {}

MixtureModel MixtureModel::from_rounded(std::vector<GaussianComponent> components) {
    if (components.empty()) throw DomainError("mixture needs at least one component");
    for (std::size_t j = 0; j < components.size(); ++j) validate_component(components[j], j);
    const double sum = weight_sum(components);
    if (!(sum > 0.0)) throw DomainError("weights must have a positive sum");
    rescale(components, sum);
    return MixtureModel(Unchecked{}, std::move(components));
}

double ResponsibilityMatrix::column_sum(std::size_t j) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, j);
    return sum;
}

double gaussian_log_pdf(double x, double mean, double std) {
    require_positive_std(std);
    const double z = (x - mean) / std;
    return -0.5 * z * z - std::log(std) - kLogSqrtTwoPi;
}

double gaussian_pdf(double x, double mean, double std) {
    require_positive_std(std);
    const double z = (x - mean) / std;
    return std::exp(-0.5 * z * z) / (std * std::sqrt(2.0 * std::numbers::pi));
}

// glibc's erfc carries ~1 ulp accuracy over the whole real line, which keeps
// relative accuracy in the lower tail where 1 - erf would cancel.
double gaussian_cdf(double x, double mean, double std) {
    require_positive_std(std);
    const double z = (x - mean) / std;
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double mixture_pdf(const MixtureModel& model, double x) {
    double sum = 0.0;
    for (const auto& c : model.components()) sum += c.weight * gaussian_pdf(x, c.mean, c.std);
    return sum;
}

double mixture_cdf(const MixtureModel& model, double x) {
    double sum = 0.0;
    for (const auto& c : model.components()) sum += c.weight * gaussian_cdf(x, c.mean, c.std);
    return std::clamp(sum, 0.0, 1.0);
}

namespace {

// Per-component pieces of ln p_j + ln f(x; mean_j, std_j) that do not depend on x.
struct LogJointTable {
    std::vector<double> offset;  // ln p_j - ln std_j - ln sqrt(2 pi)
    std::vector<double> mean;
    std::vector<double> inv_std;

    explicit LogJointTable(const MixtureModel& model) {
        for (const auto& c : model.components()) {
            offset.push_back(std::log(c.weight) - std::log(c.std) - kLogSqrtTwoPi);
            mean.push_back(c.mean);
            inv_std.push_back(1.0 / c.std);
        }
    }
};

struct ShiftedSum {
    double shift;
    double sum;

    double log_total() const { return shift + std::log(sum); }
};

// Overwrites terms[j] with exp(ln p_j + ln f_j(x) - shift), shift being the
// largest log term, and returns the shift with the sum of the scaled terms.
ShiftedSum log_joint_terms(const LogJointTable& table, double x, std::span<double> terms) {
    double max_term = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const double z = (x - table.mean[j]) * table.inv_std[j];
        terms[j] = table.offset[j] - 0.5 * z * z;
        max_term = std::max(max_term, terms[j]);
    }
    double acc = 0.0;
    for (double& t : terms) {
        t = std::exp(t - max_term);
        acc += t;
    }
    return {max_term, acc};
}

}  // namespace

double mixture_log_pdf(const MixtureModel& model, double x) {
    std::vector<double> terms(model.size());
    return log_joint_terms(LogJointTable(model), x, terms).log_total();
}

double log_likelihood(const MixtureModel& model, std::span<const double> sample) {
    require_nonempty(sample);
    const LogJointTable table(model);
    std::vector<double> terms(model.size());
    double total = 0.0;
    for (double x : sample) total += log_joint_terms(table, x, terms).log_total();
    return total;
}

PosteriorPass posterior_with_log_likelihood(const MixtureModel& model,
                                            std::span<const double> sample) {
    require_nonempty(sample);
    const std::size_t k = model.size();
    PosteriorPass pass{ResponsibilityMatrix(sample.size(), k), 0.0};
    const LogJointTable table(model);
    std::vector<double> terms(k);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const ShiftedSum shifted = log_joint_terms(table, sample[i], terms);
        pass.log_likelihood += shifted.log_total();
        for (std::size_t j = 0; j < k; ++j) pass.resp(i, j) = terms[j] / shifted.sum;
    }
    return pass;
}

ResponsibilityMatrix posterior(const MixtureModel& model, std::span<const double> sample) {
    return posterior_with_log_likelihood(model, sample).resp;
}

}  // namespace gmfit
