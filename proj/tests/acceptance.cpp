// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "gmfit/artifacts.hpp"
#include "gmfit/em_fit.hpp"
#include "gmfit/gmm_core.hpp"
#include "gmfit/gof.hpp"
#include "gmfit/model_json.hpp"
#include "oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace gmfit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

MixtureModel dax_model() {
    // Table I, "Mixture model for DAX"; printed weights sum to 0.999.
    return MixtureModel::from_rounded(
        {{0.152, -0.002, 0.018}, {0.223, 0.001, 0.017}, {0.287, 0.004, 0.014}, {0.337, 0.001, 0.009}});
}

MixtureModel random_model(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> w(0.1, 1.0), mu(-0.02, 0.02), sd(0.004, 0.03);
    std::vector<GaussianComponent> cs(k);
    for (auto& c : cs) c = {w(rng), mu(rng), sd(rng)};
    return MixtureModel::from_rounded(cs);
}

std::vector<oracle::Component> to_oracle(const MixtureModel& m) {
    std::vector<oracle::Component> out;
    for (const auto& c : m.components()) out.push_back({c.weight, c.mean, c.std});
    return out;
}

Outcome ac1_ascent() {
    const auto start = Clock::now();
    std::mt19937_64 rng(101);
    std::size_t traces = 0;
    double worst_drop = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const MixtureModel gen = random_model(rng, 1 + rep % 4);
        const auto xs = synthesize_returns(gen, 500, 5000 + rep);
        FitConfig cfg;
        cfg.k = 1 + rep % 5;
        cfg.seed = static_cast<std::uint64_t>(rep);
        for (std::size_t r = 0; r < 3; ++r) {
            const FitResult res = fit_single(xs, cfg, r);
            ++traces;
            for (std::size_t t = 1; t < res.loglik_trace.size(); ++t) {
                worst_drop = std::max(worst_drop, res.loglik_trace[t - 1] - res.loglik_trace[t]);
            }
        }
    }
    const double elapsed = seconds_since(start);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu traces, largest decrease %.3g (limit 1e-9), %.1f s (limit 30 s)",
                  traces, worst_drop, elapsed);
    return {worst_drop <= 1e-9 && elapsed < 30.0, buf};
}

Outcome ac2_decomposition() {
    std::mt19937_64 rng(202);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const MixtureModel m = random_model(rng, 1 + rep % 5);
        const auto xs = synthesize_returns(random_model(rng, 2), 300, 6000 + rep);
        const LoglikTerms t = loglik_decomposition(m, posterior(m, xs), xs);
        const double ll = oracle::log_likelihood(to_oracle(m), xs).convert_to<double>();
        worst = std::max(worst, std::abs(t.combined() - ll) / std::abs(ll));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "50 pairs, max relative gap %.3g (limit 1e-8)", worst);
    return {worst < 1e-8, buf};
}

Outcome ac3_single_component() {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto xs = synthesize_returns(MixtureModel({{1.0, 0.0005 * rep, 0.01 + 0.001 * rep}}),
                                           200 + 37 * rep, 7000 + rep);
        // Two-pass closed form computed here, independent of the library's moments helper.
        double sum = 0.0;
        for (double x : xs) sum += x;
        const double mean = sum / xs.size();
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / xs.size());
        FitConfig cfg;
        cfg.k = 1;
        cfg.seed = rep;
        const FitResult r = fit(xs, cfg);
        worst = std::max({worst, std::abs(r.model[0].mean - mean) / std::abs(mean),
                          std::abs(r.model[0].std - sd) / sd});
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "20 samples, max relative error %.3g (limit 1e-10)", worst);
    return {worst < 1e-10, buf};
}

Outcome ac4_dax_recovery() {
    const auto start = Clock::now();
    const MixtureModel truth = dax_model();
    const auto xs = synthesize_returns(truth, 20000, 20030414);
    FitConfig cfg;
    cfg.k = 4;
    cfg.restarts = 8;
    const FitResult r = fit(xs, cfg);
    const double ll_fit = log_likelihood(r.model, xs);
    const double ll_truth = log_likelihood(truth, xs);
    const double ks = ks_statistic(r.model, xs);
    const double elapsed = seconds_since(start);
    const bool ok = ll_fit >= ll_truth - 1e-3 * 20000 && ks < 0.015 && elapsed < 60.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "lnL fit %.3f vs generator %.3f (slack 20), KS %.4f (limit 0.015), %.1f s (limit 60 s)",
                  ll_fit, ll_truth, ks, elapsed);
    return {ok, buf};
}

Outcome ac5_heavy_tails() {
    const MixtureModel gen({{0.8, 0.0, 0.005}, {0.2, 0.0, 0.03}});
    int wins = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto xs = synthesize_returns(gen, 250, 8000 + rep);
        FitConfig cfg;
        cfg.seed = rep;
        const FitResult mix = fit(xs, cfg);
        cfg.k = 1;
        cfg.restarts = 1;
        const FitResult single = fit(xs, cfg);
        if (ks_statistic(mix.model, xs) < ks_statistic(single.model, xs)) ++wins;
    }
    return {wins >= 95, std::to_string(wins) + "/100 replicates with mixture KS < Gaussian KS (need >= 95)"};
}

Outcome ac6_ks_oracle() {
    std::mt19937_64 rng(606);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const MixtureModel m = random_model(rng, 1 + rep % 5);
        const auto xs = synthesize_returns(random_model(rng, 2), 1 + (rep * 37) % 200, 9000 + rep);
        const auto cdf = [&](double x) { return mixture_cdf(m, x); };
        const double grid = oracle::dense_grid_ks(cdf, xs, -0.25, 0.25, 50001);
        worst = std::max(worst, std::abs(ks_statistic(m, xs) - grid));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "50 pairs, max |D - grid D| %.3g (limit 1e-12)", worst);
    return {worst <= 1e-12, buf};
}

Outcome ac7_distribution_free() {
    const MixtureModel truth = dax_model();
    const std::size_t n = 500;
    std::vector<double> scaled;
    for (int rep = 0; rep < 500; ++rep) {
        const auto xs = synthesize_returns(truth, n, 10000 + rep);
        scaled.push_back(std::sqrt(static_cast<double>(n)) * ks_statistic(truth, xs));
    }
    std::sort(scaled.begin(), scaled.end());
    double d = 0.0;
    const double m = static_cast<double>(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const double f = 1.0 - oracle::kolmogorov_q(scaled[i]).convert_to<double>();
        d = std::max({d, std::abs(f - (i + 1) / m), std::abs(f - i / m)});
    }
    const double p = ks_pvalue(d, scaled.size());
    char buf[120];
    std::snprintf(buf, sizeof buf, "meta-KS D = %.4f over 500 replicates, p = %.4g (need > 0.001)", d, p);
    return {p > 0.001, buf};
}

Outcome ac8_kolmogorov_series() {
    double worst = 0.0;
    const std::size_t n = 100;
    const double scale = std::sqrt(100.0) + 0.12 + 0.11 / std::sqrt(100.0);
    for (double lambda : {0.5, 1.0, 1.5, 2.0}) {
        const double expected = oracle::kolmogorov_q(lambda).convert_to<double>();
        worst = std::max(worst, std::abs(kolmogorov_q(lambda) - expected));
        // Through the public p-value path; lambda is recovered up to rounding.
        const double via_pvalue = ks_pvalue(lambda / scale, n);
        const double lambda_back = scale * (lambda / scale);
        worst = std::max(worst, std::abs(via_pvalue - oracle::kolmogorov_q(lambda_back).convert_to<double>()));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "lambda in {0.5,1,1.5,2}, max error %.3g (limit 1e-10)", worst);
    return {worst <= 1e-10, buf};
}

Outcome ac9_posterior_rows() {
    std::mt19937_64 rng(909);
    double worst = 0.0;
    std::size_t rows = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const MixtureModel m = random_model(rng, 1 + rep % 5);
        auto xs = synthesize_returns(m, 200, 11000 + rep);
        double lo = 1e300, hi = -1e300, sd = 0.0;
        for (const auto& c : m.components()) {
            lo = std::min(lo, c.mean);
            hi = std::max(hi, c.mean);
            sd = std::max(sd, c.std);
        }
        for (double mult : {50.0, 200.0, 1e4}) {
            xs.push_back(hi + mult * sd);
            xs.push_back(lo - mult * sd);
        }
        const auto g = posterior(m, xs);
        for (std::size_t i = 0; i < g.rows(); ++i) {
            double sum = 0.0;
            for (double v : g.row(i)) {
                if (!(v >= 0.0 && v <= 1.0)) worst = 1.0;
                sum += v;
            }
            worst = std::max(worst, std::abs(sum - 1.0));
            ++rows;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%zu rows incl. 50-10000 sigma outliers, max |row sum - 1| %.3g (limit 1e-12)",
                  rows, worst);
    return {worst <= 1e-12, buf};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac10_end_to_end() {
    const auto start = Clock::now();
    const fs::path dir = fs::temp_directory_path() / "gmfit_acceptance_e2e";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "dax.json") << model_to_json(dax_model());
    const std::string cli = GMFIT_CLI_PATH;

    std::vector<std::string> runs;
    for (int run = 0; run < 2; ++run) {
        const fs::path d = dir / std::to_string(run);
        fs::create_directories(d);
        const std::string q = "'" + d.string() + "/";
        const int s1 = shell(cli + " synth --model '" + (dir / "dax.json").string() +
                             "' --n 1001 --seed 42 --out " + q + "prices.csv'");
        const int s2 = shell(cli + " fit --input " + q + "prices.csv' --name DAX --seed 7 --report json" +
                             " --model-out " + q + "model.json' > " + q + "report.json'");
        const int s3 = shell(cli + " gof --input " + q + "prices.csv' --model " + q + "model.json' > " +
                             q + "gof.txt'");
        if (s1 != 0 || s2 != 0 || s3 != 0) {
            return {false, "exit codes " + std::to_string(s1) + "/" + std::to_string(s2) + "/" +
                               std::to_string(s3)};
        }
        runs.push_back(slurp(d / "prices.csv") + slurp(d / "report.json") + slurp(d / "model.json") +
                       slurp(d / "gof.txt"));
    }
    const auto report = nlohmann::json::parse(slurp(dir / "0" / "report.json"));
    const std::string gof = slurp(dir / "0" / "gof.txt");
    std::smatch m;
    const bool found = std::regex_search(gof, m, std::regex(R"(statistic: (\S+))"));
    const double gap = found ? std::abs(std::stod(m[1]) - report["ks"]["statistic"].get<double>()) : 1.0;
    const double elapsed = seconds_since(start);
    fs::remove_all(dir);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "synth -> fit -> gof exit 0, byte-identical reruns: %s, KS fit/gof gap %.3g, %.1f s (limit 60 s)",
                  runs[0] == runs[1] ? "yes" : "no", gap, elapsed);
    return {runs[0] == runs[1] && gap <= 1e-12 && elapsed < 60.0, buf};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1  EM ascent", ac1_ascent},
        {"AC2  log-likelihood decomposition identity", ac2_decomposition},
        {"AC3  k=1 closed form", ac3_single_component},
        {"AC4  synthetic recovery from Table I DAX model", ac4_dax_recovery},
        {"AC5  mixture beats single Gaussian on heavy tails", ac5_heavy_tails},
        {"AC6  KS statistic vs dense-grid oracle", ac6_ks_oracle},
        {"AC7  KS distribution-freeness", ac7_distribution_free},
        {"AC8  Kolmogorov series", ac8_kolmogorov_series},
        {"AC9  posterior normalization", ac9_posterior_rows},
        {"AC10 CLI end-to-end", ac10_end_to_end},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
