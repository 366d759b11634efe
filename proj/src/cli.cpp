#include "gmfit/cli.hpp"

#include "gmfit/artifacts.hpp"
#include "gmfit/errors.hpp"
#include "gmfit/model_json.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace gmfit::cli {

namespace {

struct DataFlags {
    std::string input;
    std::string name;
    std::string start;
    std::string end;
};

struct FitFlags {
    DataFlags data;
    FitConfig config;
    std::string model_out;
    std::string report = "text";
};

struct ModelFlags {
    DataFlags data;
    std::string model;
    std::string out;
};

struct SynthFlags {
    std::string model;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::string start_date = "2003-04-14";
    double start_price = 1000.0;
};

std::string check_date(const std::string& text) {
    try {
        parse_date(text);
    } catch (const DomainError& e) {
        return e.what();
    }
    return {};
}

void add_data_flags(CLI::App& cmd, DataFlags& flags) {
    cmd.add_option("--input", flags.input, "Price CSV with date and close columns")
        ->required()
        ->check(CLI::ExistingFile);
    cmd.add_option("--name", flags.name, "Label for the series (defaults to the file name)");
    cmd.add_option("--start", flags.start, "First date kept, yyyy-mm-dd")->check(check_date);
    cmd.add_option("--end", flags.end, "Last date kept, yyyy-mm-dd")->check(check_date);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path);
}

ReturnSample load_returns(const DataFlags& flags) {
    std::ifstream in(flags.input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + flags.input);
    std::string name = flags.name;
    if (name.empty()) {
        const auto slash = flags.input.find_last_of('/');
        name = slash == std::string::npos ? flags.input : flags.input.substr(slash + 1);
    }
    PriceSeries series = load_prices(in, name);
    if (!flags.start.empty() || !flags.end.empty()) {
        const Date start = flags.start.empty() ? series.observations.front().date
                                               : parse_date(flags.start);
        const Date end = flags.end.empty() ? series.observations.back().date
                                           : parse_date(flags.end);
        series = slice_period(series, start, end);
    }
    return log_returns(series);
}

MixtureModel load_model(const std::string& path) {
    try {
        return model_from_json(read_file(path));
    } catch (const DomainError& e) {
        throw DomainError("invalid model " + path + ": " + e.what());
    }
}

int cmd_fit(const FitFlags& flags, std::ostream& out, std::ostream& err) {
    const ReturnSample sample = load_returns(flags.data);
    const ReportTable report = build_report(sample, flags.config);
    for (const auto& w : report.warnings) err << "warning: " << w << "\n";
    if (!flags.model_out.empty()) {
        write_file(flags.model_out, model_to_json(MixtureModel::from_rounded(report.rows)));
    }
    out << (flags.report == "json" ? format_report_json(report) : format_report_text(report));
    return kExitOk;
}

int cmd_gof(const ModelFlags& flags, std::ostream& out) {
    const MixtureModel model = load_model(flags.model);
    const ReturnSample sample = load_returns(flags.data);
    const KsResult ks = ks_test(model, sample.values);
    char buf[128];
    std::snprintf(buf, sizeof buf, "n: %zu\nstatistic: %.17g\np_value: %.17g\n", ks.n,
                  ks.statistic, ks.p_value);
    out << buf;
    return kExitOk;
}

int cmd_plotdata(const ModelFlags& flags) {
    const MixtureModel model = load_model(flags.model);
    const ReturnSample sample = load_returns(flags.data);
    std::ostringstream tsv;
    write_plot_tsv(tsv, make_plot_data(model, sample.values));
    write_file(flags.out, tsv.str());
    return kExitOk;
}

int cmd_synth(const SynthFlags& flags) {
    const MixtureModel model = load_model(flags.model);
    const auto returns = synthesize_returns(model, flags.n - 1, flags.seed);
    std::ostringstream csv;
    write_price_csv(csv, returns, parse_date(flags.start_date), flags.start_price);
    write_file(flags.out, csv.str());
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fit Gaussian mixtures to log daily returns of price series", "gmfit"};
    app.require_subcommand(1);

    FitFlags fit_flags;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a mixture and a one-Gaussian baseline, print the component table");
    add_data_flags(*fit_cmd, fit_flags.data);
    fit_cmd->add_option("--components", fit_flags.config.k, "Number of mixture components")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--epsilon", fit_flags.config.epsilon, "Stop when the log-likelihood gain is below this")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--max-iters", fit_flags.config.max_iterations, "Iteration cap per restart")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--restarts", fit_flags.config.restarts, "Number of EM restarts")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--seed", fit_flags.config.seed, "Seed for initialization jitter")
        ->capture_default_str();
    fit_cmd->add_option("--model-out", fit_flags.model_out, "Write the fitted model as JSON");
    fit_cmd->add_option("--report", fit_flags.report, "Report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "json"}));

    ModelFlags gof_flags;
    auto* gof_cmd = app.add_subcommand("gof", "Kolmogorov-Smirnov statistic of a model against the returns");
    add_data_flags(*gof_cmd, gof_flags.data);
    gof_cmd->add_option("--model", gof_flags.model, "Model JSON")->required()->check(CLI::ExistingFile);

    ModelFlags plot_flags;
    auto* plot_cmd = app.add_subcommand("plotdata", "Write histogram and density curves as TSV");
    add_data_flags(*plot_cmd, plot_flags.data);
    plot_cmd->add_option("--model", plot_flags.model, "Model JSON")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--out", plot_flags.out, "Output TSV path")->required();

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Draw returns from a model and write a price CSV");
    synth_cmd->add_option("--model", synth_flags.model, "Model JSON")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--n", synth_flags.n, "Number of price rows (>= 2)")
        ->required()
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    synth_cmd->add_option("--seed", synth_flags.seed, "Sampler seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_flags.out, "Output CSV path")->required();
    synth_cmd->add_option("--start-date", synth_flags.start_date, "Date of the first price")
        ->capture_default_str()
        ->check(check_date);
    synth_cmd->add_option("--start-price", synth_flags.start_price, "First price")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) return cmd_fit(fit_flags, out, err);
        if (gof_cmd->parsed()) return cmd_gof(gof_flags, out);
        if (plot_cmd->parsed()) return cmd_plotdata(plot_flags);
        if (synth_cmd->parsed()) return cmd_synth(synth_flags);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitUsage;
}

}  // namespace gmfit::cli
