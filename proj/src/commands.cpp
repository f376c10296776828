#include "monocal/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "monocal/anytime.hpp"
#include "monocal/csv_input.hpp"
#include "monocal/losses.hpp"
#include "monocal/model_file.hpp"
#include "monocal/online.hpp"
#include "monocal/pav_offline.hpp"

namespace monocal::cli {

namespace {

// Input failure that maps straight to an exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t max_rows() {
    const char* env = std::getenv("MONOCAL_MAX_N");
    if (!env || !*env) return std::numeric_limits<std::size_t>::max();
    std::size_t value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError("MONOCAL_MAX_N must be a nonnegative integer, got '" + std::string(text) + "'");
    }
    return value;
}

void check_cap(std::size_t rows, std::size_t cap) {
    if (rows > cap) {
        throw UsageError("input has more than MONOCAL_MAX_N = " + std::to_string(cap) + " rows");
    }
}

// Opens a path, or standard input for "-".
class Input {
public:
    explicit Input(const std::string& path) {
        if (path == "-") {
            stream_ = &std::cin;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path);
        if (!*file_) throw UsageError("cannot open '" + path + "'");
        stream_ = file_.get();
    }
    std::istream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

Sample to_sample(const TrainingRow& r, const LossFamily& family) {
    if (&family == &log_loss()) {
        const std::string where = "row " + std::to_string(r.row) + ": ";
        if (r.target != 0.0 && r.target != 1.0) {
            throw UsageError(where + "log-loss target must be 0 or 1");
        }
        if (!(r.score >= 0.0 && r.score <= 1.0)) {
            throw UsageError(where + "log-loss score must be a probability in [0, 1]");
        }
        const BinarySample b{r.score, static_cast<int>(r.target), r.weight};
        return logloss_reduce(std::span(&b, 1)).front();
    }
    return {r.score, r.target, r.weight, 0.0};
}

AnytimeConfig parse_bounds(const std::string& text, AnytimeConfig config) {
    if (text == "auto") {
        config.upper = std::numeric_limits<double>::infinity();
        config.lower = -std::numeric_limits<double>::infinity();
        return config;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--bounds expects LO,HI or auto");
    try {
        config.lower = parse_real(text.substr(0, comma));
        config.upper = parse_real(text.substr(comma + 1));
    } catch (const Error& e) {
        throw UsageError(std::string("--bounds: ") + e.what());
    }
    if (!(config.lower < config.upper)) throw UsageError("--bounds needs LO < HI");
    return config;
}

struct FitOptions {
    std::string input;
    std::string loss = "square";
    std::string solver = "stack";
    double delta = 1e-6;
    std::string bounds;
    std::size_t max_iters = AnytimeConfig{}.max_iters;
    std::string out_path;
    bool quiet = false;
};

int cmd_fit(const FitOptions& opt, bool anytime_flags_given, std::ostream& out, std::ostream& err) {
    const auto& family = family_by_name(opt.loss);
    if (opt.solver != "anytime" && anytime_flags_given) {
        throw UsageError("--delta, --bounds and --max-iters only apply to --solver anytime");
    }
    if (opt.solver == "anytime" && opt.bounds == "auto" && &family == &log_loss()) {
        throw UsageError("--bounds auto is not available for log-loss; its minimizers lie in [0, 1]");
    }

    Input input(opt.input);
    const auto cap = max_rows();
    TrainingCsvReader reader(input.stream());
    std::vector<Sample> samples;
    while (auto row = reader.next()) {
        check_cap(samples.size() + 1, cap);
        samples.push_back(to_sample(*row, family));
    }
    const auto problem = normalize(std::move(samples), family);

    ModelMetadata meta;
    meta.solver = opt.solver;
    std::vector<Block> blocks;
    if (opt.solver == "direct" || opt.solver == "stack") {
        auto report = opt.solver == "direct" ? fit_direct(problem) : fit_stack(problem);
        meta.merge_count = report.merge_count;
        meta.total_loss = report.total_loss;
        blocks = std::move(report.blocks);
    } else {
        AnytimeConfig config;
        config.delta = opt.delta;
        config.max_iters = opt.max_iters;
        const std::string bounds = opt.bounds.empty() ? (&family == &log_loss() ? "0,1" : "auto") : opt.bounds;
        config = parse_bounds(bounds, config);
        auto result = anytime_run(problem, config);
        meta.merge_count = result.joins;
        meta.total_loss = total_loss(problem, result.blocks);
        meta.delta = opt.delta;
        meta.iterations = result.iters;
        meta.width_bound = result.width_bound;
        blocks = std::move(result.blocks);
    }
    const auto staircase = blocks_to_staircase(blocks, problem);
    const auto text = write_model(make_model(staircase, std::string(family.name()), meta));

    if (opt.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(opt.out_path);
        if (!file) throw UsageError("cannot write '" + opt.out_path + "'");
        file << text;
    }
    if (!opt.quiet) {
        err << "fitted " << problem.size() << " samples into " << staircase.step_count() << " steps with "
            << opt.solver << " (merges " << meta.merge_count << ", loss " << format_real(meta.total_loss)
            << ")\n";
    }
    return kExitOk;
}

int cmd_apply(const std::string& model_path, const std::string& scores_path, std::ostream& out) {
    std::ifstream model_file(model_path);
    if (!model_file) throw UsageError("cannot open model '" + model_path + "'");
    std::stringstream text;
    text << model_file.rdbuf();
    const auto staircase = read_model(text.str()).staircase();

    Input input(scores_path);
    const auto scores = read_score_csv(input.stream());
    check_cap(scores.size(), max_rows());
    out << "score,calibrated\n";
    for (double x : scores) out << format_real(x) << ',' << format_real(staircase(x)) << '\n';
    return kExitOk;
}

int cmd_stream(const std::string& input_path, const std::string& loss, std::ostream& out, std::ostream& err) {
    const auto& family = family_by_name(loss);
    Input input(input_path);
    const auto cap = max_rows();
    TrainingCsvReader reader(input.stream());
    OnlineState state(family);
    std::size_t rows = 0;
    while (auto row = reader.next()) {
        check_cap(++rows, cap);
        const auto sample = to_sample(*row, family);
        try {
            state.push(sample);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OutOfOrder) throw;
            out.flush();
            err << "monocal: row " << row->row << " (line " << row->line << "): score "
                << format_real(row->score) << " is below the previous score "
                << format_real(state.last_score()) << "; use `monocal fit` for unordered data\n";
            return kExitOrder;
        }
        const auto staircase = state.current();
        out << "n=" << state.n_seen() << " steps=" << state.step_count()
            << " merges=" << state.cumulative_merges() << " values=[";
        const auto values = staircase.values();
        for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << format_real(values[i]);
        out << "]\n";
    }
    if (rows == 0) throw UsageError("no data rows");
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monotone staircase calibration of estimator scores"};
    app.name("monocal");
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a calibration model from a CSV of score,target[,weight]");
    fit_cmd->add_option("input", fit.input, "Training CSV, or - for stdin")->required();
    fit_cmd->add_option("--loss", fit.loss, "Loss family")->check(CLI::IsMember({"square", "logloss"}));
    fit_cmd->add_option("--solver", fit.solver, "Solver")->check(CLI::IsMember({"direct", "stack", "anytime"}));
    auto* delta_opt = fit_cmd->add_option("--delta", fit.delta, "Anytime target bracket width")
                          ->check(CLI::PositiveNumber);
    auto* bounds_opt = fit_cmd->add_option("--bounds", fit.bounds, "Anytime bracket LO,HI or auto");
    auto* iters_opt = fit_cmd->add_option("--max-iters", fit.max_iters, "Anytime round cap")
                          ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--out", fit.out_path, "Write the model here instead of stdout");
    fit_cmd->add_flag("--quiet", fit.quiet, "Suppress diagnostics");

    std::string model_path;
    std::string scores_path;
    auto* apply_cmd = app.add_subcommand("apply", "Map scores through a fitted model");
    apply_cmd->add_option("model", model_path, "Model JSON")->required();
    apply_cmd->add_option("scores", scores_path, "CSV with a score column, or - for stdin")->required();

    std::string stream_input;
    std::string stream_loss = "square";
    auto* stream_cmd = app.add_subcommand("stream", "Fit score-ordered rows online, one summary per row");
    stream_cmd->add_option("input", stream_input, "Score-ordered CSV, or - for stdin")->required();
    stream_cmd->add_option("--loss", stream_loss, "Loss family")->check(CLI::IsMember({"square", "logloss"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        if (*fit_cmd) {
            const bool anytime_flags = delta_opt->count() + bounds_opt->count() + iters_opt->count() > 0;
            return cmd_fit(fit, anytime_flags, out, err);
        }
        if (*apply_cmd) return cmd_apply(model_path, scores_path, out);
        if (*stream_cmd) return cmd_stream(stream_input, stream_loss, out, err);
    } catch (const UsageError& e) {
        err << "monocal: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "monocal: " << e.what() << '\n';
        return e.kind() == ErrorKind::OutOfOrder ? kExitOrder : kExitInput;
    } catch (const std::exception& e) {
        err << "monocal: internal error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInput;
}

} // namespace monocal::cli
