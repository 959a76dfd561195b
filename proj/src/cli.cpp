#include "betapoly/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "betapoly/geometry.hpp"
#include "betapoly/io.hpp"
#include "betapoly/kernels.hpp"
#include "betapoly/limits.hpp"
#include "betapoly/montecarlo.hpp"
#include "betapoly/sampler.hpp"

namespace betapoly {

namespace {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void report_error(std::ostream& err, const std::string& message, int code) {
    err << nlohmann::json{{"error", message}, {"exit_code", code}}.dump() << '\n';
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

std::string config_value(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string joined;
        for (const auto& item : v) {
            if (!joined.empty()) joined += ',';
            joined += config_value(item);
        }
        return joined;
    }
    return v.dump();
}

// Splices values from a JSON config file into the argument list. Flags given
// on the command line win over the file.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw ValidationError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || has_flag(args, flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
            continue;
        }
        args.push_back(flag);
        args.push_back(config_value(value));
    }
    return args;
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::filesystem::path ensure_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

std::ofstream open_file(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extremal statistics of random beta polygons in the unit disk", "betapoly"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    std::string config_path;
    app.add_option("--threads", threads, "Worker threads (affects speed only)")->check(CLI::NonNegativeNumber);
    app.add_option("--config", config_path, "JSON file with default flag values");

    // sample
    double beta = 0.0;
    std::uint64_t count = 0, seed = 0, trial = 0;
    std::string out_path;
    auto* sample = app.add_subcommand("sample", "Draw points from the beta distribution on the disk");
    sample->add_option("--beta", beta, "Distribution parameter (> -1)")->required();
    sample->add_option("--count", count, "Number of points")->required();
    sample->add_option("--seed", seed, "Master seed")->required();
    sample->add_option("--trial", trial, "Stream index")->capture_default_str();
    sample->add_option("--out", out_path, "Output CSV path")->required();

    // umax
    std::string in_path, objective_name;
    std::size_t n = 0;
    bool brute = false;
    auto* umax_cmd = app.add_subcommand("umax", "Exact U-max of a point set");
    umax_cmd->add_option("--in", in_path, "Points CSV (header x,y)")->required();
    umax_cmd->add_option("--n", n, "Polygon size")->required();
    umax_cmd->add_option("--objective", objective_name, "perimeter|area")->required();
    umax_cmd->add_flag("--brute-force", brute, "Enumerate all subsets instead of the hull DP");

    // constants
    bool json = false;
    auto* constants = app.add_subcommand("constants", "Limit-law constants");
    constants->add_option("--objective", objective_name, "perimeter|area")->required();
    constants->add_option("--n", n, "Polygon size")->required();
    constants->add_option("--beta", beta, "Distribution parameter")->required();
    constants->add_flag("--json", json, "JSON output");

    // verify
    DifferenceSteps steps;
    auto* verify = app.add_subcommand("verify", "Finite-difference check of a built-in kernel at its maximizer");
    verify->add_option("--kernel", objective_name, "perimeter|area")->required();
    verify->add_option("--n", n, "Kernel arity")->required();
    verify->add_option("--step", steps.gradient, "Gradient step")->capture_default_str();
    verify->add_option("--hessian-step", steps.hessian, "Sub-Hessian step")->capture_default_str();
    verify->add_option("--radial-step", steps.radial, "Radial step")->capture_default_str();
    verify->add_flag("--richardson", steps.richardson, "Richardson extrapolation");
    verify->add_flag("--json", json, "JSON output");

    // simulate
    std::vector<std::size_t> sizes;
    std::size_t trials = 0;
    std::string out_dir;
    double delta = default_consistency_delta;
    bool timing = false;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo of the scaled U-max statistic");
    simulate->add_option("--objective", objective_name, "perimeter|area")->required();
    simulate->add_option("--n", n, "Polygon size")->required();
    simulate->add_option("--beta", beta, "Distribution parameter")->required();
    simulate->add_option("--N", sizes, "Comma-separated sample sizes")->required()->delimiter(',');
    simulate->add_option("--trials", trials, "Trials per sample size")->required();
    simulate->add_option("--seed", seed, "Master seed")->required();
    simulate->add_option("--out-dir", out_dir, "Output directory")->required();
    simulate->add_option("--delta", delta, "Consistency threshold on M - H_N")->capture_default_str();
    simulate->add_flag("--record-timing", timing, "Write per-trial wall time (breaks byte reproducibility)");

    // tailprobe
    std::vector<double> eps;
    std::uint64_t draws = 0;
    auto* tail = app.add_subcommand("tailprobe", "Direct estimate of P[f >= M - eps]");
    tail->add_option("--objective", objective_name, "perimeter|area")->required();
    tail->add_option("--n", n, "Polygon size")->required();
    tail->add_option("--beta", beta, "Distribution parameter")->required();
    tail->add_option("--eps", eps, "Comma-separated epsilon grid")->required()->delimiter(',');
    tail->add_option("--draws", draws, "Draws per epsilon")->required();
    tail->add_option("--seed", seed, "Master seed")->required();
    tail->add_option("--out-dir", out_dir, "Output directory")->required();

    try {
        std::vector<std::string> args = apply_config(raw_args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
        try {
            app.parse(args);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return exit_ok;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return exit_ok;
        } catch (const CLI::ParseError& e) {
            err << app.help();
            report_error(err, e.what(), exit_validation);
            return exit_validation;
        }
        set_threads(threads);

        if (sample->parsed()) {
            const BetaParams params(beta);
            const auto points = sample_batch(params, count, SeedPolicy{seed}, trial);
            write_points_csv(std::filesystem::path(out_path), points);
        } else if (umax_cmd->parsed()) {
            const Objective objective = parse_objective(objective_name);
            const auto points = read_points_csv(std::filesystem::path(in_path));
            const UMaxResult r = brute ? umax_bruteforce(points, n, objective) : umax(points, n, objective);
            out << to_json(r).dump() << '\n';
        } else if (constants->parsed()) {
            const Objective objective = parse_objective(objective_name);
            const LimitLaw law = law_for(objective, n, beta);
            const double K = compute_K(n, beta);
            const double I = closed_form_I(objective, n, beta);
            const auto j = constants_json(law, K, I);
            if (json) {
                out << j.dump() << '\n';
            } else {
                for (const auto& [key, value] : j.items()) out << key << " = " << format_double(value.get<double>()) << '\n';
            }
        } else if (verify->parsed()) {
            const Objective objective = parse_objective(objective_name);
            if (!(steps.gradient > 0 && steps.hessian > 0 && steps.radial > 0)) {
                throw ValidationError("finite-difference steps must be positive");
            }
            const auto j = to_json(verify_kernel(objective, n, steps));
            out << (json ? j.dump() : j.dump(2)) << '\n';
        } else if (simulate->parsed()) {
            SimConfig config;
            config.objective = parse_objective(objective_name);
            config.n = n;
            config.beta = beta;
            config.sample_sizes = sizes;
            config.trials = trials;
            config.master_seed = seed;
            config.record_timing = timing;
            validate(config);
            const auto dir = ensure_dir(out_dir);
            const auto records = run_trials(config);
            {
                auto f = open_file(dir / "trials.csv");
                write_trials_csv(f, records);
            }
            const SimulationSummary summary = summarize(config, records, delta);
            {
                auto f = open_file(dir / "summary.json");
                f << to_json(summary).dump(2) << '\n';
            }
            {
                const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
                auto f = open_file(dir / "ecdf.csv");
                write_ecdf_csv(f, EmpiricalCDF(scaled_values(records, largest)), summary.law);
            }
        } else if (tail->parsed()) {
            const Objective objective = parse_objective(objective_name);
            const auto result = tail_probe(objective, n, beta, eps, draws, seed);
            const auto dir = ensure_dir(out_dir);
            {
                auto f = open_file(dir / "tail.csv");
                write_tail_csv(f, result);
            }
            auto f = open_file(dir / "tail_summary.json");
            f << to_json(result, law_for(objective, n, beta)).dump(2) << '\n';
        }
        return exit_ok;
    } catch (const std::invalid_argument& e) {
        report_error(err, e.what(), exit_validation);
        return exit_validation;
    } catch (const std::domain_error& e) {
        report_error(err, e.what(), exit_validation);
        return exit_validation;
    } catch (const std::exception& e) {
        report_error(err, e.what(), exit_runtime);
        return exit_runtime;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace betapoly
