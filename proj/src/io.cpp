#include "betapoly/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace betapoly {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(text.substr(used)).size() != 0 || !std::isfinite(v)) {
        throw std::runtime_error("line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_points_csv(std::ostream& out, std::span<const DiskPoint> points) {
    out << "x,y\n";
    for (const DiskPoint& p : points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_points_csv(const std::filesystem::path& path, std::span<const DiskPoint> points) {
    auto out = open_out(path);
    write_points_csv(out, points);
}

std::vector<DiskPoint> read_points_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,y") {
        throw std::runtime_error("points CSV must start with the header 'x,y'");
    }
    std::vector<DiskPoint> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("line " + std::to_string(lineno) + ": expected x,y");
        DiskPoint p{parse_number(line.substr(0, comma), lineno), parse_number(line.substr(comma + 1), lineno)};
        if (p.x * p.x + p.y * p.y > 1.0 + 1e-12) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": point lies outside the unit disk");
        }
        points.push_back(p);
    }
    return points;
}

std::vector<DiskPoint> read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_points_csv(in);
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
    out << "N,trial,H,T,hull_size,micros\n";
    for (const TrialRecord& r : records) {
        out << r.N << ',' << r.trial << ',' << format_double(r.H) << ',' << format_double(r.T) << ','
            << r.hull_size << ',' << r.micros << '\n';
    }
}

void write_ecdf_csv(std::ostream& out, const EmpiricalCDF& ecdf, const LimitLaw& law) {
    out << "t,F_emp,F_limit\n";
    const auto xs = ecdf.sorted_values();
    const double m = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // skip to the last copy of a repeated value so F_emp is right-continuous
        if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
        out << format_double(xs[i]) << ',' << format_double(static_cast<double>(i + 1) / m) << ','
            << format_double(weibull_cdf(law, xs[i])) << '\n';
    }
}

void write_tail_csv(std::ostream& out, const TailProbeResult& result) {
    out << "eps,draws,hits,probability,predicted\n";
    for (std::size_t i = 0; i < result.epsilon_grid.size(); ++i) {
        out << format_double(result.epsilon_grid[i]) << ',' << result.draws_per_epsilon << ',' << result.hits[i]
            << ',' << format_double(result.hit_probabilities[i]) << ',' << format_double(result.predicted[i])
            << '\n';
    }
}

nlohmann::json to_json(const UMaxResult& result) {
    return {{"value", result.value}, {"vertex_indices", result.vertex_indices}, {"vertex_count", result.vertex_count}};
}

nlohmann::json constants_json(const LimitLaw& law, double K, double I) {
    return {{"M", law.M}, {"A", law.A}, {"B", law.B}, {"C", law.C}, {"K_n", K}, {"I", I}};
}

VerifyReport verify_kernel(Objective objective, std::size_t n, const DifferenceSteps& steps) {
    const KernelSpec spec = kernel_for(objective, n);
    VerifyReport report;
    report.objective = objective;
    report.n = n;
    report.steps = steps;
    report.analysis = analyze_maximizer(spec, spec.maximizers.front(), steps);
    report.analytic_det = closed_form_det_negG(objective, n);
    report.analytic_partial = closed_form_radial_partial(objective, n);
    return report;
}

nlohmann::json to_json(const VerifyReport& report) {
    double residual = 0.0;
    for (double g : report.analysis.angular_gradient) residual = std::max(residual, std::abs(g));
    return {{"kernel", std::string(to_string(report.objective))},
            {"n", report.n},
            {"step", report.steps.gradient},
            {"hessian_step", report.steps.hessian},
            {"radial_step", report.steps.radial},
            {"gradient_residual", residual},
            {"det_negG", report.analysis.det_negG},
            {"analytic_det", report.analytic_det},
            {"radial_partials", report.analysis.radial_partials},
            {"analytic_partials", std::vector<double>(report.n, report.analytic_partial)},
            {"A6_pass", report.analysis.a6_pass},
            {"A7_pass", report.analysis.a7_pass}};
}

SimulationSummary summarize(const SimConfig& config, std::span<const TrialRecord> records, double consistency_delta) {
    SimulationSummary s;
    s.config = config;
    s.law = law_for(config.objective, config.n, config.beta);
    s.K = compute_K(config.n, config.beta);
    s.I = closed_form_I(config.objective, config.n, config.beta);
    for (std::size_t N : config.sample_sizes) {
        const EmpiricalCDF ecdf(scaled_values(records, N));
        if (ecdf.empty()) continue;
        PerSampleSize row;
        row.N = N;
        row.ks = ks_distance(ecdf, s.law);
        row.median_T = ecdf.quantile(0.5);
        try {
            row.fit = fit_shape(ecdf);
        } catch (const std::invalid_argument&) {
            row.fit.reset();
        }
        s.per_n.push_back(row);
    }
    s.consistency = consistency_check(records, s.law.M, consistency_delta);
    return s;
}

nlohmann::json to_json(const SimulationSummary& s) {
    nlohmann::json per_n = nlohmann::json::array();
    for (const PerSampleSize& row : s.per_n) {
        nlohmann::json fit = nullptr;
        if (row.fit) {
            fit = {{"C_hat", row.fit->C_hat},
                   {"B_hat", row.fit->B_hat},
                   {"se_C", row.fit->se_C},
                   {"se_log_B", row.fit->se_log_B},
                   {"points", row.fit->points}};
        }
        per_n.push_back({{"N", row.N}, {"ks", row.ks}, {"median_T", row.median_T}, {"fit", fit}});
    }
    return {{"objective", std::string(to_string(s.config.objective))},
            {"n", s.config.n},
            {"beta", s.config.beta},
            {"trials", s.config.trials},
            {"seed", s.config.master_seed},
            {"law", constants_json(s.law, s.K, s.I)},
            {"law_median_T", weibull_quantile(s.law, 0.5)},
            {"per_N", per_n},
            {"consistency",
             {{"N", s.consistency.N},
              {"delta", s.consistency.delta},
              {"fraction_within", s.consistency.fraction_within},
              {"probabilities", s.consistency.probabilities},
              {"deficiency_quantiles", s.consistency.deficiency_quantiles}}}};
}

nlohmann::json to_json(const TailProbeResult& r, const LimitLaw& law) {
    return {{"eps", r.epsilon_grid},
            {"hits", r.hits},
            {"probabilities", r.hit_probabilities},
            {"predicted", r.predicted},
            {"draws_per_epsilon", r.draws_per_epsilon},
            {"dropped", r.dropped},
            {"fitted_slope", r.fitted_slope},
            {"se_slope", r.se_slope},
            {"fitted_log_prefactor", r.fitted_log_prefactor},
            {"se_log_prefactor", r.se_log_prefactor},
            {"predicted_slope", law.C},
            {"predicted_prefactor", tail_prediction(law, 1.0)}};
}

}  // namespace betapoly
