#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "betapoly/geometry.hpp"
#include "betapoly/kernels.hpp"
#include "betapoly/limits.hpp"
#include "betapoly/montecarlo.hpp"
#include "betapoly/sampler.hpp"

namespace betapoly {

/// printf("%.17g"): enough digits to round-trip any double.
std::string format_double(double value);

/// CSV with header `x,y`.
void write_points_csv(std::ostream& out, std::span<const DiskPoint> points);
void write_points_csv(const std::filesystem::path& path, std::span<const DiskPoint> points);

/// Reads the `x,y` format. Throws std::runtime_error on a bad header, a
/// malformed row, or a point outside the closed unit disk (1e-12 slack).
std::vector<DiskPoint> read_points_csv(std::istream& in);
std::vector<DiskPoint> read_points_csv(const std::filesystem::path& path);

/// `N,trial,H,T,hull_size,micros`
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

/// `t,F_emp,F_limit`, one row per sorted sample value.
void write_ecdf_csv(std::ostream& out, const EmpiricalCDF& ecdf, const LimitLaw& law);

/// `eps,draws,hits,probability,predicted`
void write_tail_csv(std::ostream& out, const TailProbeResult& result);

nlohmann::json to_json(const UMaxResult& result);

/// {M, A, B, C, K_n, I}
nlohmann::json constants_json(const LimitLaw& law, double K, double I);

struct VerifyReport {
    Objective objective = Objective::Perimeter;
    std::size_t n = 0;
    DifferenceSteps steps;
    MaximizerAnalysis analysis;
    double analytic_det = 0.0;
    double analytic_partial = 0.0;
};

VerifyReport verify_kernel(Objective objective, std::size_t n, const DifferenceSteps& steps = {});

/// {gradient_residual, det_negG, analytic_det, radial_partials,
///  analytic_partials, A6_pass, A7_pass}
nlohmann::json to_json(const VerifyReport& report);

struct PerSampleSize {
    std::size_t N = 0;
    double ks = 0.0;
    double median_T = 0.0;
    std::optional<ShapeFit> fit;
};

struct SimulationSummary {
    SimConfig config;
    LimitLaw law;
    double K = 0.0;
    double I = 0.0;
    std::vector<PerSampleSize> per_n;
    ConsistencyReport consistency;
};

inline constexpr double default_consistency_delta = 0.01;

SimulationSummary summarize(const SimConfig& config, std::span<const TrialRecord> records,
                            double consistency_delta = default_consistency_delta);

nlohmann::json to_json(const SimulationSummary& summary);
nlohmann::json to_json(const TailProbeResult& result, const LimitLaw& law);

}  // namespace betapoly
