#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "betapoly/geometry.hpp"
#include "betapoly/limits.hpp"
#include "betapoly/sampler.hpp"

namespace betapoly {

struct SimConfig {
    Objective objective = Objective::Perimeter;
    std::size_t n = 3;
    double beta = 0.0;
    std::vector<std::size_t> sample_sizes;  // the N values
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    bool record_timing = false;  // off keeps TrialRecord::micros at 0 so output is reproducible
};

/// Throws std::invalid_argument unless trials >= 1, sample_sizes is
/// nonempty, every N >= n, and (objective, n, beta) is in the domain.
void validate(const SimConfig& config);

struct TrialRecord {
    std::size_t N = 0;
    std::size_t trial = 0;
    double H = 0.0;  // U-max value
    double T = 0.0;  // N^A (M - H), clamped at 0 against rounding
    std::size_t hull_size = 0;
    std::int64_t micros = 0;
};

/// Generator stream used for trial `trial` at sample size N.
std::uint64_t trial_stream(std::size_t N, std::size_t trial) noexcept;

TrialRecord run_trial(const SimConfig& config, const LimitLaw& law, std::size_t N, std::size_t trial);

/// All trials, ordered by (N position in config, trial). OpenMP-parallel over
/// trials; the output does not depend on the thread count.
std::vector<TrialRecord> run_trials(const SimConfig& config);

/// Single-threaded reference for run_trials.
std::vector<TrialRecord> run_trials_serial(const SimConfig& config);

/// Right-continuous step function over a sorted sample.
class EmpiricalCDF {
public:
    explicit EmpiricalCDF(std::vector<double> values);

    /// Fraction of the sample <= t.
    double evaluate(double t) const noexcept;
    /// Lower empirical quantile.
    double quantile(double p) const;

    std::span<const double> sorted_values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

private:
    std::vector<double> values_;
};

/// Scaled statistics T of the records with sample size N.
std::vector<double> scaled_values(std::span<const TrialRecord> records, std::size_t N);

/// Kolmogorov-Smirnov distance sup_t |F_emp(t) - F_law(t)|, evaluated on both
/// sides of every jump. Throws std::invalid_argument for an empty ecdf.
double ks_distance(const EmpiricalCDF& ecdf, const LimitLaw& law);

struct ShapeFit {
    double C_hat = 0.0;
    double B_hat = 0.0;
    double se_C = 0.0;
    double se_log_B = 0.0;
    std::size_t points = 0;
};

inline constexpr double default_window_lo = 0.05;
inline constexpr double default_window_hi = 0.6;
inline constexpr std::size_t min_fit_points = 100;

/// Least-squares fit of ln(-ln(1 - F)) = ln B + C ln t over the order
/// statistics whose plotting position (i - 1/2)/m lies in [lo, hi].
/// Throws std::invalid_argument with fewer than min_fit_points points.
ShapeFit fit_shape(const EmpiricalCDF& ecdf, double lo = default_window_lo, double hi = default_window_hi);

struct ConsistencyReport {
    std::size_t N = 0;
    double delta = 0.0;
    double fraction_within = 0.0;  // fraction of trials with M - H_N < delta
    std::vector<double> probabilities;
    std::vector<double> deficiency_quantiles;  // empirical quantiles of M - H_N
};

/// Uses only the records at the largest N present. Throws on empty input.
ConsistencyReport consistency_check(std::span<const TrialRecord> records, double M, double delta);

struct TailProbeResult {
    std::vector<double> epsilon_grid;  // strictly decreasing
    std::vector<std::uint64_t> hits;
    std::vector<double> hit_probabilities;
    std::vector<double> predicted;  // n! K_n I eps^C
    std::uint64_t draws_per_epsilon = 0;
    std::vector<double> dropped;  // eps values with zero hits, left out of the fit
    double fitted_slope = 0.0;
    double fitted_log_prefactor = 0.0;
    double se_slope = 0.0;
    double se_log_prefactor = 0.0;
};

inline constexpr double min_expected_hits = 100.0;
inline constexpr std::uint64_t tail_block_draws = 1 << 14;

/// Number of n-point draws whose objective reaches M - eps. Draws are split
/// into fixed blocks with their own streams, so the count is independent of
/// the thread count. eps <= 0 gives 0 hits.
std::uint64_t tail_hits(Objective objective, std::size_t n, double beta, double eps, std::uint64_t draws,
                        std::uint64_t seed);
std::uint64_t tail_hits_serial(Objective objective, std::size_t n, double beta, double eps,
                               std::uint64_t draws, std::uint64_t seed);

/// Estimates P[f >= M - eps] over the grid and fits its log-log slope and
/// prefactor by weighted least squares. Throws std::invalid_argument when
/// the predicted hit count for some eps is below min_expected_hits.
TailProbeResult tail_probe(Objective objective, std::size_t n, double beta, std::vector<double> epsilon_grid,
                           std::uint64_t draws_per_epsilon, std::uint64_t seed);
TailProbeResult tail_probe_serial(Objective objective, std::size_t n, double beta,
                                  std::vector<double> epsilon_grid, std::uint64_t draws_per_epsilon,
                                  std::uint64_t seed);

}  // namespace betapoly
