#include "betapoly/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace betapoly {

namespace {

double kernel_value(std::span<const DiskPoint> pts, Objective objective) {
    return polygon_objective(convex_hull(pts), pts, objective);
}

std::uint64_t count_block(Objective objective, std::size_t n, const BetaParams& params, double threshold,
                          std::uint64_t draws, const SeedPolicy& seeds, std::uint64_t stream) {
    Rng rng = seeds.stream(stream);
    std::vector<DiskPoint> pts(n);
    std::uint64_t hits = 0;
    for (std::uint64_t d = 0; d < draws; ++d) {
        for (auto& p : pts) p = sample_point(params, rng);
        if (kernel_value(pts, objective) >= threshold) ++hits;
    }
    return hits;
}

std::uint64_t epsilon_stream_base(double eps) noexcept {
    std::uint64_t z = std::bit_cast<std::uint64_t>(eps) * 0x9e3779b97f4a7c15ULL;
    z ^= z >> 29;
    return z << 24;  // room for 2^24 blocks
}

template <typename Counter>
TailProbeResult probe(Objective objective, std::size_t n, double beta, std::vector<double> grid,
                      std::uint64_t draws, std::uint64_t seed, Counter&& count) {
    if (grid.empty()) throw std::invalid_argument("tail_probe: empty epsilon grid");
    if (draws == 0) throw std::invalid_argument("tail_probe: draws must be positive");
    std::sort(grid.begin(), grid.end(), std::greater<>());
    if (std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("tail_probe: epsilon values must be distinct");
    }
    const LimitLaw law = law_for(objective, n, beta);
    for (double eps : grid) {
        if (!(eps > 0.0)) throw std::invalid_argument("tail_probe: epsilon values must be positive");
        const double expected = tail_prediction(law, eps) * static_cast<double>(draws);
        if (expected < min_expected_hits) {
            throw std::invalid_argument("tail_probe: eps=" + std::to_string(eps) + " expects only " +
                                        std::to_string(expected) + " hits; raise --draws or eps");
        }
    }

    TailProbeResult out;
    out.draws_per_epsilon = draws;
    std::vector<double> xs, ys, ws;
    for (double eps : grid) {
        const std::uint64_t hits = count(objective, n, beta, eps, draws, seed);
        const double p = static_cast<double>(hits) / static_cast<double>(draws);
        out.epsilon_grid.push_back(eps);
        out.hits.push_back(hits);
        out.hit_probabilities.push_back(p);
        out.predicted.push_back(tail_prediction(law, eps));
        if (hits == 0) {
            std::clog << "warning: no hits at eps=" << eps << "; dropped from the fit\n";
            out.dropped.push_back(eps);
            continue;
        }
        xs.push_back(std::log(eps));
        ys.push_back(std::log(p));
        // var(ln p_hat) ~ (1 - p) / (draws p)
        ws.push_back(static_cast<double>(hits) / std::max(1.0 - p, 1e-12));
    }
    if (xs.size() >= 2) {
        double sw = 0, sx = 0, sy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sw += ws[i];
            sx += ws[i] * xs[i];
            sy += ws[i] * ys[i];
        }
        const double mx = sx / sw, my = sy / sw;
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
            sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
        }
        out.fitted_slope = sxy / sxx;
        out.fitted_log_prefactor = my - out.fitted_slope * mx;
        out.se_slope = std::sqrt(1.0 / sxx);
        out.se_log_prefactor = std::sqrt(1.0 / sw + mx * mx / sxx);
    }
    return out;
}

template <bool Parallel>
std::vector<TrialRecord> trials_impl(const SimConfig& config) {
    validate(config);
    const LimitLaw law = law_for(config.objective, config.n, config.beta);
    const std::size_t per_n = config.trials;
    const std::size_t total = per_n * config.sample_sizes.size();
    std::vector<TrialRecord> records(total);
    const auto job_count = static_cast<std::int64_t>(total);
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t job = 0; job < job_count; ++job) {
            const auto j = static_cast<std::size_t>(job);
            records[j] = run_trial(config, law, config.sample_sizes[j / per_n], j % per_n);
        }
    } else {
        for (std::int64_t job = 0; job < job_count; ++job) {
            const auto j = static_cast<std::size_t>(job);
            records[j] = run_trial(config, law, config.sample_sizes[j / per_n], j % per_n);
        }
    }
    return records;
}

template <bool Parallel>
std::uint64_t hits_impl(Objective objective, std::size_t n, double beta, double eps, std::uint64_t draws,
                        std::uint64_t seed) {
    if (!(eps > 0.0)) return 0;
    const BetaParams params(beta);
    const double threshold = extremal_value(objective, n) - eps;
    const SeedPolicy seeds{seed};
    const std::uint64_t base = epsilon_stream_base(eps);
    const auto blocks = static_cast<std::int64_t>((draws + tail_block_draws - 1) / tail_block_draws);
    std::uint64_t hits = 0;
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
        for (std::int64_t b = 0; b < blocks; ++b) {
            const auto ub = static_cast<std::uint64_t>(b);
            const std::uint64_t in_block = std::min(tail_block_draws, draws - ub * tail_block_draws);
            hits += count_block(objective, n, params, threshold, in_block, seeds, base + ub);
        }
    } else {
        for (std::int64_t b = 0; b < blocks; ++b) {
            const auto ub = static_cast<std::uint64_t>(b);
            const std::uint64_t in_block = std::min(tail_block_draws, draws - ub * tail_block_draws);
            hits += count_block(objective, n, params, threshold, in_block, seeds, base + ub);
        }
    }
    return hits;
}

}  // namespace

void validate(const SimConfig& config) {
    if (config.trials == 0) throw std::invalid_argument("trials must be at least 1");
    if (config.sample_sizes.empty()) throw std::invalid_argument("at least one sample size N is required");
    for (std::size_t N : config.sample_sizes) {
        if (N < config.n) {
            throw std::invalid_argument("every N must be >= n; got N=" + std::to_string(N));
        }
    }
    (void)BetaParams(config.beta);
    extremal_value(config.objective, config.n);
}

std::uint64_t trial_stream(std::size_t N, std::size_t trial) noexcept {
    return (static_cast<std::uint64_t>(N) << 32) ^ static_cast<std::uint64_t>(trial);
}

TrialRecord run_trial(const SimConfig& config, const LimitLaw& law, std::size_t N, std::size_t trial) {
    const auto started = std::chrono::steady_clock::now();
    const BetaParams params(config.beta);
    const auto points = sample_batch(params, N, SeedPolicy{config.master_seed}, trial_stream(N, trial));
    const PolygonChain hull = convex_hull(points);
    const UMaxResult best = max_kgon(hull, points, config.n, config.objective);

    TrialRecord rec;
    rec.N = N;
    rec.trial = trial;
    rec.H = best.value;
    rec.T = std::pow(static_cast<double>(N), law.A) * std::max(law.M - best.value, 0.0);
    rec.hull_size = hull.size();
    if (config.record_timing) {
        rec.micros = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started)
                         .count();
    }
    return rec;
}

std::vector<TrialRecord> run_trials(const SimConfig& config) { return trials_impl<true>(config); }

std::vector<TrialRecord> run_trials_serial(const SimConfig& config) { return trials_impl<false>(config); }

EmpiricalCDF::EmpiricalCDF(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
}

double EmpiricalCDF::evaluate(double t) const noexcept {
    if (values_.empty()) return 0.0;
    const auto it = std::upper_bound(values_.begin(), values_.end(), t);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalCDF::quantile(double p) const {
    if (values_.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile: p must lie in [0, 1]");
    const double m = static_cast<double>(values_.size());
    const auto k = static_cast<std::size_t>(std::max(std::ceil(p * m), 1.0));
    return values_[std::min(k, values_.size()) - 1];
}

std::vector<double> scaled_values(std::span<const TrialRecord> records, std::size_t N) {
    std::vector<double> out;
    for (const TrialRecord& r : records) {
        if (r.N == N) out.push_back(r.T);
    }
    return out;
}

double ks_distance(const EmpiricalCDF& ecdf, const LimitLaw& law) {
    if (ecdf.empty()) throw std::invalid_argument("ks_distance: empty sample");
    const auto xs = ecdf.sorted_values();
    const double m = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = weibull_cdf(law, xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

ShapeFit fit_shape(const EmpiricalCDF& ecdf, double lo, double hi) {
    if (!(lo > 0.0 && hi < 1.0 && lo < hi)) throw std::invalid_argument("fit_shape: window must satisfy 0 < lo < hi < 1");
    const auto xs = ecdf.sorted_values();
    const double m = static_cast<double>(xs.size());
    std::vector<double> u, v;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / m;
        if (p < lo || p > hi || !(xs[i] > 0.0)) continue;
        u.push_back(std::log(xs[i]));
        v.push_back(std::log(-std::log1p(-p)));
    }
    if (u.size() < min_fit_points) {
        throw std::invalid_argument("fit_shape: only " + std::to_string(u.size()) + " points in the window, need " +
                                    std::to_string(min_fit_points));
    }
    const double k = static_cast<double>(u.size());
    double mu = 0, mv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= k;
    mv /= k;
    double suu = 0, suv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    ShapeFit fit;
    fit.points = u.size();
    fit.C_hat = suv / suu;
    const double intercept = mv - fit.C_hat * mu;
    fit.B_hat = std::exp(intercept);
    double sse = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = v[i] - intercept - fit.C_hat * u[i];
        sse += r * r;
    }
    const double s2 = sse / (k - 2.0);
    fit.se_C = std::sqrt(s2 / suu);
    fit.se_log_B = std::sqrt(s2 * (1.0 / k + mu * mu / suu));
    return fit;
}

ConsistencyReport consistency_check(std::span<const TrialRecord> records, double M, double delta) {
    if (records.empty()) throw std::invalid_argument("consistency_check: no records");
    ConsistencyReport report;
    report.delta = delta;
    for (const TrialRecord& r : records) report.N = std::max(report.N, r.N);
    std::vector<double> deficiency;
    for (const TrialRecord& r : records) {
        if (r.N == report.N) deficiency.push_back(M - r.H);
    }
    const auto within = std::count_if(deficiency.begin(), deficiency.end(), [delta](double d) { return d < delta; });
    report.fraction_within = static_cast<double>(within) / static_cast<double>(deficiency.size());
    const EmpiricalCDF ecdf(std::move(deficiency));
    report.probabilities = {0.05, 0.25, 0.5, 0.75, 0.95, 0.99};
    for (double p : report.probabilities) report.deficiency_quantiles.push_back(ecdf.quantile(p));
    return report;
}

std::uint64_t tail_hits(Objective objective, std::size_t n, double beta, double eps, std::uint64_t draws,
                        std::uint64_t seed) {
    return hits_impl<true>(objective, n, beta, eps, draws, seed);
}

std::uint64_t tail_hits_serial(Objective objective, std::size_t n, double beta, double eps, std::uint64_t draws,
                               std::uint64_t seed) {
    return hits_impl<false>(objective, n, beta, eps, draws, seed);
}

TailProbeResult tail_probe(Objective objective, std::size_t n, double beta, std::vector<double> epsilon_grid,
                           std::uint64_t draws_per_epsilon, std::uint64_t seed) {
    return probe(objective, n, beta, std::move(epsilon_grid), draws_per_epsilon, seed, tail_hits);
}

TailProbeResult tail_probe_serial(Objective objective, std::size_t n, double beta, std::vector<double> epsilon_grid,
                                  std::uint64_t draws_per_epsilon, std::uint64_t seed) {
    return probe(objective, n, beta, std::move(epsilon_grid), draws_per_epsilon, seed, tail_hits_serial);
}

}  // namespace betapoly
