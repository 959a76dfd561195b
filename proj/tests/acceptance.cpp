// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "betapoly/geometry.hpp"
#include "betapoly/io.hpp"
#include "betapoly/kernels.hpp"
#include "betapoly/limits.hpp"
#include "betapoly/montecarlo.hpp"
#include "betapoly/sampler.hpp"

using namespace betapoly;
namespace fs = std::filesystem;

namespace {

const double pi = std::numbers::pi;

// Simulation settings shared by criteria 6, 7 and 8.
constexpr std::uint64_t sim_seed = 1;
constexpr std::size_t sim_trials = 2000;
const std::vector<std::size_t> sim_sizes = {250, 1000, 4000};

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
    std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void note(const std::string& text) {
    std::printf("     note: %s\n", text.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

// 50-digit K_n.
double K_oracle(std::size_t n_in, double beta_in) {
    using big = boost::multiprecision::cpp_bin_float_50;
    using boost::math::tgamma;
    const big b(beta_in), n(static_cast<unsigned>(n_in)), half("0.5");
    const big c = (b + big("1.5")) * n;
    const big num = boost::multiprecision::pow(big(2), (b + half) * n + half) * tgamma(c + half) *
                    boost::multiprecision::pow(tgamma(b + 2), n);
    const big den = boost::multiprecision::pow(boost::math::constants::pi<big>(), (n - 1) / 2) * tgamma(n + 1) *
                    tgamma((n + 1) / 2) * tgamma(c + b + big("1.5"));
    return static_cast<double>(num / den);
}

// Coefficient of t^C in the displayed limit laws, without the K_n factor.
double explicit_coefficient(Objective obj, std::size_t n, double beta) {
    const double nd = static_cast<double>(n);
    const double c = (beta + 1.5) * nd - 0.5;
    const double fact = std::tgamma(nd);
    if (obj == Objective::Perimeter) {
        return fact * std::pow(2.0, (nd - 1) / 2) / (std::sqrt(nd) * std::pow(std::sin(pi / nd), c));
    }
    return fact * std::pow(2.0, c) / (std::sqrt(nd) * std::pow(std::sin(2 * pi / nd), c));
}

double numeric_I(Objective obj, std::size_t n, double beta) {
    const KernelSpec spec = kernel_for(obj, n);
    return compute_I(spec, analyze_kernel(spec), beta);
}

// Leading coefficient of P[f >= M - eps] ~ coef * eps^C from a direct Laplace-type
// expansion: Gaussian volume in the angles times the Dirichlet integral over the
// radial deficits, with I taken from the numerically differentiated kernel.
double rederived_tail_coefficient(Objective obj, std::size_t n, double beta) {
    const double nd = static_cast<double>(n);
    const double c = shape_C(n, beta);
    const double log_coef = (nd * beta + (nd + 1) / 2) * std::log(2.0) + (1 - nd) / 2 * std::log(pi) +
                            nd * std::lgamma(beta + 2) - std::lgamma(c + 1);
    return std::exp(log_coef) * numeric_I(obj, n, beta);
}

LimitLaw rederived_law(Objective obj, std::size_t n, double beta) {
    LimitLaw law = law_for(obj, n, beta);
    law.B = rederived_tail_coefficient(obj, n, beta) / std::tgamma(static_cast<double>(n) + 1);
    return law;
}

void criterion_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 pick(2024);
    double worst = 0.0;
    int instances = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 3 + pick() % 3;
        const std::size_t N = n + pick() % (13 - n);
        const double beta = std::array{-0.5, 0.0, 2.0}[pick() % 3];
        const auto pts = sample_batch(BetaParams(beta), N, SeedPolicy{pick()}, 0);
        for (Objective obj : {Objective::Perimeter, Objective::Area}) {
            const double a = umax(pts, n, obj).value;
            const double b = umax_bruteforce(pts, n, obj).value;
            worst = std::max(worst, b == 0.0 ? std::abs(a) : rel(a, b));
        }
        ++instances;
    }
    const double secs = seconds_since(t0);
    report(1, worst <= 1e-9 && secs < 30.0, "umax equals brute force",
           fmt("%d instances x 2 objectives, max rel diff %.3g (tol 1e-9), %.2f s (limit 30 s)", instances, worst,
               secs));
}

void criterion_sub_hessian() {
    const auto t0 = std::chrono::steady_clock::now();
    double det_err = 0.0, partial_err = 0.0, residual = 0.0, partial_ratio = 0.0;
    for (Objective obj : {Objective::Perimeter, Objective::Area}) {
        for (std::size_t n = 3; n <= 6; ++n) {
            const KernelSpec spec = kernel_for(obj, n);
            const MaximizerAnalysis a = analyze_maximizer(spec, spec.maximizers.front());
            det_err = std::max(det_err, rel(a.det_negG, closed_form_det_negG(obj, n)));
            const double quoted = closed_form_radial_partial(obj, n);
            for (double p : a.radial_partials) {
                partial_err = std::max(partial_err, std::abs(p - quoted));
                partial_ratio = std::max(partial_ratio, p / quoted);
            }
            for (double g : a.angular_gradient) residual = std::max(residual, std::abs(g));
        }
    }
    const bool pass = det_err <= 1e-4 && partial_err <= 1e-5 && residual < 1e-6;
    report(2, pass, "sub-Hessian, radial partials, gradient at the regular n-gon",
           fmt("n=3..6 both kernels: det(-G) max rel err %.3g (tol 1e-4) %s; radial partial max abs err %.3g "
               "(tol 1e-5) %s; gradient residual %.3g (tol 1e-6) %s; %.2f s",
               det_err, det_err <= 1e-4 ? "ok" : "bad", partial_err, partial_err <= 1e-5 ? "ok" : "bad", residual,
               residual < 1e-6 ? "ok" : "bad", seconds_since(t0)));
    if (partial_err > 1e-5) {
        note(fmt("numeric radial partials are %.6f x the quoted sin(pi/n) and (1/2)sin(2pi/n); each radius enters "
                 "two adjacent edge terms of the kernel",
                 partial_ratio));
    }
}

void criterion_constants() {
    double k_err = 0.0;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (double beta : {-0.9, -0.5, 0.0, 1.0, 2.5}) k_err = std::max(k_err, rel(compute_K(n, beta), K_oracle(n, beta)));
    }
    double b_err = 0.0;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (Objective obj : {Objective::Perimeter, Objective::Area}) {
        for (std::size_t n = 3; n <= 6; ++n) {
            for (double beta : {-0.5, 0.0, 1.5}) {
                const double numeric = compute_K(n, beta) * numeric_I(obj, n, beta);
                const double expected = compute_K(n, beta) * explicit_coefficient(obj, n, beta);
                b_err = std::max(b_err, rel(numeric, expected));
                const double r = expected / numeric / std::pow(2.0, static_cast<double>(n) * (beta + 1));
                ratio_lo = std::min(ratio_lo, r);
                ratio_hi = std::max(ratio_hi, r);
            }
        }
    }
    report(3, k_err <= 1e-10 && b_err <= 1e-3, "constant pipeline",
           fmt("K_n vs 50-digit oracle max rel err %.3g (tol 1e-10) %s; K_n * numeric I vs explicit coefficient max "
               "rel err %.4g (tol 1e-3) %s",
               k_err, k_err <= 1e-10 ? "ok" : "bad", b_err, b_err <= 1e-3 ? "ok" : "bad"));
    if (b_err > 1e-3) {
        note(fmt("explicit / (K_n * numeric I) = 2^{n(beta+1)} x [%.12f, %.12f] over the grid; the gap is exactly "
                 "the radial-partial factor",
                 ratio_lo, ratio_hi));
    }
}

void criterion_sampler() {
    constexpr std::size_t draws = 100000;
    constexpr int bins = 36;
    constexpr double chi2_critical = 66.61882884370104;  // df 35, upper 0.001
    bool pass = true;
    std::string detail;
    for (double beta : {-0.5, 0.0, 2.0}) {
        const BetaParams params(beta);
        Rng rng = SeedPolicy{77}.stream(static_cast<std::uint64_t>((beta + 1) * 1000));
        std::vector<double> r(draws);
        std::vector<double> count(bins, 0.0);
        for (auto& s : r) {
            const DiskPoint p = sample_point(params, rng);
            s = std::hypot(p.x, p.y);
            double phi = std::atan2(p.y, p.x);
            if (phi < 0) phi += 2 * pi;
            count[std::min(bins - 1, static_cast<int>(phi / (2 * pi) * bins))] += 1.0;
        }
        std::sort(r.begin(), r.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < draws; ++i) {
            const double F = 1.0 - std::pow(1.0 - r[i] * r[i], beta + 1.0);
            ks = std::max({ks, double(i + 1) / draws - F, F - double(i) / draws});
        }
        double chi2 = 0.0;
        const double expected = double(draws) / bins;
        for (double c : count) chi2 += (c - expected) * (c - expected) / expected;
        pass = pass && ks < 0.01 && chi2 < chi2_critical;
        detail += fmt("beta=%g KS %.4f chi2 %.2f; ", beta, ks, chi2);
    }
    report(4, pass, "sampler fidelity", detail + "limits KS < 0.01, chi2 < 66.62 (36 bins, alpha 0.001)");
}

void criterion_tail() {
    const auto t0 = std::chrono::steady_clock::now();
    const LimitLaw law = law_for(Objective::Perimeter, 3, 0.0);
    const auto r = tail_probe(Objective::Perimeter, 3, 0.0, {0.2, 0.3, 0.4, 0.5}, 1000000, 5);
    const double secs = seconds_since(t0);
    double p02 = 0.0;
    for (std::size_t i = 0; i < r.epsilon_grid.size(); ++i) {
        if (r.epsilon_grid[i] == 0.2) p02 = r.hit_probabilities[i];
    }
    const double predicted = tail_prediction(law, 0.2);
    const bool slope_ok = rel(r.fitted_slope, law.C) <= 0.10;
    const bool prob_ok = rel(p02, predicted) <= 0.20;
    report(5, slope_ok && prob_ok && secs < 300.0, "tail asymptotic",
           fmt("slope %.4f +- %.4f vs 4 (tol 10%%) %s; P(eps=0.2) %.4g vs predicted %.4g (tol 20%%) %s; %.1f s "
               "(limit 300 s)",
               r.fitted_slope, r.se_slope, slope_ok ? "ok" : "bad", p02, predicted, prob_ok ? "ok" : "bad", secs));
    std::string hits;
    for (std::size_t i = 0; i < r.epsilon_grid.size(); ++i) {
        hits += fmt("eps=%g hits=%llu; ", r.epsilon_grid[i], static_cast<unsigned long long>(r.hits[i]));
    }
    note(hits);
    const double coef = rederived_tail_coefficient(Objective::Perimeter, 3, 0.0);
    note(fmt("observed/predicted at eps=0.2 is %.4f; rederived leading coefficient %.5f gives %.4g, observed/rederived "
             "%.3f",
             p02 / predicted, coef, coef * std::pow(0.2, 4), p02 / (coef * std::pow(0.2, 4))));
}

std::vector<TrialRecord> simulation_records() {
    SimConfig c;
    c.objective = Objective::Perimeter;
    c.n = 3;
    c.beta = 0.0;
    c.sample_sizes = sim_sizes;
    c.trials = sim_trials;
    c.master_seed = sim_seed;
    return run_trials(c);
}

void criterion_limit_law(const std::vector<TrialRecord>& records, double secs) {
    const LimitLaw law = law_for(Objective::Perimeter, 3, 0.0);
    const LimitLaw alt = rederived_law(Objective::Perimeter, 3, 0.0);
    std::vector<double> ks, ks_alt;
    std::string ks_text;
    for (std::size_t N : sim_sizes) {
        const EmpiricalCDF e(scaled_values(records, N));
        ks.push_back(ks_distance(e, law));
        ks_alt.push_back(ks_distance(e, alt));
        ks_text += fmt("%zu:%.4f ", N, ks.back());
    }
    const bool decreasing = ks[0] > ks[1] && ks[1] > ks[2];
    const EmpiricalCDF largest(scaled_values(records, sim_sizes.back()));
    const ShapeFit fit = fit_shape(largest);
    const bool shape_ok = rel(fit.C_hat, law.C) <= 0.15;
    const double median = largest.quantile(0.5);
    const double law_median = weibull_quantile(law, 0.5);
    const bool median_ok = rel(median, law_median) <= 0.25;
    report(6, decreasing && shape_ok && median_ok && secs < 600.0, "limit-law trend",
           fmt("(a) KS %s%s; (b) C_hat %.4f +- %.4f vs 4 (tol 15%%) %s; (c) median T %.4f vs %.4f (tol 25%%) %s; "
               "%.1f s",
               ks_text.c_str(), decreasing ? "decreasing ok" : "not strictly decreasing bad", fit.C_hat, fit.se_C,
               shape_ok ? "ok" : "bad", median, law_median, median_ok ? "ok" : "bad", secs));
    note(fmt("B_hat %.5g vs law B %.5g; rederived B %.5g with median %.4f; KS to the rederived law "
             "%.4f / %.4f / %.4f",
             fit.B_hat, law.B, alt.B, weibull_quantile(alt, 0.5), ks_alt[0], ks_alt[1], ks_alt[2]));
}

void criterion_consistency(const std::vector<TrialRecord>& records) {
    const LimitLaw law = law_for(Objective::Perimeter, 3, 0.0);
    const ConsistencyReport rep = consistency_check(records, law.M, 0.01);
    report(7, rep.N == 4000 && rep.fraction_within >= 0.99, "consistency",
           fmt("N=%zu: M - H_N < 0.01 in %.4f of %zu trials (need 0.99)", rep.N, rep.fraction_within, sim_trials));
    note(fmt("quantiles of M - H_N at p=0.5/0.95/0.99: %.5f / %.5f / %.5f", rep.deficiency_quantiles[2],
             rep.deficiency_quantiles[4], rep.deficiency_quantiles[5]));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void criterion_determinism(const std::vector<TrialRecord>& records) {
    const fs::path root = fs::temp_directory_path() / "betapoly_acceptance";
    fs::remove_all(root);
    std::string sizes;
    for (std::size_t N : sim_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(N);
    auto run = [&](int threads) {
        const fs::path dir = root / ("threads" + std::to_string(threads));
        const std::string cmd = fmt("\"%s\" --threads %d simulate --objective perimeter --n 3 --beta 0 --N %s "
                                    "--trials %zu --seed %llu --out-dir \"%s\"",
                                    BETAPOLY_CLI_PATH, threads, sizes.c_str(), sim_trials,
                                    static_cast<unsigned long long>(sim_seed), dir.c_str());
        const int rc = std::system(cmd.c_str());
        return std::make_pair(rc, slurp(dir / "trials.csv"));
    };
    const auto [rc1, a] = run(1);
    const auto [rc4, b] = run(4);
    std::ostringstream in_process;
    write_trials_csv(in_process, records);
    const bool same = rc1 == 0 && rc4 == 0 && !a.empty() && a == b;
    report(8, same, "determinism across --threads",
           fmt("exit codes %d/%d, trials.csv %zu bytes, --threads 1 vs 4 %s", rc1, rc4, a.size(),
               a == b ? "byte-identical" : "differ"));
    note(fmt("in-process run_trials output %s the CLI trials.csv", in_process.str() == a ? "matches" : "differs from"));
    fs::remove_all(root);
}

}  // namespace

int main() {
    criterion_oracle_equivalence();
    criterion_sub_hessian();
    criterion_constants();
    criterion_sampler();
    criterion_tail();
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = simulation_records();
    const double secs = seconds_since(t0);
    criterion_limit_law(records, secs);
    criterion_consistency(records);
    criterion_determinism(records);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
