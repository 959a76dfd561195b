#include "betapoly/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace betapoly {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

BetaParams::BetaParams(double beta) : beta_(beta) {
    if (!(beta > -1.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be a finite number > -1, got " + std::to_string(beta));
    }
}

PolarPoint to_polar(DiskPoint p) noexcept {
    double phi = std::atan2(p.y, p.x);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return {phi, std::hypot(p.x, p.y)};
}

DiskPoint to_cartesian(PolarPoint p) noexcept {
    return {p.r * std::cos(p.phi), p.r * std::sin(p.phi)};
}

double uniform_open(Rng& rng) noexcept {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Rng SeedPolicy::stream(std::uint64_t trial_index) const {
    std::uint64_t state = master_seed;
    const std::uint64_t a = splitmix64(state);
    state ^= trial_index * 0xd1b54a32d192ed03ULL;
    const std::uint64_t b = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

double radius_cdf(const BetaParams& params, double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw std::domain_error("radius_cdf: s must lie in [0, 1]");
    }
    // 1 - (1 - s^2)^(beta+1), with 1 - s^2 = (1 - s)(1 + s) to keep digits near s = 1
    const double tail = (1.0 - s) * (1.0 + s);
    if (tail == 0.0) return 1.0;
    return -std::expm1((params.beta() + 1.0) * std::log(tail));
}

double sample_radius(const BetaParams& params, double u) {
    const double r2 = -std::expm1(std::log1p(-u) / (params.beta() + 1.0));
    return std::sqrt(std::clamp(r2, 0.0, 1.0));
}

DiskPoint sample_point(const BetaParams& params, Rng& rng) {
    const double phi = two_pi * uniform_open(rng);
    const double r = sample_radius(params, uniform_open(rng));
    DiskPoint p{r * std::cos(phi), r * std::sin(phi)};
    // r == 1 can round just outside the disk
    while (p.x * p.x + p.y * p.y > 1.0) {
        p.x = std::nextafter(p.x, 0.0);
        p.y = std::nextafter(p.y, 0.0);
    }
    return p;
}

std::vector<DiskPoint> sample_batch(const BetaParams& params, std::size_t count,
                                    const SeedPolicy& seeds, std::uint64_t trial_index) {
    if (count == 0) {
        throw std::invalid_argument("sample_batch: count must be at least 1");
    }
    Rng rng = seeds.stream(trial_index);
    std::vector<DiskPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_point(params, rng));
    return out;
}

double mean_radius(const BetaParams& params) {
    // E[r] = (beta+1) * B(3/2, beta+1) = (beta+1) Gamma(3/2) Gamma(beta+1) / Gamma(beta+5/2)
    const double b = params.beta();
    return std::exp(std::log(b + 1.0) + std::lgamma(1.5) + std::lgamma(b + 1.0) - std::lgamma(b + 2.5));
}

}  // namespace betapoly
