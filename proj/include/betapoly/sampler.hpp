#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace betapoly {

/// Parameter of the beta density (beta+1)/pi * (1 - |x|^2)^beta on the unit disk.
class BetaParams {
public:
    /// Throws std::invalid_argument unless beta > -1.
    explicit BetaParams(double beta);

    double beta() const noexcept { return beta_; }

private:
    double beta_;
};

struct DiskPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const DiskPoint&, const DiskPoint&) = default;
};

struct PolarPoint {
    double phi = 0.0;  // [0, 2pi)
    double r = 0.0;    // [0, 1]
};

PolarPoint to_polar(DiskPoint p) noexcept;
DiskPoint to_cartesian(PolarPoint p) noexcept;

using Rng = std::mt19937_64;

/// Uniform double in the open interval (0, 1). Uses the top 53 bits of one
/// generator word so the sequence is identical on every standard library.
double uniform_open(Rng& rng) noexcept;

/// Derives independent generator streams from a master seed.
///
/// The stream for a given trial index depends only on (master_seed,
/// trial_index), so a trial reproduces bit-for-bit no matter which thread
/// runs it or in what order.
struct SeedPolicy {
    std::uint64_t master_seed = 0;

    Rng stream(std::uint64_t trial_index) const;
};

/// F(s) = 1 - (1 - s^2)^(beta+1). Throws std::domain_error outside [0, 1].
double radius_cdf(const BetaParams& params, double s);

/// Inverse of radius_cdf for u in (0, 1).
///
/// For beta < -0.99 the exponent 1/(beta+1) exceeds 100 and the radius
/// saturates at 1 for moderate u; the round trip then loses digits.
double sample_radius(const BetaParams& params, double u);

/// One draw. The angle is taken from the generator before the radius.
DiskPoint sample_point(const BetaParams& params, Rng& rng);

/// `count` points from stream `trial_index`. Throws std::invalid_argument if count == 0.
std::vector<DiskPoint> sample_batch(const BetaParams& params, std::size_t count,
                                    const SeedPolicy& seeds, std::uint64_t trial_index);

/// Mean radius E[r] = integral of s * 2(beta+1) s (1-s^2)^beta ds over [0,1], closed form.
double mean_radius(const BetaParams& params);

}  // namespace betapoly
