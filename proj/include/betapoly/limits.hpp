#pragma once

#include <cstddef>

#include "betapoly/geometry.hpp"
#include "betapoly/kernels.hpp"

namespace betapoly {

/// Weibull limit of the scaled deficiency T = N^A (M - H_N):
/// P[T <= t] -> 1 - exp(-B t^C).
struct LimitLaw {
    double A = 0.0;  // scaling exponent, n / C
    double B = 0.0;  // rate constant, K_n * I
    double C = 0.0;  // shape, (beta + 3/2) n - 1/2
    double M = 0.0;  // extremal kernel value
    std::size_t n = 0;
    double beta = 0.0;
};

/// The gamma-function constant K_n of the limit law, evaluated in log space:
///
///   K_n = 2^{(beta+1/2)n+1/2} Gamma((beta+3/2)n+1/2) Gamma(beta+2)^n
///         / (pi^{(n-1)/2} n! Gamma((n+1)/2) Gamma((beta+3/2)n+beta+3/2))
///
/// Throws std::invalid_argument for n < 2 or beta <= -1.
double compute_K(std::size_t n, double beta);

double exponent_A(std::size_t n, double beta);
double shape_C(std::size_t n, double beta);

/// B = K_n * I. Throws std::invalid_argument unless I > 0.
double rate_constant_B(std::size_t n, double beta, double I);

/// 1 - exp(-B t^C); 0 for t <= 0.
double weibull_cdf(const LimitLaw& law, double t);

/// Inverse of weibull_cdf for p in [0, 1).
double weibull_quantile(const LimitLaw& law, double p);

/// Perimeter 2n sin(pi/n) or area (n/2) sin(2pi/n) of the regular inscribed n-gon.
double extremal_value(Objective objective, std::size_t n);

/// det(-G) at the regular n-gon: 2^{1-n} n s^{n-1}, s = sin(pi/n) for the
/// perimeter and sin(2pi/n) for the area.
double closed_form_det_negG(Objective objective, std::size_t n);

/// Quoted closed-form radial partial at the regular n-gon: sin(pi/n) for the
/// perimeter, sin(2pi/n)/2 for the area.
double closed_form_radial_partial(Objective objective, std::size_t n);

/// Closed-form I for the built-in kernels, built from
/// det(-G) = 2^{1-n} n s^{n-1} and radial partials p, with
/// (s, p) = (sin(pi/n), sin(pi/n)) for the perimeter and
/// (sin(2pi/n), sin(2pi/n)/2) for the area.
double closed_form_I(Objective objective, std::size_t n, double beta);

/// Limit law for the perimeter or area U-max statistic, using closed_form_I.
LimitLaw law_for(Objective objective, std::size_t n, double beta);

/// Limit law for an arbitrary kernel given a precomputed I.
LimitLaw law_from_I(double M, std::size_t n, double beta, double I);

/// Prediction for P[f(U_1..U_n) >= M - eps]: n! K_n I eps^C.
double tail_prediction(const LimitLaw& law, double eps);

}  // namespace betapoly
