#include "betapoly/limits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace betapoly {

namespace {

void check_domain(std::size_t n, double beta) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(beta > -1.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and > -1");
}

}  // namespace

double compute_K(std::size_t n, double beta) {
    check_domain(n, beta);
    const double nd = static_cast<double>(n);
    const double c = (beta + 1.5) * nd;
    const double ln2 = std::numbers::ln2;
    const double log_k = (beta + 0.5) * nd * ln2 + 0.5 * ln2 + std::lgamma(c + 0.5) + nd * std::lgamma(beta + 2.0) -
                         0.5 * (nd - 1.0) * std::log(std::numbers::pi) - std::lgamma(nd + 1.0) -
                         std::lgamma(0.5 * (nd + 1.0)) - std::lgamma(c + beta + 1.5);
    return std::exp(log_k);
}

double shape_C(std::size_t n, double beta) {
    check_domain(n, beta);
    return (beta + 1.5) * static_cast<double>(n) - 0.5;
}

double exponent_A(std::size_t n, double beta) {
    return static_cast<double>(n) / shape_C(n, beta);
}

double rate_constant_B(std::size_t n, double beta, double I) {
    if (!(I > 0.0) || !std::isfinite(I)) throw std::invalid_argument("I must be finite and positive");
    return compute_K(n, beta) * I;
}

double weibull_cdf(const LimitLaw& law, double t) {
    if (!(t > 0.0)) return 0.0;
    return -std::expm1(-law.B * std::pow(t, law.C));
}

double weibull_quantile(const LimitLaw& law, double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("weibull_quantile: p must lie in [0, 1)");
    return std::pow(-std::log1p(-p) / law.B, 1.0 / law.C);
}

double extremal_value(Objective objective, std::size_t n) {
    const double nd = static_cast<double>(n);
    if (objective == Objective::Perimeter) {
        if (n < 2) throw std::invalid_argument("perimeter extremal value needs n >= 2");
        return 2.0 * nd * std::sin(std::numbers::pi / nd);
    }
    if (n < 3) throw std::invalid_argument("area extremal value needs n >= 3");
    return 0.5 * nd * std::sin(2.0 * std::numbers::pi / nd);
}

namespace {

double polygon_sine(Objective objective, std::size_t n) {
    if (n < 2 || (objective == Objective::Area && n < 3)) {
        throw std::invalid_argument("kernel arity out of range for the objective");
    }
    const double nd = static_cast<double>(n);
    return objective == Objective::Perimeter ? std::sin(std::numbers::pi / nd)
                                             : std::sin(2.0 * std::numbers::pi / nd);
}

}  // namespace

double closed_form_det_negG(Objective objective, std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::exp((1.0 - nd) * std::numbers::ln2 + std::log(nd) +
                    (nd - 1.0) * std::log(polygon_sine(objective, n)));
}

double closed_form_radial_partial(Objective objective, std::size_t n) {
    const double s = polygon_sine(objective, n);
    return objective == Objective::Perimeter ? s : 0.5 * s;
}

double closed_form_I(Objective objective, std::size_t n, double beta) {
    check_domain(n, beta);
    const double nd = static_cast<double>(n);
    const double log_term = -0.5 * std::log(closed_form_det_negG(objective, n)) -
                            (beta + 1.0) * nd * std::log(closed_form_radial_partial(objective, n));
    return std::exp(std::lgamma(nd) + log_term);  // (n-1)! equal terms
}

LimitLaw law_from_I(double M, std::size_t n, double beta, double I) {
    LimitLaw law;
    law.n = n;
    law.beta = beta;
    law.M = M;
    law.C = shape_C(n, beta);
    law.A = exponent_A(n, beta);
    law.B = rate_constant_B(n, beta, I);
    return law;
}

LimitLaw law_for(Objective objective, std::size_t n, double beta) {
    return law_from_I(extremal_value(objective, n), n, beta, closed_form_I(objective, n, beta));
}

double tail_prediction(const LimitLaw& law, double eps) {
    if (!(eps > 0.0)) return 0.0;
    return std::exp(std::lgamma(static_cast<double>(law.n) + 1.0)) * law.B * std::pow(eps, law.C);
}

}  // namespace betapoly
