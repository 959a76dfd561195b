#include "betapoly/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace betapoly {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Polar {
    double phi;
    double r;
};

// Point 1 at angle 0 followed by points 2..n, sorted by reduced angle.
std::vector<Polar> sorted_polar(std::span<const double> angles, std::span<const double> radii) {
    std::vector<Polar> pts;
    pts.reserve(radii.size());
    pts.push_back({0.0, radii[0]});
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double phi = std::fmod(angles[i], two_pi);
        if (phi < 0.0) phi += two_pi;
        pts.push_back({phi, radii[i + 1]});
    }
    std::stable_sort(pts.begin() + 1, pts.end(), [](const Polar& a, const Polar& b) { return a.phi < b.phi; });
    return pts;
}

void check_arguments(std::size_t n, std::span<const double> angles, std::span<const double> radii) {
    if (angles.size() + 1 != n || radii.size() != n) {
        throw std::invalid_argument("kernel expects " + std::to_string(n - 1) + " angles and " +
                                    std::to_string(n) + " radii");
    }
}

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

double eval_checked(const KernelSpec& spec, std::span<const double> angles, std::span<const double> radii) {
    const double v = spec.evaluate(angles, radii);
    if (!std::isfinite(v)) {
        throw std::domain_error("kernel is not finite at a finite-difference stencil point");
    }
    return v;
}

std::vector<double> central_gradient(const KernelSpec& spec, const Maximizer& at, double step) {
    std::vector<double> angles = at.angles;
    std::vector<double> grad(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double x0 = angles[i];
        angles[i] = x0 + step;
        const double fp = eval_checked(spec, angles, at.radii);
        angles[i] = x0 - step;
        const double fm = eval_checked(spec, angles, at.radii);
        angles[i] = x0;
        grad[i] = (fp - fm) / (2.0 * step);
    }
    return grad;
}

Eigen::MatrixXd central_hessian(const KernelSpec& spec, const Maximizer& at, double step) {
    std::vector<double> x = at.angles;
    const std::size_t m = x.size();
    Eigen::MatrixXd g(m, m);
    const double f0 = eval_checked(spec, x, at.radii);
    auto f = [&](std::size_t i, double di, std::size_t j, double dj) {
        std::vector<double> y = x;
        y[i] += di;
        y[j] += dj;
        return eval_checked(spec, y, at.radii);
    };
    for (std::size_t i = 0; i < m; ++i) {
        g(i, i) = (f(i, step, i, 0.0) - 2.0 * f0 + f(i, -step, i, 0.0)) / (step * step);
        for (std::size_t j = 0; j < i; ++j) {
            const double v = (f(i, step, j, step) - f(i, step, j, -step) - f(i, -step, j, step) +
                              f(i, -step, j, -step)) /
                             (4.0 * step * step);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

}  // namespace

KernelSpec make_kernel(std::size_t arity, PolarKernelFn evaluate, double max_value,
                       std::vector<Maximizer> maximizers, std::size_t symmetry_multiplicity) {
    if (arity < 2) throw std::invalid_argument("kernel arity must be at least 2");
    if (!evaluate) throw std::invalid_argument("kernel needs an evaluate function");
    if (maximizers.empty()) throw std::invalid_argument("kernel needs at least one maximizer");
    if (symmetry_multiplicity == 0 || symmetry_multiplicity % maximizers.size() != 0) {
        throw std::invalid_argument("symmetry multiplicity must be a positive multiple of the maximizer count");
    }
    for (const Maximizer& m : maximizers) {
        if (m.angles.size() + 1 != arity || m.radii.size() != arity) {
            throw std::invalid_argument("maximizer has the wrong number of coordinates");
        }
        if (std::any_of(m.radii.begin(), m.radii.end(), [](double r) { return r != 1.0; })) {
            throw std::invalid_argument("maximizer radii must all equal 1");
        }
        std::vector<double> sorted = m.angles;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.front() <= 0.0 || sorted.back() >= two_pi ||
            std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("maximizer angles must be distinct and inside (0, 2pi)");
        }
        const double v = evaluate(m.angles, m.radii);
        if (!(std::abs(v - max_value) <= 1e-10)) {
            throw std::invalid_argument("kernel value at maximizer differs from the declared maximum");
        }
    }
    return KernelSpec{arity, std::move(evaluate), max_value, std::move(maximizers), symmetry_multiplicity};
}

Maximizer regular_polygon_maximizer(std::size_t n) {
    Maximizer m;
    for (std::size_t i = 1; i < n; ++i) m.angles.push_back(two_pi * static_cast<double>(i) / static_cast<double>(n));
    m.radii.assign(n, 1.0);
    return m;
}

KernelSpec perimeter_kernel(std::size_t n) {
    if (n < 2) throw std::invalid_argument("perimeter kernel needs n >= 2");
    auto h = [n](std::span<const double> angles, std::span<const double> radii) {
        check_arguments(n, angles, radii);
        const auto pts = sorted_polar(angles, radii);
        double total = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Polar& a = pts[i];
            const Polar& b = pts[(i + 1) % pts.size()];
            const double gap = (i + 1 == pts.size() ? two_pi : b.phi) - a.phi;
            const double sq = a.r * a.r + b.r * b.r - 2.0 * a.r * b.r * std::cos(gap);
            total += std::sqrt(std::max(sq, 0.0));
        }
        return total;
    };
    const double M = 2.0 * static_cast<double>(n) * std::sin(std::numbers::pi / static_cast<double>(n));
    return make_kernel(n, h, M, {regular_polygon_maximizer(n)}, static_cast<std::size_t>(factorial(n - 1)));
}

KernelSpec area_kernel(std::size_t n) {
    if (n < 3) throw std::invalid_argument("area kernel needs n >= 3");
    auto h = [n](std::span<const double> angles, std::span<const double> radii) {
        check_arguments(n, angles, radii);
        const auto pts = sorted_polar(angles, radii);
        double total = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Polar& a = pts[i];
            const Polar& b = pts[(i + 1) % pts.size()];
            const double gap = (i + 1 == pts.size() ? two_pi : b.phi) - a.phi;
            total += a.r * b.r * std::sin(gap);
        }
        return 0.5 * total;
    };
    const double M = 0.5 * static_cast<double>(n) * std::sin(two_pi / static_cast<double>(n));
    return make_kernel(n, h, M, {regular_polygon_maximizer(n)}, static_cast<std::size_t>(factorial(n - 1)));
}

KernelSpec kernel_for(Objective objective, std::size_t n) {
    return objective == Objective::Perimeter ? perimeter_kernel(n) : area_kernel(n);
}

std::vector<double> numeric_angular_gradient(const KernelSpec& spec, const Maximizer& at, double step,
                                             bool richardson) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    auto coarse = central_gradient(spec, at, step);
    if (!richardson) return coarse;
    auto fine = central_gradient(spec, at, 0.5 * step);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return coarse;
}

MaximizerAnalysis numeric_sub_hessian(const KernelSpec& spec, const Maximizer& at, double step,
                                      bool richardson) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    MaximizerAnalysis out;
    out.sub_hessian = central_hessian(spec, at, step);
    if (richardson) {
        out.sub_hessian = (4.0 * central_hessian(spec, at, 0.5 * step) - out.sub_hessian) / 3.0;
    }
    const Eigen::MatrixXd neg = -out.sub_hessian;
    out.det_negG = neg.rows() == 0 ? 1.0 : neg.partialPivLu().determinant();
    out.a6_pass = out.det_negG > 0.0 && neg.llt().info() == Eigen::Success;
    return out;
}

std::vector<double> numeric_radial_partials(const KernelSpec& spec, const Maximizer& at, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    std::vector<double> radii = at.radii;
    std::vector<double> partials(radii.size());
    const double f0 = eval_checked(spec, at.angles, radii);
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double r0 = radii[j];
        radii[j] = r0 - step;
        const double f1 = eval_checked(spec, at.angles, radii);
        radii[j] = r0 - 2.0 * step;
        const double f2 = eval_checked(spec, at.angles, radii);
        radii[j] = r0;
        partials[j] = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * step);
    }
    return partials;
}

MaximizerAnalysis analyze_maximizer(const KernelSpec& spec, const Maximizer& at, const DifferenceSteps& steps) {
    MaximizerAnalysis out = numeric_sub_hessian(spec, at, steps.hessian, steps.richardson);
    out.angular_gradient = numeric_angular_gradient(spec, at, steps.gradient, steps.richardson);
    out.radial_partials = numeric_radial_partials(spec, at, steps.radial);
    out.a7_pass = std::all_of(out.radial_partials.begin(), out.radial_partials.end(),
                              [](double p) { return p > 0.0; });
    return out;
}

std::vector<MaximizerAnalysis> analyze_kernel(const KernelSpec& spec, const DifferenceSteps& steps) {
    std::vector<MaximizerAnalysis> out;
    out.reserve(spec.maximizers.size());
    for (const Maximizer& m : spec.maximizers) out.push_back(analyze_maximizer(spec, m, steps));
    return out;
}

double maximizer_weight(double det_negG, std::span<const double> radial_partials, double beta) {
    double log_prod = 0.0;
    for (double p : radial_partials) log_prod += std::log(p);
    return std::exp(-0.5 * std::log(det_negG) - (beta + 1.0) * log_prod);
}

double compute_I(const KernelSpec& spec, std::span<const MaximizerAnalysis> analyses, double beta) {
    if (analyses.empty()) throw std::invalid_argument("compute_I: no maximizer analyses supplied");
    if (analyses.size() != spec.maximizers.size()) {
        throw std::invalid_argument("compute_I: expected one analysis per canonical maximizer");
    }
    const double copies =
        static_cast<double>(spec.symmetry_multiplicity) / static_cast<double>(spec.maximizers.size());
    double total = 0.0;
    for (const MaximizerAnalysis& a : analyses) {
        if (!a.a6_pass) throw std::invalid_argument("compute_I: sub-Hessian is not negative definite (A6)");
        if (!a.a7_pass) throw std::invalid_argument("compute_I: a radial partial is not positive (A7)");
        total += copies * maximizer_weight(a.det_negG, a.radial_partials, beta);
    }
    return total;
}

}  // namespace betapoly
