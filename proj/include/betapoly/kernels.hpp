#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "betapoly/geometry.hpp"

namespace betapoly {

/// A kernel written in rotation-invariant polar form
/// h(phi_2, ..., phi_n, r_1, ..., r_n): point 1 sits at angle 0, point i at
/// central angle phi_i measured counterclockwise from point 1.
using PolarKernelFn = std::function<double(std::span<const double> angles, std::span<const double> radii)>;

/// Point where h attains its maximum; radii are all 1.
struct Maximizer {
    std::vector<double> angles;  // n - 1 central angles in (0, 2pi)
    std::vector<double> radii;   // n entries, all 1
};

struct KernelSpec {
    std::size_t arity = 0;
    PolarKernelFn evaluate;
    double max_value = 0.0;
    /// Canonical maximizers. Each stands for symmetry_multiplicity / maximizers.size()
    /// maximizers related to it by relabeling the points.
    std::vector<Maximizer> maximizers;
    std::size_t symmetry_multiplicity = 1;
};

/// Validates a user kernel: evaluate(maximizer) must equal max_value within
/// 1e-10, angles must be distinct and inside (0, 2pi), radii all 1, and the
/// multiplicity a positive multiple of the maximizer count. Throws
/// std::invalid_argument on violation. Does not search for maximizers.
KernelSpec make_kernel(std::size_t arity, PolarKernelFn evaluate, double max_value,
                       std::vector<Maximizer> maximizers, std::size_t symmetry_multiplicity);

/// Sum of chord lengths around the angularly sorted points. n >= 2.
KernelSpec perimeter_kernel(std::size_t n);

/// Sum of r_a r_b sin(phi_b - phi_a) / 2 around the angularly sorted points. n >= 3.
KernelSpec area_kernel(std::size_t n);

KernelSpec kernel_for(Objective objective, std::size_t n);

/// The regular n-gon with point 1 at angle 0: angles 2pi i/n, radii 1.
Maximizer regular_polygon_maximizer(std::size_t n);

struct MaximizerAnalysis {
    std::vector<double> angular_gradient;
    Eigen::MatrixXd sub_hessian;  // G, (n-1) x (n-1)
    double det_negG = 0.0;
    std::vector<double> radial_partials;
    bool a6_pass = false;  // -G positive definite
    bool a7_pass = false;  // every radial partial > 0
};

struct DifferenceSteps {
    double gradient = 1e-5;
    double hessian = 1e-4;
    double radial = 1e-6;
    bool richardson = false;
};

/// Central differences in the angular block. Throws std::domain_error if h
/// is not finite at any stencil point.
std::vector<double> numeric_angular_gradient(const KernelSpec& spec, const Maximizer& at, double step,
                                             bool richardson = false);

/// Fills sub_hessian, det_negG and a6_pass.
MaximizerAnalysis numeric_sub_hessian(const KernelSpec& spec, const Maximizer& at, double step,
                                      bool richardson = false);

/// dh/dr_j at r = 1, by second-order one-sided differences taken inward.
std::vector<double> numeric_radial_partials(const KernelSpec& spec, const Maximizer& at, double step);

/// Gradient, sub-Hessian and radial partials at one maximizer.
MaximizerAnalysis analyze_maximizer(const KernelSpec& spec, const Maximizer& at,
                                    const DifferenceSteps& steps = {});

/// Analysis of every canonical maximizer of `spec`.
std::vector<MaximizerAnalysis> analyze_kernel(const KernelSpec& spec, const DifferenceSteps& steps = {});

/// Contribution of one maximizer: 1 / (sqrt(det(-G)) * prod_j (dh/dr_j)^(beta+1)).
double maximizer_weight(double det_negG, std::span<const double> radial_partials, double beta);

/// Sum of maximizer_weight over all maximizers of the kernel. `analyses` must
/// line up with spec.maximizers; each canonical term is counted
/// symmetry_multiplicity / maximizers.size() times. Throws
/// std::invalid_argument on a count mismatch or a failed A6/A7 check.
double compute_I(const KernelSpec& spec, std::span<const MaximizerAnalysis> analyses, double beta);

}  // namespace betapoly
