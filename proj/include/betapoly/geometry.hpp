#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "betapoly/sampler.hpp"

namespace betapoly {

enum class Objective { Perimeter, Area };

std::string_view to_string(Objective objective) noexcept;
/// Accepts "perimeter" or "area"; throws std::invalid_argument otherwise.
Objective parse_objective(std::string_view text);

/// Counterclockwise convex polygon given as indices into a point sample.
///
/// Consecutive triples turn strictly left; chains of one or two vertices
/// (all input points coincident or collinear) are flagged degenerate.
struct PolygonChain {
    std::vector<std::size_t> vertices;
    bool degenerate = false;

    std::size_t size() const noexcept { return vertices.size(); }
};

struct UMaxResult {
    double value = 0.0;
    std::vector<std::size_t> vertex_indices;  // counterclockwise, smallest index first
    std::size_t vertex_count = 0;
};

/// Andrew's monotone chain. Collinear and duplicate points are dropped.
PolygonChain convex_hull(std::span<const DiskPoint> points);

/// Hull of the sub-sample `subset` (indices into `points`).
PolygonChain convex_hull(std::span<const DiskPoint> points, std::span<const std::size_t> subset);

/// Closed-cycle edge length sum. A 2-vertex chain is a segment and has
/// perimeter 2|ab|; a single vertex has perimeter 0.
double polygon_perimeter(const PolygonChain& chain, std::span<const DiskPoint> points);

/// Shoelace area; 0 for chains of fewer than three vertices.
double polygon_area(const PolygonChain& chain, std::span<const DiskPoint> points);

double polygon_objective(const PolygonChain& chain, std::span<const DiskPoint> points,
                         Objective objective);

/// Hull vertex count above which max_kgon prints a cost warning.
inline constexpr std::size_t kgon_hull_warning = 2000;

/// Best polygon with at most k vertices chosen among the hull vertices.
///
/// Dynamic program over (last vertex, vertices used) for each choice of the
/// first vertex in hull order: O(h^3 k) for a hull of h vertices. Exact
/// value ties go to the lexicographically smallest sorted index list.
UMaxResult max_kgon(const PolygonChain& hull, std::span<const DiskPoint> points, std::size_t k,
                    Objective objective);

/// Maximum of the objective over all n-subsets of `points` (the U-max
/// statistic), computed exactly through convex_hull and max_kgon.
///
/// The reduction is valid because, with all other vertices fixed, the
/// perimeter is convex and the area affine in any one vertex, so optimal
/// subsets sit on extreme points of the full hull; adding points never
/// lowers either objective. Throws std::invalid_argument if n < 2 or
/// points.size() < n.
UMaxResult umax(std::span<const DiskPoint> points, std::size_t n, Objective objective);

/// Largest number of subsets umax_bruteforce will enumerate.
inline constexpr double bruteforce_subset_limit = 1e6;

/// Exhaustive reference for umax. Throws std::invalid_argument when
/// C(N, n) exceeds bruteforce_subset_limit.
UMaxResult umax_bruteforce(std::span<const DiskPoint> points, std::size_t n, Objective objective);

/// C(n, k) as a double.
double binomial(std::size_t n, std::size_t k) noexcept;

}  // namespace betapoly
