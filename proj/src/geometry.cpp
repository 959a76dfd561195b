#include "betapoly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace betapoly {

namespace {

double cross(const DiskPoint& o, const DiskPoint& a, const DiskPoint& b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(const DiskPoint& a, const DiskPoint& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

PolygonChain hull_of(std::span<const DiskPoint> points, std::vector<std::size_t> idx) {
    if (idx.empty()) {
        throw std::invalid_argument("convex_hull: need at least one point");
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const DiskPoint& p = points[a];
        const DiskPoint& q = points[b];
        if (p.x != q.x) return p.x < q.x;
        if (p.y != q.y) return p.y < q.y;
        return a < b;
    });
    idx.erase(std::unique(idx.begin(), idx.end(),
                          [&](std::size_t a, std::size_t b) { return points[a] == points[b]; }),
              idx.end());

    PolygonChain chain;
    if (idx.size() == 1) {
        chain.vertices = idx;
        chain.degenerate = true;
        return chain;
    }

    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i : idx) {
        while (k >= 2 && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (std::size_t j = idx.size() - 1; j-- > 0;) {
        const std::size_t i = idx[j];
        while (k >= lower && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);

    chain.vertices = std::move(hull);
    chain.degenerate = chain.vertices.size() < 3;
    return chain;
}

// Rotate a counterclockwise cycle so its smallest index comes first.
std::vector<std::size_t> canonical_cycle(std::vector<std::size_t> cycle) {
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
    return cycle;
}

bool lexicographically_smaller(std::vector<std::size_t> a, std::vector<std::size_t> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a < b;
}

UMaxResult finish(std::vector<std::size_t> cycle, std::span<const DiskPoint> points, Objective objective) {
    PolygonChain chain{canonical_cycle(std::move(cycle)), false};
    chain.degenerate = chain.size() < 3;
    UMaxResult result;
    result.value = polygon_objective(chain, points, objective);
    result.vertex_count = chain.size();
    result.vertex_indices = std::move(chain.vertices);
    return result;
}

}  // namespace

std::string_view to_string(Objective objective) noexcept {
    return objective == Objective::Perimeter ? "perimeter" : "area";
}

Objective parse_objective(std::string_view text) {
    if (text == "perimeter") return Objective::Perimeter;
    if (text == "area") return Objective::Area;
    throw std::invalid_argument("objective must be 'perimeter' or 'area', got '" + std::string(text) + "'");
}

PolygonChain convex_hull(std::span<const DiskPoint> points) {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return hull_of(points, std::move(idx));
}

PolygonChain convex_hull(std::span<const DiskPoint> points, std::span<const std::size_t> subset) {
    return hull_of(points, std::vector<std::size_t>(subset.begin(), subset.end()));
}

double polygon_perimeter(const PolygonChain& chain, std::span<const DiskPoint> points) {
    const auto& v = chain.vertices;
    if (v.size() < 2) return 0.0;
    if (v.size() == 2) return 2.0 * distance(points[v[0]], points[v[1]]);
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        total += distance(points[v[i]], points[v[(i + 1) % v.size()]]);
    }
    return total;
}

double polygon_area(const PolygonChain& chain, std::span<const DiskPoint> points) {
    const auto& v = chain.vertices;
    if (v.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const DiskPoint& a = points[v[i]];
        const DiskPoint& b = points[v[(i + 1) % v.size()]];
        twice += a.x * b.y - a.y * b.x;
    }
    return 0.5 * twice;
}

double polygon_objective(const PolygonChain& chain, std::span<const DiskPoint> points,
                         Objective objective) {
    return objective == Objective::Perimeter ? polygon_perimeter(chain, points)
                                             : polygon_area(chain, points);
}

UMaxResult max_kgon(const PolygonChain& hull, std::span<const DiskPoint> points, std::size_t k,
                    Objective objective) {
    if (k < 2) {
        throw std::invalid_argument("max_kgon: k must be at least 2");
    }
    const std::size_t h = hull.size();
    if (h == 0) {
        throw std::invalid_argument("max_kgon: empty hull");
    }
    if (h <= 2) {
        return finish(hull.vertices, points, objective);
    }
    if (h > kgon_hull_warning) {
        std::clog << "warning: hull has " << h << " vertices; max_kgon is O(h^3 k)\n";
    }

    const std::vector<std::size_t>& hv = hull.vertices;
    const std::size_t kmax = std::min(k, h);
    constexpr double none = -std::numeric_limits<double>::infinity();
    constexpr std::size_t no_parent = std::numeric_limits<std::size_t>::max();

    auto edge = [&](std::size_t a, std::size_t b) { return distance(points[hv[a]], points[hv[b]]); };

    // best[j][b]: best open chain start -> ... -> b using j vertices (hull positions start < ... < b)
    std::vector<std::vector<double>> best(kmax + 1, std::vector<double>(h, none));
    std::vector<std::vector<std::size_t>> parent(kmax + 1, std::vector<std::size_t>(h, no_parent));

    auto chain_of = [&](std::size_t start, std::size_t j, std::size_t b) {
        std::vector<std::size_t> out(j);
        for (std::size_t level = j; level >= 2; --level) {
            out[level - 1] = hv[b];
            b = parent[level][b];
        }
        out[0] = hv[start];
        return out;
    };

    double best_value = none;
    std::vector<std::size_t> best_cycle;

    for (std::size_t start = 0; start + 1 < h; ++start) {
        for (auto& row : best) std::fill(row.begin(), row.end(), none);
        for (std::size_t b = start + 1; b < h; ++b) {
            best[2][b] = objective == Objective::Perimeter ? edge(start, b) : 0.0;
            parent[2][b] = start;
        }
        for (std::size_t j = 3; j <= kmax; ++j) {
            for (std::size_t b = start + j - 1; b < h; ++b) {
                double top = none;
                std::size_t arg = no_parent;
                for (std::size_t a = start + j - 2; a < b; ++a) {
                    if (best[j - 1][a] == none) continue;
                    const double step =
                        objective == Objective::Perimeter
                            ? edge(a, b)
                            : 0.5 * cross(points[hv[start]], points[hv[a]], points[hv[b]]);
                    const double candidate = best[j - 1][a] + step;
                    if (candidate > top ||
                        (candidate == top &&
                         lexicographically_smaller(chain_of(start, j - 1, a), chain_of(start, j - 1, arg)))) {
                        top = candidate;
                        arg = a;
                    }
                }
                best[j][b] = top;
                parent[j][b] = arg;
            }
        }
        for (std::size_t j = 2; j <= kmax; ++j) {
            for (std::size_t b = start + j - 1; b < h; ++b) {
                if (best[j][b] == none) continue;
                const double closed =
                    best[j][b] + (objective == Objective::Perimeter ? edge(b, start) : 0.0);
                if (closed > best_value) {
                    best_value = closed;
                    best_cycle = chain_of(start, j, b);
                } else if (closed == best_value) {
                    auto cycle = chain_of(start, j, b);
                    if (lexicographically_smaller(cycle, best_cycle)) best_cycle = std::move(cycle);
                }
            }
        }
    }
    return finish(std::move(best_cycle), points, objective);
}

UMaxResult umax(std::span<const DiskPoint> points, std::size_t n, Objective objective) {
    if (n < 2) {
        throw std::invalid_argument("umax: n must be at least 2");
    }
    if (points.size() < n) {
        throw std::invalid_argument("umax: need N >= n points, got N=" + std::to_string(points.size()) +
                                    " n=" + std::to_string(n));
    }
    return max_kgon(convex_hull(points), points, n, objective);
}

double binomial(std::size_t n, std::size_t k) noexcept {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
}

UMaxResult umax_bruteforce(std::span<const DiskPoint> points, std::size_t n, Objective objective) {
    if (n < 2) {
        throw std::invalid_argument("umax_bruteforce: n must be at least 2");
    }
    const std::size_t N = points.size();
    if (N < n) {
        throw std::invalid_argument("umax_bruteforce: need N >= n points");
    }
    if (binomial(N, n) > bruteforce_subset_limit) {
        throw std::invalid_argument("umax_bruteforce: C(" + std::to_string(N) + ", " + std::to_string(n) +
                                    ") subsets exceeds the enumeration guard");
    }

    std::vector<std::size_t> subset(n);
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    UMaxResult best;
    bool have = false;
    while (true) {
        PolygonChain hull = convex_hull(points, subset);
        hull.vertices = canonical_cycle(std::move(hull.vertices));
        const double value = polygon_objective(hull, points, objective);
        if (!have || value > best.value ||
            (value == best.value && lexicographically_smaller(hull.vertices, best.vertex_indices))) {
            best.value = value;
            best.vertex_count = hull.size();
            best.vertex_indices = std::move(hull.vertices);
            have = true;
        }
        // next combination in lexicographic order
        std::size_t i = n;
        while (i > 0 && subset[i - 1] == N - n + i - 1) --i;
        if (i == 0) break;
        ++subset[i - 1];
        for (std::size_t j = i; j < n; ++j) subset[j] = subset[j - 1] + 1;
    }
    return best;
}

}  // namespace betapoly
