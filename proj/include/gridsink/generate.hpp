#pragma once

// Instance generators: value-matrix orientations, the one-line-and-N-points
// construction, exhaustive enumeration, square padding and separable
// d-dimensional grids.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gridsink/grid.hpp"
#include "gridsink/random.hpp"

namespace gridsink {

/// Acyclic by construction, but a USO only if every subgrid has one minimum.
inline OrientedGrid orient_from_values(const ValueMatrix& vm) { return materialize(vm); }

using Point = std::array<double, 2>;

/// m points left of the line x = 0 and n points right of it. Segment (i, j)
/// is grid vertex u_ij; a higher crossing points to a lower one.
struct PointInstance {
    std::vector<Point> left;
    std::vector<Point> right;
};

/// Height at which the segment between l and r crosses x = 0.
inline double crossing_height(const Point& l, const Point& r) {
    return l[1] + (r[1] - l[1]) * (0.0 - l[0]) / (r[0] - l[0]);
}

inline ValueMatrix crossing_heights(const PointInstance& points) {
    if (points.left.empty() || points.right.empty()) {
        throw StructuralError("point instance needs points on both sides of the line");
    }
    for (const Point& p : points.left)
        if (!(p[0] < 0.0)) throw StructuralError("left points must have x < 0");
    for (const Point& p : points.right)
        if (!(p[0] > 0.0)) throw StructuralError("right points must have x > 0");
    GridShape shape(static_cast<int>(points.left.size()), static_cast<int>(points.right.size()));
    std::vector<double> heights;
    heights.reserve(shape.vertex_count());
    for (const Point& l : points.left)
        for (const Point& r : points.right) heights.push_back(crossing_height(l, r));
    return {shape, std::move(heights)};
}

namespace detail {

inline bool distinct_pairwise_sums(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> sums;
    sums.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b) sums.push_back(x + y);
    std::sort(sums.begin(), sums.end());
    return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

}  // namespace detail

/// Left points (-1, y_i) and right points (+1, y'_j) with ordinates drawn so
/// that all m*n crossing heights are distinct. Deterministic in seed.
inline PointInstance one_line_points(int m, int n, Seed seed) {
    GridShape checked(m, n);
    Rng rng(seed);
    std::vector<double> ys(static_cast<std::size_t>(m));
    std::vector<double> zs(static_cast<std::size_t>(n));
    do {
        for (double& y : ys) y = rng.unit52();
        for (double& z : zs) z = rng.unit52();
    } while (!detail::distinct_pairwise_sums(ys, zs));
    PointInstance points;
    for (double y : ys) points.left.push_back({-1.0, y});
    for (double z : zs) points.right.push_back({1.0, z});
    return points;
}

/// Crossing heights of a random one-line instance; always induces a USO.
inline ValueMatrix gen_one_line(int m, int n, Seed seed) {
    return crossing_heights(one_line_points(m, n, seed));
}

struct EnumerationLimits {
    int max_edges = 20;
};

/// Calls visit(grid) for every USO of the shape, in increasing order of the
/// orientation bitmask over all_edges(shape) (bit set = first -> second).
/// Returns the number of USOs visited.
inline std::uint64_t for_each_uso(const GridShape& shape,
                                  const std::function<void(const OrientedGrid&)>& visit,
                                  const EnumerationLimits& limits = {}) {
    const std::vector<Edge> edges = all_edges(shape);
    const int count = static_cast<int>(edges.size());
    if (count > limits.max_edges || count > 40 || shape.rows > 62 || shape.cols > 62) {
        throw CapExceeded("enumerate_usos: " + std::to_string(count) + " edges exceeds cap " +
                          std::to_string(limits.max_edges));
    }
    std::vector<std::uint64_t> row_out(shape.vertex_count());
    std::vector<std::uint64_t> col_out(shape.vertex_count());
    std::uint64_t found = 0;
    const std::uint64_t total = std::uint64_t{1} << count;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::fill(row_out.begin(), row_out.end(), 0);
        std::fill(col_out.begin(), col_out.end(), 0);
        for (int k = 0; k < count; ++k) {
            const Edge& e = edges[static_cast<std::size_t>(k)];
            const bool forward = (mask >> k) & 1U;
            const Vertex from = forward ? e.a : e.b;
            const Vertex to = forward ? e.b : e.a;
            if (e.is_row_edge()) row_out[shape.index(from)] |= std::uint64_t{1} << to.col;
            else col_out[shape.index(from)] |= std::uint64_t{1} << to.row;
        }
        if (!detail::check_masks(shape, row_out, col_out).ok()) continue;
        ++found;
        if (visit) {
            OrientedGrid grid(shape);
            for (int k = 0; k < count; ++k) {
                grid.set_direction(edges[static_cast<std::size_t>(k)],
                                   (mask >> k) & 1U ? Direction::TowardSecond : Direction::TowardFirst);
            }
            visit(grid);
        }
    }
    return found;
}

inline std::vector<OrientedGrid> enumerate_usos(const GridShape& shape,
                                                const EnumerationLimits& limits = {}) {
    std::vector<OrientedGrid> out;
    for_each_uso(shape, [&](const OrientedGrid& g) { out.push_back(g); }, limits);
    return out;
}

/// Orientation rule of the square padding. Vertices with row >= rows or
/// col >= cols are synthetic: they lose every comparison against a real
/// vertex, and among themselves the lexicographically larger position points
/// to the smaller one (value R*i + j).
struct SquarePadding {
    int rows;
    int cols;

    [[nodiscard]] bool synthetic(Vertex v) const noexcept { return v.row >= rows || v.col >= cols; }

    /// Direction of an edge that touches a synthetic vertex.
    [[nodiscard]] bool synthetic_points_to(Vertex u, Vertex v) const noexcept {
        const bool su = synthetic(u);
        const bool sv = synthetic(v);
        if (su != sv) return su;
        return v < u;
    }
};

/// Appends dominated rows (or columns) to make the matrix square. The padded
/// grid is a USO with the same sink, and every original edge keeps its direction.
inline ValueMatrix pad_values_to_square(const ValueMatrix& vm, const ValidationLimits& limits = {}) {
    const GridShape& s = vm.shape();
    if (s.size() <= limits.max_coordinates) {
        if (!validate_uso(vm, limits).ok()) throw NotUsoError("pad_values_to_square: input is not a USO");
    } else {
        // Too large to validate exhaustively; require at least a unique sink.
        (void)brute_force_sink(vm);
    }
    if (s.rows == s.cols) return vm;
    const int side = std::max(s.rows, s.cols);
    double top = -std::numeric_limits<double>::infinity();
    for (double x : vm.values()) top = std::max(top, x);
    const double base = top + 1.0;
    GridShape square(side, side);
    std::vector<double> values(square.vertex_count());
    SquarePadding rule{s.rows, s.cols};
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            Vertex v{i, j};
            values[square.index(v)] =
                rule.synthetic(v) ? base + static_cast<double>(side) * i + j : vm.at(v);
        }
    }
    return {square, std::move(values)};
}

/// Separable d-dimensional USO: f(x) = sum_k g_k(x_k) with a random
/// permutation g_k per dimension. Every subgrid's sink is its coordinate-wise
/// argmin.
inline DOrientedGrid gen_separable_ddim(const std::vector<int>& dims, Seed seed) {
    DGridShape shape(dims);
    Rng rng(seed);
    std::vector<std::vector<int>> rank;
    rank.reserve(dims.size());
    for (int n : dims) rank.push_back(rng.permutation(n));
    DOrientedGrid grid(shape);
    for (auto [a, b] : all_edges(shape)) {
        Coords x = shape.coords(a);
        Coords y = shape.coords(b);
        const auto k = static_cast<std::size_t>(differing_dimension(x, y));
        const auto rx = rank[k][static_cast<std::size_t>(x[k])];
        const auto ry = rank[k][static_cast<std::size_t>(y[k])];
        if (rx > ry) grid.orient(x, y);
        else grid.orient(y, x);
    }
    return grid;
}

}  // namespace gridsink
