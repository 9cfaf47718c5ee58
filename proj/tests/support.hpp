#pragma once

// Shared helpers for the test binaries.

#include <string>
#include <vector>

#include "gridsink/gridsink.hpp"

namespace gridsink::testing {

// One character per edge in all_edges order: '1' when the edge points to its
// second endpoint.
inline std::string orientation_key(const OrientedGrid& grid) {
    std::string key;
    for (const Edge& e : all_edges(grid.shape())) key.push_back(grid.points_to(e.a, e.b) ? '1' : '0');
    return key;
}

inline OrientedGrid from_mask(const GridShape& shape, std::uint64_t mask) {
    OrientedGrid grid(shape);
    const auto edges = all_edges(shape);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        grid.set_direction(edges[i], (mask >> i) & 1U ? Direction::TowardSecond : Direction::TowardFirst);
    }
    return grid;
}

// Directed 4-cycle (1,1) -> (1,2) -> (2,2) -> (2,1) -> (1,1).
inline OrientedGrid four_cycle() {
    OrientedGrid g(GridShape(2, 2));
    g.orient({0, 0}, {0, 1});
    g.orient({0, 1}, {1, 1});
    g.orient({1, 1}, {1, 0});
    g.orient({1, 0}, {0, 0});
    return g;
}

inline std::vector<GridShape> shapes_up_to(int max_side) {
    std::vector<GridShape> out;
    for (int m = 1; m <= max_side; ++m)
        for (int n = 1; n <= max_side; ++n) out.emplace_back(m, n);
    return out;
}

// Every nonempty subset of {0..k-1}, as sorted index lists.
inline std::vector<std::vector<int>> nonempty_subsets(int k) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 1; mask < (1U << k); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < k; ++i)
            if (mask & (1U << i)) s.push_back(i);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace gridsink::testing
