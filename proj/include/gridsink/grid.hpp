#pragma once

// Grid orientations: explicit storage, value realizations, the USO validator
// and brute-force ground truth. Coordinates are 0-based everywhere in this
// header; the 1-based form only appears at the serialization boundary.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridsink {

class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotUsoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Vertex {
    int row = 0;
    int col = 0;

    friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct GridShape {
    int rows = 1;
    int cols = 1;

    GridShape() = default;
    GridShape(int m, int n) : rows(m), cols(n) {
        if (m < 1 || n < 1) {
            throw StructuralError("grid shape must be at least 1x1, got " + std::to_string(m) +
                                  "x" + std::to_string(n));
        }
    }

    /// Number of coordinates, N = m + n.
    [[nodiscard]] int size() const noexcept { return rows + cols; }
    [[nodiscard]] std::size_t vertex_count() const noexcept {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    [[nodiscard]] bool contains(Vertex v) const noexcept {
        return v.row >= 0 && v.row < rows && v.col >= 0 && v.col < cols;
    }
    [[nodiscard]] std::size_t index(Vertex v) const noexcept {
        return static_cast<std::size_t>(v.row) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(v.col);
    }
    [[nodiscard]] GridShape transposed() const { return {cols, rows}; }
    /// Edge count n*C(m,2) + m*C(n,2).
    [[nodiscard]] std::size_t edge_count() const noexcept {
        auto m = static_cast<std::size_t>(rows);
        auto n = static_cast<std::size_t>(cols);
        return n * (m * (m - 1) / 2) + m * (n * (n - 1) / 2);
    }

    friend bool operator==(const GridShape&, const GridShape&) = default;
};

enum class Direction : std::uint8_t { TowardFirst, TowardSecond };

/// Unordered vertex pair, stored with the lexicographically smaller endpoint first.
struct Edge {
    Vertex a;
    Vertex b;

    static Edge between(Vertex u, Vertex v) noexcept {
        return u < v ? Edge{u, v} : Edge{v, u};
    }
    [[nodiscard]] bool is_row_edge() const noexcept { return a.row == b.row; }
    [[nodiscard]] bool well_formed() const noexcept {
        return (a.row == b.row) != (a.col == b.col);
    }
    /// Endpoint the edge points at under direction d.
    [[nodiscard]] Vertex head(Direction d) const noexcept {
        return d == Direction::TowardFirst ? a : b;
    }
    [[nodiscard]] Vertex tail(Direction d) const noexcept {
        return d == Direction::TowardFirst ? b : a;
    }

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

inline bool adjacent(Vertex u, Vertex v) noexcept {
    return (u.row == v.row) != (u.col == v.col);
}

inline void check_vertex(const GridShape& shape, Vertex v) {
    if (!shape.contains(v)) {
        throw StructuralError("vertex (" + std::to_string(v.row) + "," + std::to_string(v.col) +
                              ") outside " + std::to_string(shape.rows) + "x" +
                              std::to_string(shape.cols) + " grid");
    }
}

inline void check_edge(const GridShape& shape, const Edge& e) {
    check_vertex(shape, e.a);
    check_vertex(shape, e.b);
    if (!e.well_formed()) {
        throw StructuralError("endpoints must be distinct and share exactly one coordinate");
    }
}

/// Every edge of the shape: row edges row by row, then column edges column by
/// column, pairs in lexicographic order. This is the bit order of enumeration.
inline std::vector<Edge> all_edges(const GridShape& shape) {
    std::vector<Edge> edges;
    edges.reserve(shape.edge_count());
    for (int i = 0; i < shape.rows; ++i)
        for (int a = 0; a < shape.cols; ++a)
            for (int b = a + 1; b < shape.cols; ++b) edges.push_back({{i, a}, {i, b}});
    for (int j = 0; j < shape.cols; ++j)
        for (int a = 0; a < shape.rows; ++a)
            for (int b = a + 1; b < shape.rows; ++b) edges.push_back({{a, j}, {b, j}});
    return edges;
}

/// Neighbours of v: row neighbours by column, then column neighbours by row.
inline std::vector<Vertex> neighbors(const GridShape& shape, Vertex v) {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(shape.rows + shape.cols - 2));
    for (int j = 0; j < shape.cols; ++j)
        if (j != v.col) out.push_back({v.row, j});
    for (int i = 0; i < shape.rows; ++i)
        if (i != v.row) out.push_back({i, v.col});
    return out;
}

/// Matrix of pairwise-distinct finite numbers. Each edge points from the
/// larger entry to the smaller one, so the sink is a minimum.
class ValueMatrix {
public:
    ValueMatrix(GridShape shape, std::vector<double> values)
        : shape_(shape), values_(std::move(values)) {
        if (values_.size() != shape_.vertex_count()) {
            throw StructuralError("value count does not match shape");
        }
        for (double x : values_) {
            if (!std::isfinite(x)) throw StructuralError("values must be finite");
        }
        std::vector<double> sorted = values_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw StructuralError("duplicate values in value matrix");
        }
    }

    static ValueMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty() || rows.front().empty()) throw StructuralError("empty value matrix");
        GridShape shape(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
        std::vector<double> flat;
        flat.reserve(shape.vertex_count());
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != shape.cols) throw StructuralError("ragged value matrix");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return {shape, std::move(flat)};
    }

    [[nodiscard]] const GridShape& shape() const noexcept { return shape_; }
    [[nodiscard]] double at(Vertex v) const noexcept { return values_[shape_.index(v)]; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] bool points_to(Vertex from, Vertex to) const noexcept { return at(from) > at(to); }

    friend bool operator==(const ValueMatrix&, const ValueMatrix&) = default;

private:
    GridShape shape_;
    std::vector<double> values_;
};

/// Explicit orientation of every row and column edge. Arbitrary (including
/// cyclic) orientations are representable so that invalid candidates can be
/// rejected by the validator.
class OrientedGrid {
public:
    /// All edges initially point toward their first (lexicographically smaller) endpoint.
    explicit OrientedGrid(GridShape shape)
        : shape_(shape),
          row_bits_(static_cast<std::size_t>(shape.rows) * pairs(shape.cols), 0),
          col_bits_(static_cast<std::size_t>(shape.cols) * pairs(shape.rows), 0) {}

    [[nodiscard]] const GridShape& shape() const noexcept { return shape_; }

    /// True iff the edge between adjacent vertices u and v is directed u -> v.
    [[nodiscard]] bool points_to(Vertex u, Vertex v) const noexcept {
        bool forward = u < v;
        bool stored = bit(u, v);  // stored bit means first -> second
        return stored == forward;
    }

    [[nodiscard]] Direction direction(const Edge& e) const noexcept {
        return bit(e.a, e.b) ? Direction::TowardSecond : Direction::TowardFirst;
    }

    void set_direction(const Edge& e, Direction d) noexcept {
        bit_ref(e.a, e.b) = d == Direction::TowardSecond ? 1 : 0;
    }

    /// Direct the edge between adjacent u and v as u -> v.
    void orient(Vertex from, Vertex to) noexcept {
        Edge e = Edge::between(from, to);
        set_direction(e, e.head(Direction::TowardFirst) == to ? Direction::TowardFirst
                                                              : Direction::TowardSecond);
    }

    friend bool operator==(const OrientedGrid&, const OrientedGrid&) = default;

private:
    static std::size_t pairs(int k) noexcept {
        auto n = static_cast<std::size_t>(k);
        return n * (n - 1) / 2;
    }
    static std::size_t pair_index(int a, int b, int k) noexcept {
        if (a > b) std::swap(a, b);
        auto aa = static_cast<std::size_t>(a);
        auto n = static_cast<std::size_t>(k);
        return aa * (2 * n - aa - 1) / 2 + static_cast<std::size_t>(b - a - 1);
    }
    [[nodiscard]] std::size_t slot(Vertex u, Vertex v) const noexcept {
        if (u.row == v.row) {
            return static_cast<std::size_t>(u.row) * pairs(shape_.cols) +
                   pair_index(u.col, v.col, shape_.cols);
        }
        return static_cast<std::size_t>(u.col) * pairs(shape_.rows) +
               pair_index(u.row, v.row, shape_.rows);
    }
    [[nodiscard]] bool bit(Vertex u, Vertex v) const noexcept {
        return (u.row == v.row ? row_bits_ : col_bits_)[slot(u, v)] != 0;
    }
    std::uint8_t& bit_ref(Vertex u, Vertex v) noexcept {
        return (u.row == v.row ? row_bits_ : col_bits_)[slot(u, v)];
    }

    GridShape shape_;
    std::vector<std::uint8_t> row_bits_;
    std::vector<std::uint8_t> col_bits_;
};

/// Anything that can say whether the edge u -> v is present between two
/// adjacent vertices of a fixed shape.
template <typename T>
concept OrientationSource = requires(const T& t, Vertex u, Vertex v) {
    { t.shape() } -> std::convertible_to<GridShape>;
    { t.points_to(u, v) } -> std::convertible_to<bool>;
};

template <OrientationSource Source>
OrientedGrid materialize(const Source& source) {
    OrientedGrid grid(source.shape());
    for (const Edge& e : all_edges(source.shape())) {
        grid.set_direction(e, source.points_to(e.a, e.b) ? Direction::TowardSecond
                                                         : Direction::TowardFirst);
    }
    return grid;
}

inline Direction direction_of(const OrientedGrid& grid, const Edge& e) {
    check_edge(grid.shape(), e);
    return grid.direction(e);
}

template <OrientationSource Source>
std::vector<Vertex> out_neighbors(const Source& grid, Vertex v) {
    check_vertex(grid.shape(), v);
    std::vector<Vertex> out;
    for (Vertex w : neighbors(grid.shape(), v))
        if (grid.points_to(v, w)) out.push_back(w);
    std::sort(out.begin(), out.end());
    return out;
}

/// First subgrid (rows x cols) whose sink count differs from one.
struct SubgridViolation {
    std::vector<std::vector<int>> coordinate_sets;
    int sink_count = 0;
};

struct UsoCheck {
    std::optional<SubgridViolation> violation;
    [[nodiscard]] bool ok() const noexcept { return !violation.has_value(); }
};

struct ValidationLimits {
    int max_coordinates = 14;          // 2-D: m + n
    long long max_subgrids = 100'000;  // d-dim: product of (2^n_i - 1)
};

namespace detail {

inline std::vector<int> mask_members(std::uint64_t mask) {
    std::vector<int> out;
    for (int k = 0; mask != 0; ++k, mask >>= 1)
        if (mask & 1U) out.push_back(k);
    return out;
}

/// Out-neighbour bitmasks per vertex: columns reachable along the row, and
/// rows reachable along the column.
template <OrientationSource Source>
void out_masks(const Source& grid, std::vector<std::uint64_t>& row_out,
               std::vector<std::uint64_t>& col_out) {
    const GridShape& s = grid.shape();
    row_out.assign(s.vertex_count(), 0);
    col_out.assign(s.vertex_count(), 0);
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            Vertex v{i, j};
            std::uint64_t r = 0;
            std::uint64_t c = 0;
            for (int k = 0; k < s.cols; ++k)
                if (k != j && grid.points_to(v, {i, k})) r |= std::uint64_t{1} << k;
            for (int k = 0; k < s.rows; ++k)
                if (k != i && grid.points_to(v, {k, j})) c |= std::uint64_t{1} << k;
            row_out[s.index(v)] = r;
            col_out[s.index(v)] = c;
        }
    }
}

inline UsoCheck check_masks(const GridShape& s, const std::vector<std::uint64_t>& row_out,
                            const std::vector<std::uint64_t>& col_out) {
    const std::uint64_t row_sets = std::uint64_t{1} << s.rows;
    const std::uint64_t col_sets = std::uint64_t{1} << s.cols;
    for (std::uint64_t rows = 1; rows < row_sets; ++rows) {
        for (std::uint64_t cols = 1; cols < col_sets; ++cols) {
            int sinks = 0;
            for (int i = 0; i < s.rows; ++i) {
                if (!(rows >> i & 1U)) continue;
                const std::size_t base = static_cast<std::size_t>(i) * s.cols;
                for (int j = 0; j < s.cols; ++j) {
                    if (!(cols >> j & 1U)) continue;
                    if ((row_out[base + j] & cols) == 0 && (col_out[base + j] & rows) == 0) ++sinks;
                }
            }
            if (sinks != 1) {
                return {SubgridViolation{{mask_members(rows), mask_members(cols)}, sinks}};
            }
        }
    }
    return {};
}

}  // namespace detail

/// Exhaustive USO check over all (2^m - 1)(2^n - 1) subgrids. Refuses shapes
/// beyond the coordinate cap rather than checking a partial set.
template <OrientationSource Source>
UsoCheck validate_uso(const Source& grid, const ValidationLimits& limits = {}) {
    const GridShape& s = grid.shape();
    if (s.size() > limits.max_coordinates || s.rows > 62 || s.cols > 62) {
        throw CapExceeded("validate_uso: m + n = " + std::to_string(s.size()) + " exceeds cap " +
                          std::to_string(limits.max_coordinates));
    }
    std::vector<std::uint64_t> row_out;
    std::vector<std::uint64_t> col_out;
    detail::out_masks(grid, row_out, col_out);
    return detail::check_masks(s, row_out, col_out);
}

/// Ground-truth sink: scans every vertex, no query accounting.
template <OrientationSource Source>
Vertex brute_force_sink(const Source& grid) {
    const GridShape& s = grid.shape();
    std::optional<Vertex> sink;
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            Vertex v{i, j};
            bool is_sink = true;
            for (int k = 0; k < s.cols && is_sink; ++k)
                if (k != j && grid.points_to(v, {i, k})) is_sink = false;
            for (int k = 0; k < s.rows && is_sink; ++k)
                if (k != i && grid.points_to(v, {k, j})) is_sink = false;
            if (!is_sink) continue;
            if (sink) throw NotUsoError("not a USO: more than one sink");
            sink = v;
        }
    }
    if (!sink) throw NotUsoError("not a USO: no sink");
    return *sink;
}

/// Same contract for value matrices in O(mn): a vertex is a sink iff it is
/// the minimum of both its row and its column.
inline Vertex brute_force_sink(const ValueMatrix& vm) {
    const GridShape& s = vm.shape();
    std::vector<double> row_min(static_cast<std::size_t>(s.rows), HUGE_VAL);
    std::vector<double> col_min(static_cast<std::size_t>(s.cols), HUGE_VAL);
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            const double x = vm.at({i, j});
            row_min[static_cast<std::size_t>(i)] = std::min(row_min[static_cast<std::size_t>(i)], x);
            col_min[static_cast<std::size_t>(j)] = std::min(col_min[static_cast<std::size_t>(j)], x);
        }
    }
    std::optional<Vertex> sink;
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            const double x = vm.at({i, j});
            if (x != row_min[static_cast<std::size_t>(i)] || x != col_min[static_cast<std::size_t>(j)]) continue;
            if (sink) throw NotUsoError("not a USO: more than one sink");
            sink = Vertex{i, j};
        }
    }
    if (!sink) throw NotUsoError("not a USO: no sink");
    return *sink;
}

class CycleError : public std::runtime_error {
public:
    explicit CycleError(std::vector<Vertex> cycle)
        : std::runtime_error("orientation contains a directed cycle of length " +
                             std::to_string(cycle.size())),
          cycle_(std::move(cycle)) {}
    /// Vertices in cycle order; the last points back to the first.
    [[nodiscard]] const std::vector<Vertex>& cycle() const noexcept { return cycle_; }

private:
    std::vector<Vertex> cycle_;
};

/// Realizes an acyclic orientation by reverse topological ranks: every edge
/// points from the larger value to the smaller. Throws CycleError otherwise.
inline ValueMatrix topological_values(const OrientedGrid& grid) {
    const GridShape& s = grid.shape();
    const std::size_t count = s.vertex_count();
    std::vector<int> indegree(count, 0);
    auto vertex_at = [&](std::size_t idx) {
        return Vertex{static_cast<int>(idx / s.cols), static_cast<int>(idx % s.cols)};
    };
    for (std::size_t idx = 0; idx < count; ++idx) {
        Vertex v = vertex_at(idx);
        for (Vertex w : neighbors(s, v))
            if (grid.points_to(w, v)) ++indegree[idx];
    }
    // Min-heap on index keeps the realization deterministic.
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t idx = 0; idx < count; ++idx)
        if (indegree[idx] == 0) ready.push(idx);
    std::vector<double> values(count, 0.0);
    std::size_t placed = 0;
    while (!ready.empty()) {
        std::size_t idx = ready.top();
        ready.pop();
        values[idx] = static_cast<double>(count - 1 - placed);
        ++placed;
        Vertex v = vertex_at(idx);
        for (Vertex w : neighbors(s, v)) {
            if (grid.points_to(v, w) && --indegree[s.index(w)] == 0) ready.push(s.index(w));
        }
    }
    if (placed == count) return {s, std::move(values)};

    // Every unplaced vertex has an unplaced in-neighbour; walking backwards
    // must revisit a vertex, which closes a cycle.
    std::size_t start = 0;
    while (indegree[start] == 0) ++start;
    std::vector<int> seen_at(count, -1);
    std::vector<Vertex> walk;
    Vertex cur = vertex_at(start);
    while (seen_at[s.index(cur)] < 0) {
        seen_at[s.index(cur)] = static_cast<int>(walk.size());
        walk.push_back(cur);
        for (Vertex w : neighbors(s, cur)) {
            if (indegree[s.index(w)] > 0 && grid.points_to(w, cur)) {
                cur = w;
                break;
            }
        }
    }
    std::vector<Vertex> cycle(walk.begin() + seen_at[s.index(cur)], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    throw CycleError(std::move(cycle));
}

/// Induced sub-orientation on rows x cols, re-indexed from 0. rows[k] and
/// cols[k] translate local coordinates back to the parent grid.
struct Restriction {
    OrientedGrid grid;
    std::vector<int> rows;
    std::vector<int> cols;

    [[nodiscard]] Vertex to_parent(Vertex local) const { return {rows.at(local.row), cols.at(local.col)}; }
};

inline Restriction restrict(const OrientedGrid& grid, std::vector<int> rows, std::vector<int> cols) {
    auto normalize = [](std::vector<int>& set, int bound, const char* what) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        if (set.empty()) throw StructuralError(std::string("restrict: empty ") + what + " set");
        if (set.front() < 0 || set.back() >= bound)
            throw StructuralError(std::string("restrict: ") + what + " index out of range");
    };
    normalize(rows, grid.shape().rows, "row");
    normalize(cols, grid.shape().cols, "column");
    GridShape local(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    OrientedGrid sub(local);
    for (const Edge& e : all_edges(local)) {
        Vertex pa{rows[e.a.row], cols[e.a.col]};
        Vertex pb{rows[e.b.row], cols[e.b.col]};
        sub.set_direction(e, grid.points_to(pa, pb) ? Direction::TowardSecond : Direction::TowardFirst);
    }
    return {std::move(sub), std::move(rows), std::move(cols)};
}

inline OrientedGrid transpose(const OrientedGrid& grid) {
    OrientedGrid t(grid.shape().transposed());
    for (const Edge& e : all_edges(t.shape())) {
        Vertex a{e.a.col, e.a.row};
        Vertex b{e.b.col, e.b.row};
        t.set_direction(e, grid.points_to(a, b) ? Direction::TowardSecond : Direction::TowardFirst);
    }
    return t;
}

// ---------------------------------------------------------------------------
// d-dimensional grids
// ---------------------------------------------------------------------------

using Coords = std::vector<int>;

struct DGridShape {
    std::vector<int> dims;

    DGridShape() = default;
    explicit DGridShape(std::vector<int> d) : dims(std::move(d)) {
        if (dims.empty()) throw StructuralError("d-dimensional grid needs d >= 1");
        for (int n : dims)
            if (n < 1) throw StructuralError("every dimension must have size >= 1");
    }

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(dims.size()); }
    /// Sum of dimension sizes.
    [[nodiscard]] int coordinate_count() const noexcept {
        int total = 0;
        for (int n : dims) total += n;
        return total;
    }
    [[nodiscard]] std::size_t vertex_count() const noexcept {
        std::size_t total = 1;
        for (int n : dims) total *= static_cast<std::size_t>(n);
        return total;
    }
    [[nodiscard]] bool contains(const Coords& x) const noexcept {
        if (x.size() != dims.size()) return false;
        for (std::size_t k = 0; k < dims.size(); ++k)
            if (x[k] < 0 || x[k] >= dims[k]) return false;
        return true;
    }
    [[nodiscard]] std::size_t index(const Coords& x) const noexcept {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + static_cast<std::size_t>(x[k]);
        return idx;
    }
    [[nodiscard]] Coords coords(std::size_t idx) const {
        Coords x(dims.size());
        for (std::size_t k = dims.size(); k-- > 0;) {
            x[k] = static_cast<int>(idx % static_cast<std::size_t>(dims[k]));
            idx /= static_cast<std::size_t>(dims[k]);
        }
        return x;
    }

    friend bool operator==(const DGridShape&, const DGridShape&) = default;
};

/// Dimension along which x and y differ, or -1 unless they differ in exactly one.
inline int differing_dimension(const Coords& x, const Coords& y) noexcept {
    int dim = -1;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == y[k]) continue;
        if (dim >= 0) return -1;
        dim = static_cast<int>(k);
    }
    return dim;
}

/// Explicit orientation of a product of d complete graphs. Dense adjacency,
/// intended for desk-scale instances only.
class DOrientedGrid {
public:
    static constexpr std::size_t max_vertices = 4096;

    explicit DOrientedGrid(DGridShape shape) : shape_(std::move(shape)) {
        const std::size_t v = shape_.vertex_count();
        if (v > max_vertices) throw CapExceeded("d-dimensional grid too large for explicit storage");
        out_.assign(v * v, 0);
        // Default: every edge points toward the smaller coordinate.
        for (std::size_t a = 0; a < v; ++a) {
            Coords x = shape_.coords(a);
            for (std::size_t k = 0; k < x.size(); ++k) {
                for (int t = 0; t < x[k]; ++t) {
                    Coords y = x;
                    y[k] = t;
                    out_[a * v + shape_.index(y)] = 1;
                }
            }
        }
    }

    [[nodiscard]] const DGridShape& shape() const noexcept { return shape_; }

    [[nodiscard]] bool points_to(std::size_t from, std::size_t to) const noexcept {
        return out_[from * shape_.vertex_count() + to] != 0;
    }
    [[nodiscard]] bool points_to(const Coords& from, const Coords& to) const noexcept {
        return points_to(shape_.index(from), shape_.index(to));
    }

    void orient(const Coords& from, const Coords& to) {
        if (!shape_.contains(from) || !shape_.contains(to) || differing_dimension(from, to) < 0) {
            throw StructuralError("d-dimensional edge endpoints must differ in exactly one coordinate");
        }
        const std::size_t v = shape_.vertex_count();
        const std::size_t a = shape_.index(from);
        const std::size_t b = shape_.index(to);
        out_[a * v + b] = 1;
        out_[b * v + a] = 0;
    }

    friend bool operator==(const DOrientedGrid&, const DOrientedGrid&) = default;

private:
    DGridShape shape_;
    std::vector<std::uint8_t> out_;
};

/// All edges as (smaller-index, larger-index) vertex index pairs, ordered by
/// first index then by dimension and coordinate.
inline std::vector<std::pair<std::size_t, std::size_t>> all_edges(const DGridShape& shape) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < shape.vertex_count(); ++a) {
        Coords x = shape.coords(a);
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (int t = x[k] + 1; t < shape.dims[k]; ++t) {
                Coords y = x;
                y[k] = t;
                edges.emplace_back(a, shape.index(y));
            }
        }
    }
    return edges;
}

/// A two-dimensional orientation viewed as the d = 2 case.
template <OrientationSource Source>
DOrientedGrid as_ddim(const Source& source) {
    const GridShape s = source.shape();
    DOrientedGrid grid(DGridShape({s.rows, s.cols}));
    for (const Edge& e : all_edges(s)) {
        Coords a{e.a.row, e.a.col};
        Coords b{e.b.row, e.b.col};
        if (source.points_to(e.a, e.b)) grid.orient(a, b);
        else grid.orient(b, a);
    }
    return grid;
}

namespace detail {

inline long long subgrid_count(const DGridShape& shape) {
    long long total = 1;
    for (int n : shape.dims) {
        if (n > 40) return -1;
        long long factor = (1LL << n) - 1;
        if (total > (1LL << 62) / factor) return -1;
        total *= factor;
    }
    return total;
}

}  // namespace detail

/// Exhaustive USO check over every product of nonempty coordinate subsets.
inline UsoCheck validate_uso_ddim(const DOrientedGrid& grid, const ValidationLimits& limits = {}) {
    const DGridShape& s = grid.shape();
    const long long total = detail::subgrid_count(s);
    if (total < 0 || total > limits.max_subgrids) {
        throw CapExceeded("validate_uso_ddim: subgrid count exceeds cap " +
                          std::to_string(limits.max_subgrids));
    }
    const std::size_t d = s.dims.size();
    const std::size_t count = s.vertex_count();
    // out_mask[v * d + k]: coordinate values along dimension k that v points to.
    std::vector<std::uint64_t> out_mask(count * d, 0);
    std::vector<Coords> coords(count);
    for (std::size_t v = 0; v < count; ++v) {
        coords[v] = s.coords(v);
        for (std::size_t k = 0; k < d; ++k) {
            for (int t = 0; t < s.dims[k]; ++t) {
                if (t == coords[v][k]) continue;
                Coords y = coords[v];
                y[k] = t;
                if (grid.points_to(v, s.index(y))) out_mask[v * d + k] |= std::uint64_t{1} << t;
            }
        }
    }
    std::vector<std::uint64_t> sets(d, 1);
    while (true) {
        int sinks = 0;
        for (std::size_t v = 0; v < count; ++v) {
            bool inside = true;
            bool sink = true;
            for (std::size_t k = 0; k < d && inside; ++k) {
                if (!(sets[k] >> coords[v][k] & 1U)) inside = false;
                else if (out_mask[v * d + k] & sets[k]) sink = false;
            }
            if (inside && sink) ++sinks;
        }
        if (sinks != 1) {
            SubgridViolation violation;
            violation.sink_count = sinks;
            for (std::uint64_t m : sets) violation.coordinate_sets.push_back(detail::mask_members(m));
            return {std::move(violation)};
        }
        // Odometer over the nonempty subsets of each dimension.
        std::size_t k = 0;
        while (k < d) {
            if (++sets[k] < (std::uint64_t{1} << s.dims[k])) break;
            sets[k] = 1;
            ++k;
        }
        if (k == d) break;
    }
    return {};
}

inline Coords brute_force_sink(const DOrientedGrid& grid) {
    const DGridShape& s = grid.shape();
    std::optional<std::size_t> sink;
    for (std::size_t v = 0; v < s.vertex_count(); ++v) {
        bool is_sink = true;
        for (std::size_t w = 0; w < s.vertex_count() && is_sink; ++w)
            if (grid.points_to(v, w)) is_sink = false;
        if (!is_sink) continue;
        if (sink) throw NotUsoError("not a USO: more than one sink");
        sink = v;
    }
    if (!sink) throw NotUsoError("not a USO: no sink");
    return s.coords(*sink);
}

inline bool has_directed_cycle(const DOrientedGrid& grid) {
    const std::size_t count = grid.shape().vertex_count();
    std::vector<int> indegree(count, 0);
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b)
            if (grid.points_to(a, b)) ++indegree[b];
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < count; ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::size_t removed = 0;
    while (!ready.empty()) {
        std::size_t v = ready.back();
        ready.pop_back();
        ++removed;
        for (std::size_t w = 0; w < count; ++w)
            if (grid.points_to(v, w) && --indegree[w] == 0) ready.push_back(w);
    }
    return removed != count;
}

}  // namespace gridsink
