#pragma once

// Sink-finding algorithms: row/column elimination bookkeeping, the diagonal
// algorithm and its m + n - 1 rectangular extension, divide-and-conquer
// under edge queries, the d-dimensional inherited recursion, and two walk
// baselines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridsink/grid.hpp"
#include "gridsink/oracles.hpp"
#include "gridsink/random.hpp"

namespace gridsink {

struct SolveResult {
    Vertex sink;
    QueryCounter queries;
};

struct DSolveResult {
    Coords sink;
    QueryCounter queries;
};

/// What one non-sink vertex query rules out: every vertex of rows x cols.
/// rows holds row(v) plus each row whose vertex in v's column points at v;
/// cols likewise along v's row.
struct EliminationRecord {
    Vertex vertex;
    std::vector<int> rows;
    std::vector<int> cols;
};

/// Elimination bookkeeping over a shrinking active subgrid. Eliminated
/// vertices are provably not the global sink.
class EliminationState {
public:
    explicit EliminationState(GridShape shape)
        : shape_(shape),
          eliminated_(shape.vertex_count(), 0),
          row_active_(static_cast<std::size_t>(shape.rows), 1),
          col_active_(static_cast<std::size_t>(shape.cols), 1),
          row_hits_(static_cast<std::size_t>(shape.rows), 0),
          col_hits_(static_cast<std::size_t>(shape.cols), 0),
          active_rows_(shape.rows),
          active_cols_(shape.cols) {}

    [[nodiscard]] const GridShape& shape() const noexcept { return shape_; }
    [[nodiscard]] bool eliminated(Vertex v) const { return eliminated_[shape_.index(v)] != 0; }
    [[nodiscard]] bool row_active(int r) const { return row_active_[static_cast<std::size_t>(r)] != 0; }
    [[nodiscard]] bool col_active(int c) const { return col_active_[static_cast<std::size_t>(c)] != 0; }
    [[nodiscard]] int active_row_count() const noexcept { return active_rows_; }
    [[nodiscard]] int active_col_count() const noexcept { return active_cols_; }
    [[nodiscard]] const std::optional<Vertex>& sink_found() const noexcept { return sink_; }
    [[nodiscard]] const std::map<Vertex, EliminationRecord>& records() const noexcept { return records_; }

    /// Records a vertex answer. Uses direct incoming edges only.
    void note_query(const VertexAnswer& answer) {
        const Vertex v = answer.vertex;
        if (!shape_.contains(v) || !row_active(v.row) || !col_active(v.col)) {
            throw StructuralError("note_query: vertex outside the active subgrid");
        }
        if (answer.is_sink()) {
            sink_ = v;
            return;
        }
        EliminationRecord rec{v, {v.row}, {v.col}};
        for (Vertex w : answer.incoming) {
            if (w.col == v.col) rec.rows.push_back(w.row);
            else rec.cols.push_back(w.col);
        }
        std::sort(rec.rows.begin(), rec.rows.end());
        std::sort(rec.cols.begin(), rec.cols.end());
        for (int i : rec.rows)
            for (int j : rec.cols) mark({i, j});
        records_[v] = std::move(rec);
    }

    /// Lowest active row whose active part is entirely eliminated.
    [[nodiscard]] std::optional<int> eliminated_row() const {
        for (int r = 0; r < shape_.rows; ++r)
            if (row_active(r) && row_hits_[static_cast<std::size_t>(r)] == active_cols_) return r;
        return std::nullopt;
    }

    [[nodiscard]] std::optional<int> eliminated_column() const {
        for (int c = 0; c < shape_.cols; ++c)
            if (col_active(c) && col_hits_[static_cast<std::size_t>(c)] == active_rows_) return c;
        return std::nullopt;
    }

    /// A fully eliminated active row and column, lowest indices first. Empty
    /// once the sink has been found.
    [[nodiscard]] std::optional<std::pair<int, int>> eliminated_lines() const {
        if (sink_) return std::nullopt;
        auto r = eliminated_row();
        auto c = eliminated_column();
        if (!r || !c) return std::nullopt;
        return std::pair{*r, *c};
    }

    void drop_row(int r) {
        if (!row_active(r)) return;
        row_active_[static_cast<std::size_t>(r)] = 0;
        --active_rows_;
        for (int c = 0; c < shape_.cols; ++c)
            if (col_active(c) && eliminated({r, c})) --col_hits_[static_cast<std::size_t>(c)];
    }

    void drop_column(int c) {
        if (!col_active(c)) return;
        col_active_[static_cast<std::size_t>(c)] = 0;
        --active_cols_;
        for (int r = 0; r < shape_.rows; ++r)
            if (row_active(r) && eliminated({r, c})) --row_hits_[static_cast<std::size_t>(r)];
    }

private:
    void mark(Vertex v) {
        auto& flag = eliminated_[shape_.index(v)];
        if (flag) return;
        flag = 1;
        if (row_active(v.row) && col_active(v.col)) {
            ++row_hits_[static_cast<std::size_t>(v.row)];
            ++col_hits_[static_cast<std::size_t>(v.col)];
        }
    }

    GridShape shape_;
    std::vector<std::uint8_t> eliminated_;
    std::vector<std::uint8_t> row_active_;
    std::vector<std::uint8_t> col_active_;
    // Eliminated vertices of each active line that lie in the active subgrid.
    std::vector<int> row_hits_;
    std::vector<int> col_hits_;
    int active_rows_;
    int active_cols_;
    std::map<Vertex, EliminationRecord> records_;
    std::optional<Vertex> sink_;
};

namespace detail {

// m <= n. Queries the diagonal, drops one eliminated column per step while
// more than m columns are active (re-covering the orphaned row with one
// query), then drops a row and a column per step.
inline Vertex eliminate_rectangular(VertexOracle& oracle) {
    const GridShape s = oracle.shape();
    const int m = s.rows;
    EliminationState state(s);
    std::vector<int> row_pick(static_cast<std::size_t>(s.rows), -1);
    std::vector<int> col_pick(static_cast<std::size_t>(s.cols), -1);

    auto ask = [&](Vertex v) {
        const VertexAnswer& a = oracle.query(v);
        state.note_query(a);
        row_pick[static_cast<std::size_t>(v.row)] = v.col;
        col_pick[static_cast<std::size_t>(v.col)] = v.row;
        return a.is_sink();
    };
    auto inconsistent = [] {
        return OracleInconsistency("no eliminated line left although the sink was not found");
    };

    for (int i = 0; i < m; ++i)
        if (ask({i, i})) return {i, i};

    while (state.active_col_count() > m) {
        auto c = state.eliminated_column();
        if (!c) throw inconsistent();
        state.drop_column(*c);
        const int orphan = col_pick[static_cast<std::size_t>(*c)];
        col_pick[static_cast<std::size_t>(*c)] = -1;
        if (orphan < 0) continue;
        row_pick[static_cast<std::size_t>(orphan)] = -1;
        int free_col = 0;
        while (!state.col_active(free_col) || col_pick[static_cast<std::size_t>(free_col)] >= 0) ++free_col;
        if (ask({orphan, free_col})) return {orphan, free_col};
    }

    while (true) {
        auto lines = state.eliminated_lines();
        if (!lines) throw inconsistent();
        const auto [r, c] = *lines;
        const Vertex in_row{r, row_pick[static_cast<std::size_t>(r)]};
        const Vertex in_col{col_pick[static_cast<std::size_t>(c)], c};
        state.drop_row(r);
        state.drop_column(c);
        row_pick[static_cast<std::size_t>(r)] = -1;
        col_pick[static_cast<std::size_t>(c)] = -1;
        if (state.active_row_count() == 0) throw inconsistent();
        if (in_row != in_col) {
            // Both survivors lost their pick; one query restores a full diagonal.
            row_pick[static_cast<std::size_t>(in_col.row)] = -1;
            col_pick[static_cast<std::size_t>(in_row.col)] = -1;
            const Vertex next{in_col.row, in_row.col};
            if (ask(next)) return next;
        }
    }
}

}  // namespace detail

/// Sink of an m x n USO with at most m + n - 1 vertex queries; the sink is
/// always among the queried vertices. Tall grids are solved on the transpose.
inline SolveResult rectangular_solve(VertexOracle& oracle) {
    const GridShape s = oracle.shape();
    if (s.rows <= s.cols) {
        Vertex sink = detail::eliminate_rectangular(oracle);
        return {sink, oracle.counter()};
    }
    TransposedVertexOracle view(oracle);
    Vertex t = detail::eliminate_rectangular(view);
    return {{t.col, t.row}, oracle.counter()};
}

/// Sink of an n x n USO with at most 2n - 1 vertex queries.
inline SolveResult diagonal_solve(VertexOracle& oracle) {
    const GridShape s = oracle.shape();
    if (s.rows != s.cols) throw StructuralError("diagonal_solve needs a square grid");
    return rectangular_solve(oracle);
}

/// Descends from (0, 0) along the lowest outgoing neighbour.
inline SolveResult walk_solve(VertexOracle& oracle, Vertex start = {0, 0}) {
    std::vector<char> seen(oracle.shape().vertex_count(), 0);
    Vertex cur = start;
    while (true) {
        if (std::exchange(seen[oracle.shape().index(cur)], 1)) throw OracleInconsistency("walk revisited a vertex");
        const VertexAnswer& a = oracle.query(cur);
        if (a.is_sink()) return {cur, oracle.counter()};
        cur = a.outgoing.front();
    }
}

/// Random-Edge: descends to a uniformly chosen outgoing neighbour.
inline SolveResult random_edge_solve(VertexOracle& oracle, Seed seed, Vertex start = {0, 0}) {
    Rng rng(seed);
    std::vector<char> seen(oracle.shape().vertex_count(), 0);
    Vertex cur = start;
    while (true) {
        if (std::exchange(seen[oracle.shape().index(cur)], 1)) throw OracleInconsistency("walk revisited a vertex");
        const VertexAnswer& a = oracle.query(cur);
        if (a.is_sink()) return {cur, oracle.counter()};
        cur = a.outgoing[rng.below(a.outgoing.size())];
    }
}

// ---------------------------------------------------------------------------
// Divide and conquer under edge queries
// ---------------------------------------------------------------------------

/// Block count per recursion level. `fixed_k` > 0 overrides the growing
/// schedule k(n) = round(2^(2 sqrt(log2 n))). Sides <= base_threshold are
/// solved by querying every edge.
struct KSchedule {
    int base_threshold = 8;
    int fixed_k = 0;
    double constant = 8.0;

    static KSchedule standard() { return {}; }
    static KSchedule fixed(int k) {
        KSchedule s;
        s.fixed_k = k;
        return s;
    }

    [[nodiscard]] int k(int n) const {
        double raw = fixed_k > 0 ? fixed_k : std::round(std::exp2(2.0 * std::sqrt(std::log2(n))));
        const int upper = std::max(2, (n + 1) / 2);
        return static_cast<int>(std::clamp(raw, 2.0, static_cast<double>(upper)));
    }
};

inline int k_schedule(int n) {
    if (n < 2) throw StructuralError("k_schedule needs n >= 2");
    return KSchedule::standard().k(n);
}

/// c * n * 2^(2 sqrt(log2 n)) for the padded side n.
inline double dc_edge_bound(int n, double constant = 8.0) {
    return constant * n * std::exp2(2.0 * std::sqrt(std::log2(static_cast<double>(n))));
}

/// Worst case of the recursion as implemented, for any schedule:
/// T(s) = s^2 (s - 1) for s <= base_threshold, otherwise
/// (2k - 1)(max(T(floor(s/k)), T(ceil(s/k))) + 2s - 2).
inline double dc_edge_recurrence_bound(int side, const KSchedule& schedule) {
    const double s = side;
    if (side <= schedule.base_threshold) return s * s * (s - 1);
    const int k = schedule.k(side);
    const double inner = std::max(dc_edge_recurrence_bound(side / k, schedule),
                                  dc_edge_recurrence_bound((side + k - 1) / k, schedule));
    return (2.0 * k - 1) * (inner + 2 * s - 2);
}

namespace detail {

inline Vertex full_scan(EdgeOracle& oracle) {
    const GridShape s = oracle.shape();
    std::vector<std::uint8_t> has_out(s.vertex_count(), 0);
    for (const Edge& e : all_edges(s)) has_out[s.index(e.tail(oracle.query(e)))] = 1;
    std::optional<Vertex> sink;
    for (int i = 0; i < s.rows; ++i) {
        for (int j = 0; j < s.cols; ++j) {
            if (has_out[s.index({i, j})]) continue;
            if (sink) throw OracleInconsistency("edge answers show more than one sink");
            sink = Vertex{i, j};
        }
    }
    if (!sink) throw OracleInconsistency("edge answers show no sink");
    return *sink;
}

inline Vertex divide_and_conquer(EdgeOracle& oracle, const KSchedule& schedule) {
    const GridShape s = oracle.shape();
    const int side = std::max(s.rows, s.cols);
    if (side <= schedule.base_threshold) return full_scan(oracle);
    const int k = schedule.k(side);
    PartitionPair parts{contiguous_blocks(s.rows, std::min(k, s.rows)),
                        contiguous_blocks(s.cols, std::min(k, s.cols))};
    InducedVertexOracle induced(oracle, std::move(parts),
                                [&](EdgeOracle& block) { return divide_and_conquer(block, schedule); });
    const SolveResult h = rectangular_solve(induced);
    return induced.block_sink(h.sink);
}

}  // namespace detail

/// Sink of an m x n USO under edge queries. Rectangular inputs are padded
/// to a square first; each level splits into k near-equal contiguous blocks
/// and runs the vertex-query elimination on the induced grid.
inline SolveResult dc_edge_solve(EdgeOracle& oracle, const KSchedule& schedule = KSchedule::standard()) {
    const GridShape s = oracle.shape();
    Vertex sink;
    if (s.rows == s.cols) {
        sink = detail::divide_and_conquer(oracle, schedule);
    } else {
        PaddedEdgeOracle square(oracle, std::max(s.rows, s.cols));
        square.set_recording(false);
        sink = detail::divide_and_conquer(square, schedule);
        if (!s.contains(sink)) throw OracleInconsistency("padded grid sink is synthetic");
    }
    return {sink, oracle.counter()};
}

// ---------------------------------------------------------------------------
// d dimensions
// ---------------------------------------------------------------------------

/// Unrolled T(d) <= (n1 + n2 - 1) T(d - 2), T(1) = n, T(0) = 1, pairing
/// dimensions front to back.
inline std::uint64_t ddim_query_bound(const std::vector<int>& dims) {
    std::uint64_t bound = 1;
    std::size_t k = 0;
    for (; k + 1 < dims.size(); k += 2) bound *= static_cast<std::uint64_t>(dims[k] + dims[k + 1] - 1);
    if (k < dims.size()) bound *= static_cast<std::uint64_t>(dims[k]);
    return bound;
}

namespace detail {

inline Coords ddim_block(DVertexOracle& oracle, const Coords& block) {
    std::vector<int> free;
    for (std::size_t k = 0; k < block.size(); ++k)
        if (block[k] == -1) free.push_back(static_cast<int>(k));

    if (free.empty()) {
        oracle.query(block);
        return block;
    }
    if (free.size() == 1) {
        const auto dim = static_cast<std::size_t>(free.front());
        const int n = oracle.shape().dims[dim];
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        Coords cur = block;
        cur[dim] = 0;
        while (true) {
            if (seen[static_cast<std::size_t>(cur[dim])]) throw OracleInconsistency("walk revisited a vertex");
            seen[static_cast<std::size_t>(cur[dim])] = 1;
            const DVertexAnswer& a = oracle.query(cur);
            std::optional<int> next;
            for (const Coords& w : a.outgoing) {
                if (differing_dimension(cur, w) == free.front()) {
                    next = w[dim];
                    break;
                }
            }
            if (!next) return cur;
            cur[dim] = *next;
        }
    }
    InheritedVertexOracle inherited(oracle, {free[0], free[1]}, block,
                                    [&](const Coords& sub) { return ddim_block(oracle, sub); });
    const SolveResult h = rectangular_solve(inherited);
    return inherited.block_sink(h.sink);
}

}  // namespace detail

/// Sink of a d-dimensional USO: a descending walk for d = 1, otherwise the
/// rectangular algorithm on the inherited grid of the first two dimensions,
/// recursing on the remaining d - 2.
inline DSolveResult ddim_solve(DVertexOracle& oracle) {
    Coords all_free(oracle.shape().dims.size(), -1);
    Coords sink = detail::ddim_block(oracle, all_free);
    return {std::move(sink), oracle.counter()};
}

}  // namespace gridsink
