#pragma once

// Countable query interfaces. Every oracle caches its answers: a repeated
// query returns the cached answer and does not increment the counter.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "gridsink/generate.hpp"
#include "gridsink/grid.hpp"

namespace gridsink {

/// Raised when answers cannot come from a USO: a claimed block sink with an
/// outgoing intra-block edge, a revisited vertex on a descending walk, or
/// every candidate eliminated without a sink.
class OracleInconsistency : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VertexAnswer {
    Vertex vertex;
    std::vector<Vertex> incoming;  // sorted
    std::vector<Vertex> outgoing;  // sorted

    [[nodiscard]] bool is_sink() const noexcept { return outgoing.empty(); }
    [[nodiscard]] bool points_to(Vertex w) const {
        return std::binary_search(outgoing.begin(), outgoing.end(), w);
    }

    friend bool operator==(const VertexAnswer&, const VertexAnswer&) = default;
};

struct EdgeAnswer {
    Edge edge;
    Direction direction;

    friend bool operator==(const EdgeAnswer&, const EdgeAnswer&) = default;
};

using TranscriptEntry = std::variant<VertexAnswer, EdgeAnswer>;
using Transcript = std::vector<TranscriptEntry>;

struct QueryCounter {
    std::uint64_t vertex_queries = 0;
    std::uint64_t edge_queries = 0;

    friend bool operator==(const QueryCounter&, const QueryCounter&) = default;
};

class VertexOracle {
public:
    virtual ~VertexOracle() = default;

    [[nodiscard]] virtual GridShape shape() const = 0;

    const VertexAnswer& query(Vertex v) {
        check_vertex(shape(), v);
        const std::size_t key = shape().index(v);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        VertexAnswer a = answer(v);
        ++counter_.vertex_queries;
        if (recording_) transcript_.emplace_back(a);
        return cache_.emplace(key, std::move(a)).first->second;
    }

    [[nodiscard]] bool queried(Vertex v) const { return cache_.contains(shape().index(v)); }
    [[nodiscard]] const QueryCounter& counter() const noexcept { return counter_; }
    [[nodiscard]] const Transcript& transcript() const noexcept { return transcript_; }
    void set_recording(bool on) noexcept { recording_ = on; }

protected:
    virtual VertexAnswer answer(Vertex v) = 0;

private:
    std::unordered_map<std::size_t, VertexAnswer> cache_;
    QueryCounter counter_;
    Transcript transcript_;
    bool recording_ = true;
};

class EdgeOracle {
public:
    virtual ~EdgeOracle() = default;

    [[nodiscard]] virtual GridShape shape() const = 0;

    Direction query(const Edge& e) {
        check_edge(shape(), e);
        const std::uint64_t key = edge_key(e);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Direction d = answer(e);
        ++counter_.edge_queries;
        if (recording_) transcript_.emplace_back(EdgeAnswer{e, d});
        cache_.emplace(key, d);
        return d;
    }

    /// Queries the edge between adjacent u and v; true iff it is directed u -> v.
    bool points_to(Vertex u, Vertex v) {
        Edge e = Edge::between(u, v);
        return e.head(query(e)) == v;
    }

    [[nodiscard]] const QueryCounter& counter() const noexcept { return counter_; }
    [[nodiscard]] const Transcript& transcript() const noexcept { return transcript_; }
    void set_recording(bool on) noexcept { recording_ = on; }

protected:
    virtual Direction answer(const Edge& e) = 0;

private:
    static std::uint64_t edge_key(const Edge& e) noexcept {
        auto f = [](int x) { return static_cast<std::uint64_t>(static_cast<std::uint16_t>(x)); };
        return f(e.a.row) << 48 | f(e.a.col) << 32 | f(e.b.row) << 16 | f(e.b.col);
    }

    std::unordered_map<std::uint64_t, Direction> cache_;
    QueryCounter counter_;
    Transcript transcript_;
    bool recording_ = true;
};

namespace detail {

/// Builds a vertex answer from a points_to(u, w) predicate.
template <typename PointsTo>
VertexAnswer make_answer(const GridShape& shape, Vertex v, PointsTo&& points_to) {
    VertexAnswer a{v, {}, {}};
    for (Vertex w : neighbors(shape, v)) (points_to(v, w) ? a.outgoing : a.incoming).push_back(w);
    std::sort(a.incoming.begin(), a.incoming.end());
    std::sort(a.outgoing.begin(), a.outgoing.end());
    return a;
}

}  // namespace detail

/// Vertex queries answered from an explicit orientation or a value matrix.
template <OrientationSource Source>
class ExplicitVertexOracle final : public VertexOracle {
public:
    explicit ExplicitVertexOracle(Source source) : source_(std::move(source)) {}
    [[nodiscard]] GridShape shape() const override { return source_.shape(); }
    [[nodiscard]] const Source& source() const noexcept { return source_; }

protected:
    VertexAnswer answer(Vertex v) override {
        return detail::make_answer(source_.shape(), v,
                                   [&](Vertex a, Vertex b) { return source_.points_to(a, b); });
    }

private:
    Source source_;
};

template <OrientationSource Source>
class ExplicitEdgeOracle final : public EdgeOracle {
public:
    explicit ExplicitEdgeOracle(Source source) : source_(std::move(source)) {}
    [[nodiscard]] GridShape shape() const override { return source_.shape(); }

protected:
    Direction answer(const Edge& e) override {
        return source_.points_to(e.a, e.b) ? Direction::TowardSecond : Direction::TowardFirst;
    }

private:
    Source source_;
};

template <OrientationSource Source>
ExplicitVertexOracle<Source> vertex_oracle(Source source) {
    return ExplicitVertexOracle<Source>(std::move(source));
}

template <OrientationSource Source>
ExplicitEdgeOracle<Source> edge_oracle(Source source) {
    return ExplicitEdgeOracle<Source>(std::move(source));
}

/// Queries every vertex and assembles the orientation, checking that both
/// endpoints of each edge report the same direction.
inline OrientedGrid materialize_oracle(VertexOracle& oracle) {
    const GridShape s = oracle.shape();
    OrientedGrid grid(s);
    for (int i = 0; i < s.rows; ++i)
        for (int j = 0; j < s.cols; ++j) oracle.query({i, j});
    for (const Edge& e : all_edges(s)) {
        const bool a_to_b = oracle.query(e.a).points_to(e.b);
        const bool b_to_a = oracle.query(e.b).points_to(e.a);
        if (a_to_b == b_to_a) {
            throw OracleInconsistency("endpoints disagree on the direction of an edge");
        }
        grid.set_direction(e, a_to_b ? Direction::TowardSecond : Direction::TowardFirst);
    }
    return grid;
}

/// Replays recorded vertex queries against another oracle; true iff every
/// answer matches exactly.
inline bool replay_matches(const Transcript& transcript, VertexOracle& oracle) {
    for (const TranscriptEntry& entry : transcript) {
        const auto* recorded = std::get_if<VertexAnswer>(&entry);
        if (recorded == nullptr) return false;
        if (!oracle.shape().contains(recorded->vertex)) return false;
        if (!(oracle.query(recorded->vertex) == *recorded)) return false;
    }
    return true;
}

inline bool replay_matches(const Transcript& transcript, EdgeOracle& oracle) {
    for (const TranscriptEntry& entry : transcript) {
        const auto* recorded = std::get_if<EdgeAnswer>(&entry);
        if (recorded == nullptr) return false;
        if (oracle.query(recorded->edge) != recorded->direction) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Adaptive lower-bound adversary
// ---------------------------------------------------------------------------

/// Answers vertex queries without committing to an instance. A query in a
/// fresh row freezes that row with the queried vertex as its sink, and the
/// row points into every row frozen later. Once a single row is left it is
/// answered as a tournament in which each queried vertex beats all unqueried
/// ones, so the last vertex queried there is the sink. Any strategy needs
/// (m - 1) + n queries.
///
/// Frozen rows order their non-sink vertices by descending column index.
class AdversaryVertexOracle final : public VertexOracle {
public:
    explicit AdversaryVertexOracle(GridShape shape)
        : shape_(shape),
          freeze_rank_(static_cast<std::size_t>(shape.rows), -1),
          sink_col_(static_cast<std::size_t>(shape.rows), -1),
          final_rank_(static_cast<std::size_t>(shape.cols), -1) {
        if (shape_.rows == 1) final_row_ = 0;
    }

    [[nodiscard]] GridShape shape() const override { return shape_; }
    [[nodiscard]] bool resolved() const noexcept { return sink_.has_value(); }
    [[nodiscard]] std::optional<Vertex> sink() const noexcept { return sink_; }

    /// Value matrix consistent with every answer given. Frozen rows take
    /// descending value bands in freeze order; the surviving row is lowest.
    [[nodiscard]] ValueMatrix materialize_values() const {
        if (!resolved()) throw std::logic_error("adversary_materialize: sink not resolved yet");
        const int n = shape_.cols;
        std::vector<double> values(shape_.vertex_count());
        for (int i = 0; i < shape_.rows; ++i) {
            for (int j = 0; j < n; ++j) {
                double band;
                double within;
                if (i == final_row_) {
                    band = 0;
                    within = n - 1 - final_rank_[static_cast<std::size_t>(j)];
                } else {
                    band = shape_.rows - 1 - freeze_rank_[static_cast<std::size_t>(i)];
                    within = frozen_within(i, j);
                }
                values[shape_.index({i, j})] = band * (n + 1) + within;
            }
        }
        return {shape_, std::move(values)};
    }

    [[nodiscard]] OrientedGrid materialize() const { return orient_from_values(materialize_values()); }

protected:
    VertexAnswer answer(Vertex v) override {
        const auto r = static_cast<std::size_t>(v.row);
        if (v.row != final_row_ && freeze_rank_[r] < 0) {
            freeze_rank_[r] = frozen_count_++;
            sink_col_[r] = v.col;
            if (frozen_count_ == shape_.rows - 1) {
                for (int i = 0; i < shape_.rows; ++i)
                    if (freeze_rank_[static_cast<std::size_t>(i)] < 0) final_row_ = i;
            }
        }
        if (v.row == final_row_ && final_rank_[static_cast<std::size_t>(v.col)] < 0) {
            final_rank_[static_cast<std::size_t>(v.col)] = final_queried_++;
            if (final_queried_ == shape_.cols) sink_ = v;
        }
        return detail::make_answer(shape_, v, [&](Vertex a, Vertex b) { return points_to_now(a, b); });
    }

private:
    // Position of (row, col) inside its frozen row: the sink is lowest.
    [[nodiscard]] int frozen_within(int row, int col) const {
        return col == sink_col_[static_cast<std::size_t>(row)] ? 0 : shape_.cols - col;
    }

    // Larger rank = larger value. Unfrozen rows sit below every frozen row.
    [[nodiscard]] int row_band(int row) const {
        const int rank = freeze_rank_[static_cast<std::size_t>(row)];
        return rank < 0 ? -1 : shape_.rows - 1 - rank;
    }

    [[nodiscard]] bool points_to_now(Vertex a, Vertex b) const {
        if (a.col == b.col) return row_band(a.row) > row_band(b.row);
        if (a.row != final_row_) return frozen_within(a.row, a.col) > frozen_within(b.row, b.col);
        // Surviving row: earlier queried is larger; unqueried is below all queried.
        const int ra = final_rank_[static_cast<std::size_t>(a.col)];
        const int rb = final_rank_[static_cast<std::size_t>(b.col)];
        if (rb < 0) return true;
        if (ra < 0) return false;
        return ra < rb;
    }

    GridShape shape_;
    std::vector<int> freeze_rank_;
    std::vector<int> sink_col_;
    std::vector<int> final_rank_;
    int frozen_count_ = 0;
    int final_row_ = -1;
    int final_queried_ = 0;
    std::optional<Vertex> sink_;
};

// ---------------------------------------------------------------------------
// Partitions, views and the induced grid
// ---------------------------------------------------------------------------

/// Contiguous row and column partitions; block k of a side is a range of indices.
struct PartitionPair {
    std::vector<std::vector<int>> row_blocks;
    std::vector<std::vector<int>> col_blocks;

    [[nodiscard]] GridShape induced_shape() const {
        return {static_cast<int>(row_blocks.size()), static_cast<int>(col_blocks.size())};
    }
};

/// Splits [0, n) into k contiguous blocks whose sizes differ by at most one;
/// the first n % k blocks are the larger ones.
inline std::vector<std::vector<int>> contiguous_blocks(int n, int k) {
    if (k < 1 || k > n) throw StructuralError("block count must lie in [1, n]");
    std::vector<std::vector<int>> blocks;
    int next = 0;
    for (int b = 0; b < k; ++b) {
        const int size = n / k + (b < n % k ? 1 : 0);
        std::vector<int> block(static_cast<std::size_t>(size));
        for (int& x : block) x = next++;
        blocks.push_back(std::move(block));
    }
    return blocks;
}

/// Blocks from sorted cut points: {2, 3} over n = 5 gives {0,1}, {2}, {3,4}.
inline std::vector<std::vector<int>> blocks_from_cuts(int n, const std::vector<int>& cuts) {
    std::vector<std::vector<int>> blocks;
    int start = 0;
    for (std::size_t c = 0; c <= cuts.size(); ++c) {
        const int end = c < cuts.size() ? cuts[c] : n;
        if (end <= start || end > n) throw StructuralError("cut points must be increasing within (0, n)");
        std::vector<int> block;
        for (int x = start; x < end; ++x) block.push_back(x);
        blocks.push_back(std::move(block));
        start = end;
    }
    return blocks;
}

inline void check_partition(const PartitionPair& parts, const GridShape& shape) {
    auto check_side = [](const std::vector<std::vector<int>>& blocks, int n, const char* side) {
        int next = 0;
        for (const auto& block : blocks) {
            if (block.empty()) throw StructuralError(std::string(side) + " partition has an empty block");
            for (int x : block) {
                if (x != next++) {
                    throw StructuralError(std::string(side) + " partition must be contiguous and ordered");
                }
            }
        }
        if (blocks.empty() || next != n) throw StructuralError(std::string(side) + " partition must cover all indices");
    };
    check_side(parts.row_blocks, shape.rows, "row");
    check_side(parts.col_blocks, shape.cols, "column");
}

/// Edge oracle restricted to rows x cols of a base oracle. Queries pass
/// through to the base, whose counter accrues the cost.
class SubgridEdgeOracle final : public EdgeOracle {
public:
    SubgridEdgeOracle(EdgeOracle& base, std::vector<int> rows, std::vector<int> cols)
        : base_(base), rows_(std::move(rows)), cols_(std::move(cols)),
          shape_(static_cast<int>(rows_.size()), static_cast<int>(cols_.size())) {}

    [[nodiscard]] GridShape shape() const override { return shape_; }
    [[nodiscard]] Vertex to_base(Vertex local) const {
        return {rows_[static_cast<std::size_t>(local.row)], cols_[static_cast<std::size_t>(local.col)]};
    }

protected:
    Direction answer(const Edge& e) override {
        return base_.points_to(to_base(e.a), to_base(e.b)) ? Direction::TowardSecond
                                                           : Direction::TowardFirst;
    }

private:
    EdgeOracle& base_;
    std::vector<int> rows_;
    std::vector<int> cols_;
    GridShape shape_;
};

/// Finds the sink of a block, given an edge oracle over that block; returns
/// the sink in block-local coordinates.
using BlockSinkSolver = std::function<Vertex(EdgeOracle&)>;

/// Vertex oracle over the induced k x l grid H. Querying block x solves the
/// block for its sink u_x, edge-queries every edge of G at u_x, and reports
/// x -> y iff some edge from u_x into y is outgoing.
class InducedVertexOracle final : public VertexOracle {
public:
    InducedVertexOracle(EdgeOracle& base, PartitionPair parts, BlockSinkSolver solve_block)
        : base_(base), parts_(std::move(parts)), solve_block_(std::move(solve_block)) {
        check_partition(parts_, base_.shape());
        row_block_of_ = block_index(parts_.row_blocks, base_.shape().rows);
        col_block_of_ = block_index(parts_.col_blocks, base_.shape().cols);
    }

    [[nodiscard]] GridShape shape() const override { return parts_.induced_shape(); }
    [[nodiscard]] const PartitionPair& partition() const noexcept { return parts_; }

    /// Sink of G inside the block, available once the block has been queried.
    [[nodiscard]] Vertex block_sink(Vertex block) const {
        auto it = block_sinks_.find(shape().index(block));
        if (it == block_sinks_.end()) throw std::logic_error("block has not been queried");
        return it->second;
    }

protected:
    VertexAnswer answer(Vertex x) override {
        const auto& rows = parts_.row_blocks[static_cast<std::size_t>(x.row)];
        const auto& cols = parts_.col_blocks[static_cast<std::size_t>(x.col)];
        SubgridEdgeOracle block(base_, rows, cols);
        const Vertex u = block.to_base(solve_block_(block));

        const GridShape g = base_.shape();
        std::vector<char> row_out(static_cast<std::size_t>(shape().cols), 0);
        std::vector<char> col_out(static_cast<std::size_t>(shape().rows), 0);
        for (int j = 0; j < g.cols; ++j) {
            if (j == u.col || !base_.points_to(u, {u.row, j})) continue;
            const int b = col_block_of_[static_cast<std::size_t>(j)];
            if (b == x.col) throw OracleInconsistency("block solver returned a non-sink (row edge)");
            row_out[static_cast<std::size_t>(b)] = 1;
        }
        for (int i = 0; i < g.rows; ++i) {
            if (i == u.row || !base_.points_to(u, {i, u.col})) continue;
            const int b = row_block_of_[static_cast<std::size_t>(i)];
            if (b == x.row) throw OracleInconsistency("block solver returned a non-sink (column edge)");
            col_out[static_cast<std::size_t>(b)] = 1;
        }
        block_sinks_[shape().index(x)] = u;
        return detail::make_answer(shape(), x, [&](Vertex from, Vertex to) {
            return from.row == to.row ? row_out[static_cast<std::size_t>(to.col)] != 0
                                      : col_out[static_cast<std::size_t>(to.row)] != 0;
        });
    }

private:
    static std::vector<int> block_index(const std::vector<std::vector<int>>& blocks, int n) {
        std::vector<int> of(static_cast<std::size_t>(n), -1);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (int x : blocks[b]) of[static_cast<std::size_t>(x)] = static_cast<int>(b);
        return of;
    }

    EdgeOracle& base_;
    PartitionPair parts_;
    BlockSinkSolver solve_block_;
    std::vector<int> row_block_of_;
    std::vector<int> col_block_of_;
    std::unordered_map<std::size_t, Vertex> block_sinks_;
};

/// Square s x s edge oracle over an m x n base. Edges between real vertices
/// are forwarded (and counted) on the base; edges touching synthetic vertices
/// follow SquarePadding at no base cost.
class PaddedEdgeOracle final : public EdgeOracle {
public:
    PaddedEdgeOracle(EdgeOracle& base, int side)
        : base_(base), rule_{base.shape().rows, base.shape().cols}, shape_(side, side) {
        if (side < std::max(rule_.rows, rule_.cols)) {
            throw StructuralError("padding side must be at least max(m, n)");
        }
    }

    [[nodiscard]] GridShape shape() const override { return shape_; }

protected:
    Direction answer(const Edge& e) override {
        const bool forward = rule_.synthetic(e.a) || rule_.synthetic(e.b)
                                 ? rule_.synthetic_points_to(e.a, e.b)
                                 : base_.points_to(e.a, e.b);
        return forward ? Direction::TowardSecond : Direction::TowardFirst;
    }

private:
    EdgeOracle& base_;
    SquarePadding rule_;
    GridShape shape_;
};

inline std::unique_ptr<EdgeOracle> pad_oracle(EdgeOracle& base, int side) {
    return std::make_unique<PaddedEdgeOracle>(base, side);
}

/// Presents a vertex oracle with rows and columns swapped.
class TransposedVertexOracle final : public VertexOracle {
public:
    explicit TransposedVertexOracle(VertexOracle& base) : base_(base) {}
    [[nodiscard]] GridShape shape() const override { return base_.shape().transposed(); }

protected:
    VertexAnswer answer(Vertex v) override {
        const VertexAnswer& a = base_.query({v.col, v.row});
        VertexAnswer t{v, {}, {}};
        for (Vertex w : a.incoming) t.incoming.push_back({w.col, w.row});
        for (Vertex w : a.outgoing) t.outgoing.push_back({w.col, w.row});
        std::sort(t.incoming.begin(), t.incoming.end());
        std::sort(t.outgoing.begin(), t.outgoing.end());
        return t;
    }

private:
    VertexOracle& base_;
};

// ---------------------------------------------------------------------------
// d-dimensional vertex oracles and the inherited grid
// ---------------------------------------------------------------------------

struct DVertexAnswer {
    Coords vertex;
    std::vector<Coords> incoming;
    std::vector<Coords> outgoing;

    [[nodiscard]] bool is_sink() const noexcept { return outgoing.empty(); }
    [[nodiscard]] bool points_to(const Coords& w) const {
        return std::find(outgoing.begin(), outgoing.end(), w) != outgoing.end();
    }
};

class DVertexOracle {
public:
    virtual ~DVertexOracle() = default;
    [[nodiscard]] virtual DGridShape shape() const = 0;

    const DVertexAnswer& query(const Coords& x) {
        const DGridShape s = shape();
        if (!s.contains(x)) throw StructuralError("d-dimensional query outside the grid");
        const std::size_t key = s.index(x);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        DVertexAnswer a = answer(x);
        ++counter_.vertex_queries;
        return cache_.emplace(key, std::move(a)).first->second;
    }

    [[nodiscard]] const QueryCounter& counter() const noexcept { return counter_; }

protected:
    virtual DVertexAnswer answer(const Coords& x) = 0;

private:
    std::unordered_map<std::size_t, DVertexAnswer> cache_;
    QueryCounter counter_;
};

class ExplicitDVertexOracle final : public DVertexOracle {
public:
    explicit ExplicitDVertexOracle(DOrientedGrid grid) : grid_(std::move(grid)) {}
    [[nodiscard]] DGridShape shape() const override { return grid_.shape(); }

protected:
    DVertexAnswer answer(const Coords& x) override {
        DVertexAnswer a{x, {}, {}};
        const DGridShape& s = grid_.shape();
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (int t = 0; t < s.dims[k]; ++t) {
                if (t == x[k]) continue;
                Coords y = x;
                y[k] = t;
                (grid_.points_to(x, y) ? a.outgoing : a.incoming).push_back(std::move(y));
            }
        }
        std::sort(a.incoming.begin(), a.incoming.end());
        std::sort(a.outgoing.begin(), a.outgoing.end());
        return a;
    }

private:
    DOrientedGrid grid_;
};

/// Solves the block obtained by fixing every coordinate that is not -1 in
/// the template; returns the block sink in full coordinates. The sink must be
/// among the queries the solver issued.
using DBlockSolver = std::function<Coords(const Coords& block_template)>;

/// Vertex oracle over the inherited (n_a, n_b) grid: vertex (i, j) is the
/// block with coordinate a fixed to i and b fixed to j (plus whatever the
/// outer template fixes). Costs exactly what the block solver spends.
class InheritedVertexOracle final : public VertexOracle {
public:
    InheritedVertexOracle(DVertexOracle& base, std::pair<int, int> fixed_dims, Coords outer_template,
                          DBlockSolver solve_block)
        : base_(base), dim_a_(fixed_dims.first), dim_b_(fixed_dims.second),
          template_(std::move(outer_template)), solve_block_(std::move(solve_block)) {
        const DGridShape s = base_.shape();
        const int d = s.dimension();
        if (template_.empty()) template_.assign(static_cast<std::size_t>(d), -1);
        if (d < 2 || dim_a_ == dim_b_ || dim_a_ < 0 || dim_b_ < 0 || dim_a_ >= d || dim_b_ >= d ||
            static_cast<int>(template_.size()) != d ||
            template_[static_cast<std::size_t>(dim_a_)] != -1 ||
            template_[static_cast<std::size_t>(dim_b_)] != -1) {
            throw StructuralError("inherited grid needs two distinct free dimensions");
        }
        shape_ = GridShape(s.dims[static_cast<std::size_t>(dim_a_)], s.dims[static_cast<std::size_t>(dim_b_)]);
    }

    [[nodiscard]] GridShape shape() const override { return shape_; }

    [[nodiscard]] const Coords& block_sink(Vertex block) const {
        auto it = block_sinks_.find(shape_.index(block));
        if (it == block_sinks_.end()) throw std::logic_error("block has not been queried");
        return it->second;
    }

protected:
    VertexAnswer answer(Vertex x) override {
        Coords block = template_;
        block[static_cast<std::size_t>(dim_a_)] = x.row;
        block[static_cast<std::size_t>(dim_b_)] = x.col;
        Coords sink = solve_block_(block);
        const DVertexAnswer& real = base_.query(sink);  // already paid for by the block solver
        for (const Coords& w : real.outgoing) {
            const auto k = static_cast<std::size_t>(differing_dimension(sink, w));
            if (block[k] == -1) throw OracleInconsistency("block solver returned a non-sink");
        }
        block_sinks_[shape_.index(x)] = sink;
        return detail::make_answer(shape_, x, [&](Vertex from, Vertex to) {
            Coords y = sink;
            if (from.row == to.row) y[static_cast<std::size_t>(dim_b_)] = to.col;
            else y[static_cast<std::size_t>(dim_a_)] = to.row;
            return real.points_to(y);
        });
    }

private:
    DVertexOracle& base_;
    int dim_a_;
    int dim_b_;
    Coords template_;
    DBlockSolver solve_block_;
    GridShape shape_;
    std::unordered_map<std::size_t, Coords> block_sinks_;
};

}  // namespace gridsink
