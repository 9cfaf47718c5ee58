#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace gridsink;

namespace {

ValueMatrix swapped_2x2() { return ValueMatrix::from_rows({{2, 1}, {3, 4}}); }

// Queries random vertices of distinct rows and columns (one per row) and
// checks the elimination invariants after each answer.
void check_lemma_sweep(const ValueMatrix& vm, Rng& rng) {
    const int n = vm.shape().rows;
    auto oracle = vertex_oracle(vm);
    EliminationState state(vm.shape());
    const Vertex sink = brute_force_sink(vm);
    const auto cols = rng.permutation(n);
    for (int i = 0; i < n; ++i) {
        const auto& a = oracle.query({i, cols[static_cast<std::size_t>(i)]});
        state.note_query(a);
        ASSERT_FALSE(state.eliminated(sink));
    }
    if (state.sink_found()) {
        EXPECT_FALSE(state.eliminated_lines().has_value());
    } else {
        EXPECT_TRUE(state.eliminated_row().has_value());
        EXPECT_TRUE(state.eliminated_column().has_value());
    }
}

}  // namespace

TEST(Elimination, ColumnFromFirstQuery) {
    auto oracle = vertex_oracle(swapped_2x2());
    EliminationState state(swapped_2x2().shape());
    const auto& a = oracle.query({0, 0});
    EXPECT_EQ(a.incoming, (std::vector<Vertex>{{1, 0}}));
    EXPECT_EQ(a.outgoing, (std::vector<Vertex>{{0, 1}}));
    state.note_query(a);
    const auto& rec = state.records().at({0, 0});
    EXPECT_EQ(rec.rows, (std::vector<int>{0, 1}));
    EXPECT_EQ(rec.cols, (std::vector<int>{0}));
    EXPECT_EQ(state.eliminated_column(), std::optional<int>{0});
    EXPECT_FALSE(state.eliminated_row().has_value());
}

TEST(Elimination, SourceEliminatesOnlyItself) {
    auto oracle = vertex_oracle(swapped_2x2());
    EliminationState state(swapped_2x2().shape());
    state.note_query(oracle.query({1, 1}));
    const auto& rec = state.records().at({1, 1});
    EXPECT_EQ(rec.rows, (std::vector<int>{1}));
    EXPECT_EQ(rec.cols, (std::vector<int>{1}));
    int eliminated = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) eliminated += state.eliminated({i, j});
    EXPECT_EQ(eliminated, 1);
}

TEST(Elimination, SinkAnswer) {
    auto oracle = vertex_oracle(swapped_2x2());
    EliminationState state(swapped_2x2().shape());
    state.note_query(oracle.query({0, 1}));
    EXPECT_EQ(state.sink_found(), (std::optional<Vertex>{Vertex{0, 1}}));
    EXPECT_FALSE(state.eliminated({0, 1}));
    EXPECT_FALSE(state.eliminated_lines().has_value());
}

TEST(Elimination, DiagonalLines) {
    auto oracle = vertex_oracle(swapped_2x2());
    EliminationState state(swapped_2x2().shape());
    state.note_query(oracle.query({0, 0}));
    state.note_query(oracle.query({1, 1}));
    EXPECT_EQ(state.eliminated_lines(), (std::optional<std::pair<int, int>>{{1, 0}}));
}

TEST(Elimination, RejectsQueriesOutsideTheActiveSubgrid) {
    auto oracle = vertex_oracle(swapped_2x2());
    EliminationState state(swapped_2x2().shape());
    state.note_query(oracle.query({0, 0}));
    state.drop_column(0);
    EXPECT_THROW(state.note_query(oracle.query({1, 0})), std::logic_error);
}

TEST(Elimination, SweepOnRandomOneLineInstances) {
    Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(31));
        check_lemma_sweep(gen_one_line(n, n, rng.next()), rng);
    }
}

TEST(Elimination, SinkIsNeverEliminatedUnderArbitraryQueries) {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        auto vm = gen_one_line(7, 9, static_cast<Seed>(trial));
        auto oracle = vertex_oracle(vm);
        EliminationState state(vm.shape());
        const Vertex sink = brute_force_sink(vm);
        std::size_t last = 0;
        for (int step = 0; step < 20; ++step) {
            Vertex v{static_cast<int>(rng.below(7)), static_cast<int>(rng.below(9))};
            state.note_query(oracle.query(v));
            EXPECT_FALSE(state.eliminated(sink));
            std::size_t count = 0;
            for (int i = 0; i < 7; ++i)
                for (int j = 0; j < 9; ++j) count += state.eliminated({i, j});
            EXPECT_GE(count, last);
            last = count;
        }
    }
}

TEST(Diagonal, SingleVertex) {
    auto oracle = vertex_oracle(OrientedGrid(GridShape(1, 1)));
    auto res = diagonal_solve(oracle);
    EXPECT_EQ(res.sink, (Vertex{0, 0}));
    EXPECT_EQ(res.queries.vertex_queries, 1U);
}

TEST(Diagonal, AllTwoByTwo) {
    for (const auto& g : enumerate_usos(GridShape(2, 2))) {
        auto oracle = vertex_oracle(g);
        auto res = diagonal_solve(oracle);
        EXPECT_EQ(res.sink, brute_force_sink(g));
        EXPECT_LE(res.queries.vertex_queries, 3U);
        EXPECT_TRUE(oracle.queried(res.sink));
    }
}

TEST(Diagonal, OneLineInstances) {
    for (int n : {4, 8, 16, 32, 64}) {
        for (Seed seed = 0; seed < 50; ++seed) {
            auto vm = gen_one_line(n, n, seed);
            auto oracle = vertex_oracle(vm);
            auto res = diagonal_solve(oracle);
            EXPECT_EQ(res.sink, brute_force_sink(vm));
            EXPECT_LE(res.queries.vertex_queries, static_cast<std::uint64_t>(2 * n - 1));
        }
    }
}

TEST(Diagonal, RejectsRectangles) {
    auto oracle = vertex_oracle(gen_one_line(2, 3, 0));
    EXPECT_THROW(diagonal_solve(oracle), StructuralError);
}

TEST(Rectangular, SingleRowWorstCaseIsN) {
    for (int n = 1; n <= 12; ++n) {
        std::vector<double> row;
        for (int j = 0; j < n; ++j) row.push_back(n - j);
        auto oracle = vertex_oracle(ValueMatrix::from_rows({row}));
        auto res = rectangular_solve(oracle);
        EXPECT_EQ(res.sink, (Vertex{0, n - 1}));
        EXPECT_EQ(res.queries.vertex_queries, static_cast<std::uint64_t>(n));

        AdversaryVertexOracle adv(GridShape(1, n));
        EXPECT_EQ(rectangular_solve(adv).queries.vertex_queries, static_cast<std::uint64_t>(n));

        for (Seed seed = 0; seed < 20; ++seed) {
            auto vm = gen_one_line(1, n, seed);
            auto o = vertex_oracle(vm);
            auto r = rectangular_solve(o);
            EXPECT_EQ(r.sink, brute_force_sink(vm));
            EXPECT_LE(r.queries.vertex_queries, static_cast<std::uint64_t>(n));
        }
    }
}

TEST(Rectangular, AllTwoByThree) {
    for (const GridShape& shape : {GridShape(2, 3), GridShape(3, 2)}) {
        for (const auto& g : enumerate_usos(shape)) {
            auto oracle = vertex_oracle(g);
            auto res = rectangular_solve(oracle);
            EXPECT_EQ(res.sink, brute_force_sink(g));
            EXPECT_LE(res.queries.vertex_queries, 4U);
        }
    }
}

TEST(Rectangular, EightByThirteen) {
    for (Seed seed = 0; seed < 500; ++seed) {
        for (auto [m, n] : {std::pair{8, 13}, std::pair{13, 8}}) {
            auto vm = gen_one_line(m, n, seed);
            auto oracle = vertex_oracle(vm);
            auto res = rectangular_solve(oracle);
            EXPECT_EQ(res.sink, brute_force_sink(vm));
            EXPECT_LE(res.queries.vertex_queries, 20U);
        }
    }
}

TEST(Rectangular, AdversaryForcesExactly) {
    for (int m = 1; m <= 8; ++m) {
        for (int n = 1; n <= 8; ++n) {
            AdversaryVertexOracle adv(GridShape(m, n));
            auto res = rectangular_solve(adv);
            EXPECT_EQ(res.queries.vertex_queries, static_cast<std::uint64_t>(m + n - 1)) << m << "x" << n;
            ASSERT_TRUE(adv.resolved());
            EXPECT_EQ(res.sink, *adv.sink());
        }
    }
}

TEST(Rectangular, NonUsoIsReported) {
    auto oracle = vertex_oracle(gridsink::testing::four_cycle());
    EXPECT_THROW(rectangular_solve(oracle), OracleInconsistency);
}

TEST(KScheduleTest, Values) {
    EXPECT_EQ(k_schedule(1 << 25), 1024);
    EXPECT_EQ(k_schedule(1024), 80);
    EXPECT_EQ(k_schedule(4), 2);
    EXPECT_EQ(k_schedule(2), 2);
    EXPECT_THROW(k_schedule(1), StructuralError);
    EXPECT_EQ(KSchedule::fixed(4).k(100), 4);
    EXPECT_EQ(KSchedule::fixed(4).k(5), 3);
}

TEST(DivideAndConquer, TwoByTwoScansEverything) {
    for (const auto& g : enumerate_usos(GridShape(2, 2))) {
        auto oracle = edge_oracle(g);
        auto res = dc_edge_solve(oracle);
        EXPECT_EQ(res.sink, brute_force_sink(g));
        EXPECT_LE(res.queries.edge_queries, 4U);
    }
}

TEST(DivideAndConquer, AllSmallUsos) {
    for (const GridShape& shape : {GridShape(1, 3), GridShape(2, 3), GridShape(3, 2), GridShape(3, 3)}) {
        for (const auto& g : enumerate_usos(shape)) {
            auto oracle = edge_oracle(g);
            EXPECT_EQ(dc_edge_solve(oracle).sink, brute_force_sink(g));
            auto forced = edge_oracle(g);
            KSchedule recurse = KSchedule::fixed(2);
            recurse.base_threshold = 1;
            EXPECT_EQ(dc_edge_solve(forced, recurse).sink, brute_force_sink(g));
        }
    }
}

TEST(DivideAndConquer, WithinBound) {
    for (int n : {16, 32, 64, 128, 256}) {
        for (Seed seed = 0; seed < 10; ++seed) {
            auto vm = gen_one_line(n, n, seed);
            auto oracle = edge_oracle(vm);
            auto res = dc_edge_solve(oracle);
            EXPECT_EQ(res.sink, brute_force_sink(vm));
            EXPECT_LE(static_cast<double>(res.queries.edge_queries), dc_edge_bound(n));
            EXPECT_LE(static_cast<double>(res.queries.edge_queries),
                      dc_edge_recurrence_bound(n, KSchedule::standard()));
        }
    }
}

TEST(DivideAndConquer, FixedKAndRectangles) {
    for (Seed seed = 0; seed < 20; ++seed) {
        for (int k : {2, 3, 4, 7}) {
            auto vm = gen_one_line(50, 50, seed);
            auto oracle = edge_oracle(vm);
            auto res = dc_edge_solve(oracle, KSchedule::fixed(k));
            EXPECT_EQ(res.sink, brute_force_sink(vm));
            EXPECT_LE(static_cast<double>(res.queries.edge_queries),
                      dc_edge_recurrence_bound(50, KSchedule::fixed(k)));
        }
        auto vm = gen_one_line(13, 40, seed);
        auto oracle = edge_oracle(vm);
        auto res = dc_edge_solve(oracle);
        EXPECT_EQ(res.sink, brute_force_sink(vm));
        auto fresh = edge_oracle(vm);
        EXPECT_TRUE(replay_matches(oracle.transcript(), fresh));
    }
}

TEST(DivideAndConquer, NonUsoIsReported) {
    auto oracle = edge_oracle(gridsink::testing::four_cycle());
    EXPECT_THROW(dc_edge_solve(oracle), OracleInconsistency);
}

TEST(DDim, OneDimension) {
    for (Seed seed = 0; seed < 30; ++seed) {
        auto g = gen_separable_ddim({5}, seed);
        ExplicitDVertexOracle oracle(g);
        auto res = ddim_solve(oracle);
        EXPECT_EQ(res.sink, brute_force_sink(g));
        EXPECT_LE(res.queries.vertex_queries, 5U);
    }
}

TEST(DDim, TwoDimensionsMatchesRectangular) {
    for (Seed seed = 0; seed < 100; ++seed) {
        for (auto [m, n] : {std::pair{3, 5}, std::pair{6, 2}, std::pair{4, 4}}) {
            auto vm = gen_one_line(m, n, seed);
            auto flat = vertex_oracle(vm);
            auto rect = rectangular_solve(flat);
            ExplicitDVertexOracle oracle(as_ddim(vm));
            auto res = ddim_solve(oracle);
            EXPECT_EQ(res.sink, (Coords{rect.sink.row, rect.sink.col}));
            EXPECT_EQ(res.queries.vertex_queries, rect.queries.vertex_queries);
            EXPECT_LE(res.queries.vertex_queries, ddim_query_bound({m, n}));
        }
    }
}

TEST(DDim, ThreeCubedSeparable) {
    EXPECT_EQ(ddim_query_bound({3, 3, 3}), 15U);
    for (Seed seed = 0; seed < 200; ++seed) {
        auto g = gen_separable_ddim({3, 3, 3}, seed);
        ExplicitDVertexOracle oracle(g);
        auto res = ddim_solve(oracle);
        EXPECT_EQ(res.sink, brute_force_sink(g));
        EXPECT_LE(res.queries.vertex_queries, 15U);
    }
}

TEST(DDim, EveryThreeCubeUso) {
    const DGridShape shape({2, 2, 2});
    const auto edges = all_edges(shape);
    int solved = 0;
    for (std::uint32_t mask = 0; mask < (1U << 12); ++mask) {
        DOrientedGrid g(shape);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            auto [a, b] = edges[k];
            if ((mask >> k) & 1U) g.orient(shape.coords(a), shape.coords(b));
            else g.orient(shape.coords(b), shape.coords(a));
        }
        if (!validate_uso_ddim(g).ok()) continue;
        ExplicitDVertexOracle oracle(g);
        auto res = ddim_solve(oracle);
        EXPECT_EQ(res.sink, brute_force_sink(g));
        EXPECT_LE(res.queries.vertex_queries, ddim_query_bound({2, 2, 2}));
        ++solved;
    }
    EXPECT_EQ(solved, 744);
}

TEST(Walk, SinkAtStart) {
    auto oracle = vertex_oracle(ValueMatrix::from_rows({{1, 2}, {3, 4}}));
    auto res = walk_solve(oracle);
    EXPECT_EQ(res.sink, (Vertex{0, 0}));
    EXPECT_EQ(res.queries.vertex_queries, 1U);
}

TEST(Walk, DescentFromTheTop) {
    auto oracle = vertex_oracle(ValueMatrix::from_rows({{1, 2}, {3, 4}}));
    auto res = walk_solve(oracle, {1, 1});
    EXPECT_EQ(res.sink, (Vertex{0, 0}));
    EXPECT_LE(res.queries.vertex_queries, 3U);
}

TEST(Walk, AllThreeByThree) {
    Seed seed = 0;
    for (const auto& g : enumerate_usos(GridShape(3, 3))) {
        auto a = vertex_oracle(g);
        EXPECT_EQ(walk_solve(a).sink, brute_force_sink(g));
        auto b = vertex_oracle(g);
        EXPECT_EQ(random_edge_solve(b, seed++).sink, brute_force_sink(g));
    }
}

TEST(Walk, CycleIsReported) {
    auto oracle = vertex_oracle(gridsink::testing::four_cycle());
    EXPECT_THROW(walk_solve(oracle), OracleInconsistency);
}

TEST(Walk, AdversaryLowerBound) {
    for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
            AdversaryVertexOracle adv(GridShape(m, n));
            EXPECT_GE(walk_solve(adv).queries.vertex_queries, static_cast<std::uint64_t>(m + n - 1));
            AdversaryVertexOracle adv2(GridShape(m, n));
            EXPECT_GE(random_edge_solve(adv2, 3).queries.vertex_queries, static_cast<std::uint64_t>(m + n - 1));
        }
    }
}
