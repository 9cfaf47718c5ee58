#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace gridsink;
using gridsink::testing::from_mask;
using gridsink::testing::orientation_key;

TEST(OrientFromValues, SortedMatrixIsUso) {
    auto g = orient_from_values(ValueMatrix::from_rows({{1, 2}, {3, 4}}));
    EXPECT_TRUE(validate_uso(g).ok());
    EXPECT_EQ(brute_force_sink(g), (Vertex{0, 0}));
}

TEST(OrientFromValues, TwoMinimaIsAcyclicButNotUso) {
    auto g = orient_from_values(ValueMatrix::from_rows({{1, 3}, {4, 2}}));
    auto check = validate_uso(g);
    ASSERT_FALSE(check.ok());
    EXPECT_EQ(check.violation->sink_count, 2);
    EXPECT_NO_THROW((void)topological_values(g));
}

TEST(OrientFromValues, MonotoneMatricesHaveSinkAtOrigin) {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(6));
        const int n = 1 + static_cast<int>(rng.below(14 - m > 6 ? 6 : 14 - m));
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                double floor = 0;
                if (i > 0) floor = std::max(floor, rows[i - 1][j]);
                if (j > 0) floor = std::max(floor, rows[i][j - 1]);
                rows[i][j] = floor + 1 + rng.unit52();
            }
        }
        auto g = orient_from_values(ValueMatrix::from_rows(rows));
        EXPECT_TRUE(validate_uso(g).ok());
        EXPECT_EQ(brute_force_sink(g), (Vertex{0, 0}));
    }
}

TEST(OneLine, MidpointHeights) {
    PointInstance pts{{{-1, 0}, {-1, 1}}, {{1, 0}, {1, 2}}};
    auto vm = crossing_heights(pts);
    EXPECT_EQ(vm.at({0, 0}), 0.0);
    EXPECT_EQ(vm.at({0, 1}), 1.0);
    EXPECT_EQ(vm.at({1, 0}), 0.5);
    EXPECT_EQ(vm.at({1, 1}), 1.5);
    EXPECT_EQ(brute_force_sink(vm), (Vertex{0, 0}));
}

TEST(OneLine, SingleSegment) {
    auto vm = gen_one_line(1, 1, 0);
    EXPECT_EQ(vm.shape(), GridShape(1, 1));
    EXPECT_EQ(brute_force_sink(vm), (Vertex{0, 0}));
}

TEST(OneLine, RejectsPointsOnTheWrongSide) {
    PointInstance pts{{{1, 0}}, {{1, 2}}};
    EXPECT_THROW(crossing_heights(pts), StructuralError);
    EXPECT_THROW(crossing_heights(PointInstance{}), StructuralError);
    EXPECT_THROW(gen_one_line(0, 3, 1), StructuralError);
}

TEST(OneLine, ThousandSeedsAtSixBySix) {
    for (Seed seed = 0; seed < 1000; ++seed) {
        ASSERT_TRUE(validate_uso(orient_from_values(gen_one_line(6, 6, seed))).ok()) << "seed " << seed;
    }
}

TEST(OneLine, AllSmallShapes) {
    for (int m = 1; m <= 11; ++m) {
        for (int n = 1; m + n <= 12; ++n) {
            for (Seed seed = 0; seed < 100; ++seed) {
                ASSERT_TRUE(validate_uso(gen_one_line(m, n, seed)).ok()) << m << "x" << n << " seed " << seed;
            }
        }
    }
}

TEST(OneLine, GeneralPositionPointsGiveUsos) {
    // Arbitrary x coordinates, not just +-1.
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        PointInstance pts;
        const int m = 1 + static_cast<int>(rng.below(5));
        const int n = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < m; ++i) pts.left.push_back({-0.1 - rng.unit52(), rng.unit52()});
        for (int j = 0; j < n; ++j) pts.right.push_back({0.1 + rng.unit52(), rng.unit52()});
        auto vm = crossing_heights(pts);
        std::set<double> distinct(vm.values().begin(), vm.values().end());
        if (distinct.size() != vm.values().size()) continue;
        EXPECT_TRUE(validate_uso(vm).ok());
    }
}

TEST(OneLine, DeterministicInSeed) {
    EXPECT_EQ(gen_one_line(7, 9, 42).values(), gen_one_line(7, 9, 42).values());
    EXPECT_NE(gen_one_line(7, 9, 42).values(), gen_one_line(7, 9, 43).values());
}

TEST(Enumerate, Counts) {
    EXPECT_EQ(for_each_uso(GridShape(1, 1), nullptr), 1U);
    EXPECT_EQ(for_each_uso(GridShape(1, 2), nullptr), 2U);
    EXPECT_EQ(for_each_uso(GridShape(1, 3), nullptr), 6U);
    EXPECT_EQ(for_each_uso(GridShape(2, 2), nullptr), 12U);
    EXPECT_EQ(for_each_uso(GridShape(2, 3), nullptr), 132U);
    EXPECT_EQ(for_each_uso(GridShape(3, 2), nullptr), 132U);
    // Regression constant recorded from the first enumeration.
    EXPECT_EQ(for_each_uso(GridShape(3, 3), nullptr), 5796U);
}

TEST(Enumerate, MembersValidateAndAreDistinct) {
    for (const GridShape& shape : {GridShape(2, 3), GridShape(3, 3)}) {
        std::set<std::string> keys;
        for (const auto& g : enumerate_usos(shape)) {
            EXPECT_TRUE(validate_uso(g).ok());
            keys.insert(orientation_key(g));
        }
        EXPECT_EQ(keys.size(), for_each_uso(shape, nullptr));
    }
}

TEST(Enumerate, MatchesValidatorFilterOnTwoByThree) {
    const GridShape shape(2, 3);
    std::set<std::string> filtered;
    for (std::uint64_t mask = 0; mask < (1U << shape.edge_count()); ++mask) {
        auto g = from_mask(shape, mask);
        if (validate_uso(g).ok()) filtered.insert(orientation_key(g));
    }
    std::set<std::string> enumerated;
    for (const auto& g : enumerate_usos(shape)) enumerated.insert(orientation_key(g));
    EXPECT_EQ(filtered, enumerated);
}

TEST(Enumerate, CapIsHard) {
    EXPECT_THROW(for_each_uso(GridShape(3, 4), nullptr), CapExceeded);
    EXPECT_THROW(for_each_uso(GridShape(5, 5), nullptr), CapExceeded);
}

TEST(PadToSquare, SingleRow) {
    auto padded = pad_values_to_square(ValueMatrix::from_rows({{1, 2}}));
    ASSERT_EQ(padded.shape(), GridShape(2, 2));
    EXPECT_EQ(padded.at({0, 0}), 1.0);
    EXPECT_EQ(padded.at({0, 1}), 2.0);
    EXPECT_GT(padded.at({1, 0}), 2.0);
    EXPECT_GT(padded.at({1, 1}), padded.at({1, 0}));
    EXPECT_EQ(brute_force_sink(padded), (Vertex{0, 0}));
}

TEST(PadToSquare, SquareIsIdentity) {
    auto vm = gen_one_line(4, 4, 3);
    EXPECT_EQ(pad_values_to_square(vm).values(), vm.values());
}

TEST(PadToSquare, PreservesSinkAndEdges) {
    for (Seed seed = 0; seed < 100; ++seed) {
        for (auto [m, n] : {std::pair{3, 5}, std::pair{5, 3}, std::pair{1, 7}}) {
            auto vm = gen_one_line(m, n, seed);
            auto padded = pad_values_to_square(vm);
            const int side = std::max(m, n);
            ASSERT_EQ(padded.shape(), GridShape(side, side));
            EXPECT_TRUE(validate_uso(padded).ok());
            EXPECT_EQ(brute_force_sink(padded), brute_force_sink(vm));
            for (const Edge& e : all_edges(vm.shape())) {
                EXPECT_EQ(padded.points_to(e.a, e.b), vm.points_to(e.a, e.b));
            }
        }
    }
}

TEST(PadToSquare, WorksOnNonGeometricUsos) {
    for (const auto& g : enumerate_usos(GridShape(2, 3))) {
        auto padded = pad_values_to_square(topological_values(g));
        EXPECT_TRUE(validate_uso(padded).ok());
        EXPECT_EQ(brute_force_sink(padded), brute_force_sink(g));
    }
}

TEST(PadToSquare, RejectsNonUso) {
    EXPECT_THROW(pad_values_to_square(ValueMatrix::from_rows({{1, 3, 5}, {4, 2, 6}})), NotUsoError);
}

TEST(Separable, OneDimension) {
    for (Seed seed = 0; seed < 10; ++seed) {
        auto g = gen_separable_ddim({2}, seed);
        EXPECT_TRUE(validate_uso_ddim(g).ok());
    }
}

TEST(Separable, TwoDimensionsValidate) {
    for (Seed seed = 0; seed < 200; ++seed) {
        auto g = gen_separable_ddim({2, 2}, seed);
        OrientedGrid flat(GridShape(2, 2));
        for (const Edge& e : all_edges(flat.shape())) {
            if (g.points_to(Coords{e.a.row, e.a.col}, Coords{e.b.row, e.b.col})) flat.orient(e.a, e.b);
            else flat.orient(e.b, e.a);
        }
        EXPECT_TRUE(validate_uso(flat).ok());
    }
}

TEST(Separable, HigherDimensionsValidate) {
    for (Seed seed = 0; seed < 50; ++seed) {
        EXPECT_TRUE(validate_uso_ddim(gen_separable_ddim({2, 2, 2}, seed)).ok());
        EXPECT_TRUE(validate_uso_ddim(gen_separable_ddim({3, 2, 4}, seed)).ok());
        EXPECT_TRUE(validate_uso_ddim(gen_separable_ddim({2, 2, 2, 2}, seed)).ok());
    }
}

TEST(Separable, DeterministicInSeed) {
    auto a = gen_separable_ddim({3, 3, 3}, 11);
    auto b = gen_separable_ddim({3, 3, 3}, 11);
    for (auto [x, y] : all_edges(a.shape())) EXPECT_EQ(a.points_to(x, y), b.points_to(x, y));
}
