#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace gridsink {

using Seed = std::uint64_t;

/// Seeded stream with platform-independent derived draws. std::mt19937_64 is
/// fully specified by the standard; the distributions in <random> are not,
/// so they are avoided here.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    /// Uniform multiple of 2^-52 in [0, 1). Sums of two such values are exact.
    double unit52() { return static_cast<double>(engine_() >> 12) * 0x1p-52; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        shuffle(p);
        return p;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gridsink
