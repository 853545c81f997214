#pragma once

#include "harness.hpp"

#include <random>
#include <string>
#include <vector>

namespace nnproof::testing {

/// Seeded queries with 2 to 8 ReLUs in one or two hidden layers.
inline std::vector<harness::GeneratedQuery> random_suite(std::size_t count, std::uint64_t seed)
{
    std::vector<harness::GeneratedQuery> suite;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        harness::GenConfig config;
        config.layers = 1 + rng() % 2;
        config.neurons = config.layers == 1 ? 2 + rng() % 7 : 1 + rng() % 4;
        suite.push_back(harness::generate_query(config, rng(), "r" + std::to_string(i)));
    }
    return suite;
}

} // namespace nnproof::testing
