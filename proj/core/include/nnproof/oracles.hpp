#pragma once

#include "nnproof/query.hpp"

#include <optional>
#include <vector>

namespace nnproof::oracles {

struct PhaseVerdict {
    bool sat = false;
    RationalVector witness; // set when sat
    std::size_t lp_calls = 0;
};

/// Solves one LP per full phase assignment. Requires at most 16 ReLUs.
PhaseVerdict enumerate_phases(const TableauQuery &query);

/// One removable bound of a vector: the baseline it relaxes to.
struct DepEntry {
    VarIndex var = 0;
    Side side = Side::Upper;
    Rational baseline;
};

/// Smallest number of deps that must keep their current bound so that
/// evaluate_delta(w) with the rest relaxed stays below threshold (strict) or
/// at most threshold. nullopt if even keeping all fails. At most 12 deps.
std::optional<std::size_t> brute_force_min_deps(const TableauQuery &query, const RationalVector &w,
                                                const RationalVector &lower, const RationalVector &upper,
                                                const std::vector<DepEntry> &deps, const Rational &threshold = 0,
                                                bool strict = true);

} // namespace nnproof::oracles
