#include "nnproof/oracles.hpp"

#include "nnproof/checker.hpp"
#include "nnproof/lp.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace nnproof::oracles {

PhaseVerdict enumerate_phases(const TableauQuery &query)
{
    const std::size_t k = query.relus.size();
    if (k > 16)
        throw std::invalid_argument("phase enumeration supports at most 16 ReLUs");
    PhaseVerdict verdict;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        RationalVector lower = query.lower;
        RationalVector upper = query.upper;
        for (std::size_t i = 0; i < k; ++i) {
            const auto &r = query.relus[i];
            if (mask & (1u << i)) {
                lower[r.b] = std::max(lower[r.b], Rational(0));
                upper[r.a] = std::min(upper[r.a], Rational(0));
            } else {
                upper[r.b] = std::min(upper[r.b], Rational(0));
                upper[r.f] = std::min(upper[r.f], Rational(0));
            }
        }
        bool empty = false;
        for (VarIndex v = 0; v < lower.size(); ++v)
            empty = empty || lower[v] > upper[v];
        if (empty)
            continue;
        ++verdict.lp_calls;
        auto outcome = lp::solve(query, lower, upper);
        if (auto *feasible = std::get_if<lp::Feasible>(&outcome)) {
            verdict.sat = true;
            verdict.witness = std::move(feasible->assignment);
            return verdict;
        }
    }
    return verdict;
}

std::optional<std::size_t> brute_force_min_deps(const TableauQuery &query, const RationalVector &w,
                                                const RationalVector &lower, const RationalVector &upper,
                                                const std::vector<DepEntry> &deps, const Rational &threshold,
                                                bool strict)
{
    const std::size_t n = deps.size();
    if (n > 12)
        throw std::invalid_argument("subset enumeration supports at most 12 dependencies");
    auto valid = [&](std::uint32_t kept) {
        RationalVector lo = lower;
        RationalVector up = upper;
        for (std::size_t i = 0; i < n; ++i)
            if (!(kept & (1u << i)))
                (deps[i].side == Side::Lower ? lo : up)[deps[i].var] = deps[i].baseline;
        const Rational delta = checker::evaluate_delta(query, w, lo, up);
        return strict ? delta < threshold : delta <= threshold;
    };
    for (std::size_t size = 0; size <= n; ++size)
        for (std::uint32_t kept = 0; kept < (1u << n); ++kept)
            if (static_cast<std::size_t>(std::popcount(kept)) == size && valid(kept))
                return size;
    return std::nullopt;
}

} // namespace nnproof::oracles
