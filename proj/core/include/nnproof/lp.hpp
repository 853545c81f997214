#pragma once

#include "nnproof/query.hpp"
#include "nnproof/rational.hpp"

#include <stdexcept>
#include <variant>

namespace nnproof::lp {

/// Raised when the solver's own invariants break (cycling guard, a
/// certificate that fails self-verification). Never expected in practice.
class LpError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct Feasible {
    RationalVector assignment; // one value per query variable
};

struct Infeasible {
    RationalVector certificate; // one multiplier per row
};

using LpOutcome = std::variant<Feasible, Infeasible>;

struct SolverStats {
    std::size_t pivots = 0;
};

/// Decides A x = 0, lower <= x <= upper over the query's rows. Requires
/// lower <= upper componentwise. Both outcomes are verified before return.
LpOutcome solve(const TableauQuery &query, const RationalVector &lower, const RationalVector &upper,
                SolverStats *stats = nullptr);

inline LpOutcome solve(const TableauQuery &query) { return solve(query, query.lower, query.upper); }

} // namespace nnproof::lp
