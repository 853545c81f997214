#pragma once

#include "nnproof/bound_state.hpp"
#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <optional>
#include <vector>

namespace nnproof::deduction {

/// A bound on one variable implied by a single row and the current bounds of
/// the row's other variables.
struct RowBound {
    VarIndex var = 0;
    Side side = Side::Upper;
    Rational value;
    SparseVector proof;          // one entry, scaled so var's coefficient is -1
    std::vector<BoundUse> uses;  // the other variables of the row
};

/// Requires var to occur in the row.
RowBound derive_row_bound(const TableauQuery &query, const BoundState &state, RowIndex row, VarIndex var,
                          Side side);

/// The learned bound a ground bound yields under the phase-rule catalog
/// (R1-R5), one entry per learned variable. Only conclusions strictly tighter
/// than the current state are returned.
struct Conclusion {
    PhaseRule rule;
    VarIndex var;
    Side side;
    Rational value;
};

std::vector<Conclusion> conclusions(const ReluTriple &relu, VarIndex ground_var, Side ground_side,
                                    const Rational &ground_value, const BoundState &state);

struct Config {
    std::size_t passes = 3;
};

struct Result {
    std::vector<Lemma> lemmas;
    /// Variable whose box became empty by a learned bound, if any.
    std::optional<VarIndex> conflict;
};

/// Sweeps rows (ascending) and their variables (ascending) up to
/// config.passes times, emitting and applying a lemma for every rule firing.
/// Stops at the first empty box.
Result tighten_bounds(const TableauQuery &query, BoundState &state, NodeId node, LemmaId &next_id,
                      const Config &config = {});

} // namespace nnproof::deduction
