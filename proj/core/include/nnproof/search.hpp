#pragma once

#include "nnproof/bound_state.hpp"
#include "nnproof/minimizer.hpp"
#include "nnproof/network.hpp"
#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <cstdint>
#include <variant>

namespace nnproof {

struct VerifyConfig {
    double timeout_seconds = 0;      // 0 disables the limit
    std::size_t memory_cap_bytes = 0; // 0 disables the limit; checked against the live proof estimate
    std::size_t max_depth = npos;
    std::size_t tightening_passes = 3;
    minimizer::Mode mode = minimizer::Mode::None;
    std::uint64_t seed = 0; // recorded only; the search itself is deterministic
};

struct SearchStats {
    std::size_t nodes = 0;
    std::size_t lp_calls = 0;
    std::size_t pivots = 0;
    std::size_t lemmas_learned = 0;
    std::size_t lemmas_deleted = 0;
};

struct Sat {
    RationalVector witness; // one value per query variable
};

struct Unsat {
    ProofTree proof;
};

enum class Resource { Time, Memory, Depth };

std::string resource_name(Resource kind);

struct ResourceOut {
    Resource kind = Resource::Time;
};

struct Verdict {
    std::variant<Sat, Unsat, ResourceOut> outcome;
    SearchStats stats;

    bool is_sat() const { return std::holds_alternative<Sat>(outcome); }
    bool is_unsat() const { return std::holds_alternative<Unsat>(outcome); }
};

/// True iff the ReLU's current box forces one phase.
bool is_fixed(const BoundState &state, const ReluTriple &relu);

/// The unfixed ReLU with the widest b interval, lowest index on ties; npos
/// if every ReLU is fixed.
ReluIndex pick_split(const TableauQuery &query, const BoundState &state);

/// Applies the split bounds of `phase` with Split(node) provenance and
/// returns the label. Undo with state.backtrack(mark taken before).
SplitLabel apply_split(const TableauQuery &query, BoundState &state, ReluIndex relu, Phase phase, NodeId node);

/// Depth-first case-splitting search with bound tightening at every node and
/// online minimization at every UNSAT leaf.
Verdict verify(const TableauQuery &query, const VerifyConfig &config = {});

/// Encodes and verifies; a SAT witness is additionally validated against the
/// exact network semantics. Throws std::logic_error if that validation fails.
Verdict verify(const Network &network, const Property &property, const VerifyConfig &config = {});

} // namespace nnproof
