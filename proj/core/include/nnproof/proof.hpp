#pragma once

#include "nnproof/query.hpp"
#include "nnproof/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nnproof {

using NodeId = std::size_t;
using LemmaId = std::size_t;

/// Where a bound in effect came from.
struct Origin {
    enum class Kind { Input, Split, Lemma };

    Kind kind = Kind::Input;
    std::size_t id = 0; // node id for Split, lemma id for Lemma

    static Origin input() { return {Kind::Input, 0}; }
    static Origin split(NodeId node) { return {Kind::Split, node}; }
    static Origin lemma(LemmaId lemma) { return {Kind::Lemma, lemma}; }

    bool is_lemma() const { return kind == Kind::Lemma; }
    bool operator==(const Origin &) const = default;
};

/// One term of a proof vector's combination: c_j x_j bounded by the side
/// selected by the sign rule, with the origin of the bound it relies on.
struct BoundUse {
    VarIndex var = 0;
    Rational coeff;
    Side side = Side::Upper;
    Origin origin;

    bool operator==(const BoundUse &) const = default;
};

/// Sorted (row, multiplier) pairs with nonzero multipliers.
using SparseVector = std::vector<std::pair<RowIndex, Rational>>;

SparseVector to_sparse(const RationalVector &dense);
RationalVector to_dense(const SparseVector &sparse, std::size_t size);

enum class PhaseRule { R1, R2, R3, R4, R5 };

std::string rule_name(PhaseRule rule);
PhaseRule rule_from_name(const std::string &name);

/// A bound-tightening lemma: a ground bound proved by a row combination and
/// a learned bound obtained from it through a ReLU phase rule.
struct Lemma {
    LemmaId id = 0;
    ReluIndex relu = 0;
    PhaseRule rule = PhaseRule::R1;
    VarIndex var = 0;
    Side side = Side::Upper;
    Rational learned;
    VarIndex ground_var = 0;
    Side ground_side = Side::Upper;
    Rational ground_value;
    SparseVector proof;
    std::vector<BoundUse> uses; // every nonzero term except ground_var
    NodeId node = 0;

    // Minimization bookkeeping; not part of the serialized proof.
    bool include_in_proof = false;
    bool was_analyzed = false;
    std::optional<std::size_t> deps_score;

    bool same_content(const Lemma &other) const;
};

enum class Phase { Inactive, Active };

struct Tightening {
    VarIndex var = 0;
    Side side = Side::Upper;
    Rational value;

    bool operator==(const Tightening &) const = default;
};

struct SplitLabel {
    bool is_root = true;
    ReluIndex relu = 0;
    Phase phase = Phase::Inactive;
    std::vector<Tightening> bounds;

    bool operator==(const SplitLabel &) const = default;
};

/// The bounds a split of `relu` into `phase` imposes.
std::vector<Tightening> split_bounds(const ReluTriple &relu, Phase phase);

struct Leaf {
    enum class Kind { Farkas, EmptyBox };

    Kind kind = Kind::Farkas;
    SparseVector certificate; // empty for EmptyBox
    // Farkas: one entry per nonzero coefficient of w^T A. EmptyBox: exactly
    // {(v, +1, upper, o1), (v, -1, lower, o2)} for the variable with l > u.
    std::vector<BoundUse> uses;

    bool operator==(const Leaf &) const = default;
};

struct ProofNode {
    NodeId id = 0;
    SplitLabel split;
    std::vector<Lemma> lemmas;
    std::vector<ProofNode> children; // zero or two
    std::optional<Leaf> leaf;

    bool is_leaf() const { return children.empty(); }
};

struct ProofTree {
    TableauQuery query; // current bounds equal the input bounds
    ProofNode root;
};

/// Structural equality of two proofs, bookkeeping flags ignored.
bool same_proof(const ProofTree &lhs, const ProofTree &rhs);

struct ProofStats {
    std::size_t proof_size = 0; // lemmas + leaves
    std::size_t lemma_count = 0;
    std::size_t leaf_count = 0;
    std::size_t depth = 0;
    std::size_t serialized_bytes = 0;
};

ProofStats proof_stats(const ProofTree &tree);

/// Versioned line-oriented text format, rationals as "p/q" (docs/formats.md).
std::string serialize_proof(const ProofTree &tree);

/// Throws ParseError with "line L, column C" diagnostics.
ProofTree deserialize_proof(const std::string &text);

/// Visits every node in preorder.
template <typename Node, typename Visitor> void for_each_node(Node &node, Visitor &&visit)
{
    visit(node);
    for (auto &child : node.children)
        for_each_node(child, visit);
}

} // namespace nnproof
