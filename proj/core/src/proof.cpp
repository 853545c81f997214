#include "nnproof/proof.hpp"

#include <algorithm>

namespace nnproof {

SparseVector to_sparse(const RationalVector &dense)
{
    SparseVector out;
    for (RowIndex r = 0; r < dense.size(); ++r)
        if (dense[r] != 0)
            out.emplace_back(r, dense[r]);
    return out;
}

RationalVector to_dense(const SparseVector &sparse, std::size_t size)
{
    RationalVector out(size);
    for (const auto &[row, value] : sparse)
        if (row < size)
            out[row] = value;
    return out;
}

std::string rule_name(PhaseRule rule)
{
    return "R" + std::to_string(static_cast<int>(rule) + 1);
}

PhaseRule rule_from_name(const std::string &name)
{
    if (name.size() == 2 && name[0] == 'R' && name[1] >= '1' && name[1] <= '5')
        return static_cast<PhaseRule>(name[1] - '1');
    throw ParseError("unknown phase rule '" + name + "'");
}

bool Lemma::same_content(const Lemma &other) const
{
    return id == other.id && relu == other.relu && rule == other.rule && var == other.var &&
           side == other.side && learned == other.learned && ground_var == other.ground_var &&
           ground_side == other.ground_side && ground_value == other.ground_value &&
           proof == other.proof && uses == other.uses;
}

std::vector<Tightening> split_bounds(const ReluTriple &relu, Phase phase)
{
    if (phase == Phase::Active)
        return {{relu.b, Side::Lower, 0}, {relu.a, Side::Upper, 0}};
    return {{relu.b, Side::Upper, 0}, {relu.f, Side::Upper, 0}};
}

namespace {

bool same_node(const ProofNode &lhs, const ProofNode &rhs)
{
    if (lhs.id != rhs.id || !(lhs.split == rhs.split) || lhs.leaf != rhs.leaf ||
        lhs.lemmas.size() != rhs.lemmas.size() || lhs.children.size() != rhs.children.size())
        return false;
    for (std::size_t i = 0; i < lhs.lemmas.size(); ++i)
        if (!lhs.lemmas[i].same_content(rhs.lemmas[i]))
            return false;
    for (std::size_t i = 0; i < lhs.children.size(); ++i)
        if (!same_node(lhs.children[i], rhs.children[i]))
            return false;
    return true;
}

void collect(const ProofNode &node, std::size_t depth, ProofStats &stats)
{
    stats.lemma_count += node.lemmas.size();
    stats.depth = std::max(stats.depth, depth);
    if (node.leaf)
        ++stats.leaf_count;
    for (const auto &child : node.children)
        collect(child, depth + 1, stats);
}

} // namespace

bool same_proof(const ProofTree &lhs, const ProofTree &rhs)
{
    return lhs.query.same_structure(rhs.query) && same_node(lhs.root, rhs.root);
}

ProofStats proof_stats(const ProofTree &tree)
{
    ProofStats stats;
    collect(tree.root, 0, stats);
    stats.proof_size = stats.lemma_count + stats.leaf_count;
    stats.serialized_bytes = serialize_proof(tree).size();
    return stats;
}

} // namespace nnproof
