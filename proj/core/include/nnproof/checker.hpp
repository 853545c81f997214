#pragma once

#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <string>
#include <vector>

namespace nnproof::checker {

/// c = w^T A, recomputed from the rows.
RationalVector combination(const TableauQuery &query, const RationalVector &w);

/// Delta = sum_{c_j > 0} c_j upper_j + sum_{c_j < 0} c_j lower_j for
/// c = w^T A. Only entries with c_j != 0 are read.
Rational evaluate_delta(const TableauQuery &query, const RationalVector &w, const RationalVector &lower,
                        const RationalVector &upper);

/// An empty result means the item passed.
using Reasons = std::vector<std::string>;

/// The nodes from the root to the node under inspection.
class Path {
  public:
    explicit Path(const TableauQuery &query) : query_(&query) {}

    const TableauQuery &query() const { return *query_; }
    void push(const ProofNode &node) { nodes_.push_back(&node); }
    void pop() { nodes_.pop_back(); }
    const std::vector<const ProofNode *> &nodes() const { return nodes_; }

    /// Looks up a lemma in the path nodes; null if absent.
    const Lemma *find_lemma(LemmaId id) const;

  private:
    const TableauQuery *query_;
    std::vector<const ProofNode *> nodes_;
};

/// Checks the leaf of the last path node against its recorded bound origins.
Reasons check_leaf(const Path &path, const Leaf &leaf);

/// Checks a lemma owned by the last path node: its proof vector derives
/// exactly the recorded ground value and the rule yields the learned bound.
Reasons check_lemma(const Path &path, const Lemma &lemma);

struct Result {
    Reasons reasons;
    bool accepted() const { return reasons.empty(); }
};

/// Structural pass plus every lemma and leaf. Input origins are valued by
/// tree.query's input bounds.
Result check_proof(const ProofTree &tree);

/// Also requires the proof's query snapshot to match `query` structurally.
Result check_proof(const TableauQuery &query, const ProofTree &tree);

} // namespace nnproof::checker
