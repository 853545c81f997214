#pragma once

#include "nnproof/bound_state.hpp"
#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <map>
#include <string>
#include <vector>

namespace nnproof::minimizer {

/// MinBaseline keeps the per-leaf bookkeeping but runs no analysis, so its
/// proofs equal those of None.
enum class Mode { None, MinBaseline, Deps, Greedy, Global };

std::string mode_name(Mode mode);
/// Whether the mode marks lemmas and prunes unmarked ones.
bool prunes(Mode mode);
/// Accepts none, min-baseline, deps, greedy, global. Throws std::invalid_argument.
Mode mode_from_name(const std::string &name);

/// The root-to-node path a proof vector lives on, with lemma lookup and the
/// bound values every origin denotes.
class PathContext {
  public:
    PathContext(const TableauQuery &query, std::vector<ProofNode *> path);

    const TableauQuery &query() const { return *query_; }
    const std::vector<ProofNode *> &path() const { return path_; }

    /// Throws std::out_of_range if the node is not on the path.
    std::size_t depth_of(NodeId node) const;
    /// Throws std::out_of_range if the lemma is not on the path.
    Lemma &lemma(LemmaId id) const;

    Rational origin_value(VarIndex var, Side side, const Origin &origin) const;
    /// Tightest lemma-free bound among the input bound and the split bounds
    /// of path[0..depth].
    BoundEntry baseline(VarIndex var, Side side, std::size_t depth) const;

  private:
    const TableauQuery *query_;
    std::vector<ProofNode *> path_;
    std::map<LemmaId, Lemma *> lemmas_;
};

/// A proof vector seen as a budgeted sum D = sum_j e_j * value(use_j). The
/// vector certifies its conclusion while D < threshold (strict) or
/// D <= threshold (non-strict). Leaves use e_j = c_j, threshold 0, strict.
/// Lemmas use e_j = -s * c_j / c_g with s = +1 for an upper ground bound
/// and s = -1 for a lower one.
struct VectorView {
    std::vector<BoundUse> *uses = nullptr;
    RationalVector effective;
    Rational threshold;
    bool strict = true;
    std::size_t depth = 0; // depth of the owning node on the path
    Lemma *lemma = nullptr; // null for a leaf
};

VectorView leaf_view(Leaf &leaf, std::size_t depth);
VectorView lemma_view(Lemma &lemma, const PathContext &context);

/// The threshold on D that keeps the lemma's rule applicable. Strict only
/// for the R4 conclusion on the auxiliary variable.
Rational lemma_threshold(const Lemma &lemma, bool &strict);

Rational vector_value(const VectorView &view, const PathContext &context);
/// threshold - D; removals must keep the sum of |contribution| below it
/// (strict) or at most it (non-strict).
Rational budget(const VectorView &view, const PathContext &context);

/// One lemma-origin use of a proof vector.
struct Dependency {
    std::size_t use_index = 0;
    LemmaId lemma = 0;
    Rational contribution; // e_j * (value - baseline), always <= 0
};

using DependencyList = std::vector<Dependency>;

Rational contribution(const VectorView &view, std::size_t use_index, const PathContext &context);

DependencyList dependencies(const VectorView &view, const PathContext &context);

/// Recursive closure of lemma dependencies; marks include_in_proof on every
/// member and expands each lemma at most once (was_analyzed).
std::vector<LemmaId> proof_deps(const VectorView &view, PathContext &context);

struct MinimizeOptions {
    /// Keep entries whose lemma is already included without spending budget.
    bool skip_included = true;
};

/// Greedy removal in ascending |contribution| order (ties by lemma id) until
/// the first entry that no longer fits the budget. Returns the kept entries.
DependencyList proof_min(const VectorView &view, const PathContext &context, const DependencyList &deps,
                         const MinimizeOptions &options = {});

/// Number of distinct lemmas reachable from the lemma's own uses, cached in
/// deps_score on first computation. Does not mark anything.
std::size_t closure_size(Lemma &lemma, const PathContext &context);

/// Removal in descending closure size order (ties in greedy order), with
/// failed removals reverted, repeated until a pass removes nothing.
DependencyList glob_proof_min(const VectorView &view, const PathContext &context, const DependencyList &deps,
                              const MinimizeOptions &options = {});

/// Relaxes every lemma-origin use not in `kept` to its baseline and, for a
/// lemma, recomputes its ground value.
void relax_except(VectorView &view, const PathContext &context, const DependencyList &kept);

/// Minimizes the vector according to mode, marks the kept dependencies and
/// analyzes each newly reached lemma once. None and MinBaseline do nothing.
void analyze_vector(VectorView view, PathContext &context, Mode mode, const MinimizeOptions &options = {});

/// Analyzes the leaf at the end of the path.
void analyze_leaf(PathContext &context, Mode mode, const MinimizeOptions &options = {});

/// Removes every lemma with include_in_proof = false.
void prune_proof(ProofTree &tree);

/// Resets the bookkeeping flags, then analyzes each leaf in preorder before
/// pruning. None and MinBaseline leave the tree unchanged.
void minimize_offline(ProofTree &tree, Mode mode, const MinimizeOptions &options = {});

} // namespace nnproof::minimizer
