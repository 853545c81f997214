#include "nnproof/minimizer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nnproof::minimizer {

std::string mode_name(Mode mode)
{
    switch (mode) {
    case Mode::None: return "none";
    case Mode::MinBaseline: return "min-baseline";
    case Mode::Deps: return "deps";
    case Mode::Greedy: return "greedy";
    case Mode::Global: return "global";
    }
    return "none";
}

bool prunes(Mode mode) { return mode != Mode::None && mode != Mode::MinBaseline; }

Mode mode_from_name(const std::string &name)
{
    for (const Mode mode : {Mode::None, Mode::MinBaseline, Mode::Deps, Mode::Greedy, Mode::Global})
        if (mode_name(mode) == name)
            return mode;
    throw std::invalid_argument("unknown minimization mode '" + name + "'");
}

PathContext::PathContext(const TableauQuery &query, std::vector<ProofNode *> path)
    : query_(&query), path_(std::move(path))
{
    for (ProofNode *node : path_)
        for (Lemma &lemma : node->lemmas)
            lemmas_[lemma.id] = &lemma;
}

std::size_t PathContext::depth_of(NodeId node) const
{
    for (std::size_t d = 0; d < path_.size(); ++d)
        if (path_[d]->id == node)
            return d;
    throw std::out_of_range("node " + std::to_string(node) + " is not on the path");
}

Lemma &PathContext::lemma(LemmaId id) const
{
    const auto it = lemmas_.find(id);
    if (it == lemmas_.end())
        throw std::out_of_range("lemma " + std::to_string(id) + " is not on the path");
    return *it->second;
}

Rational PathContext::origin_value(VarIndex var, Side side, const Origin &origin) const
{
    switch (origin.kind) {
    case Origin::Kind::Input: return query_->input_bound(var, side);
    case Origin::Kind::Lemma: return lemma(origin.id).learned;
    case Origin::Kind::Split:
        for (const auto &t : path_[depth_of(origin.id)]->split.bounds)
            if (t.var == var && t.side == side)
                return t.value;
        throw std::out_of_range("split does not bound the variable");
    }
    throw std::logic_error("unknown origin kind");
}

BoundEntry PathContext::baseline(VarIndex var, Side side, std::size_t depth) const
{
    BoundEntry best{query_->input_bound(var, side), Origin::input()};
    for (std::size_t d = 0; d <= depth && d < path_.size(); ++d)
        for (const auto &t : path_[d]->split.bounds)
            if (t.var == var && t.side == side && tighter(side, t.value, best.value))
                best = {t.value, Origin::split(path_[d]->id)};
    return best;
}

VectorView leaf_view(Leaf &leaf, std::size_t depth)
{
    VectorView view;
    view.uses = &leaf.uses;
    for (const auto &use : leaf.uses)
        view.effective.push_back(use.coeff);
    view.threshold = 0;
    view.strict = true;
    view.depth = depth;
    return view;
}

Rational lemma_threshold(const Lemma &lemma, bool &strict)
{
    strict = false;
    switch (lemma.rule) {
    case PhaseRule::R1:
    case PhaseRule::R2:
    case PhaseRule::R3: return 0;
    case PhaseRule::R5: return lemma.learned;
    case PhaseRule::R4:
        if (lemma.side == Side::Lower)
            return -lemma.learned;
        strict = true;
        return 0;
    }
    return 0;
}

namespace {

Rational ground_coefficient(const Lemma &lemma, const TableauQuery &query)
{
    Rational c = 0;
    for (const auto &[row, w] : lemma.proof)
        c += w * query.rows.at(row).coefficient(lemma.ground_var);
    return c;
}

} // namespace

VectorView lemma_view(Lemma &lemma, const PathContext &context)
{
    VectorView view;
    view.uses = &lemma.uses;
    const Rational cg = ground_coefficient(lemma, context.query());
    if (cg == 0)
        throw std::invalid_argument("lemma proof vector does not involve its ground variable");
    const Rational s = lemma.ground_side == Side::Upper ? 1 : -1;
    for (const auto &use : lemma.uses)
        view.effective.push_back(-s * use.coeff / cg);
    view.threshold = lemma_threshold(lemma, view.strict);
    view.depth = context.depth_of(lemma.node);
    view.lemma = &lemma;
    return view;
}

Rational vector_value(const VectorView &view, const PathContext &context)
{
    Rational d = 0;
    for (std::size_t j = 0; j < view.uses->size(); ++j) {
        const auto &use = (*view.uses)[j];
        d += view.effective[j] * context.origin_value(use.var, use.side, use.origin);
    }
    return d;
}

Rational budget(const VectorView &view, const PathContext &context)
{
    return view.threshold - vector_value(view, context);
}

Rational contribution(const VectorView &view, std::size_t use_index, const PathContext &context)
{
    const auto &use = (*view.uses)[use_index];
    const Rational value = context.origin_value(use.var, use.side, use.origin);
    const auto base = context.baseline(use.var, use.side, view.depth);
    return view.effective[use_index] * (value - base.value);
}

DependencyList dependencies(const VectorView &view, const PathContext &context)
{
    DependencyList deps;
    for (std::size_t j = 0; j < view.uses->size(); ++j) {
        const auto &use = (*view.uses)[j];
        if (use.origin.is_lemma())
            deps.push_back({j, use.origin.id, contribution(view, j, context)});
    }
    return deps;
}

std::vector<LemmaId> proof_deps(const VectorView &view, PathContext &context)
{
    std::vector<LemmaId> closure;
    std::vector<LemmaId> work;
    for (const auto &dep : dependencies(view, context))
        work.push_back(dep.lemma);
    while (!work.empty()) {
        Lemma &lemma = context.lemma(work.back());
        work.pop_back();
        if (!lemma.include_in_proof) {
            lemma.include_in_proof = true;
            closure.push_back(lemma.id);
        }
        if (lemma.was_analyzed)
            continue;
        lemma.was_analyzed = true;
        for (const auto &use : lemma.uses) {
            if (!use.origin.is_lemma())
                continue;
            if (use.origin.id >= lemma.id)
                throw std::logic_error("lemma cites a lemma that is not older");
            work.push_back(use.origin.id);
        }
    }
    std::sort(closure.begin(), closure.end());
    return closure;
}

namespace {

bool fits(const Rational &spent, const Rational &budget, bool strict)
{
    return strict ? spent < budget : spent <= budget;
}

bool is_free(const Dependency &dep, const PathContext &context, const MinimizeOptions &options)
{
    return options.skip_included && context.lemma(dep.lemma).include_in_proof;
}

std::vector<std::size_t> greedy_order(const DependencyList &deps)
{
    std::vector<std::size_t> order(deps.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const Rational ax = abs(deps[x].contribution);
        const Rational ay = abs(deps[y].contribution);
        if (ax != ay)
            return ax < ay;
        return deps[x].lemma < deps[y].lemma;
    });
    return order;
}

DependencyList collect_kept(const DependencyList &deps, const std::vector<bool> &removed)
{
    DependencyList kept;
    for (std::size_t i = 0; i < deps.size(); ++i)
        if (!removed[i])
            kept.push_back(deps[i]);
    return kept;
}

} // namespace

DependencyList proof_min(const VectorView &view, const PathContext &context, const DependencyList &deps,
                         const MinimizeOptions &options)
{
    const Rational limit = budget(view, context);
    Rational spent = 0;
    std::vector<bool> removed(deps.size(), false);
    for (const std::size_t i : greedy_order(deps)) {
        if (is_free(deps[i], context, options))
            continue;
        const Rational next = spent + abs(deps[i].contribution);
        if (!fits(next, limit, view.strict))
            break;
        spent = next;
        removed[i] = true;
    }
    return collect_kept(deps, removed);
}

std::size_t closure_size(Lemma &lemma, const PathContext &context)
{
    if (lemma.deps_score)
        return *lemma.deps_score;
    std::set<LemmaId> seen;
    std::vector<LemmaId> work;
    for (const auto &use : lemma.uses)
        if (use.origin.is_lemma())
            work.push_back(use.origin.id);
    while (!work.empty()) {
        const LemmaId id = work.back();
        work.pop_back();
        if (!seen.insert(id).second)
            continue;
        for (const auto &use : context.lemma(id).uses)
            if (use.origin.is_lemma())
                work.push_back(use.origin.id);
    }
    lemma.deps_score = seen.size();
    return seen.size();
}

DependencyList glob_proof_min(const VectorView &view, const PathContext &context, const DependencyList &deps,
                              const MinimizeOptions &options)
{
    const auto greedy = greedy_order(deps);
    std::vector<std::size_t> rank(deps.size());
    for (std::size_t pos = 0; pos < greedy.size(); ++pos)
        rank[greedy[pos]] = pos;
    std::vector<std::size_t> score(deps.size());
    for (std::size_t i = 0; i < deps.size(); ++i)
        score[i] = closure_size(context.lemma(deps[i].lemma), context);
    auto order = greedy;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (score[x] != score[y])
            return score[x] > score[y];
        return rank[x] < rank[y];
    });

    const Rational limit = budget(view, context);
    Rational spent = 0;
    std::vector<bool> removed(deps.size(), false);
    for (bool progress = true; progress;) {
        progress = false;
        for (const std::size_t i : order) {
            if (removed[i] || is_free(deps[i], context, options))
                continue;
            const Rational next = spent + abs(deps[i].contribution);
            if (!fits(next, limit, view.strict))
                continue; // reverted
            spent = next;
            removed[i] = true;
            progress = true;
        }
    }
    return collect_kept(deps, removed);
}

void relax_except(VectorView &view, const PathContext &context, const DependencyList &kept)
{
    std::vector<bool> keep(view.uses->size(), false);
    for (const auto &dep : kept)
        keep[dep.use_index] = true;
    bool changed = false;
    for (std::size_t j = 0; j < view.uses->size(); ++j) {
        auto &use = (*view.uses)[j];
        if (!use.origin.is_lemma() || keep[j])
            continue;
        use.origin = context.baseline(use.var, use.side, view.depth).origin;
        changed = true;
    }
    if (changed && view.lemma) {
        const Rational d = vector_value(view, context);
        view.lemma->ground_value = view.lemma->ground_side == Side::Upper ? d : Rational(-d);
    }
}

namespace {

DependencyList minimize(VectorView &view, const PathContext &context, Mode mode, const MinimizeOptions &options)
{
    auto deps = dependencies(view, context);
    if (mode == Mode::Deps)
        return deps;
    auto kept = mode == Mode::Greedy ? proof_min(view, context, deps, options)
                                     : glob_proof_min(view, context, deps, options);
    relax_except(view, context, kept);
    return kept;
}

} // namespace

void analyze_vector(VectorView view, PathContext &context, Mode mode, const MinimizeOptions &options)
{
    if (!prunes(mode))
        return;
    std::vector<LemmaId> work;
    auto mark = [&](const DependencyList &kept) {
        for (const auto &dep : kept) {
            Lemma &lemma = context.lemma(dep.lemma);
            lemma.include_in_proof = true;
            if (!lemma.was_analyzed)
                work.push_back(lemma.id);
        }
    };
    mark(minimize(view, context, mode, options));
    while (!work.empty()) {
        Lemma &lemma = context.lemma(work.back());
        work.pop_back();
        if (lemma.was_analyzed)
            continue;
        lemma.was_analyzed = true;
        auto lv = lemma_view(lemma, context);
        mark(minimize(lv, context, mode, options));
    }
}

void analyze_leaf(PathContext &context, Mode mode, const MinimizeOptions &options)
{
    ProofNode *node = context.path().back();
    if (!node->leaf)
        throw std::invalid_argument("path does not end at a leaf");
    analyze_vector(leaf_view(*node->leaf, context.path().size() - 1), context, mode, options);
}

void prune_proof(ProofTree &tree)
{
    for_each_node(tree.root, [](ProofNode &node) {
        std::erase_if(node.lemmas, [](const Lemma &lemma) { return !lemma.include_in_proof; });
    });
}

namespace {

void analyze_subtree(const TableauQuery &query, std::vector<ProofNode *> &path, Mode mode,
                     const MinimizeOptions &options)
{
    ProofNode *node = path.back();
    if (node->leaf) {
        PathContext context(query, path);
        analyze_leaf(context, mode, options);
    }
    for (auto &child : node->children) {
        path.push_back(&child);
        analyze_subtree(query, path, mode, options);
        path.pop_back();
    }
}

} // namespace

void minimize_offline(ProofTree &tree, Mode mode, const MinimizeOptions &options)
{
    if (!prunes(mode))
        return;
    for_each_node(tree.root, [](ProofNode &node) {
        for (auto &lemma : node.lemmas) {
            lemma.include_in_proof = false;
            lemma.was_analyzed = false;
            lemma.deps_score.reset();
        }
    });
    std::vector<ProofNode *> path{&tree.root};
    analyze_subtree(tree.query, path, mode, options);
    prune_proof(tree);
}

} // namespace nnproof::minimizer
