#include "nnproof/search.hpp"

#include "nnproof/deduction.hpp"
#include "nnproof/lp.hpp"

#include <chrono>
#include <stdexcept>

namespace nnproof {

std::string resource_name(Resource kind)
{
    switch (kind) {
    case Resource::Time: return "time";
    case Resource::Memory: return "memory";
    case Resource::Depth: return "depth";
    }
    return "time";
}

bool is_fixed(const BoundState &state, const ReluTriple &relu)
{
    const bool active = state.bound(relu.b, Side::Lower) >= 0 && state.bound(relu.a, Side::Upper) <= 0;
    const bool inactive = state.bound(relu.b, Side::Upper) <= 0 && state.bound(relu.f, Side::Upper) <= 0;
    return active || inactive;
}

ReluIndex pick_split(const TableauQuery &query, const BoundState &state)
{
    ReluIndex best = npos;
    Rational best_width;
    for (ReluIndex k = 0; k < query.relus.size(); ++k) {
        const auto &relu = query.relus[k];
        if (is_fixed(state, relu))
            continue;
        const Rational width = state.bound(relu.b, Side::Upper) - state.bound(relu.b, Side::Lower);
        if (best == npos || width > best_width) {
            best = k;
            best_width = width;
        }
    }
    return best;
}

SplitLabel apply_split(const TableauQuery &query, BoundState &state, ReluIndex relu, Phase phase, NodeId node)
{
    SplitLabel label;
    label.is_root = false;
    label.relu = relu;
    label.phase = phase;
    label.bounds = split_bounds(query.relus.at(relu), phase);
    for (const auto &t : label.bounds)
        state.tighten(t.var, t.side, t.value, Origin::split(node));
    return label;
}

namespace {

struct Abort {
    Resource kind;
};

bool relu_consistent(const RationalVector &x, const ReluTriple &relu)
{
    const Rational &b = x[relu.b];
    return x[relu.f] == (b > 0 ? b : Rational(0));
}

std::size_t lemma_footprint(const Lemma &lemma)
{
    return sizeof(Lemma) + lemma.uses.size() * sizeof(BoundUse) + lemma.proof.size() * 48;
}

class Search {
  public:
    Search(const TableauQuery &query, const VerifyConfig &config)
        : query_(query), config_(config), state_(query), start_(std::chrono::steady_clock::now())
    {
    }

    Verdict run()
    {
        Verdict verdict;
        ProofTree tree;
        tree.query = query_;
        tree.query.lower = query_.input_lower;
        tree.query.upper = query_.input_upper;
        tree.root.id = next_node_++;
        try {
            if (explore(tree.root, 0))
                verdict.outcome = Unsat{std::move(tree)};
            else
                verdict.outcome = Sat{std::move(witness_)};
        } catch (const Abort &abort) {
            verdict.outcome = ResourceOut{abort.kind};
        }
        verdict.stats = stats_;
        return verdict;
    }

  private:
    void check_limits(std::size_t depth) const
    {
        if (depth > config_.max_depth)
            throw Abort{Resource::Depth};
        if (config_.timeout_seconds > 0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed.count() > config_.timeout_seconds)
                throw Abort{Resource::Time};
        }
        if (config_.memory_cap_bytes > 0 && live_bytes_ > config_.memory_cap_bytes)
            throw Abort{Resource::Memory};
    }

    Leaf empty_box_leaf(VarIndex var) const
    {
        Leaf leaf;
        leaf.kind = Leaf::Kind::EmptyBox;
        leaf.uses = {{var, 1, Side::Upper, state_.origin(var, Side::Upper)},
                     {var, -1, Side::Lower, state_.origin(var, Side::Lower)}};
        return leaf;
    }

    Leaf farkas_leaf(const RationalVector &certificate) const
    {
        Leaf leaf;
        leaf.kind = Leaf::Kind::Farkas;
        leaf.certificate = to_sparse(certificate);
        const auto c = query_.combine(certificate);
        for (VarIndex j = 0; j < c.size(); ++j) {
            if (c[j] == 0)
                continue;
            const Side side = c[j] > 0 ? Side::Upper : Side::Lower;
            leaf.uses.push_back({j, c[j], side, state_.origin(j, side)});
        }
        return leaf;
    }

    void close_leaf(ProofNode &node, Leaf leaf)
    {
        node.leaf = std::move(leaf);
        if (config_.mode == minimizer::Mode::None)
            return;
        minimizer::PathContext context(query_, path_);
        minimizer::analyze_leaf(context, config_.mode);
    }

    /// Explores the subtree at `node`, whose split bounds are already
    /// applied. Returns true iff it is UNSAT.
    bool explore(ProofNode &node, std::size_t depth)
    {
        check_limits(depth);
        ++stats_.nodes;
        path_.push_back(&node);
        const bool unsat = explore_here(node, depth);
        if (unsat && minimizer::prunes(config_.mode)) {
            const auto before = node.lemmas.size();
            std::erase_if(node.lemmas, [&](const Lemma &lemma) {
                if (lemma.include_in_proof)
                    return false;
                live_bytes_ -= lemma_footprint(lemma);
                return true;
            });
            stats_.lemmas_deleted += before - node.lemmas.size();
        }
        path_.pop_back();
        return unsat;
    }

    bool explore_here(ProofNode &node, std::size_t depth)
    {
        if (const auto empty = state_.first_empty()) {
            close_leaf(node, empty_box_leaf(*empty));
            return true;
        }

        deduction::Config deduction_config;
        deduction_config.passes = config_.tightening_passes;
        auto deduced = deduction::tighten_bounds(query_, state_, node.id, next_lemma_, deduction_config);
        stats_.lemmas_learned += deduced.lemmas.size();
        for (const auto &lemma : deduced.lemmas)
            live_bytes_ += lemma_footprint(lemma);
        node.lemmas = std::move(deduced.lemmas);
        if (deduced.conflict) {
            close_leaf(node, empty_box_leaf(*deduced.conflict));
            return true;
        }

        ++stats_.lp_calls;
        lp::SolverStats lp_stats;
        auto outcome = lp::solve(query_, state_.lower(), state_.upper(), &lp_stats);
        stats_.pivots += lp_stats.pivots;
        if (const auto *infeasible = std::get_if<lp::Infeasible>(&outcome)) {
            close_leaf(node, farkas_leaf(infeasible->certificate));
            return true;
        }

        auto &assignment = std::get<lp::Feasible>(outcome).assignment;
        bool consistent = true;
        for (const auto &relu : query_.relus)
            consistent = consistent && relu_consistent(assignment, relu);
        if (consistent) {
            witness_ = std::move(assignment);
            return false;
        }

        const ReluIndex relu = pick_split(query_, state_);
        if (relu == npos)
            throw std::logic_error("feasible LP with every ReLU fixed yet inconsistent");
        node.children.reserve(2);
        for (const Phase phase : {Phase::Inactive, Phase::Active}) {
            node.children.emplace_back();
            ProofNode &child = node.children.back();
            child.id = next_node_++;
            const auto mark = state_.mark();
            child.split = apply_split(query_, state_, relu, phase, child.id);
            const bool child_unsat = explore(child, depth + 1);
            state_.backtrack(mark);
            if (!child_unsat)
                return false;
        }
        return true;
    }

    const TableauQuery &query_;
    const VerifyConfig &config_;
    BoundState state_;
    std::chrono::steady_clock::time_point start_;
    std::vector<ProofNode *> path_;
    NodeId next_node_ = 0;
    LemmaId next_lemma_ = 0;
    std::size_t live_bytes_ = 0;
    SearchStats stats_;
    RationalVector witness_;
};

} // namespace

Verdict verify(const TableauQuery &query, const VerifyConfig &config)
{
    return Search(query, config).run();
}

Verdict verify(const Network &network, const Property &property, const VerifyConfig &config)
{
    const auto query = encode_query(network, property);
    auto verdict = verify(query, config);
    if (const auto *sat = std::get_if<Sat>(&verdict.outcome)) {
        RationalVector input;
        for (const VarIndex v : query.inputs)
            input.push_back(sat->witness[v]);
        const auto output = evaluate_network(network, input);
        for (std::size_t i = 0; i < output.size(); ++i)
            if (output[i] != sat->witness[query.outputs[i]])
                throw std::logic_error("SAT witness disagrees with the network semantics");
        if (!satisfies_property(property, input, output))
            throw std::logic_error("SAT witness violates the property");
    }
    return verdict;
}

} // namespace nnproof
