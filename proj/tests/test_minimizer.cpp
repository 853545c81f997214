#include "toy_fixture.hpp"
#include "vector_samples.hpp"

#include "harness.hpp"
#include "nnproof/checker.hpp"
#include "nnproof/minimizer.hpp"
#include "nnproof/search.hpp"

#include <gtest/gtest.h>

#include <memory>
#include <random>
#include <set>

using namespace nnproof;
using namespace nnproof::testing;
using minimizer::Mode;
using V = ToyVars;

namespace {

/// A rowless query whose root leaf has one lemma use per entry of
/// `contributions` plus one input use that fixes the total to `delta`.
/// Lemmas [0, background) are cited only through `cites`.
struct Synthetic {
    TableauQuery query;
    ProofNode root;
    std::unique_ptr<minimizer::PathContext> context;

    Synthetic(const std::vector<Rational> &contributions, const Rational &delta, std::size_t background = 0,
              const std::vector<std::vector<LemmaId>> &cites = {})
    {
        const std::size_t n = contributions.size();
        const std::size_t vars = background + n + 1;
        query.tags.assign(vars, VarTag::Input);
        query.input_lower.assign(vars, Rational(-10));
        query.input_upper.assign(vars, Rational(1));
        for (LemmaId id = 0; id < background; ++id)
            root.lemmas.push_back(stub(id, id, Rational(0)));
        Leaf leaf;
        Rational total = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const LemmaId id = background + j;
            // Each use has coefficient 1 and baseline 1, so its
            // contribution is learned - 1.
            auto lemma = stub(id, id, 1 + contributions[j]);
            if (j < cites.size())
                for (const LemmaId cited : cites[j])
                    lemma.uses.push_back({cited, Rational(1), Side::Upper, Origin::lemma(cited)});
            root.lemmas.push_back(lemma);
            leaf.uses.push_back({id, Rational(1), Side::Upper, Origin::lemma(id)});
            total += lemma.learned;
        }
        const VarIndex filler = vars - 1;
        query.input_upper[filler] = delta - total;
        leaf.uses.push_back({filler, Rational(1), Side::Upper, Origin::input()});
        root.leaf = leaf;
        query.lower = query.input_lower;
        query.upper = query.input_upper;
        context = std::make_unique<minimizer::PathContext>(query, std::vector<ProofNode *>{&root});
    }

    static Lemma stub(LemmaId id, VarIndex var, const Rational &learned)
    {
        Lemma lemma;
        lemma.id = id;
        lemma.var = var;
        lemma.side = Side::Upper;
        lemma.learned = learned;
        return lemma;
    }

    minimizer::VectorView view() { return minimizer::leaf_view(*root.leaf, 0); }

    std::set<LemmaId> kept(const minimizer::DependencyList &list) const
    {
        std::set<LemmaId> ids;
        for (const auto &dep : list)
            ids.insert(dep.lemma);
        return ids;
    }
};

minimizer::PathContext toy_context(ProofTree &tree) { return minimizer::PathContext(tree.query, {&tree.root}); }

ProofTree search_proof(const harness::GeneratedQuery &q, Mode mode)
{
    VerifyConfig config;
    config.mode = mode;
    auto verdict = verify(q.network, q.property, config);
    return std::move(std::get<Unsat>(verdict.outcome).proof);
}

std::vector<harness::GeneratedQuery> unsat_suite(std::size_t want)
{
    std::vector<harness::GeneratedQuery> out;
    harness::GenConfig config;
    config.neurons = 6;
    config.layers = 1;
    for (std::uint64_t seed = 1; out.size() < want && seed < 500; ++seed) {
        auto q = harness::generate_query(config, seed, "m");
        if (verify(q.network, q.property, {}).is_unsat())
            out.push_back(std::move(q));
    }
    return out;
}

} // namespace

TEST(Minimizer, ModeNames)
{
    for (const Mode m : {Mode::None, Mode::MinBaseline, Mode::Deps, Mode::Greedy, Mode::Global})
        EXPECT_EQ(minimizer::mode_from_name(minimizer::mode_name(m)), m);
    EXPECT_THROW(minimizer::mode_from_name("fastest"), std::invalid_argument);
    EXPECT_FALSE(minimizer::prunes(Mode::None));
    EXPECT_FALSE(minimizer::prunes(Mode::MinBaseline));
    EXPECT_TRUE(minimizer::prunes(Mode::Deps));
}

TEST(Minimizer, WorkedContributionIsMinusOne)
{
    auto tree = toy_proof();
    const auto context = toy_context(tree);
    const auto view = minimizer::leaf_view(*tree.root.leaf, 0);
    EXPECT_EQ(minimizer::contribution(view, 2, context), Rational(-1));
    EXPECT_EQ(minimizer::contribution(view, 0, context), Rational(0)); // input bound equals its baseline
    EXPECT_EQ(minimizer::vector_value(view, context), Rational(-2));
    EXPECT_EQ(minimizer::budget(view, context), Rational(2));
}

TEST(Minimizer, WorkedLeafDependsOnOneLemma)
{
    auto tree = toy_proof();
    auto context = toy_context(tree);
    const auto view = minimizer::leaf_view(*tree.root.leaf, 0);
    const auto deps = minimizer::dependencies(view, context);
    ASSERT_EQ(deps.size(), 1u);
    EXPECT_EQ(deps[0].lemma, 1u);
    EXPECT_EQ(minimizer::proof_deps(view, context), (std::vector<LemmaId>{1}));
    EXPECT_TRUE(tree.root.lemmas[1].include_in_proof);
    EXPECT_FALSE(tree.root.lemmas[0].include_in_proof);
}

TEST(Minimizer, WorkedLeafGreedyRemovesTheLemma)
{
    auto tree = toy_proof();
    const auto context = toy_context(tree);
    auto view = minimizer::leaf_view(*tree.root.leaf, 0);
    const auto deps = minimizer::dependencies(view, context);
    const auto kept = minimizer::proof_min(view, context, deps);
    EXPECT_TRUE(kept.empty());
    minimizer::relax_except(view, context, kept);
    EXPECT_EQ(tree.root.leaf->uses[2].origin, Origin::input());
    EXPECT_EQ(minimizer::vector_value(view, context), Rational(-1));
}

TEST(Minimizer, ProofMinStopsAtBudget)
{
    // Delta = -1 and contributions {-1/2, -3/5}: removing both spends 11/10.
    Synthetic s({Rational(-1, 2), Rational(-3, 5)}, Rational(-1));
    const auto view = s.view();
    EXPECT_EQ(minimizer::vector_value(view, *s.context), Rational(-1));
    const auto deps = minimizer::dependencies(view, *s.context);
    EXPECT_EQ(deps[1].contribution, Rational(-3, 5));
    EXPECT_EQ(s.kept(minimizer::proof_min(view, *s.context, deps)), (std::set<LemmaId>{1}));
}

TEST(Minimizer, ProofMinSpendsStrictlyLessThanBudget)
{
    // Spending exactly |Delta| would leave Delta = 0, which certifies nothing.
    Synthetic s({Rational(-1, 2), Rational(-1, 2)}, Rational(-1));
    const auto view = s.view();
    const auto deps = minimizer::dependencies(view, *s.context);
    EXPECT_EQ(minimizer::proof_min(view, *s.context, deps).size(), 1u);
}

TEST(Minimizer, TiesBreakByLemmaId)
{
    Synthetic s({Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)}, Rational(-6, 5));
    const auto view = s.view();
    const auto deps = minimizer::dependencies(view, *s.context);
    EXPECT_EQ(s.kept(minimizer::proof_min(view, *s.context, deps)), (std::set<LemmaId>{2}));
}

TEST(Minimizer, IncludedLemmasAreFreeWhenSkipping)
{
    Synthetic s({Rational(-1, 2), Rational(-3, 5)}, Rational(-1));
    s.root.lemmas[0].include_in_proof = true;
    const auto view = s.view();
    const auto deps = minimizer::dependencies(view, *s.context);
    // Lemma 0 stays without spending budget, so lemma 1 (3/5 < 1) goes.
    EXPECT_EQ(s.kept(minimizer::proof_min(view, *s.context, deps)), (std::set<LemmaId>{0}));
    EXPECT_EQ(s.kept(minimizer::proof_min(view, *s.context, deps, {.skip_included = false})),
              (std::set<LemmaId>{1}));
}

TEST(Minimizer, GlobalPrefersLargeClosures)
{
    // Lemmas 0..2 are background; A = 3 cites all three, B = 4 and C = 5 cite nothing.
    Synthetic s({Rational(-9, 10), Rational(-2, 5), Rational(-2, 5)}, Rational(-1), 3, {{0, 1, 2}});
    const auto view = s.view();
    const auto deps = minimizer::dependencies(view, *s.context);
    EXPECT_EQ(minimizer::closure_size(s.root.lemmas[3], *s.context), 3u);
    EXPECT_EQ(s.root.lemmas[3].deps_score, std::optional<std::size_t>(3));
    EXPECT_EQ(s.kept(minimizer::glob_proof_min(view, *s.context, deps)), (std::set<LemmaId>{4, 5}));
    EXPECT_EQ(s.kept(minimizer::proof_min(view, *s.context, deps)), (std::set<LemmaId>{3}));
}

TEST(Minimizer, GlobalWithFlatClosuresMatchesGreedy)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> conts;
        for (std::size_t j = 0; j < 1 + rng() % 6; ++j)
            conts.push_back(-ratio(static_cast<long>(1 + rng() % 6), 4));
        Synthetic s(conts, -ratio(static_cast<long>(1 + rng() % 12), 4));
        const auto view = s.view();
        const auto deps = minimizer::dependencies(view, *s.context);
        const auto greedy = s.kept(minimizer::proof_min(view, *s.context, deps));
        const auto global = s.kept(minimizer::glob_proof_min(view, *s.context, deps));
        // Greedy stops at the first misfit; global skips it and keeps
        // scanning, so it removes a superset of what greedy removes.
        EXPECT_TRUE(std::includes(greedy.begin(), greedy.end(), global.begin(), global.end()));
        EXPECT_LE(global.size(), greedy.size());
    }
}

TEST(Minimizer, GlobalResultIsSaturated)
{
    // After glob_proof_min no single kept entry fits the remaining budget,
    // checked directly on the vector value with everything relaxed.
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Rational> conts;
        const std::size_t n = 1 + rng() % 7;
        for (std::size_t j = 0; j < n; ++j)
            conts.push_back(-ratio(static_cast<long>(1 + rng() % 8), 4));
        Synthetic s(conts, -ratio(static_cast<long>(1 + rng() % 16), 4));
        auto view = s.view();
        const auto deps = minimizer::dependencies(view, *s.context);
        const auto kept = minimizer::glob_proof_min(view, *s.context, deps);
        const auto saved = s.root.leaf->uses;
        minimizer::relax_except(view, *s.context, kept);
        ASSERT_LT(minimizer::vector_value(view, *s.context), 0);
        for (std::size_t k = 0; k < kept.size(); ++k) {
            auto fewer = kept;
            fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
            minimizer::relax_except(view, *s.context, fewer);
            EXPECT_GE(minimizer::vector_value(view, *s.context), 0);
            s.root.leaf->uses = saved;
            minimizer::relax_except(view, *s.context, kept);
        }
        s.root.leaf->uses = saved;
    }
}

TEST(Minimizer, ClosureSizeMatchesReachability)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 9;
        // Random DAG on lemma ids: i may cite any j < i.
        std::vector<std::vector<LemmaId>> cites(n);
        for (std::size_t i = 0; i < n; ++i)
            for (LemmaId j = 0; j < i; ++j)
                if (rng() % 3 == 0)
                    cites[i].push_back(j);
        Synthetic s(std::vector<Rational>(n, Rational(-1, 8)), Rational(-1), 0, cites);
        // Reachability oracle: transitive closure of the adjacency matrix.
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (const LemmaId j : cites[i])
                reach[i][j] = true;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[i][k] && reach[k][j])
                        reach[i][j] = true;
        for (std::size_t i = 0; i < n; ++i) {
            const auto expected = static_cast<std::size_t>(std::count(reach[i].begin(), reach[i].end(), true));
            EXPECT_EQ(minimizer::closure_size(s.root.lemmas[i], *s.context), expected);
        }
    }
}

TEST(Minimizer, ProofDepsFollowsAChain)
{
    // Lemma i cites lemma i - 1; the leaf uses only lemma 4.
    Synthetic s(std::vector<Rational>(5, Rational(-1, 8)), Rational(-1), 0, {{}, {0}, {1}, {2}, {3}});
    s.root.leaf->uses.erase(s.root.leaf->uses.begin(), s.root.leaf->uses.begin() + 4);
    const auto view = s.view();
    EXPECT_EQ(minimizer::proof_deps(view, *s.context), (std::vector<LemmaId>{0, 1, 2, 3, 4}));
    for (const auto &lemma : s.root.lemmas)
        EXPECT_TRUE(lemma.include_in_proof && lemma.was_analyzed);
}

TEST(Minimizer, OfflineToyStates)
{
    auto deps = toy_proof();
    minimizer::minimize_offline(deps, Mode::Deps);
    ASSERT_EQ(deps.root.lemmas.size(), 1u); // only u(b3) is used
    EXPECT_EQ(deps.root.lemmas[0].var, V::b3);
    EXPECT_EQ(proof_stats(deps).proof_size, 2u);
    EXPECT_TRUE(checker::check_proof(toy_query(), deps).accepted());

    for (const Mode m : {Mode::Greedy, Mode::Global}) {
        auto tree = toy_proof();
        minimizer::minimize_offline(tree, m);
        EXPECT_TRUE(tree.root.lemmas.empty());
        EXPECT_EQ(proof_stats(tree).proof_size, 1u);
        EXPECT_TRUE(checker::check_proof(toy_query(), tree).accepted());
    }

    auto none = toy_proof();
    minimizer::minimize_offline(none, Mode::None);
    EXPECT_TRUE(same_proof(none, toy_proof()));
}

TEST(Minimizer, OfflineMinimizationIsIdempotentAndSound)
{
    for (const auto &q : unsat_suite(15)) {
        const auto original = search_proof(q, Mode::None);
        for (const Mode m : {Mode::Deps, Mode::Greedy, Mode::Global}) {
            auto once = original;
            minimizer::minimize_offline(once, m);
            EXPECT_TRUE(checker::check_proof(original.query, once).accepted()) << q.name;
            auto twice = once;
            minimizer::minimize_offline(twice, m);
            EXPECT_EQ(serialize_proof(twice), serialize_proof(once)) << q.name;
            EXPECT_LE(proof_stats(once).proof_size, proof_stats(original).proof_size);
        }
    }
}

TEST(Minimizer, ProofMinMatchesBruteForceOnSearchVectors)
{
    std::size_t compared = 0;
    for (const auto &q : unsat_suite(15)) {
        auto tree = search_proof(q, Mode::None);
        for_each_vector(tree, [&](const VectorSample &s) {
            ASSERT_EQ(checker::evaluate_delta(s.context->query(), s.w, s.lower, s.upper),
                      minimizer::vector_value(s.view, *s.context));
            if (s.deps.empty() || s.deps.size() > 12)
                return;
            const auto kept = minimizer::proof_min(s.view, *s.context, s.deps, {.skip_included = false});
            const auto brute = oracles::brute_force_min_deps(s.context->query(), s.w, s.lower, s.upper, s.entries,
                                                            s.view.threshold, s.view.strict);
            ASSERT_TRUE(brute.has_value());
            EXPECT_EQ(kept.size(), *brute) << q.name;
            ++compared;
        });
    }
    EXPECT_GT(compared, 0u);
}
