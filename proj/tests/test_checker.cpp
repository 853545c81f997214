#include "toy_fixture.hpp"

#include "nnproof/checker.hpp"

#include <gtest/gtest.h>

using namespace nnproof;
using namespace nnproof::testing;
using V = ToyVars;

namespace {

RationalVector toy_w()
{
    RationalVector w(7, 0);
    w[2] = -1;
    w[3] = -2;
    return w;
}

bool mentions(const checker::Reasons &reasons, const std::string &needle)
{
    for (const auto &r : reasons)
        if (r.find(needle) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST(Checker, DeltaOfTheWorkedLeaf)
{
    const auto q = toy_query();
    auto upper = q.upper;
    upper[V::b3] = 0; // learned by the lemma
    EXPECT_EQ(checker::evaluate_delta(q, toy_w(), q.lower, upper), Rational(-2));
    EXPECT_EQ(checker::evaluate_delta(q, toy_w(), q.lower, q.upper), Rational(-1));
    EXPECT_EQ(checker::evaluate_delta(q, RationalVector(7, 0), q.lower, q.upper), Rational(0));
}

TEST(Checker, LeafPassesWithLemmaAndWithBaseline)
{
    const auto tree = toy_proof();
    checker::Path path(tree.query);
    path.push(tree.root);
    EXPECT_TRUE(checker::check_leaf(path, toy_leaf()).empty());
    auto relaxed = toy_leaf();
    relaxed.uses[2].origin = Origin::input();
    EXPECT_TRUE(checker::check_leaf(path, relaxed).empty());
    Leaf zero;
    zero.kind = Leaf::Kind::Farkas;
    EXPECT_TRUE(mentions(checker::check_leaf(path, zero), "not negative"));
}

TEST(Checker, WorkedLemmasPass)
{
    const auto tree = toy_proof();
    checker::Path path(tree.query);
    path.push(tree.root);
    EXPECT_TRUE(checker::check_lemma(path, toy_lemma_f2()).empty());
    EXPECT_TRUE(checker::check_lemma(path, toy_lemma_b3()).empty());
}

TEST(Checker, OverclaimedGroundBoundFails)
{
    const auto tree = toy_proof();
    checker::Path path(tree.query);
    path.push(tree.root);
    auto lemma = toy_lemma_b3();
    lemma.ground_value = -1;
    EXPECT_TRUE(mentions(checker::check_lemma(path, lemma), "differs from derived -1/2"));
}

TEST(Checker, GroundVariableMustOccur)
{
    const auto tree = toy_proof();
    checker::Path path(tree.query);
    path.push(tree.root);
    auto lemma = toy_lemma_b3();
    lemma.proof = {{0, Rational(1)}};
    EXPECT_TRUE(mentions(checker::check_lemma(path, lemma), "ground variable not derivable"));
}

TEST(Checker, RulePremiseMustHold)
{
    const auto tree = toy_proof();
    checker::Path path(tree.query);
    path.push(tree.root);
    auto lemma = toy_lemma_b3();
    lemma.rule = PhaseRule::R1; // R1 grounds on b, not f
    EXPECT_TRUE(mentions(checker::check_lemma(path, lemma), "rule R1"));
    auto looser = toy_lemma_b3();
    looser.learned = Rational(1, 3); // looser than the conclusion is fine
    EXPECT_TRUE(checker::check_lemma(path, looser).empty());
    auto tighter = toy_lemma_b3();
    tighter.learned = Rational(-1, 3);
    EXPECT_FALSE(checker::check_lemma(path, tighter).empty());
}

TEST(Checker, AcceptsWorkedProofAndItsMinimizedForm)
{
    const auto q = toy_query();
    auto tree = toy_proof();
    EXPECT_TRUE(checker::check_proof(q, tree).accepted());
    tree.root.lemmas.clear();
    tree.root.leaf->uses[2].origin = Origin::input();
    EXPECT_TRUE(checker::check_proof(q, tree).accepted());
}

TEST(Checker, DanglingLemmaReference)
{
    auto tree = toy_proof();
    tree.root.lemmas.pop_back();
    const auto result = checker::check_proof(tree);
    EXPECT_FALSE(result.accepted());
    EXPECT_TRUE(mentions(result.reasons, "dangling lemma reference"));
}

TEST(Checker, ChronologyOfLemmaCitations)
{
    auto tree = toy_proof();
    // Lemma 0 citing lemma 1 would reference a newer lemma.
    tree.root.lemmas[0].uses[0].origin = Origin::lemma(1);
    EXPECT_FALSE(checker::check_proof(tree).accepted());
}

TEST(Checker, StructuralChecks)
{
    const auto leaf_child = [](NodeId id, ReluIndex relu, Phase phase, const TableauQuery &q) {
        ProofNode node;
        node.id = id;
        node.split = {false, relu, phase, split_bounds(q.relus[relu], phase)};
        Leaf leaf;
        leaf.kind = Leaf::Kind::Farkas;
        node.leaf = leaf;
        return node;
    };
    auto tree = toy_proof();
    tree.root.leaf.reset();
    tree.root.children.push_back(leaf_child(1, 1, Phase::Inactive, tree.query));
    tree.root.children.push_back(leaf_child(2, 1, Phase::Active, tree.query));
    // Reuse the worked leaf in both children: it is valid anywhere under the root.
    tree.root.children[0].leaf = toy_leaf();
    tree.root.children[1].leaf = toy_leaf();
    EXPECT_TRUE(checker::check_proof(tree).accepted());

    auto wrong_bounds = tree;
    wrong_bounds.root.children[1].split.bounds[0].value = Rational(1, 2);
    EXPECT_TRUE(mentions(checker::check_proof(wrong_bounds).reasons, "split bounds"));

    auto wrong_order = tree;
    std::swap(wrong_order.root.children[0], wrong_order.root.children[1]);
    EXPECT_FALSE(checker::check_proof(wrong_order).accepted());

    auto one_child = tree;
    one_child.root.children.pop_back();
    EXPECT_FALSE(checker::check_proof(one_child).accepted());

    auto missing_leaf = tree;
    missing_leaf.root.children[0].leaf.reset();
    EXPECT_TRUE(mentions(checker::check_proof(missing_leaf).reasons, "leaf without certificate"));
}

TEST(Checker, SplitOriginMustBeOnThePath)
{
    auto tree = toy_proof();
    tree.root.leaf->uses[2].origin = Origin::split(5);
    EXPECT_TRUE(mentions(checker::check_proof(tree).reasons, "split origin"));
}

TEST(Checker, EmptyBoxLeaf)
{
    // One ReLU with b in [1, 2]; its inactive split empties the box of b.
    TableauQuery q;
    q.tags = {VarTag::Pre, VarTag::Post, VarTag::Aux};
    q.relus = {{0, 1, 2}};
    q.lower = q.input_lower = {Rational(1), Rational(0), Rational(0)};
    q.upper = q.input_upper = {Rational(2), Rational(2), Rational(1)};
    q.rows = {{{{0, Rational(-1)}, {1, Rational(1)}, {2, Rational(-1)}}}};
    ProofNode root, inactive;
    inactive.id = 1;
    inactive.split = {false, 0, Phase::Inactive, split_bounds(q.relus[0], Phase::Inactive)};
    checker::Path path(q);
    path.push(root);
    path.push(inactive);

    Leaf leaf;
    leaf.kind = Leaf::Kind::EmptyBox;
    leaf.uses = {{0, 1, Side::Upper, Origin::split(1)}, {0, -1, Side::Lower, Origin::input()}};
    EXPECT_TRUE(checker::check_leaf(path, leaf).empty());

    auto not_empty = leaf;
    not_empty.uses[0].origin = Origin::input();
    EXPECT_TRUE(mentions(checker::check_leaf(path, not_empty), "not empty"));

    auto malformed = leaf;
    malformed.uses[0].coeff = 2;
    EXPECT_TRUE(mentions(checker::check_leaf(path, malformed), "must use u and l"));
}
