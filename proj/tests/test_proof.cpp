#include "toy_fixture.hpp"

#include "nnproof/proof.hpp"
#include "nnproof/search.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

using namespace nnproof;
using namespace nnproof::testing;

TEST(ProofModel, ToyStats)
{
    const auto stats = proof_stats(toy_proof());
    EXPECT_EQ(stats.proof_size, 3u);
    EXPECT_EQ(stats.lemma_count, 2u);
    EXPECT_EQ(stats.leaf_count, 1u);
    EXPECT_EQ(stats.depth, 0u);
    EXPECT_EQ(stats.serialized_bytes, serialize_proof(toy_proof()).size());
}

TEST(ProofModel, SplitBoundsPerPhase)
{
    const ReluTriple r{3, 4, 5};
    EXPECT_EQ(split_bounds(r, Phase::Active),
              (std::vector<Tightening>{{3, Side::Lower, 0}, {5, Side::Upper, 0}}));
    EXPECT_EQ(split_bounds(r, Phase::Inactive),
              (std::vector<Tightening>{{3, Side::Upper, 0}, {4, Side::Upper, 0}}));
}

TEST(ProofIo, ToyRoundTrip)
{
    const auto tree = toy_proof();
    const auto text = serialize_proof(tree);
    const auto back = deserialize_proof(text);
    EXPECT_TRUE(same_proof(tree, back));
    EXPECT_EQ(serialize_proof(back), text);
}

TEST(ProofIo, SearchProofsRoundTrip)
{
    for (const auto mode : {minimizer::Mode::None, minimizer::Mode::Greedy}) {
        VerifyConfig config;
        config.mode = mode;
        const auto verdict = verify(toy_network(), toy_unsat_property(), config);
        const auto &proof = std::get<Unsat>(verdict.outcome).proof;
        EXPECT_TRUE(same_proof(proof, deserialize_proof(serialize_proof(proof))));
    }
}

TEST(ProofIo, CommentsAndBlankLinesAreIgnored)
{
    auto text = serialize_proof(toy_proof());
    text.insert(text.find('\n') + 1, "# a comment\n\n");
    EXPECT_TRUE(same_proof(toy_proof(), deserialize_proof(text)));
}

namespace {

std::string parse_error(const std::string &text)
{
    try {
        deserialize_proof(text);
    } catch (const ParseError &e) {
        return e.what();
    }
    return "";
}

std::string replace_line(std::string text, const std::string &prefix, const std::string &line)
{
    const auto at = text.find("\n" + prefix) + 1;
    const auto end = text.find('\n', at);
    return text.replace(at, end - at, line);
}

} // namespace

TEST(ProofIo, DiagnosticsNameLineAndColumn)
{
    const auto text = serialize_proof(toy_proof());
    EXPECT_EQ(parse_error("nnproof-proof 2\n"), "line 1, column 15: unsupported proof format version");
    const auto bad_rational = replace_line(text, "var 0", "var 0 x 1/0 2");
    EXPECT_NE(parse_error(bad_rational).find("line 3, column 9"), std::string::npos) << parse_error(bad_rational);
    const auto bad_side = replace_line(text, "use 3", "use 3 -1 q input");
    EXPECT_NE(parse_error(bad_side).find("expected side"), std::string::npos);
    EXPECT_NE(parse_error(text.substr(0, text.size() - 4)).find("line"), std::string::npos);
    EXPECT_FALSE(parse_error("").empty());
}

TEST(ProofIo, RejectsStructuralGarbage)
{
    const auto text = serialize_proof(toy_proof());
    EXPECT_FALSE(parse_error(replace_line(text, "row 0", "row 0 2:-1 0:1 1:-1")).empty()); // unsorted
    EXPECT_FALSE(parse_error(replace_line(text, "vector 2", "vector 2:0 3:-2")).empty());  // zero entry
    EXPECT_FALSE(parse_error(replace_line(text, "use 8", "use 8 1 u lemma:x")).empty());   // bad origin
    EXPECT_FALSE(parse_error(text + "node 1 0 split 0 active 2:l:0 4:u:0\n").empty());     // after end
}

TEST(ProofIo, StoredWorkedProofMatchesFixture)
{
    std::ifstream in(data_path("toy/worked.proof"));
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_TRUE(same_proof(deserialize_proof(text), toy_proof()));
    EXPECT_EQ(text, serialize_proof(toy_proof()));
}
