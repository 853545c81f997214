#include "toy_fixture.hpp"

#include "harness.hpp"
#include "nnproof/checker.hpp"
#include "nnproof/query.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nnproof;
using namespace nnproof::testing;

TEST(Rational, ParsesAndFormatsCanonically)
{
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational("-4"), Rational(-4));
    EXPECT_EQ(parse_rational("+7/1"), Rational(7));
    EXPECT_EQ(format_rational(ratio(-6, 4)), "-3/2");
    EXPECT_EQ(format_rational(Rational(5)), "5");
    for (const char *bad : {"", "1/0", "1/-2", "a", "1/", "/2", "1.5", "--1"})
        EXPECT_THROW(parse_rational(bad), ParseError) << bad;
}

TEST(Network, ToyForwardValues)
{
    // x = <2, 1>: v1 = 1, v2 = ReLU(-2) = 0, v3 = 1, y = 0 + 2 * 1.
    const auto y = evaluate_network(toy_network(), {Rational(2), Rational(1)});
    ASSERT_EQ(y.size(), 1u);
    EXPECT_EQ(y[0], Rational(2));
    EXPECT_TRUE(satisfies_property(toy_sat_property(), {Rational(2), Rational(1)}, y));
    EXPECT_FALSE(satisfies_property(toy_unsat_property(), {Rational(2), Rational(1)}, y));
}

TEST(Network, JsonRoundTrip)
{
    const auto net = toy_network();
    EXPECT_EQ(network_from_json(network_to_json(net)), net);
    const auto prop = toy_unsat_property();
    EXPECT_EQ(property_from_json(property_to_json(prop)), prop);
    EXPECT_THROW(network_from_json("{\"format\":\"other\"}"), ModelError);
    EXPECT_THROW(network_from_json("not json"), ParseError);
}

namespace {

double eval_double(const Network &net, std::vector<double> x)
{
    for (std::size_t l = 1; l < net.layers.size(); ++l) {
        const auto &layer = net.layers[l];
        std::vector<double> next(layer.size);
        for (std::size_t i = 0; i < layer.size; ++i) {
            double s = layer.biases[i].get_d();
            for (std::size_t j = 0; j < x.size(); ++j)
                s += layer.weights[i][j].get_d() * x[j];
            next[i] = layer.activation == Activation::ReLU ? std::max(0.0, s) : s;
        }
        x = next;
    }
    return x.front();
}

} // namespace

TEST(Network, ExactEvaluationAgreesWithFloatingPointInterpreter)
{
    harness::GenConfig config;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto q = harness::generate_query(config, seed, "g");
        const RationalVector x = {q.property.input_bounds[0].lower, q.property.input_bounds[1].upper};
        const double exact = evaluate_network(q.network, x).front().get_d();
        EXPECT_NEAR(exact, eval_double(q.network, {x[0].get_d(), x[1].get_d()}), 1e-9);
    }
}

TEST(Query, ToyEncodingOrderAndBounds)
{
    using V = ToyVars;
    const auto q = toy_query();
    ASSERT_EQ(q.var_count(), 12u);
    ASSERT_EQ(q.row_count(), 7u);
    EXPECT_EQ(q.relus[0], (ReluTriple{V::b1, V::f1, V::a1}));
    EXPECT_EQ(q.relus[2], (ReluTriple{V::b3, V::f3, V::a3}));
    EXPECT_EQ(q.lower[V::y], Rational(-1));
    EXPECT_EQ(q.upper[V::y], Rational(-1));
    EXPECT_EQ(q.upper[V::a1], Rational(2));
    EXPECT_EQ(q.lower[V::b2], Rational(-1));
    EXPECT_EQ(q.upper[V::f3], Rational(1));
}

TEST(Query, ToyCombinationMatchesWorkedExample)
{
    using V = ToyVars;
    const auto q = toy_query();
    RationalVector w(7, 0);
    w[2] = -1;
    w[3] = -2;
    const auto c = q.combine(w);
    RationalVector expected(12, 0);
    expected[V::f1] = -1;
    expected[V::b3] = 1;
    expected[V::f2] = -2;
    expected[V::f3] = -4;
    expected[V::y] = 2;
    EXPECT_EQ(c, expected);
    EXPECT_EQ(checker::combination(q, w), expected);
}

TEST(Query, ForwardPassSatisfiesEveryRow)
{
    // Encoding oracle: the exact forward pass, read as an assignment, must
    // satisfy A x = 0 and f = max(b, 0).
    harness::GenConfig config;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto q = harness::generate_query(config, seed, "g");
        q.property.output_constraints.clear();
        const auto query = encode_query(q.network, q.property);
        RationalVector x(query.var_count(), 0);
        RationalVector input = {q.property.input_bounds[0].lower, q.property.input_bounds[1].upper};
        for (std::size_t i = 0; i < input.size(); ++i)
            x[query.inputs[i]] = input[i];
        RationalVector values = input;
        std::size_t relu = 0;
        for (std::size_t l = 1; l < q.network.layers.size(); ++l) {
            const auto &layer = q.network.layers[l];
            RationalVector next(layer.size);
            for (std::size_t i = 0; i < layer.size; ++i) {
                Rational s = layer.biases[i];
                for (std::size_t j = 0; j < values.size(); ++j)
                    s += layer.weights[i][j] * values[j];
                if (layer.activation == Activation::ReLU) {
                    const auto &r = query.relus[relu++];
                    x[r.b] = s;
                    next[i] = s > 0 ? s : Rational(0);
                    x[r.f] = next[i];
                    x[r.a] = next[i] - s;
                } else {
                    next[i] = s;
                }
            }
            values = next;
        }
        x[query.outputs[0]] = values[0];
        for (VarIndex v = 0; v < query.var_count(); ++v)
            if (query.tags[v] == VarTag::Constant)
                x[v] = 1;
        for (const auto &row : query.rows) {
            Rational sum = 0;
            for (const auto &[var, coeff] : row.entries)
                sum += coeff * x[var];
            EXPECT_EQ(sum, 0) << "seed " << seed;
        }
        for (VarIndex v = 0; v < query.var_count(); ++v) {
            EXPECT_LE(query.lower[v], x[v]) << query.var_name(v);
            EXPECT_GE(query.upper[v], x[v]) << query.var_name(v);
        }
    }
}

TEST(Query, RejectsInconsistentDimensions)
{
    auto prop = toy_unsat_property();
    prop.input_bounds.pop_back();
    EXPECT_THROW(encode_query(toy_network(), prop), ModelError);
}
