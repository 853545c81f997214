#include "nnproof/network.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace nnproof {

using nlohmann::json;

std::size_t Network::relu_count() const
{
    std::size_t count = 0;
    for (const auto &layer : layers)
        if (layer.activation == Activation::ReLU)
            count += layer.size;
    return count;
}

void Network::validate() const
{
    if (layers.size() < 2)
        throw ModelError("network needs an input and an output layer");
    if (layers.front().size == 0)
        throw ModelError("input layer is empty");
    if (!layers.front().weights.empty() || !layers.front().biases.empty())
        throw ModelError("input layer must not carry weights");
    if (layers.back().activation != Activation::Identity)
        throw ModelError("output layer activation must be identity");
    for (std::size_t i = 1; i < layers.size(); ++i) {
        const auto &layer = layers[i];
        const auto previous = layers[i - 1].size;
        if (layer.size == 0)
            throw ModelError("layer " + std::to_string(i) + " is empty");
        if (layer.weights.size() != layer.size || layer.biases.size() != layer.size)
            throw ModelError("layer " + std::to_string(i) + ": weight/bias count does not match size");
        for (const auto &row : layer.weights)
            if (row.size() != previous)
                throw ModelError("layer " + std::to_string(i) + ": weight row has wrong width");
    }
}

void Property::validate() const
{
    for (std::size_t i = 0; i < input_bounds.size(); ++i)
        if (input_bounds[i].lower > input_bounds[i].upper)
            throw ModelError("input bound " + std::to_string(i) + " has lower > upper");
    if (hidden_bounds && hidden_bounds->lower > hidden_bounds->upper)
        throw ModelError("hidden bounds have lower > upper");
}

RationalVector evaluate_network(const Network &network, const RationalVector &input)
{
    if (network.layers.empty() || input.size() != network.input_size())
        throw ModelError("input length does not match the input layer");
    RationalVector values = input;
    for (std::size_t i = 1; i < network.layers.size(); ++i) {
        const auto &layer = network.layers[i];
        RationalVector next(layer.size);
        for (std::size_t j = 0; j < layer.size; ++j) {
            Rational sum = layer.biases[j];
            for (std::size_t k = 0; k < values.size(); ++k)
                sum += layer.weights[j][k] * values[k];
            if (layer.activation == Activation::ReLU && sum < 0)
                sum = 0;
            next[j] = sum;
        }
        values = std::move(next);
    }
    return values;
}

bool satisfies_property(const Property &property, const RationalVector &input,
                        const RationalVector &output)
{
    if (input.size() != property.input_bounds.size())
        return false;
    for (std::size_t i = 0; i < input.size(); ++i)
        if (input[i] < property.input_bounds[i].lower || input[i] > property.input_bounds[i].upper)
            return false;
    for (const auto &constraint : property.output_constraints) {
        if (constraint.coeffs.size() != output.size())
            return false;
        Rational lhs = 0;
        for (std::size_t j = 0; j < output.size(); ++j)
            lhs += constraint.coeffs[j] * output[j];
        if (lhs > constraint.rhs)
            return false;
    }
    return true;
}

namespace {

Rational rational_field(const json &node)
{
    if (node.is_string())
        return parse_rational(node.get<std::string>());
    if (node.is_number_integer())
        return Rational(std::to_string(node.get<long long>()));
    throw ModelError("expected a rational string, got " + node.dump());
}

RationalVector rational_array(const json &node)
{
    if (!node.is_array())
        throw ModelError("expected an array of rationals, got " + node.dump());
    RationalVector out;
    out.reserve(node.size());
    for (const auto &entry : node)
        out.push_back(rational_field(entry));
    return out;
}

json to_json_array(const RationalVector &values)
{
    json out = json::array();
    for (const auto &value : values)
        out.push_back(format_rational(value));
    return out;
}

json parse_json(const std::string &text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(e.what());
    }
}

Interval interval_field(const json &node)
{
    if (!node.is_array() || node.size() != 2)
        throw ModelError("expected [lower, upper], got " + node.dump());
    return {rational_field(node[0]), rational_field(node[1])};
}

} // namespace

Network network_from_json(const std::string &text)
{
    const json doc = parse_json(text);
    try {
        if (doc.value("format", "") != "nnproof-network/1")
            throw ModelError("missing or unknown network format tag");
        Network network;
        network.layers.push_back(Layer{doc.at("inputs").get<std::size_t>(), {}, {}, Activation::Identity});
        for (const auto &entry : doc.at("layers")) {
            Layer layer;
            const auto activation = entry.at("activation").get<std::string>();
            if (activation == "relu")
                layer.activation = Activation::ReLU;
            else if (activation == "identity")
                layer.activation = Activation::Identity;
            else
                throw ModelError("unsupported activation '" + activation + "'");
            for (const auto &row : entry.at("weights"))
                layer.weights.push_back(rational_array(row));
            layer.biases = rational_array(entry.at("biases"));
            layer.size = layer.biases.size();
            network.layers.push_back(std::move(layer));
        }
        network.validate();
        return network;
    } catch (const json::exception &e) {
        throw ModelError(std::string("malformed network: ") + e.what());
    }
}

std::string network_to_json(const Network &network)
{
    json doc;
    doc["format"] = "nnproof-network/1";
    doc["inputs"] = network.input_size();
    doc["layers"] = json::array();
    for (std::size_t i = 1; i < network.layers.size(); ++i) {
        const auto &layer = network.layers[i];
        json entry;
        entry["activation"] = layer.activation == Activation::ReLU ? "relu" : "identity";
        entry["weights"] = json::array();
        for (const auto &row : layer.weights)
            entry["weights"].push_back(to_json_array(row));
        entry["biases"] = to_json_array(layer.biases);
        doc["layers"].push_back(std::move(entry));
    }
    return doc.dump(1) + "\n";
}

Property property_from_json(const std::string &text)
{
    const json doc = parse_json(text);
    try {
        if (doc.value("format", "") != "nnproof-property/1")
            throw ModelError("missing or unknown property format tag");
        Property property;
        for (const auto &entry : doc.at("input_bounds"))
            property.input_bounds.push_back(interval_field(entry));
        if (doc.contains("output_constraints")) {
            for (const auto &entry : doc.at("output_constraints"))
                property.output_constraints.push_back(
                    {rational_array(entry.at("coeffs")), rational_field(entry.at("rhs"))});
        }
        if (doc.contains("hidden_bounds"))
            property.hidden_bounds = interval_field(doc.at("hidden_bounds"));
        property.validate();
        return property;
    } catch (const json::exception &e) {
        throw ModelError(std::string("malformed property: ") + e.what());
    }
}

std::string property_to_json(const Property &property)
{
    json doc;
    doc["format"] = "nnproof-property/1";
    doc["input_bounds"] = json::array();
    for (const auto &bound : property.input_bounds)
        doc["input_bounds"].push_back({format_rational(bound.lower), format_rational(bound.upper)});
    doc["output_constraints"] = json::array();
    for (const auto &constraint : property.output_constraints)
        doc["output_constraints"].push_back(
            {{"coeffs", to_json_array(constraint.coeffs)}, {"rhs", format_rational(constraint.rhs)}});
    if (property.hidden_bounds)
        doc["hidden_bounds"] = {format_rational(property.hidden_bounds->lower),
                                format_rational(property.hidden_bounds->upper)};
    return doc.dump(1) + "\n";
}

std::string load_text(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ModelError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void save_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ModelError("cannot write '" + path + "'");
    out << text;
}

Network load_network(const std::string &path) { return network_from_json(load_text(path)); }

Property load_property(const std::string &path) { return property_from_json(load_text(path)); }

} // namespace nnproof
