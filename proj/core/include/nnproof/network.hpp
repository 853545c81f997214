#pragma once

#include "nnproof/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nnproof {

class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Activation { ReLU, Identity };

/// One layer of a feed-forward network. The input layer carries only a size.
struct Layer {
    std::size_t size = 0;
    std::vector<RationalVector> weights; // size x previous size
    RationalVector biases;
    Activation activation = Activation::Identity;

    bool operator==(const Layer &) const = default;
};

struct Network {
    std::vector<Layer> layers;

    std::size_t input_size() const { return layers.empty() ? 0 : layers.front().size; }
    std::size_t output_size() const { return layers.empty() ? 0 : layers.back().size; }
    std::size_t relu_count() const;

    /// Throws ModelError when dimensions or activations are inconsistent.
    void validate() const;

    bool operator==(const Network &) const = default;
};

struct Interval {
    Rational lower;
    Rational upper;

    bool operator==(const Interval &) const = default;
};

/// sum_j coeffs[j] * y_j <= rhs over the network outputs.
struct OutputConstraint {
    RationalVector coeffs;
    Rational rhs;

    bool operator==(const OutputConstraint &) const = default;
};

struct Property {
    std::vector<Interval> input_bounds;
    std::vector<OutputConstraint> output_constraints;
    /// When set, every pre-activation and output variable starts inside this
    /// box instead of the interval-propagated one.
    std::optional<Interval> hidden_bounds;

    void validate() const;

    bool operator==(const Property &) const = default;
};

/// Exact forward pass. Throws ModelError on a dimension mismatch.
RationalVector evaluate_network(const Network &network, const RationalVector &input);

/// True iff the input lies in the box and the outputs satisfy every constraint.
bool satisfies_property(const Property &property, const RationalVector &input,
                        const RationalVector &output);

// JSON text formats, rationals written as "p/q" strings (see docs/formats.md).
Network network_from_json(const std::string &text);
std::string network_to_json(const Network &network);
Property property_from_json(const std::string &text);
std::string property_to_json(const Property &property);

Network load_network(const std::string &path);
Property load_property(const std::string &path);
void save_text(const std::string &path, const std::string &text);
std::string load_text(const std::string &path);

} // namespace nnproof
