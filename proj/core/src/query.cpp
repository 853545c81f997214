#include "nnproof/query.hpp"

#include <algorithm>
#include <map>

namespace nnproof {

char tag_letter(VarTag tag)
{
    switch (tag) {
    case VarTag::Input: return 'x';
    case VarTag::Pre: return 'b';
    case VarTag::Post: return 'f';
    case VarTag::Aux: return 'a';
    case VarTag::Output: return 'y';
    case VarTag::Slack: return 's';
    case VarTag::Constant: return 'c';
    }
    return '?';
}

VarTag tag_from_letter(char letter)
{
    switch (letter) {
    case 'x': return VarTag::Input;
    case 'b': return VarTag::Pre;
    case 'f': return VarTag::Post;
    case 'a': return VarTag::Aux;
    case 'y': return VarTag::Output;
    case 's': return VarTag::Slack;
    case 'c': return VarTag::Constant;
    default: throw ParseError(std::string("unknown variable tag '") + letter + "'");
    }
}

Rational SparseRow::coefficient(VarIndex var) const
{
    auto it = std::lower_bound(entries.begin(), entries.end(), var,
                               [](const auto &entry, VarIndex v) { return entry.first < v; });
    if (it != entries.end() && it->first == var)
        return it->second;
    return 0;
}

RationalVector TableauQuery::combine(const RationalVector &w) const
{
    RationalVector c(var_count());
    for (RowIndex r = 0; r < rows.size() && r < w.size(); ++r) {
        if (w[r] == 0)
            continue;
        for (const auto &[var, coeff] : rows[r].entries)
            c[var] += w[r] * coeff;
    }
    return c;
}

bool TableauQuery::same_structure(const TableauQuery &other) const
{
    return tags == other.tags && rows == other.rows && input_lower == other.input_lower &&
           input_upper == other.input_upper && relus == other.relus;
}

std::string TableauQuery::var_name(VarIndex var) const
{
    if (var >= tags.size())
        return "?" + std::to_string(var);
    std::size_t ordinal = 1;
    for (VarIndex v = 0; v < var; ++v)
        if (tags[v] == tags[var])
            ++ordinal;
    return std::string(1, tag_letter(tags[var])) + std::to_string(ordinal);
}

namespace {

struct Builder {
    TableauQuery query;

    VarIndex add(VarTag tag, Rational lower, Rational upper)
    {
        query.tags.push_back(tag);
        query.lower.push_back(std::move(lower));
        query.upper.push_back(std::move(upper));
        return query.tags.size() - 1;
    }

    void add_row(std::map<VarIndex, Rational> entries)
    {
        SparseRow row;
        for (auto &[var, coeff] : entries)
            if (coeff != 0)
                row.entries.emplace_back(var, std::move(coeff));
        query.rows.push_back(std::move(row));
    }
};

Interval affine_interval(const RationalVector &weights, const Rational &bias,
                         const std::vector<Interval> &inputs)
{
    Interval out{bias, bias};
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const auto &w = weights[k];
        if (w > 0) {
            out.lower += w * inputs[k].lower;
            out.upper += w * inputs[k].upper;
        } else if (w < 0) {
            out.lower += w * inputs[k].upper;
            out.upper += w * inputs[k].lower;
        }
    }
    return out;
}

Rational max0(const Rational &value) { return value < 0 ? Rational(0) : value; }

} // namespace

TableauQuery encode_query(const Network &network, const Property &property)
{
    network.validate();
    property.validate();
    if (property.input_bounds.size() != network.input_size())
        throw ModelError("property has " + std::to_string(property.input_bounds.size()) +
                         " input bounds, network has " + std::to_string(network.input_size()) +
                         " inputs");
    for (const auto &constraint : property.output_constraints)
        if (constraint.coeffs.size() != network.output_size())
            throw ModelError("output constraint width does not match the output layer");

    bool needs_constant = false;
    for (const auto &layer : network.layers)
        for (const auto &bias : layer.biases)
            needs_constant = needs_constant || bias != 0;

    Builder builder;
    auto &query = builder.query;

    // Per-layer variable handles and interval values of the layer outputs.
    std::vector<VarIndex> previous_vars;
    std::vector<Interval> previous_box = property.input_bounds;
    for (const auto &bound : property.input_bounds) {
        previous_vars.push_back(builder.add(VarTag::Input, bound.lower, bound.upper));
        query.inputs.push_back(previous_vars.back());
    }

    struct NeuronRow {
        std::vector<VarIndex> sources;
        const RationalVector *weights;
        Rational bias;
        VarIndex target;
    };
    std::vector<NeuronRow> affine;

    const auto &hidden = property.hidden_bounds;
    for (std::size_t li = 1; li < network.layers.size(); ++li) {
        const auto &layer = network.layers[li];
        const bool is_output = li + 1 == network.layers.size();
        std::vector<VarIndex> vars;
        std::vector<Interval> box;
        for (std::size_t j = 0; j < layer.size; ++j) {
            Interval pre = hidden ? *hidden : affine_interval(layer.weights[j], layer.biases[j], previous_box);
            if (is_output) {
                const auto y = builder.add(VarTag::Output, pre.lower, pre.upper);
                query.outputs.push_back(y);
                affine.push_back({previous_vars, &layer.weights[j], layer.biases[j], y});
                vars.push_back(y);
                box.push_back(pre);
            } else if (layer.activation == Activation::ReLU) {
                Interval post{max0(pre.lower), max0(pre.upper)};
                const auto b = builder.add(VarTag::Pre, pre.lower, pre.upper);
                const auto f = builder.add(VarTag::Post, post.lower, post.upper);
                const auto a = builder.add(VarTag::Aux, 0, post.upper - pre.lower);
                query.relus.push_back({b, f, a});
                affine.push_back({previous_vars, &layer.weights[j], layer.biases[j], b});
                vars.push_back(f);
                box.push_back(post);
            } else {
                const auto b = builder.add(VarTag::Pre, pre.lower, pre.upper);
                affine.push_back({previous_vars, &layer.weights[j], layer.biases[j], b});
                vars.push_back(b);
                box.push_back(pre);
            }
        }
        previous_vars = std::move(vars);
        previous_box = std::move(box);
    }

    // Single-variable output constraints tighten bounds directly.
    std::vector<const OutputConstraint *> multi;
    for (const auto &constraint : property.output_constraints) {
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < constraint.coeffs.size(); ++j)
            if (constraint.coeffs[j] != 0)
                support.push_back(j);
        if (support.empty()) {
            if (constraint.rhs < 0)
                throw ModelError("output constraint with no variables is unsatisfiable");
            continue;
        }
        if (support.size() >= 2) {
            multi.push_back(&constraint);
            continue;
        }
        const auto j = support.front();
        const auto y = query.outputs[j];
        const Rational limit = constraint.rhs / constraint.coeffs[j];
        if (constraint.coeffs[j] > 0)
            query.upper[y] = std::min(query.upper[y], limit);
        else
            query.lower[y] = std::max(query.lower[y], limit);
    }

    std::vector<std::pair<const OutputConstraint *, VarIndex>> slacks;
    for (const auto *constraint : multi) {
        Interval range{0, 0};
        for (std::size_t j = 0; j < constraint->coeffs.size(); ++j) {
            const auto &c = constraint->coeffs[j];
            const auto y = query.outputs[j];
            if (c > 0) {
                range.lower += c * query.lower[y];
                range.upper += c * query.upper[y];
            } else if (c < 0) {
                range.lower += c * query.upper[y];
                range.upper += c * query.lower[y];
            }
        }
        const auto s = builder.add(VarTag::Slack, range.lower, std::min(range.upper, constraint->rhs));
        slacks.emplace_back(constraint, s);
    }

    const VarIndex constant = needs_constant ? builder.add(VarTag::Constant, 1, 1) : npos;

    for (const auto &neuron : affine) {
        std::map<VarIndex, Rational> entries;
        for (std::size_t k = 0; k < neuron.sources.size(); ++k)
            entries[neuron.sources[k]] += (*neuron.weights)[k];
        if (neuron.bias != 0)
            entries[constant] += neuron.bias;
        entries[neuron.target] -= 1;
        builder.add_row(std::move(entries));
    }
    for (const auto &relu : query.relus)
        builder.add_row({{relu.b, Rational(-1)}, {relu.f, Rational(1)}, {relu.a, Rational(-1)}});
    for (const auto &[constraint, s] : slacks) {
        std::map<VarIndex, Rational> entries;
        for (std::size_t j = 0; j < constraint->coeffs.size(); ++j)
            entries[query.outputs[j]] += constraint->coeffs[j];
        entries[s] -= 1;
        builder.add_row(std::move(entries));
    }

    query.input_lower = query.lower;
    query.input_upper = query.upper;
    return query;
}

} // namespace nnproof
