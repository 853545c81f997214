#pragma once

#include "nnproof/network.hpp"
#include "nnproof/rational.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace nnproof {

using VarIndex = std::size_t;
using RowIndex = std::size_t;
using ReluIndex = std::size_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

enum class Side { Lower, Upper };

inline Side opposite(Side side) { return side == Side::Lower ? Side::Upper : Side::Lower; }

enum class VarTag { Input, Pre, Post, Aux, Output, Slack, Constant };

char tag_letter(VarTag tag);
VarTag tag_from_letter(char letter);

/// f = ReLU(b), with auxiliary a = f - b.
struct ReluTriple {
    VarIndex b = 0;
    VarIndex f = 0;
    VarIndex a = 0;

    bool operator==(const ReluTriple &) const = default;
};

/// One equation sum coeff * var = 0; entries sorted by variable, no zeros.
struct SparseRow {
    std::vector<std::pair<VarIndex, Rational>> entries;

    Rational coefficient(VarIndex var) const;
    bool operator==(const SparseRow &) const = default;
};

/// The tuple <V, A, l, u, R> together with the bounds fixed at encoding time.
///
/// Variable order: inputs, then one (b, f, a) triple per ReLU neuron in layer
/// order (identity hidden neurons contribute a single pre-activation
/// variable), then outputs, then one slack per multi-term output constraint,
/// then the constant-one variable when some bias is nonzero. Row order: one
/// affine row per non-input neuron in layer order, one auxiliary row
/// f - b - a = 0 per ReLU, then one row per slack.
struct TableauQuery {
    std::vector<VarTag> tags;
    std::vector<SparseRow> rows;
    RationalVector lower;
    RationalVector upper;
    RationalVector input_lower;
    RationalVector input_upper;
    std::vector<ReluTriple> relus;
    std::vector<VarIndex> inputs;
    std::vector<VarIndex> outputs;

    std::size_t var_count() const { return tags.size(); }
    std::size_t row_count() const { return rows.size(); }

    const Rational &input_bound(VarIndex var, Side side) const
    {
        return side == Side::Lower ? input_lower[var] : input_upper[var];
    }

    /// Dense combination c = w^T A; w.size() must equal row_count().
    RationalVector combine(const RationalVector &w) const;

    /// Structural equality (A, tags, input bounds, R); current bounds ignored.
    bool same_structure(const TableauQuery &other) const;

    std::string var_name(VarIndex var) const;

    bool operator==(const TableauQuery &) const = default;
};

/// Throws ModelError on a dimension mismatch or a missing input bound.
TableauQuery encode_query(const Network &network, const Property &property);

} // namespace nnproof
