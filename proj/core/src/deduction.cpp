#include "nnproof/deduction.hpp"

#include <stdexcept>

namespace nnproof::deduction {

RowBound derive_row_bound(const TableauQuery &query, const BoundState &state, RowIndex row, VarIndex var,
                          Side side)
{
    const auto &entries = query.rows.at(row).entries;
    const Rational target = query.rows[row].coefficient(var);
    if (target == 0)
        throw std::invalid_argument("variable does not occur in the row");

    // Scaling the row by -1/c_var gives var = sum_j c_j x_j over the others.
    const Rational scale = Rational(-1) / target;
    RowBound out;
    out.var = var;
    out.side = side;
    out.proof = {{row, scale}};
    out.value = 0;
    for (const auto &[other, coeff] : entries) {
        if (other == var)
            continue;
        const Rational c = coeff * scale;
        // Upper bound of var takes u for positive terms; lower bound takes l.
        const bool use_upper = (c > 0) == (side == Side::Upper);
        const Side bound_side = use_upper ? Side::Upper : Side::Lower;
        out.value += c * state.bound(other, bound_side);
        out.uses.push_back({other, c, bound_side, state.origin(other, bound_side)});
    }
    return out;
}

std::vector<Conclusion> conclusions(const ReluTriple &relu, VarIndex ground_var, Side ground_side,
                                    const Rational &ground_value, const BoundState &state)
{
    std::vector<Conclusion> out;
    auto offer = [&](PhaseRule rule, VarIndex var, Side side, const Rational &value) {
        if (tighter(side, value, state.bound(var, side)))
            out.push_back({rule, var, side, value});
    };
    if (ground_var == relu.b) {
        if (ground_side == Side::Upper && ground_value <= 0)
            offer(PhaseRule::R1, relu.f, Side::Upper, 0);
        else if (ground_side == Side::Lower && ground_value >= 0)
            offer(PhaseRule::R3, relu.a, Side::Upper, 0);
    } else if (ground_var == relu.f) {
        if (ground_side == Side::Upper) {
            if (ground_value <= 0)
                offer(PhaseRule::R2, relu.b, Side::Upper, 0);
            else
                offer(PhaseRule::R5, relu.b, Side::Upper, ground_value);
        } else if (ground_value > 0) {
            offer(PhaseRule::R4, relu.b, Side::Lower, ground_value);
            offer(PhaseRule::R4, relu.a, Side::Upper, 0);
        }
    }
    return out;
}

Result tighten_bounds(const TableauQuery &query, BoundState &state, NodeId node, LemmaId &next_id,
                      const Config &config)
{
    std::vector<ReluIndex> relu_of(query.var_count(), npos);
    for (ReluIndex k = 0; k < query.relus.size(); ++k) {
        relu_of[query.relus[k].b] = k;
        relu_of[query.relus[k].f] = k;
    }

    Result result;
    for (std::size_t pass = 0; pass < config.passes; ++pass) {
        bool learned_any = false;
        for (RowIndex r = 0; r < query.row_count(); ++r) {
            for (const auto &[var, coeff] : query.rows[r].entries) {
                const auto k = relu_of[var];
                if (k == npos)
                    continue;
                for (const Side side : {Side::Upper, Side::Lower}) {
                    auto ground = derive_row_bound(query, state, r, var, side);
                    for (const auto &conclusion : conclusions(query.relus[k], var, side, ground.value, state)) {
                        // An earlier conclusion of the same firing may already cover this one.
                        if (!tighter(conclusion.side, conclusion.value, state.bound(conclusion.var, conclusion.side)))
                            continue;
                        Lemma lemma;
                        lemma.id = next_id++;
                        lemma.relu = k;
                        lemma.rule = conclusion.rule;
                        lemma.var = conclusion.var;
                        lemma.side = conclusion.side;
                        lemma.learned = conclusion.value;
                        lemma.ground_var = var;
                        lemma.ground_side = side;
                        lemma.ground_value = ground.value;
                        lemma.proof = ground.proof;
                        lemma.uses = ground.uses;
                        lemma.node = node;
                        state.tighten(lemma.var, lemma.side, lemma.learned, Origin::lemma(lemma.id));
                        result.lemmas.push_back(std::move(lemma));
                        learned_any = true;
                        if (state.is_empty(conclusion.var)) {
                            result.conflict = conclusion.var;
                            return result;
                        }
                    }
                }
            }
        }
        if (!learned_any)
            break;
    }
    return result;
}

} // namespace nnproof::deduction
