#include "nnproof/bound_state.hpp"

namespace nnproof {

BoundState::BoundState(const TableauQuery &query)
    : lower_(query.lower), upper_(query.upper), lower_origin_(query.var_count(), Origin::input()),
      upper_origin_(query.var_count(), Origin::input())
{
    lower_base_.reserve(query.var_count());
    upper_base_.reserve(query.var_count());
    for (VarIndex v = 0; v < query.var_count(); ++v) {
        lower_base_.push_back({query.input_lower[v], Origin::input()});
        upper_base_.push_back({query.input_upper[v], Origin::input()});
    }
}

const Rational &BoundState::bound(VarIndex var, Side side) const
{
    return side == Side::Lower ? lower_[var] : upper_[var];
}

const Origin &BoundState::origin(VarIndex var, Side side) const
{
    return side == Side::Lower ? lower_origin_[var] : upper_origin_[var];
}

const BoundEntry &BoundState::baseline(VarIndex var, Side side) const
{
    return side == Side::Lower ? lower_base_[var] : upper_base_[var];
}

bool BoundState::tighten(VarIndex var, Side side, const Rational &value, const Origin &origin)
{
    auto &current = values(side)[var];
    auto &current_origin = origins(side)[var];
    auto &base = baselines(side)[var];
    const bool moves_current = tighter(side, value, current);
    const bool moves_base = origin.kind == Origin::Kind::Split && tighter(side, value, base.value);
    if (!moves_current && !moves_base)
        return false;
    trail_.push_back({var, side, {current, current_origin}, base});
    if (moves_current) {
        current = value;
        current_origin = origin;
    }
    if (moves_base)
        base = {value, origin};
    return moves_current;
}

std::optional<VarIndex> BoundState::first_empty() const
{
    for (VarIndex v = 0; v < lower_.size(); ++v)
        if (lower_[v] > upper_[v])
            return v;
    return std::nullopt;
}

void BoundState::backtrack(std::size_t mark)
{
    while (trail_.size() > mark) {
        auto &change = trail_.back();
        values(change.side)[change.var] = std::move(change.current.value);
        origins(change.side)[change.var] = change.current.origin;
        baselines(change.side)[change.var] = std::move(change.baseline);
        trail_.pop_back();
    }
}

bool BoundState::operator==(const BoundState &other) const
{
    return lower_ == other.lower_ && upper_ == other.upper_ && lower_origin_ == other.lower_origin_ &&
           upper_origin_ == other.upper_origin_ && lower_base_ == other.lower_base_ &&
           upper_base_ == other.upper_base_;
}

} // namespace nnproof
