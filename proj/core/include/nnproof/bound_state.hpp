#pragma once

#include "nnproof/proof.hpp"
#include "nnproof/query.hpp"

#include <optional>
#include <vector>

namespace nnproof {

struct BoundEntry {
    Rational value;
    Origin origin;

    bool operator==(const BoundEntry &) const = default;
};

/// Current bounds of a query together with their provenance, plus the
/// tightest lemma-free bound on the current path (the relaxation baseline).
/// Changes are recorded on a trail so ancestors are restored exactly.
class BoundState {
  public:
    explicit BoundState(const TableauQuery &query);

    const RationalVector &lower() const { return lower_; }
    const RationalVector &upper() const { return upper_; }
    const Rational &bound(VarIndex var, Side side) const;
    const Origin &origin(VarIndex var, Side side) const;
    const BoundEntry &baseline(VarIndex var, Side side) const;
    std::size_t var_count() const { return lower_.size(); }

    /// Applies a bound if it is strictly tighter than the current one.
    /// Split bounds also tighten the baseline. Returns whether the current
    /// bound changed.
    bool tighten(VarIndex var, Side side, const Rational &value, const Origin &origin);

    bool is_empty(VarIndex var) const { return lower_[var] > upper_[var]; }
    std::optional<VarIndex> first_empty() const;

    std::size_t mark() const { return trail_.size(); }
    void backtrack(std::size_t mark);

    bool operator==(const BoundState &) const;

  private:
    struct Change {
        VarIndex var;
        Side side;
        BoundEntry current;
        BoundEntry baseline;
    };

    RationalVector &values(Side side) { return side == Side::Lower ? lower_ : upper_; }
    std::vector<Origin> &origins(Side side) { return side == Side::Lower ? lower_origin_ : upper_origin_; }
    std::vector<BoundEntry> &baselines(Side side) { return side == Side::Lower ? lower_base_ : upper_base_; }

    RationalVector lower_;
    RationalVector upper_;
    std::vector<Origin> lower_origin_;
    std::vector<Origin> upper_origin_;
    std::vector<BoundEntry> lower_base_;
    std::vector<BoundEntry> upper_base_;
    std::vector<Change> trail_;
};

inline bool tighter(Side side, const Rational &candidate, const Rational &current)
{
    return side == Side::Lower ? candidate > current : candidate < current;
}

} // namespace nnproof
