#include "nnproof/lp.hpp"

#include <string>

namespace nnproof::lp {

namespace {

// Bounded-variable simplex on the tableau x_B = T x_N (slack rows s_r = A_r x
// with s_r in [0, 0]), with Bland's smallest-index rule for both the leaving
// and the entering variable.
class Tableau {
  public:
    Tableau(const TableauQuery &query, const RationalVector &lower, const RationalVector &upper)
        : query_(query), n_(query.var_count()), m_(query.row_count()), total_(n_ + m_)
    {
        lo_.resize(total_);
        hi_.resize(total_);
        value_.resize(total_);
        for (std::size_t j = 0; j < n_; ++j) {
            lo_[j] = lower[j];
            hi_[j] = upper[j];
            value_[j] = lower[j];
        }
        rows_.assign(m_, RationalVector(total_));
        basic_.resize(m_);
        row_of_.assign(total_, npos);
        for (std::size_t r = 0; r < m_; ++r) {
            const auto slack = n_ + r;
            basic_[r] = slack;
            row_of_[slack] = r;
            for (const auto &[var, coeff] : query.rows[r].entries) {
                rows_[r][var] = coeff;
                value_[slack] += coeff * value_[var];
            }
        }
    }

    LpOutcome run(SolverStats *stats)
    {
        // Bland's rule terminates; the guard only catches implementation bugs.
        const std::size_t guard = 200 * (total_ + 1) * (m_ + 1);
        for (std::size_t iteration = 0; iteration < guard; ++iteration) {
            const auto leaving = violated_basic();
            if (leaving == npos)
                return Feasible{RationalVector(value_.begin(), value_.begin() + n_)};
            const auto r = row_of_[leaving];
            const bool below = value_[leaving] < lo_[leaving];
            const auto entering = admissible_nonbasic(r, below);
            if (entering == npos)
                return Infeasible{certificate(r, below)};
            pivot_and_update(r, entering, below ? lo_[leaving] : hi_[leaving]);
            if (stats)
                ++stats->pivots;
        }
        throw LpError("simplex iteration guard exceeded");
    }

  private:
    std::size_t violated_basic() const
    {
        std::size_t best = npos;
        for (std::size_t r = 0; r < m_; ++r) {
            const auto var = basic_[r];
            if ((value_[var] < lo_[var] || value_[var] > hi_[var]) && var < best)
                best = var;
        }
        return best;
    }

    std::size_t admissible_nonbasic(std::size_t r, bool increase) const
    {
        const auto &row = rows_[r];
        for (std::size_t j = 0; j < total_; ++j) {
            if (row_of_[j] != npos || row[j] == 0)
                continue;
            const bool positive = row[j] > 0;
            const bool can_rise = value_[j] < hi_[j];
            const bool can_fall = value_[j] > lo_[j];
            if (increase ? (positive ? can_rise : can_fall) : (positive ? can_fall : can_rise))
                return j;
        }
        return npos;
    }

    void pivot_and_update(std::size_t r, std::size_t entering, const Rational &target)
    {
        const auto leaving = basic_[r];
        const Rational pivot = rows_[r][entering];
        const Rational theta = (target - value_[leaving]) / pivot;
        value_[leaving] = target;
        value_[entering] += theta;
        for (std::size_t s = 0; s < m_; ++s)
            if (s != r && rows_[s][entering] != 0)
                value_[basic_[s]] += rows_[s][entering] * theta;

        // Solve row r for the entering variable.
        auto &row = rows_[r];
        RationalVector solved(total_);
        for (std::size_t k = 0; k < total_; ++k)
            if (k != entering && row[k] != 0)
                solved[k] = -row[k] / pivot;
        solved[leaving] = Rational(1) / pivot;
        row = std::move(solved);

        for (std::size_t s = 0; s < m_; ++s) {
            if (s == r)
                continue;
            auto &other = rows_[s];
            const Rational factor = other[entering];
            if (factor == 0)
                continue;
            other[entering] = 0;
            for (std::size_t k = 0; k < total_; ++k)
                if (row[k] != 0)
                    other[k] += factor * row[k];
        }
        basic_[r] = entering;
        row_of_[entering] = r;
        row_of_[leaving] = npos;
    }

    // The row x_i - sum a_ij x_j = 0 equals sum_q y_q (s_q - A_q x); y_q is
    // the coefficient of slack q on the left. Below-lower conflicts certify
    // with w = y, above-upper conflicts with w = -y.
    RationalVector certificate(std::size_t r, bool below) const
    {
        RationalVector w(m_);
        const auto basic = basic_[r];
        for (std::size_t q = 0; q < m_; ++q) {
            const auto slack = n_ + q;
            if (slack == basic)
                w[q] = 1;
            else if (row_of_[slack] == npos)
                w[q] = -rows_[r][slack];
        }
        if (!below)
            for (auto &entry : w)
                entry = -entry;
        return w;
    }

    const TableauQuery &query_;
    std::size_t n_;
    std::size_t m_;
    std::size_t total_;
    RationalVector lo_;
    RationalVector hi_;
    RationalVector value_;
    std::vector<RationalVector> rows_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> row_of_;
};

void verify_feasible(const TableauQuery &query, const RationalVector &lower, const RationalVector &upper,
                     const RationalVector &x)
{
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < lower[j] || x[j] > upper[j])
            throw LpError("feasible assignment violates the bound of " + query.var_name(j));
    for (std::size_t r = 0; r < query.row_count(); ++r) {
        Rational sum = 0;
        for (const auto &[var, coeff] : query.rows[r].entries)
            sum += coeff * x[var];
        if (sum != 0)
            throw LpError("feasible assignment violates row " + std::to_string(r));
    }
}

void verify_infeasible(const TableauQuery &query, const RationalVector &lower, const RationalVector &upper,
                       const RationalVector &w)
{
    const auto c = query.combine(w);
    Rational delta = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] > 0)
            delta += c[j] * upper[j];
        else if (c[j] < 0)
            delta += c[j] * lower[j];
    }
    if (delta >= 0)
        throw LpError("extracted certificate does not certify infeasibility");
}

} // namespace

LpOutcome solve(const TableauQuery &query, const RationalVector &lower, const RationalVector &upper,
                SolverStats *stats)
{
    if (lower.size() != query.var_count() || upper.size() != query.var_count())
        throw std::invalid_argument("bound vectors do not match the variable count");
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (lower[j] > upper[j])
            throw std::invalid_argument("empty bound box on " + query.var_name(j));

    Tableau tableau(query, lower, upper);
    auto outcome = tableau.run(stats);
    if (const auto *feasible = std::get_if<Feasible>(&outcome))
        verify_feasible(query, lower, upper, feasible->assignment);
    else
        verify_infeasible(query, lower, upper, std::get<Infeasible>(outcome).certificate);
    return outcome;
}

} // namespace nnproof::lp
