#include "nnproof/checker.hpp"

#include <set>

namespace nnproof::checker {

RationalVector combination(const TableauQuery &query, const RationalVector &w)
{
    RationalVector c(query.var_count(), 0);
    for (RowIndex r = 0; r < query.row_count() && r < w.size(); ++r) {
        if (w[r] == 0)
            continue;
        for (const auto &[var, coeff] : query.rows[r].entries)
            c[var] += w[r] * coeff;
    }
    return c;
}

Rational evaluate_delta(const TableauQuery &query, const RationalVector &w, const RationalVector &lower,
                        const RationalVector &upper)
{
    const auto c = combination(query, w);
    Rational delta = 0;
    for (VarIndex j = 0; j < c.size(); ++j) {
        if (c[j] > 0)
            delta += c[j] * upper[j];
        else if (c[j] < 0)
            delta += c[j] * lower[j];
    }
    return delta;
}

const Lemma *Path::find_lemma(LemmaId id) const
{
    for (const ProofNode *node : nodes_)
        for (const Lemma &lemma : node->lemmas)
            if (lemma.id == id)
                return &lemma;
    return nullptr;
}

namespace {

std::string side_name(Side side) { return side == Side::Lower ? "lower" : "upper"; }

std::string bound_name(const TableauQuery &query, VarIndex var, Side side)
{
    return (side == Side::Lower ? "l(" : "u(") + query.var_name(var) + ")";
}

/// Value of the bound an origin denotes, or a reason why the origin is not
/// usable here. `older_than` restricts lemma citations to smaller ids.
std::optional<Rational> origin_value(const Path &path, const BoundUse &use, std::optional<LemmaId> older_than,
                                     Reasons &reasons)
{
    const auto &query = path.query();
    switch (use.origin.kind) {
    case Origin::Kind::Input: return query.input_bound(use.var, use.side);
    case Origin::Kind::Split:
        for (const ProofNode *node : path.nodes()) {
            if (node->id != use.origin.id || node->split.is_root)
                continue;
            for (const auto &t : node->split.bounds)
                if (t.var == use.var && t.side == use.side)
                    return t.value;
        }
        reasons.push_back("split origin " + std::to_string(use.origin.id) + " does not bound " +
                          bound_name(query, use.var, use.side) + " on the path");
        return std::nullopt;
    case Origin::Kind::Lemma: {
        const Lemma *cited = path.find_lemma(use.origin.id);
        if (!cited) {
            reasons.push_back("dangling lemma reference " + std::to_string(use.origin.id));
            return std::nullopt;
        }
        if (older_than && cited->id >= *older_than) {
            reasons.push_back("cites lemma " + std::to_string(cited->id) + " that is not older");
            return std::nullopt;
        }
        if (cited->var != use.var || cited->side != use.side) {
            reasons.push_back("lemma " + std::to_string(cited->id) + " does not bound " +
                              bound_name(query, use.var, use.side));
            return std::nullopt;
        }
        return cited->learned;
    }
    }
    reasons.push_back("unknown origin kind");
    return std::nullopt;
}

/// Checks that `uses` lists exactly the nonzero entries of c (minus `skip`)
/// with matching coefficients and the side selected by the sign of
/// factor * c_j. On success returns sum_j factor * c_j * value_j.
std::optional<Rational> evaluate_uses(const Path &path, const std::vector<BoundUse> &uses,
                                      const RationalVector &c, VarIndex skip, const Rational &factor,
                                      std::optional<LemmaId> older_than, Reasons &reasons)
{
    const auto &query = path.query();
    const std::size_t before = reasons.size();
    std::set<VarIndex> seen;
    Rational total = 0;
    for (const auto &use : uses) {
        if (use.var >= c.size() || use.var == skip) {
            reasons.push_back("bound use of invalid variable " + std::to_string(use.var));
            continue;
        }
        if (!seen.insert(use.var).second) {
            reasons.push_back("duplicate bound use of " + query.var_name(use.var));
            continue;
        }
        if (use.coeff != c[use.var]) {
            reasons.push_back("recorded coefficient " + format_rational(use.coeff) + " of " +
                              query.var_name(use.var) + " differs from the combination " +
                              format_rational(c[use.var]));
            continue;
        }
        const Rational e = factor * use.coeff;
        const Side expected = e > 0 ? Side::Upper : Side::Lower;
        if (use.side != expected) {
            reasons.push_back(query.var_name(use.var) + " must use its " + side_name(expected) + " bound");
            continue;
        }
        if (const auto value = origin_value(path, use, older_than, reasons))
            total += e * *value;
    }
    for (VarIndex j = 0; j < c.size(); ++j)
        if (j != skip && c[j] != 0 && !seen.count(j))
            reasons.push_back("no bound recorded for " + query.var_name(j));
    if (reasons.size() != before)
        return std::nullopt;
    return total;
}

std::optional<RationalVector> dense_vector(const TableauQuery &query, const SparseVector &sparse, Reasons &reasons)
{
    RationalVector w(query.row_count(), 0);
    for (const auto &[row, value] : sparse) {
        if (row >= query.row_count()) {
            reasons.push_back("vector entry for nonexistent row " + std::to_string(row));
            return std::nullopt;
        }
        w[row] = value;
    }
    return w;
}

Reasons check_rule(const TableauQuery &query, const Lemma &lemma)
{
    const auto &r = query.relus[lemma.relu];
    const bool upper_ground = lemma.ground_side == Side::Upper;
    const Rational &g = lemma.ground_value;
    const Rational &v = lemma.learned;
    bool ok = false;
    switch (lemma.rule) {
    case PhaseRule::R1:
        ok = lemma.ground_var == r.b && upper_ground && g <= 0 && lemma.var == r.f && lemma.side == Side::Upper &&
             v >= 0;
        break;
    case PhaseRule::R2:
        ok = lemma.ground_var == r.f && upper_ground && g <= 0 && lemma.var == r.b && lemma.side == Side::Upper &&
             v >= 0;
        break;
    case PhaseRule::R3:
        ok = lemma.ground_var == r.b && !upper_ground && g >= 0 && lemma.var == r.a && lemma.side == Side::Upper &&
             v >= 0;
        break;
    case PhaseRule::R4:
        ok = lemma.ground_var == r.f && !upper_ground && g > 0 &&
             ((lemma.var == r.b && lemma.side == Side::Lower && v <= g) ||
              (lemma.var == r.a && lemma.side == Side::Upper && v >= 0));
        break;
    case PhaseRule::R5:
        ok = lemma.ground_var == r.f && upper_ground && g >= 0 && lemma.var == r.b && lemma.side == Side::Upper &&
             v >= g;
        break;
    }
    if (ok)
        return {};
    return {"rule " + rule_name(lemma.rule) + " does not yield " + bound_name(query, lemma.var, lemma.side) + " <= " +
            format_rational(v) + " from " + bound_name(query, lemma.ground_var, lemma.ground_side) + " = " +
            format_rational(g)};
}

void prefix(Reasons &reasons, std::size_t from, const std::string &where)
{
    for (std::size_t i = from; i < reasons.size(); ++i)
        reasons[i] = where + ": " + reasons[i];
}

} // namespace

Reasons check_lemma(const Path &path, const Lemma &lemma)
{
    const auto &query = path.query();
    Reasons reasons;
    if (lemma.relu >= query.relus.size() || lemma.ground_var >= query.var_count() || lemma.var >= query.var_count()) {
        reasons.push_back("lemma refers to a nonexistent ReLU or variable");
        return reasons;
    }
    const auto w = dense_vector(query, lemma.proof, reasons);
    if (!w)
        return reasons;
    const auto c = combination(query, *w);
    const Rational &cg = c[lemma.ground_var];
    if (cg == 0) {
        reasons.push_back("ground variable not derivable");
        return reasons;
    }
    const Rational s = lemma.ground_side == Side::Upper ? 1 : -1;
    const Rational factor = -s / cg;
    const auto d = evaluate_uses(path, lemma.uses, c, lemma.ground_var, factor, lemma.id, reasons);
    if (!d)
        return reasons;
    const Rational derived = s * *d;
    if (derived != lemma.ground_value) {
        reasons.push_back("claimed ground bound " + format_rational(lemma.ground_value) + " differs from derived " +
                          format_rational(derived));
        return reasons;
    }
    return check_rule(query, lemma);
}

Reasons check_leaf(const Path &path, const Leaf &leaf)
{
    const auto &query = path.query();
    Reasons reasons;
    if (leaf.kind == Leaf::Kind::EmptyBox) {
        if (!leaf.certificate.empty())
            reasons.push_back("empty-box leaf carries a certificate");
        if (leaf.uses.size() != 2 || leaf.uses[0].var != leaf.uses[1].var || leaf.uses[0].var >= query.var_count() ||
            leaf.uses[0].coeff != 1 || leaf.uses[0].side != Side::Upper || leaf.uses[1].coeff != -1 ||
            leaf.uses[1].side != Side::Lower) {
            reasons.push_back("empty-box leaf must use u and l of one variable");
            return reasons;
        }
        const auto u = origin_value(path, leaf.uses[0], std::nullopt, reasons);
        const auto l = origin_value(path, leaf.uses[1], std::nullopt, reasons);
        if (u && l && !(*u - *l < 0))
            reasons.push_back("box of " + query.var_name(leaf.uses[0].var) + " is not empty");
        return reasons;
    }
    const auto w = dense_vector(query, leaf.certificate, reasons);
    if (!w)
        return reasons;
    const auto c = combination(query, *w);
    const auto total = evaluate_uses(path, leaf.uses, c, npos, 1, std::nullopt, reasons);
    if (!total)
        return reasons;
    RationalVector lower(query.var_count(), 0), upper(query.var_count(), 0);
    for (const auto &use : leaf.uses)
        (use.side == Side::Lower ? lower : upper)[use.var] = *origin_value(path, use, std::nullopt, reasons);
    const Rational delta = evaluate_delta(query, *w, lower, upper);
    if (delta != *total)
        reasons.push_back("inconsistent delta evaluation");
    if (!(delta < 0))
        reasons.push_back("delta " + format_rational(delta) + " is not negative");
    return reasons;
}

namespace {

class Walker {
  public:
    explicit Walker(const TableauQuery &query) : path_(query) {}

    void visit(const ProofNode &node, bool is_root)
    {
        const auto &query = path_.query();
        const std::string where = "node " + std::to_string(node.id);
        const std::size_t before = reasons_.size();

        if (!node_ids_.insert(node.id).second)
            reasons_.push_back("duplicate node id");
        if (is_root) {
            if (!node.split.is_root || !node.split.bounds.empty())
                reasons_.push_back("root must carry the root label");
        } else if (node.split.is_root) {
            reasons_.push_back("non-root node carries the root label");
        } else if (node.split.relu >= query.relus.size()) {
            reasons_.push_back("split on nonexistent ReLU");
        } else if (node.split.bounds != split_bounds(query.relus[node.split.relu], node.split.phase)) {
            reasons_.push_back("split bounds do not match the phase");
        }

        if (node.children.empty()) {
            if (!node.leaf)
                reasons_.push_back("leaf without certificate");
        } else if (node.children.size() != 2) {
            reasons_.push_back("internal node must have two children");
        } else {
            if (node.leaf)
                reasons_.push_back("internal node carries a certificate");
            const auto &inactive = node.children[0].split;
            const auto &active = node.children[1].split;
            if (inactive.phase != Phase::Inactive || active.phase != Phase::Active || inactive.relu != active.relu)
                reasons_.push_back("children must be the inactive then active phase of one ReLU");
        }
        prefix(reasons_, before, where);

        path_.push(node);
        for (const Lemma &lemma : node.lemmas) {
            const std::size_t mark = reasons_.size();
            if (!lemma_ids_.insert(lemma.id).second)
                reasons_.push_back("duplicate lemma id");
            if (lemma.node != node.id)
                reasons_.push_back("lemma records node " + std::to_string(lemma.node));
            for (auto &reason : check_lemma(path_, lemma))
                reasons_.push_back(std::move(reason));
            prefix(reasons_, mark, where + ", lemma " + std::to_string(lemma.id));
        }
        if (node.leaf) {
            const std::size_t mark = reasons_.size();
            for (auto &reason : check_leaf(path_, *node.leaf))
                reasons_.push_back(std::move(reason));
            prefix(reasons_, mark, where + ", leaf");
        }
        for (const auto &child : node.children)
            visit(child, false);
        path_.pop();
    }

    Reasons take() { return std::move(reasons_); }

  private:
    Path path_;
    Reasons reasons_;
    std::set<NodeId> node_ids_;
    std::set<LemmaId> lemma_ids_;
};

} // namespace

Result check_proof(const ProofTree &tree)
{
    Walker walker(tree.query);
    walker.visit(tree.root, true);
    return {walker.take()};
}

Result check_proof(const TableauQuery &query, const ProofTree &tree)
{
    if (!query.same_structure(tree.query))
        return {{"proof query does not match the encoded query"}};
    return check_proof(tree);
}

} // namespace nnproof::checker
