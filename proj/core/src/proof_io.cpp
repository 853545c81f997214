#include "nnproof/proof.hpp"

#include <map>
#include <sstream>

namespace nnproof {

namespace {

constexpr const char *kMagic = "nnproof-proof";
constexpr int kVersion = 1;

const char *side_token(Side side) { return side == Side::Lower ? "l" : "u"; }

std::string origin_token(const Origin &origin)
{
    switch (origin.kind) {
    case Origin::Kind::Input: return "input";
    case Origin::Kind::Split: return "split:" + std::to_string(origin.id);
    case Origin::Kind::Lemma: return "lemma:" + std::to_string(origin.id);
    }
    return "?";
}

void write_vector(std::ostringstream &out, const SparseVector &vector)
{
    out << "vector";
    for (const auto &[row, value] : vector)
        out << ' ' << row << ':' << format_rational(value);
    out << '\n';
}

void write_uses(std::ostringstream &out, const std::vector<BoundUse> &uses)
{
    for (const auto &use : uses)
        out << "use " << use.var << ' ' << format_rational(use.coeff) << ' ' << side_token(use.side) << ' '
            << origin_token(use.origin) << '\n';
}

void write_node(std::ostringstream &out, const ProofNode &node, long parent)
{
    out << "node " << node.id << ' ' << parent;
    if (node.split.is_root) {
        out << " root";
    } else {
        out << " split " << node.split.relu << ' '
            << (node.split.phase == Phase::Active ? "active" : "inactive");
        for (const auto &t : node.split.bounds)
            out << ' ' << t.var << ':' << side_token(t.side) << ':' << format_rational(t.value);
    }
    out << '\n';
    for (const auto &lemma : node.lemmas) {
        out << "lemma " << lemma.id << " relu " << lemma.relu << " rule " << rule_name(lemma.rule)
            << " learned " << lemma.var << ' ' << side_token(lemma.side) << ' ' << format_rational(lemma.learned)
            << " ground " << lemma.ground_var << ' ' << side_token(lemma.ground_side) << ' '
            << format_rational(lemma.ground_value) << " at " << lemma.node << '\n';
        write_vector(out, lemma.proof);
        write_uses(out, lemma.uses);
    }
    if (node.leaf) {
        if (node.leaf->kind == Leaf::Kind::Farkas) {
            out << "leaf farkas\n";
            write_vector(out, node.leaf->certificate);
        } else {
            out << "leaf empty\n";
        }
        write_uses(out, node.leaf->uses);
    }
    for (const auto &child : node.children)
        write_node(out, child, static_cast<long>(node.id));
}

struct Token {
    std::string text;
    std::size_t column; // 1-based
};

class Parser {
  public:
    explicit Parser(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            lines_.push_back(line);
        }
    }

    ProofTree parse()
    {
        ProofTree tree;
        auto tokens = next("header");
        expect_count(tokens, 2);
        if (tokens[0].text != kMagic)
            fail(tokens[0], "expected '" + std::string(kMagic) + "' header");
        if (integer(tokens[1]) != static_cast<std::size_t>(kVersion))
            fail(tokens[1], "unsupported proof format version");
        parse_query(tree.query);
        parse_nodes(tree);
        return tree;
    }

  private:
    [[noreturn]] void fail(const Token &token, const std::string &message) const
    {
        throw ParseError("line " + std::to_string(line_no_) + ", column " + std::to_string(token.column) + ": " +
                         message);
    }

    [[noreturn]] void fail_line(const std::string &message) const
    {
        throw ParseError("line " + std::to_string(line_no_) + ", column 1: " + message);
    }

    std::vector<Token> tokenize(const std::string &line) const
    {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ')
                ++i;
            if (i >= line.size())
                break;
            const auto start = i;
            while (i < line.size() && line[i] != ' ')
                ++i;
            out.push_back({line.substr(start, i - start), start + 1});
        }
        return out;
    }

    std::vector<Token> next(const char *what)
    {
        while (cursor_ < lines_.size()) {
            line_no_ = cursor_ + 1;
            auto tokens = tokenize(lines_[cursor_++]);
            if (!tokens.empty() && tokens[0].text[0] != '#')
                return tokens;
        }
        line_no_ = lines_.size() + 1;
        fail_line(std::string("unexpected end of input, expected ") + what);
    }

    std::vector<Token> peek()
    {
        auto saved_cursor = cursor_;
        auto saved_line = line_no_;
        while (cursor_ < lines_.size()) {
            auto tokens = tokenize(lines_[cursor_]);
            if (!tokens.empty() && tokens[0].text[0] != '#') {
                cursor_ = saved_cursor;
                line_no_ = saved_line;
                return tokens;
            }
            ++cursor_;
        }
        cursor_ = saved_cursor;
        line_no_ = saved_line;
        return {};
    }

    void expect_count(const std::vector<Token> &tokens, std::size_t count) const
    {
        if (tokens.size() != count)
            fail(tokens.size() > count ? tokens[count] : tokens.back(),
                 "expected " + std::to_string(count) + " fields, found " + std::to_string(tokens.size()));
    }

    void expect_keyword(const Token &token, const char *keyword) const
    {
        if (token.text != keyword)
            fail(token, std::string("expected '") + keyword + "', found '" + token.text + "'");
    }

    std::size_t integer(const Token &token) const { return integer(token, token.text); }

    std::size_t integer(const Token &token, const std::string &text) const
    {
        if (text.empty() || text.size() > 18)
            fail(token, "invalid index '" + text + "'");
        std::size_t value = 0;
        for (char ch : text) {
            if (ch < '0' || ch > '9')
                fail(token, "invalid index '" + text + "'");
            value = value * 10 + static_cast<std::size_t>(ch - '0');
        }
        return value;
    }

    Rational rational(const Token &token, const std::string &text) const
    {
        try {
            return parse_rational(text);
        } catch (const ParseError &e) {
            fail(token, e.what());
        }
    }

    Rational rational(const Token &token) const { return rational(token, token.text); }

    Side side(const Token &token, const std::string &text) const
    {
        if (text == "l")
            return Side::Lower;
        if (text == "u")
            return Side::Upper;
        fail(token, "expected side 'l' or 'u', found '" + text + "'");
    }

    VarIndex variable(const Token &token, const std::string &text) const
    {
        const auto var = integer(token, text);
        if (var >= var_count_)
            fail(token, "variable index " + text + " out of range");
        return var;
    }

    std::pair<std::string, std::string> split_pair(const Token &token) const
    {
        const auto colon = token.text.find(':');
        if (colon == std::string::npos)
            fail(token, "expected '<index>:<value>', found '" + token.text + "'");
        return {token.text.substr(0, colon), token.text.substr(colon + 1)};
    }

    void parse_query(TableauQuery &query)
    {
        auto tokens = next("vars");
        expect_count(tokens, 2);
        expect_keyword(tokens[0], "vars");
        var_count_ = integer(tokens[1]);
        for (std::size_t i = 0; i < var_count_; ++i) {
            tokens = next("var");
            expect_count(tokens, 5);
            expect_keyword(tokens[0], "var");
            if (integer(tokens[1]) != i)
                fail(tokens[1], "variables must be listed in order");
            if (tokens[2].text.size() != 1)
                fail(tokens[2], "invalid variable tag");
            try {
                query.tags.push_back(tag_from_letter(tokens[2].text[0]));
            } catch (const ParseError &e) {
                fail(tokens[2], e.what());
            }
            query.input_lower.push_back(rational(tokens[3]));
            query.input_upper.push_back(rational(tokens[4]));
            if (query.tags.back() == VarTag::Input)
                query.inputs.push_back(i);
            if (query.tags.back() == VarTag::Output)
                query.outputs.push_back(i);
        }
        query.lower = query.input_lower;
        query.upper = query.input_upper;

        tokens = next("rows");
        expect_count(tokens, 2);
        expect_keyword(tokens[0], "rows");
        row_count_ = integer(tokens[1]);
        for (std::size_t r = 0; r < row_count_; ++r) {
            tokens = next("row");
            if (tokens.size() < 2)
                fail(tokens.back(), "row needs an index");
            expect_keyword(tokens[0], "row");
            if (integer(tokens[1]) != r)
                fail(tokens[1], "rows must be listed in order");
            SparseRow row;
            for (std::size_t k = 2; k < tokens.size(); ++k) {
                const auto [var_text, value_text] = split_pair(tokens[k]);
                const auto var = variable(tokens[k], var_text);
                if (!row.entries.empty() && row.entries.back().first >= var)
                    fail(tokens[k], "row entries must be sorted by variable");
                auto value = rational(tokens[k], value_text);
                if (value == 0)
                    fail(tokens[k], "zero row coefficient");
                row.entries.emplace_back(var, std::move(value));
            }
            query.rows.push_back(std::move(row));
        }

        tokens = next("relus");
        expect_count(tokens, 2);
        expect_keyword(tokens[0], "relus");
        const auto relu_count = integer(tokens[1]);
        for (std::size_t k = 0; k < relu_count; ++k) {
            tokens = next("relu");
            expect_count(tokens, 5);
            expect_keyword(tokens[0], "relu");
            if (integer(tokens[1]) != k)
                fail(tokens[1], "relus must be listed in order");
            query.relus.push_back({variable(tokens[2], tokens[2].text), variable(tokens[3], tokens[3].text),
                                   variable(tokens[4], tokens[4].text)});
        }
    }

    SparseVector parse_vector()
    {
        auto tokens = next("vector");
        expect_keyword(tokens[0], "vector");
        SparseVector out;
        for (std::size_t k = 1; k < tokens.size(); ++k) {
            const auto [row_text, value_text] = split_pair(tokens[k]);
            const auto row = integer(tokens[k], row_text);
            if (row >= row_count_)
                fail(tokens[k], "row index " + row_text + " out of range");
            if (!out.empty() && out.back().first >= row)
                fail(tokens[k], "vector entries must be sorted by row");
            auto value = rational(tokens[k], value_text);
            if (value == 0)
                fail(tokens[k], "zero vector entry");
            out.emplace_back(row, std::move(value));
        }
        return out;
    }

    Origin origin(const Token &token) const
    {
        if (token.text == "input")
            return Origin::input();
        const auto colon = token.text.find(':');
        if (colon != std::string::npos) {
            const auto kind = token.text.substr(0, colon);
            const auto id = integer(token, token.text.substr(colon + 1));
            if (kind == "split")
                return Origin::split(id);
            if (kind == "lemma")
                return Origin::lemma(id);
        }
        fail(token, "invalid origin '" + token.text + "'");
    }

    std::vector<BoundUse> parse_uses()
    {
        std::vector<BoundUse> uses;
        while (true) {
            auto tokens = peek();
            if (tokens.empty() || tokens[0].text != "use")
                return uses;
            tokens = next("use");
            expect_count(tokens, 5);
            uses.push_back({variable(tokens[1], tokens[1].text), rational(tokens[2]),
                            side(tokens[3], tokens[3].text), origin(tokens[4])});
        }
    }

    void parse_nodes(ProofTree &tree)
    {
        std::map<NodeId, ProofNode *> nodes;
        std::vector<ProofNode *> stack;
        bool have_root = false;
        while (true) {
            auto tokens = next("node or 'end'");
            if (tokens[0].text == "end") {
                expect_count(tokens, 1);
                if (!have_root)
                    fail(tokens[0], "proof has no nodes");
                if (!peek().empty())
                    fail_line("trailing content after 'end'");
                return;
            }
            expect_keyword(tokens[0], "node");
            if (tokens.size() < 4)
                fail(tokens.back(), "node line is incomplete");
            const auto id = integer(tokens[1]);
            if (nodes.count(id))
                fail(tokens[1], "duplicate node id");
            ProofNode *node = nullptr;
            if (tokens[2].text == "-1") {
                if (have_root)
                    fail(tokens[2], "second root node");
                have_root = true;
                node = &tree.root;
                stack = {node};
            } else {
                if (!have_root)
                    fail(tokens[2], "first node must be the root");
                const auto parent_id = integer(tokens[2]);
                // Preorder: the parent must be on the current ancestor stack.
                while (!stack.empty() && stack.back()->id != parent_id)
                    stack.pop_back();
                if (stack.empty())
                    fail(tokens[2], "parent node is not an ancestor in preorder");
                auto *parent = stack.back();
                if (parent->children.size() >= 2)
                    fail(tokens[2], "node has more than two children");
                parent->children.reserve(2);
                parent->children.emplace_back();
                node = &parent->children.back();
                stack.push_back(node);
            }
            node->id = id;
            nodes[id] = node;
            if (tokens[3].text == "root") {
                expect_count(tokens, 4);
                node->split = SplitLabel{};
            } else if (tokens[3].text == "split") {
                if (tokens.size() < 6)
                    fail(tokens.back(), "split needs a relu index and a phase");
                node->split.is_root = false;
                node->split.relu = integer(tokens[4]);
                if (tokens[5].text == "active")
                    node->split.phase = Phase::Active;
                else if (tokens[5].text == "inactive")
                    node->split.phase = Phase::Inactive;
                else
                    fail(tokens[5], "expected 'active' or 'inactive'");
                for (std::size_t k = 6; k < tokens.size(); ++k) {
                    const auto &text = tokens[k].text;
                    const auto first = text.find(':');
                    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
                    if (second == std::string::npos)
                        fail(tokens[k], "expected '<var>:<side>:<value>'");
                    node->split.bounds.push_back({variable(tokens[k], text.substr(0, first)),
                                                  side(tokens[k], text.substr(first + 1, second - first - 1)),
                                                  rational(tokens[k], text.substr(second + 1))});
                }
            } else {
                fail(tokens[3], "expected 'root' or 'split'");
            }
            parse_node_body(*node);
        }
    }

    void parse_node_body(ProofNode &node)
    {
        while (true) {
            auto tokens = peek();
            if (tokens.empty())
                return;
            if (tokens[0].text == "lemma") {
                tokens = next("lemma");
                expect_count(tokens, 16);
                expect_keyword(tokens[2], "relu");
                expect_keyword(tokens[4], "rule");
                expect_keyword(tokens[6], "learned");
                expect_keyword(tokens[10], "ground");
                Lemma lemma;
                lemma.id = integer(tokens[1]);
                lemma.relu = integer(tokens[3]);
                try {
                    lemma.rule = rule_from_name(tokens[5].text);
                } catch (const ParseError &e) {
                    fail(tokens[5], e.what());
                }
                lemma.var = variable(tokens[7], tokens[7].text);
                lemma.side = side(tokens[8], tokens[8].text);
                lemma.learned = rational(tokens[9]);
                lemma.ground_var = variable(tokens[11], tokens[11].text);
                lemma.ground_side = side(tokens[12], tokens[12].text);
                lemma.ground_value = rational(tokens[13]);
                expect_keyword(tokens[14], "at");
                lemma.node = integer(tokens[15]);
                if (lemma.node != node.id)
                    fail(tokens[15], "lemma node does not match its enclosing node");
                lemma.proof = parse_vector();
                lemma.uses = parse_uses();
                node.lemmas.push_back(std::move(lemma));
            } else if (tokens[0].text == "leaf") {
                tokens = next("leaf");
                expect_count(tokens, 2);
                if (node.leaf)
                    fail(tokens[0], "node has two leaves");
                Leaf leaf;
                if (tokens[1].text == "farkas") {
                    leaf.kind = Leaf::Kind::Farkas;
                    leaf.certificate = parse_vector();
                } else if (tokens[1].text == "empty") {
                    leaf.kind = Leaf::Kind::EmptyBox;
                } else {
                    fail(tokens[1], "expected 'farkas' or 'empty'");
                }
                leaf.uses = parse_uses();
                node.leaf = std::move(leaf);
            } else {
                return;
            }
        }
    }

    std::vector<std::string> lines_;
    std::size_t cursor_ = 0;
    std::size_t line_no_ = 0;
    std::size_t var_count_ = 0;
    std::size_t row_count_ = 0;
};

} // namespace

std::string serialize_proof(const ProofTree &tree)
{
    std::ostringstream out;
    const auto &q = tree.query;
    out << kMagic << ' ' << kVersion << '\n';
    out << "vars " << q.var_count() << '\n';
    for (VarIndex v = 0; v < q.var_count(); ++v)
        out << "var " << v << ' ' << tag_letter(q.tags[v]) << ' ' << format_rational(q.input_lower[v]) << ' '
            << format_rational(q.input_upper[v]) << '\n';
    out << "rows " << q.row_count() << '\n';
    for (RowIndex r = 0; r < q.row_count(); ++r) {
        out << "row " << r;
        for (const auto &[var, coeff] : q.rows[r].entries)
            out << ' ' << var << ':' << format_rational(coeff);
        out << '\n';
    }
    out << "relus " << q.relus.size() << '\n';
    for (ReluIndex k = 0; k < q.relus.size(); ++k)
        out << "relu " << k << ' ' << q.relus[k].b << ' ' << q.relus[k].f << ' ' << q.relus[k].a << '\n';
    write_node(out, tree.root, -1);
    out << "end\n";
    return out.str();
}

ProofTree deserialize_proof(const std::string &text) { return Parser(text).parse(); }

} // namespace nnproof
