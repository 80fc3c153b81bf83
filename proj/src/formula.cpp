#include "mdl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace mdl {

struct Formula::Node {
    Connective kind;
    int index = 0;
    Label label;
    std::vector<Formula> children;
};

Connective Formula::kind() const { return node_->kind; }
int Formula::index() const { return node_->index; }
const Label& Formula::label() const { return node_->label; }
const std::vector<Formula>& Formula::children() const { return node_->children; }

const void* node_identity(const Formula& f) { return f.node_.get(); }

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    if (node_->kind != other.node_->kind || node_->index != other.node_->index ||
        node_->label != other.node_->label ||
        node_->children.size() != other.node_->children.size())
        return false;
    for (std::size_t i = 0; i < node_->children.size(); ++i)
        if (!(node_->children[i] == other.node_->children[i])) return false;
    return true;
}

Formula Formula::make(Connective kind, int index, Label label,
                      std::vector<Formula> children) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->index = index;
    node->label = std::move(label);
    node->children = std::move(children);
    return Formula(std::move(node));
}

Formula Formula::bot() { return make(Connective::kBot, 0, {}, {}); }

Formula Formula::var(int index) {
    if (index < 0) throw std::invalid_argument("negative variable index");
    return make(Connective::kVar, index, {}, {});
}

Formula Formula::nominal(int index) {
    if (index < 0) throw std::invalid_argument("negative nominal index");
    return make(Connective::kNominal, index, {}, {});
}

Formula Formula::neg(Formula f) { return make(Connective::kNot, 0, {}, {std::move(f)}); }

Formula Formula::conj(std::vector<Formula> fs) {
    if (fs.empty()) throw std::invalid_argument("empty conjunction");
    if (fs.size() == 1) return fs.front();
    return make(Connective::kAnd, 0, {}, std::move(fs));
}

Formula Formula::disj(std::vector<Formula> fs) {
    if (fs.empty()) throw std::invalid_argument("empty disjunction");
    if (fs.size() == 1) return fs.front();
    return make(Connective::kOr, 0, {}, std::move(fs));
}

Formula Formula::implies(Formula a, Formula b) {
    return make(Connective::kImplies, 0, {}, {std::move(a), std::move(b)});
}

Formula Formula::diamond(Label label, Formula f) {
    return make(Connective::kDiamond, 0, std::move(label), {std::move(f)});
}

Formula Formula::box(Label label, Formula f) {
    return make(Connective::kBox, 0, std::move(label), {std::move(f)});
}

namespace {

void walk(const Formula& f, const std::function<void(const Formula&)>& visit) {
    visit(f);
    for (const Formula& c : f.children()) walk(c, visit);
}

}  // namespace

std::size_t node_count(const Formula& f) {
    std::size_t n = 0;
    walk(f, [&](const Formula&) { ++n; });
    return n;
}

bool contains_nominals(const Formula& f) {
    bool found = false;
    walk(f, [&](const Formula& g) { found |= g.kind() == Connective::kNominal; });
    return found;
}

std::vector<int> variables_of(const Formula& f) {
    std::set<int> vars;
    walk(f, [&](const Formula& g) {
        if (g.kind() == Connective::kVar) vars.insert(g.index());
    });
    return {vars.begin(), vars.end()};
}

std::vector<int> nominals_of(const Formula& f) {
    std::set<int> noms;
    walk(f, [&](const Formula& g) {
        if (g.kind() == Connective::kNominal) noms.insert(g.index());
    });
    return {noms.begin(), noms.end()};
}

Formula to_primitives(const Formula& f) {
    switch (f.kind()) {
        case Connective::kBot:
        case Connective::kVar:
        case Connective::kNominal:
            return f;
        case Connective::kNot:
            return Formula::implies(to_primitives(f.children()[0]), Formula::bot());
        case Connective::kAnd: {
            // a & b == (a -> (b -> bot)) -> bot, folded right to left
            Formula chain = Formula::bot();
            bool first = true;
            for (auto it = f.children().rbegin(); it != f.children().rend(); ++it) {
                Formula c = to_primitives(*it);
                chain = first ? Formula::implies(std::move(c), Formula::bot())
                              : Formula::implies(std::move(c), std::move(chain));
                first = false;
            }
            return Formula::implies(std::move(chain), Formula::bot());
        }
        case Connective::kOr: {
            // a | b == (a -> bot) -> b, folded right to left
            Formula acc = to_primitives(f.children().back());
            for (auto it = std::next(f.children().rbegin()); it != f.children().rend(); ++it)
                acc = Formula::implies(Formula::implies(to_primitives(*it), Formula::bot()),
                                       std::move(acc));
            return acc;
        }
        case Connective::kImplies:
            return Formula::implies(to_primitives(f.children()[0]),
                                    to_primitives(f.children()[1]));
        case Connective::kDiamond:
            return Formula::diamond(f.label(), to_primitives(f.children()[0]));
        case Connective::kBox:
            // [l] a == <l>(a -> bot) -> bot
            return Formula::implies(
                Formula::diamond(f.label(), Formula::implies(to_primitives(f.children()[0]),
                                                             Formula::bot())),
                Formula::bot());
    }
    throw std::logic_error("unreachable");
}

Formula substitute(const Formula& f, const Substitution& s) {
    switch (f.kind()) {
        case Connective::kBot:
            return f;
        case Connective::kVar: {
            auto it = s.variables.find(f.index());
            return it == s.variables.end() ? f : it->second;
        }
        case Connective::kNominal: {
            auto it = s.nominals.find(f.index());
            return it == s.nominals.end() ? f : it->second;
        }
        default: {
            std::vector<Formula> children;
            children.reserve(f.children().size());
            for (const Formula& c : f.children()) children.push_back(substitute(c, s));
            switch (f.kind()) {
                case Connective::kNot: return Formula::neg(std::move(children[0]));
                case Connective::kAnd: return Formula::conj(std::move(children));
                case Connective::kOr: return Formula::disj(std::move(children));
                case Connective::kImplies:
                    return Formula::implies(std::move(children[0]), std::move(children[1]));
                case Connective::kDiamond:
                    return Formula::diamond(f.label(), std::move(children[0]));
                case Connective::kBox:
                    return Formula::box(f.label(), std::move(children[0]));
                default: throw std::logic_error("unreachable");
            }
        }
    }
}

namespace {

// Binding strength: -> 1 (right associative), | 2, & 3, unary 4, atoms 5.
int precedence(Connective k) {
    switch (k) {
        case Connective::kImplies: return 1;
        case Connective::kOr: return 2;
        case Connective::kAnd: return 3;
        case Connective::kNot:
        case Connective::kDiamond:
        case Connective::kBox: return 4;
        default: return 5;
    }
}

void render_into(const Formula& f, FormulaFormat fmt, int parent_prec, std::ostream& out) {
    const bool latex = fmt == FormulaFormat::kLatex;
    int prec = precedence(f.kind());
    // Same-precedence children are parenthesised (except the right arm of ->),
    // so n-ary structure survives the round trip.
    bool parens = prec <= parent_prec && prec < 4;
    if (parens) out << (latex ? "\\left(" : "(");
    switch (f.kind()) {
        case Connective::kBot:
            out << (latex ? "\\bot" : "false");
            break;
        case Connective::kVar:
            out << (latex ? "p_{" + std::to_string(f.index()) + "}"
                          : "p" + std::to_string(f.index()));
            break;
        case Connective::kNominal:
            out << (latex ? "j_{" + std::to_string(f.index()) + "}"
                          : "j" + std::to_string(f.index()));
            break;
        case Connective::kNot:
            out << (latex ? "\\neg " : "~");
            render_into(f.children()[0], fmt, prec, out);
            break;
        case Connective::kAnd:
        case Connective::kOr: {
            const char* text_op = f.kind() == Connective::kAnd ? " & " : " | ";
            const char* latex_op = f.kind() == Connective::kAnd ? " \\land " : " \\lor ";
            bool first = true;
            for (const Formula& c : f.children()) {
                if (!first) out << (latex ? latex_op : text_op);
                first = false;
                render_into(c, fmt, prec, out);
            }
            break;
        }
        case Connective::kImplies:
            render_into(f.children()[0], fmt, prec, out);
            out << (latex ? " \\to " : " -> ");
            render_into(f.children()[1], fmt, prec - 1, out);  // right associative
            break;
        case Connective::kDiamond:
            if (latex)
                out << "\\Diamond_{" << f.label().name << "} ";
            else
                out << "<" << f.label().name << "> ";
            render_into(f.children()[0], fmt, prec - 1, out);
            break;
        case Connective::kBox:
            if (latex)
                out << "\\Box_{" << f.label().name << "} ";
            else
                out << "[" << f.label().name << "] ";
            render_into(f.children()[0], fmt, prec - 1, out);
            break;
    }
    if (parens) out << (latex ? "\\right)" : ")");
}

}  // namespace

std::string render(const Formula& f, FormulaFormat format) {
    std::ostringstream out;
    render_into(f, format, 0, out);
    return out.str();
}

namespace {

class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : text_(text) {}

    Formula parse() {
        Formula f = implies();
        skip_space();
        if (pos_ < text_.size()) fail("trailing input");
        return f;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) {
        throw ParseError(1, static_cast<int>(pos_) + 1, message);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool try_token(const std::string& tok) {
        skip_space();
        if (text_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Formula implies() {
        Formula lhs = disjunction();
        if (try_token("->")) return Formula::implies(std::move(lhs), implies());
        return lhs;
    }

    Formula disjunction() {
        std::vector<Formula> parts{conjunction()};
        while (try_token("|")) parts.push_back(conjunction());
        return Formula::disj(std::move(parts));
    }

    Formula conjunction() {
        std::vector<Formula> parts{unary()};
        while (try_token("&")) parts.push_back(unary());
        return Formula::conj(std::move(parts));
    }

    std::string identifier() {
        skip_space();
        std::string out;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            out.push_back(text_[pos_++]);
        if (out.empty()) fail("expected an identifier");
        return out;
    }

    int number() {
        skip_space();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected a number");
        int value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            value = value * 10 + (text_[pos_++] - '0');
        return value;
    }

    Formula unary() {
        if (try_token("~")) return Formula::neg(unary());
        if (try_token("<")) {
            std::string label = identifier();
            if (!try_token(">")) fail("expected '>'");
            return Formula::diamond(Label{std::move(label)}, unary());
        }
        if (try_token("[")) {
            std::string label = identifier();
            if (!try_token("]")) fail("expected ']'");
            return Formula::box(Label{std::move(label)}, unary());
        }
        return atom();
    }

    Formula atom() {
        if (try_token("(")) {
            Formula f = implies();
            if (!try_token(")")) fail("expected ')'");
            return f;
        }
        if (try_token("false")) return Formula::bot();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == 'p') {
            ++pos_;
            return Formula::var(number());
        }
        if (pos_ < text_.size() && text_[pos_] == 'j') {
            ++pos_;
            return Formula::nominal(number());
        }
        fail("expected a formula");
    }
};

}  // namespace

Formula parse_formula(const std::string& text) { return FormulaParser(text).parse(); }

int LabelledTree::depth() const {
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        int d = 0;
        for (int p = static_cast<int>(i); nodes[p].parent != -1; p = nodes[p].parent) ++d;
        best = std::max(best, d);
    }
    return best;
}

namespace {

// Appends a copy of `src` rooted at src_node under dst_parent and returns the
// new root's index.
int graft(const LabelledTree& src, int src_node, LabelledTree& dst, int dst_parent,
          const Label& parent_label) {
    int id = static_cast<int>(dst.nodes.size());
    dst.nodes.push_back(src.nodes[src_node]);
    dst.nodes[id].parent = dst_parent;
    dst.nodes[id].parent_label = parent_label;
    dst.nodes[id].children.clear();
    if (dst_parent != -1) dst.nodes[dst_parent].children.push_back(id);
    for (int c : src.nodes[src_node].children)
        graft(src, c, dst, id, src.nodes[c].parent_label);
    return id;
}

}  // namespace

LabelledTree reduced_tree(const Formula& f) {
    switch (f.kind()) {
        case Connective::kNominal: {
            LabelledTree t;
            t.nodes.push_back(LabelledTree::Node{-1, {}, {}, {f.index()}});
            return t;
        }
        case Connective::kAnd: {
            // Merge the children's roots into one fresh root with united marks.
            LabelledTree t;
            t.nodes.push_back(LabelledTree::Node{});
            std::set<int> marks;
            for (const Formula& part : f.children()) {
                LabelledTree sub = reduced_tree(part);
                marks.insert(sub.nodes[0].marks.begin(), sub.nodes[0].marks.end());
                for (int c : sub.nodes[0].children)
                    graft(sub, c, t, 0, sub.nodes[c].parent_label);
            }
            t.nodes[0].marks.assign(marks.begin(), marks.end());
            return t;
        }
        case Connective::kDiamond: {
            LabelledTree sub = reduced_tree(f.children()[0]);
            LabelledTree t;
            t.nodes.push_back(LabelledTree::Node{});
            graft(sub, 0, t, 0, f.label());
            return t;
        }
        default:
            throw std::invalid_argument(
                "reduced_tree: formula must use only conjunction, diamonds and nominals");
    }
}

std::string to_dot(const LabelledTree& t, const std::string& graph_name) {
    std::ostringstream out;
    out << "digraph \"" << graph_name << "\" {\n";
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        out << "  t" << i << " [label=\"{";
        bool first = true;
        for (int m : t.nodes[i].marks) {
            if (!first) out << ",";
            first = false;
            out << "x" << m;
        }
        out << "}\"];\n";
    }
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
        if (t.nodes[i].parent != -1)
            out << "  t" << t.nodes[i].parent << " -> t" << i << " [label=\""
                << t.nodes[i].parent_label.name << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace mdl
