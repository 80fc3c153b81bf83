#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mdl/core.hpp"

namespace mdl {

enum class Connective : std::uint8_t {
    kBot,
    kVar,      // propositional variable p<index>
    kNominal,  // nominal j<index>
    kNot,
    kAnd,      // n-ary, list nonempty
    kOr,       // n-ary, list nonempty
    kImplies,
    kDiamond,  // <label>
    kBox,      // [label]
};

// An immutable formula over the hybrid fragment used here: modal formulas are
// exactly the nominal-free ones. Nodes are shared; equality is structural.
class Formula {
public:
    Formula() = default;

    Connective kind() const;
    int index() const;                          // kVar / kNominal
    const Label& label() const;                 // kDiamond / kBox
    const std::vector<Formula>& children() const;
    bool valid() const { return node_ != nullptr; }

    bool operator==(const Formula& other) const;

    // -- constructors ------------------------------------------------------
    static Formula bot();
    static Formula var(int index);
    static Formula nominal(int index);
    static Formula neg(Formula f);
    static Formula conj(std::vector<Formula> fs);  // singleton collapses
    static Formula disj(std::vector<Formula> fs);  // singleton collapses
    static Formula implies(Formula a, Formula b);
    static Formula diamond(Label label, Formula f);
    static Formula box(Label label, Formula f);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Connective kind, int index, Label label,
                        std::vector<Formula> children);

    std::shared_ptr<const Node> node_;

    friend const void* node_identity(const Formula& f);
};

const void* node_identity(const Formula& f);
std::size_t node_count(const Formula& f);

bool contains_nominals(const Formula& f);
std::vector<int> variables_of(const Formula& f);  // sorted, unique
std::vector<int> nominals_of(const Formula& f);   // sorted, unique

// Rewrites the derived connectives into the primitives bot, ->, <label>
// (negation becomes f -> bot, boxes become negated diamonds).
Formula to_primitives(const Formula& f);

// Capture-free substitution for nominals and/or variables.
struct Substitution {
    std::map<int, Formula> nominals;
    std::map<int, Formula> variables;
};
Formula substitute(const Formula& f, const Substitution& s);

// Text grammar: p<k>, j<k>, false, ~, &, |, ->, <label>, [label], parentheses.
// The LaTeX form mirrors the usual notation and is not parsed back.
enum class FormulaFormat { kText, kLatex };
std::string render(const Formula& f, FormulaFormat format = FormulaFormat::kText);
Formula parse_formula(const std::string& text);

// A finite labelled tree: an oriented tree whose nodes carry subsets of the
// diagram's point indices.
struct LabelledTree {
    struct Node {
        int parent = -1;          // -1 for the root
        Label parent_label;       // label on the edge parent -> this node
        std::vector<int> children;
        std::vector<int> marks;   // sorted diagram point indices
    };
    std::vector<Node> nodes;      // index 0 is the root

    int root() const { return 0; }
    std::size_t size() const { return nodes.size(); }
    int depth() const;
};

// The reduced syntactical tree of a formula built from conjunctions, diamonds
// and nominals only: nominal j_k becomes a single {x_k}-marked point,
// conjunctions merge roots (uniting marks), diamonds hang the subtree under a
// fresh unmarked root. Throws on any other connective.
LabelledTree reduced_tree(const Formula& f);

std::string to_dot(const LabelledTree& t, const std::string& graph_name = "tree");

}  // namespace mdl
