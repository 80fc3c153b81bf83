#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdl {

using PointId = int;

// An element of the finite edge alphabet Lambda. Two labels are equal iff
// their names are equal.
struct Label {
    std::string name;

    auto operator<=>(const Label&) const = default;
};

// A directed labelled edge. The (src, dst, label) triple is the edge's
// identity; relations are edge sets, not multisets.
struct Edge {
    PointId src = 0;
    PointId dst = 0;
    Label label;

    auto operator<=>(const Edge&) const = default;
};

// Thrown when an input text does not conform to one of the DSLs.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Thrown when an exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required)
        : std::runtime_error(what), required_(required) {}

    double required() const { return required_; }

private:
    double required_;
};

// A finite Kripke frame: carrier {0, ..., point_count-1} plus one binary
// relation per label. Immutable after construction; edges are kept sorted by
// (src, dst, label) and duplicate-free, and per-label adjacency lists are
// precomputed for the search routines.
class Frame {
public:
    Frame() : point_count_(0) {}
    Frame(int point_count, std::vector<Edge> edges);

    int point_count() const { return point_count_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Sorted, duplicate-free list of labels occurring on edges.
    const std::vector<Label>& alphabet() const { return alphabet_; }
    int label_index(const Label& label) const;  // -1 if absent

    bool has_edge(PointId src, PointId dst, const Label& label) const;
    bool has_edge(const Edge& e) const { return has_edge(e.src, e.dst, e.label); }

    // Successor / predecessor lists, sorted by point id.
    const std::vector<PointId>& successors(PointId p, int label_idx) const;
    const std::vector<PointId>& predecessors(PointId p, int label_idx) const;

    // All out-edges of p, sorted by (dst, label).
    std::span<const Edge> out_edges(PointId p) const;

    // Successors of p under any label, sorted and duplicate-free.
    std::vector<PointId> successors_any(PointId p) const;

    bool operator==(const Frame& other) const {
        return point_count_ == other.point_count_ && edges_ == other.edges_;
    }

private:
    int point_count_;
    std::vector<Edge> edges_;              // sorted by (src, dst, label)
    std::vector<Label> alphabet_;
    std::vector<std::size_t> out_begin_;   // edges_ index of first edge of p
    // adjacency[label_idx][p] = successor (resp. predecessor) point list
    std::vector<std::vector<std::vector<PointId>>> succ_;
    std::vector<std::vector<std::vector<PointId>>> pred_;
};

// Shortest directed path length from y to z ignoring labels; -1 encodes
// "unreachable" (the paper's infinity). distance(f, y, y) == 0.
int distance(const Frame& f, PointId y, PointId z);

// Distances from y to every point; -1 for unreachable points.
std::vector<int> distances_from(const Frame& f, PointId y);

// DOT rendering. `node_prefix` names points <prefix><i>.
std::string to_dot(const Frame& f, const std::string& graph_name = "frame",
                   const std::string& node_prefix = "w");

}  // namespace mdl
