#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdl/core.hpp"

namespace mdl {

// A diagram: a pointed finite Kripke frame whose designated point is always
// index 0. Rootedness (every point reachable from the root) is a checkable
// predicate, not a construction invariant, because edge deletion can break
// it.
class Diagram {
public:
    static constexpr PointId kRoot = 0;

    Diagram() = default;
    Diagram(int point_count, std::vector<Edge> edges)
        : frame_(point_count, std::move(edges)) {
        if (point_count < 1) throw std::invalid_argument("diagram needs a root point");
    }

    const Frame& frame() const { return frame_; }
    int point_count() const { return frame_.point_count(); }
    const std::vector<Edge>& edges() const { return frame_.edges(); }
    bool has_edge(const Edge& e) const { return frame_.has_edge(e); }

    bool operator==(const Diagram& other) const { return frame_ == other.frame_; }

private:
    Frame frame_;
};

struct ParsedDiagram {
    Diagram diagram;
    std::vector<std::string> warnings;  // e.g. deduplicated duplicate edges
};

// Diagram DSL:
//   points <n>            -- declares x0 .. x(n-1); x0 is the root
//   edge x<i> -<label>-> x<j>
//   # comment
ParsedDiagram parse_diagram(const std::string& text);

// Frames use the same surface syntax as diagrams, without the root convention.
Frame parse_frame(const std::string& text);

std::string to_dsl(const Diagram& d);

// True iff every point is reachable from the root by a directed path.
bool is_rooted(const Diagram& d);

// Distance from the root; requires a rooted diagram.
int rank(const Diagram& d, PointId x);

// Points x_j != x such that every directed path from the root to x_j passes
// through x; computed as the points that stop being reachable once x is
// removed. x must not be the root.
std::set<PointId> del_set(const Diagram& d, PointId x);

// An oriented spanning tree rooted at x0: every non-root point has exactly
// one parent edge drawn from the diagram's edges.
struct SpanningTree {
    // parent[p] is p's parent edge for p != 0; parent[0] is unused.
    std::vector<Edge> parent;
    int depth = 0;

    bool contains(const Edge& e) const {
        for (std::size_t p = 1; p < parent.size(); ++p)
            if (parent[p] == e) return true;
        return false;
    }
    // Tree edges out of p, sorted by (label, child index).
    std::vector<Edge> children(PointId p) const;
    std::vector<Edge> edges() const;
};

// Deterministic breadth-first spanning tree: each non-root point's parent
// edge is the least (src, label) edge arriving from the previous BFS level.
// Requires a rooted diagram; tree depth equals the maximal rank.
SpanningTree spanning_tree(const Diagram& d);

// Checks the three tree axioms of a spanning tree against its diagram.
bool is_valid_spanning_tree(const Diagram& d, const SpanningTree& t);

// True iff the diagram has an undirected cycle avoiding the root. Undirected
// cycles may not re-traverse one edge identity backwards immediately, so they
// exist exactly when the multigraph on non-root points (edge identities =
// (src,dst,label) triples among non-root points) is not a forest.
bool has_inner_cycle(const Diagram& d);

// True iff e (with both endpoints off the root) lies on some undirected
// cycle avoiding the root.
bool edge_on_inner_cycle(const Diagram& d, const Edge& e);

// The same diagram minus one edge; the point set is unchanged. Throws if the
// edge is absent.
Diagram delete_edge(const Diagram& d, const Edge& e);

// One step of an undirected path: forward follows an edge, backward follows
// an edge reversed (the lambda^- of Lambda^+-).
struct UndirectedStep {
    PointId from = 0;
    PointId to = 0;
    Label label;
    bool forward = true;

    bool operator==(const UndirectedStep&) const = default;
};

// Shortest undirected path from y to z with no immediate same-edge backtrack,
// whose points other than y and z avoid `avoid`. Returns nullopt if none
// exists; y == z yields the empty path.
std::optional<std::vector<UndirectedStep>> undirected_path(
    const Frame& f, PointId y, PointId z, const std::set<PointId>& avoid);

// Restriction of d to the points reachable from the root, renumbered in
// increasing order of original index (the root stays at 0).
Diagram reachable_restriction(const Diagram& d);

std::string to_dot(const Diagram& d, const std::string& graph_name = "diagram");

// Built-in fixture catalog (D_sym, D_refsucc, D_tri, D_chain, D_fig3,
// D_refroot). Set MDL_CATALOG_DIR to override a name with <dir>/<name>.diagram.
std::vector<std::string> catalog_names();
std::optional<Diagram> catalog_lookup(const std::string& name);

}  // namespace mdl
