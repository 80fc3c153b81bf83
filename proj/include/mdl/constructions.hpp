#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdl/axioms.hpp"
#include "mdl/diagram.hpp"
#include "mdl/minimize.hpp"
#include "mdl/semantics.hpp"

namespace mdl {

// An undirected graph G = (V, E); the edge set is symmetric and loops are
// permitted. Stored edges are normalized to (min, max).
class Graph {
public:
    Graph() = default;
    Graph(int vertex_count, std::vector<std::pair<int, int>> edges);

    int vertex_count() const { return vertex_count_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool adjacent(int a, int b) const;
    bool has_loop() const;
    std::vector<int> neighbours(int v) const;

    bool operator==(const Graph&) const = default;

private:
    int vertex_count_ = 0;
    std::vector<std::pair<int, int>> edges_;  // normalized, sorted, unique
};

// Graph DSL: "graph <n>" then "edge v<i> -- v<j>" lines (loops allowed).
Graph parse_graph(const std::string& text);

// Selector syntax: complete:<n>, mycielski:<base selector>, file:<path>.
Graph graph_from_selector(const std::string& selector);

Graph complete_graph(int n);
Graph mycielski(const Graph& g);

// Proper colouring with colours 1..colours, or nullopt (graphs with loops
// admit none). Exact backtracking, deterministic result.
std::optional<std::vector<int>> find_colouring(const Graph& g, int colours);

// Least N admitting a colouring; nullopt when undefined (loops). Exact and
// budgeted: throws BudgetExceeded beyond budget_vertices.
std::optional<int> chromatic_number(const Graph& g, int budget_vertices = 12);

// (E1): rho is a surjective graph homomorphism g_hi -> g_lo and every edge of
// g_lo lifts through every preimage point. rho must be total on g_hi.
bool check_edge_lifting(const Graph& g_hi, const Graph& g_lo, const std::vector<int>& rho);

std::string to_dot(const Graph& g, const std::string& graph_name = "graph");

// The Kripke frame pair of the rank-1 construction: the chase of the diagram
// to depth r closed with an all-label reflexive point, and the same frame
// with one selected inner-cycle edge removed.
struct ConstructionBundle {
    Diagram diagram;
    Frame f_plus;
    Frame f_minus;                 // set once an edge has been selected
    std::vector<PointId> g;        // diagram point -> f_plus point (injective hom)
    PointId w0 = 0;
    PointId reflexive_point = -1;  // the all-label reflexive closure point
    std::optional<Edge> selected;  // (x_d, x_d', lambda_d) in diagram coordinates

    bool complete() const { return selected.has_value(); }
    int b() const { return f_plus.point_count(); }
    Edge selected_frame_edge() const;
};

// Chases the diagram to r = max rank, then closes with the reflexive point,
// joining every final-round frontier point to it by every label. Requires a
// rooted, globally minimal diagram with an inner cycle (violations are
// reported by name). f_minus is deferred to the edge selection step.
ConstructionBundle build_f_plus(const Diagram& d);

// Picks the first (by (dst, src, label) order) inner-cycle edge outside the
// given spanning tree and removes its g-image from f_plus.
ConstructionBundle select_edge_and_build_f_minus(ConstructionBundle bundle,
                                                 const SpanningTree& tree);

struct Rank1Condition {
    std::string name;  // "C-i" ... "C-vi"
    bool passed = false;
    std::string detail;
};

struct Rank1Report {
    std::vector<Rank1Condition> conditions;
    std::uint64_t hom_count = 0;  // homomorphisms enumerated for C-v

    bool all_passed() const {
        for (const Rank1Condition& c : conditions)
            if (!c.passed) return false;
        return true;
    }
};

// Machine-checks C-i .. C-vi against the bundle, under exhaustive
// homomorphism enumeration; failures become report entries, not errors.
Rank1Report verify_rank1(const Diagram& d, const ConstructionBundle& bundle);

// The pseudoproduct F x G: carrier {w0} + (W \ {w0}) x V, edges by the
// five-clause definition. The projection characterisation is computed
// independently at build time; any disagreement is an internal error.
struct Pseudoproduct {
    Frame frame;
    PointId w0 = 0;
    std::vector<PointId> pr;  // product point -> f_plus point
    std::vector<int> h;       // product point -> graph vertex, -1 encodes bottom
    int graph_vertices = 0;

    // (y, v) -> product point for non-root y.
    PointId id(PointId y, int v) const { return 1 + (y - 1) * graph_vertices + v; }
};

Pseudoproduct pseudoproduct(const ConstructionBundle& bundle, const Graph& g);

// The C2 refuting valuation: p_0 holds exactly at w0 and p_i^c at the layer-i
// points whose graph vertex has colour c, with p_i^c numbered (i-1)*N + c and
// p_0 numbered N(b-1)+1. Under it gamma_{N(b-1)+1} fails at w0.
Valuation refuting_valuation(const ConstructionBundle& bundle, const Graph& g,
                             const std::vector<int>& colouring, int colour_count);

struct C1Report {
    int samples = 0;
    int k = 0;
    int m = 0;
    std::uint64_t threshold = 0;  // 2^(b k)
    bool passed = false;
    std::optional<std::pair<PointId, Valuation>> counterexample;
};

// Samples k-generated valuations on F x G and asserts gamma_m semantically at
// every point. Requires chromatic evidence that G needs more than 2^(bk)
// colours (complete graphs supply it directly).
C1Report c1_sample_check(const ConstructionBundle& bundle, const Graph& g, int k, int m,
                         int samples, std::uint64_t seed);

struct Complete1Report {
    std::vector<std::pair<int, bool>> refuted;  // alpha -> e^D fails at w0
    bool passed = false;
};

// For every alpha <= alpha_max: F x K_alpha does not satisfy e^D at w0.
Complete1Report verify_complete1(const ConstructionBundle& bundle, int alpha_max);

std::string to_dot(const ConstructionBundle& bundle);
std::string to_dot(const Pseudoproduct& prod);

}  // namespace mdl
