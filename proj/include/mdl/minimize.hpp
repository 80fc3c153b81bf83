#pragma once

#include <string>
#include <vector>

#include "mdl/diagram.hpp"
#include "mdl/semantics.hpp"

namespace mdl {

// The frame grown by firing the diagram as a tuple-generating rule: each
// round glues, at every active point, a fresh copy of the rule's non-root
// points (identifying the copy's root with the active point); the fresh
// non-root copies form the next frontier.
struct ChaseState {
    Frame frame;
    PointId origin = 0;                // c0
    std::vector<PointId> active;       // current frontier, sorted
    int rounds = 0;
    std::vector<int> creation_round;   // per point
};

ChaseState chase(const Diagram& rule, int rounds);

// e^d1(x0) |= e^d2(x0): conjunctive-query containment, decided by a
// root-anchored homomorphism d2 -> d1.
bool entails_locally(const Diagram& d1, const Diagram& d2);

// forall x0 e^d1(x0) |= forall x0 e^d2(x0): decided against the chase of d1
// truncated at depth r + 1, r = max rank of d2 (one round past r, so the
// truncation contains every point and edge of the universal model within
// radius r of c0, loops at boundary points included).
bool entails_globally(const Diagram& d1, const Diagram& d2);

// No single-edge deletion entails the diagram back.
bool is_locally_minimal(const Diagram& d);
bool is_globally_minimal(const Diagram& d);

struct MinimizeStep {
    Edge deleted;
    bool dropped_points = false;  // deletion disconnected; reachable part kept
};

// Greedy minimization in deterministic edge order (src, dst, label): deletes
// any edge whose deletion globally entails the diagram back; deletions that
// break rootedness are kept only when the reachable restriction still entails
// both ways, in which case the unreachable points are dropped. The result is
// rooted and globally minimal.
Diagram minimize(const Diagram& d, std::vector<MinimizeStep>* trace = nullptr);

// Tries every maximal deletion order on small diagrams and reports whether
// all runs agree on the inner-cycle verdict (greedy confluence is not assumed).
bool minimize_orders_agree(const Diagram& d, int max_edges = 8);

enum class DiagramClass { kPositive, kNegative };

inline const char* to_string(DiagramClass c) {
    return c == DiagramClass::kPositive ? "POSITIVE" : "NEGATIVE";
}

// Names of the ten model-theoretic properties of the dichotomy.
const std::vector<std::string>& property_names();  // "I-i" ... "I-x"

struct Verdict {
    Diagram minimal;
    bool inner_cycle = false;
    DiagramClass classification = DiagramClass::kPositive;

    // All ten properties hold or all fail, tracking the classification.
    bool property_holds() const { return classification == DiagramClass::kPositive; }
};

// Minimize, then test for an inner cycle: cycle-free means POSITIVE (the ten
// properties hold), an inner cycle means NEGATIVE (they all fail).
Verdict classify(const Diagram& d);

}  // namespace mdl
