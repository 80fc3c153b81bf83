#include "mdl/minimize.hpp"

#include <algorithm>
#include <set>

namespace mdl {

ChaseState chase(const Diagram& rule, int rounds) {
    if (rounds < 0) throw std::invalid_argument("chase: negative round count");

    ChaseState state;
    state.origin = 0;
    state.active = {0};
    state.creation_round = {0};
    int point_count = 1;
    std::set<Edge> edges;

    for (int round = 1; round <= rounds; ++round) {
        std::vector<PointId> next_active;
        for (PointId a : state.active) {
            // copy of the rule glued at a: root |-> a, non-root |-> fresh
            std::vector<PointId> image(rule.point_count());
            image[Diagram::kRoot] = a;
            for (PointId y = 1; y < rule.point_count(); ++y) {
                image[y] = point_count++;
                state.creation_round.push_back(round);
                next_active.push_back(image[y]);
            }
            for (const Edge& e : rule.edges())
                edges.insert(Edge{image[e.src], image[e.dst], e.label});
        }
        state.active = std::move(next_active);
        state.rounds = round;
    }
    state.frame = Frame(point_count, {edges.begin(), edges.end()});
    return state;
}

bool entails_locally(const Diagram& d1, const Diagram& d2) {
    return satisfies_e(d1.frame(), Diagram::kRoot, d2).has_value();
}

bool entails_globally(const Diagram& d1, const Diagram& d2) {
    int r = 0;
    std::vector<int> dist = distances_from(d2.frame(), Diagram::kRoot);
    for (int v : dist)
        if (v > r) r = v;
    // Any hom image of d2 anchored at c0 lies within distance r of c0. Copy
    // edges between distinct ball points appear by round r, but a loop at a
    // point of distance exactly r only appears when that point is repaired in
    // round r + 1, so the chase is truncated one round later.
    ChaseState ch = chase(d1, r + 1);
    return satisfies_e(ch.frame, ch.origin, d2).has_value();
}

bool is_locally_minimal(const Diagram& d) {
    for (const Edge& e : d.edges())
        if (entails_locally(delete_edge(d, e), d)) return false;
    return true;
}

bool is_globally_minimal(const Diagram& d) {
    for (const Edge& e : d.edges())
        if (entails_globally(delete_edge(d, e), d)) return false;
    return true;
}

namespace {

// One greedy pass; returns true if a deletion was applied.
bool minimize_step(Diagram& d, std::vector<MinimizeStep>* trace) {
    for (const Edge& e : d.edges()) {
        Diagram without = delete_edge(d, e);
        if (is_rooted(without)) {
            if (entails_globally(without, d)) {
                if (trace) trace->push_back(MinimizeStep{e, false});
                d = std::move(without);
                return true;
            }
        } else {
            Diagram restricted = reachable_restriction(without);
            if (entails_globally(restricted, d) && entails_globally(d, restricted)) {
                if (trace) trace->push_back(MinimizeStep{e, true});
                d = std::move(restricted);
                return true;
            }
        }
    }
    return false;
}

}  // namespace

Diagram minimize(const Diagram& d, std::vector<MinimizeStep>* trace) {
    if (!is_rooted(d)) throw std::invalid_argument("minimize: diagram is not rooted");
    Diagram current = d;
    while (minimize_step(current, trace)) {
    }
    return current;
}

namespace {

void all_orders(const Diagram& d, std::set<bool>& verdicts) {
    bool any = false;
    for (const Edge& e : d.edges()) {
        Diagram without = delete_edge(d, e);
        if (is_rooted(without)) {
            if (entails_globally(without, d)) {
                any = true;
                all_orders(without, verdicts);
            }
        } else {
            Diagram restricted = reachable_restriction(without);
            if (entails_globally(restricted, d) && entails_globally(d, restricted)) {
                any = true;
                all_orders(restricted, verdicts);
            }
        }
    }
    if (!any) verdicts.insert(has_inner_cycle(d));
}

}  // namespace

bool minimize_orders_agree(const Diagram& d, int max_edges) {
    if (static_cast<int>(d.edges().size()) > max_edges)
        throw BudgetExceeded("minimize_orders_agree: too many edges",
                             static_cast<double>(d.edges().size()));
    std::set<bool> verdicts;
    all_orders(d, verdicts);
    return verdicts.size() == 1;
}

const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names = {"I-i", "I-ii", "I-iii", "I-iv", "I-v",
                                                   "I-vi", "I-vii", "I-viii", "I-ix", "I-x"};
    return names;
}

Verdict classify(const Diagram& d) {
    if (!is_rooted(d)) throw std::invalid_argument("classify: diagram is not rooted");
    Verdict verdict;
    verdict.minimal = minimize(d);
    verdict.inner_cycle = has_inner_cycle(verdict.minimal);
    verdict.classification =
        verdict.inner_cycle ? DiagramClass::kNegative : DiagramClass::kPositive;
    return verdict;
}

}  // namespace mdl
