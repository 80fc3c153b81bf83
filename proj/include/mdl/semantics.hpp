#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "mdl/axioms.hpp"
#include "mdl/diagram.hpp"
#include "mdl/formula.hpp"

namespace mdl {

// A propositional valuation: variable index -> set of frame points (sorted).
// Unmapped variables denote the empty set.
struct Valuation {
    std::map<int, std::vector<PointId>> sets;

    bool holds(int var, PointId p) const;
    void assign(int var, std::vector<PointId> points);  // drops empty sets
    int nonempty_count() const;

    bool operator==(const Valuation&) const = default;
};

// Standard Kripke truth of a modal formula at w. Throws on nominals.
bool eval(const Frame& f, const Valuation& v, PointId w, const Formula& phi);

// Truth set of phi under v, one flag per point.
std::vector<char> truth_set(const Frame& f, const Valuation& v, const Formula& phi);

// Exhaustive validity at a point: phi holds under every valuation of its
// variables. Throws BudgetExceeded when 2^(vars * points) exceeds the budget.
bool valid_at(const Frame& f, PointId w, const Formula& phi,
              std::uint64_t budget = std::uint64_t{1} << 24);

// Points where phi is valid (shared sweep over all valuations).
std::vector<char> valid_points(const Frame& f, const Formula& phi,
                               std::uint64_t budget = std::uint64_t{1} << 24);

struct SampledValidity {
    bool valid = true;
    std::optional<Valuation> counterexample;
};

// Samples pseudo-random valuations of phi's variables; reproducible by seed.
SampledValidity valid_sampled(const Frame& f, PointId w, const Formula& phi, int samples,
                              std::uint64_t seed);

// A root-anchored homomorphism: diagram point -> frame point.
using HomAssignment = std::vector<PointId>;

// Backtracking search for a homomorphism d -> f with root |-> w. Diagram
// points are assigned by (rank, index); candidate targets are tried in index
// order with forward checking on required out-labels, so the witness returned
// is the least under that order.
std::optional<HomAssignment> satisfies_e(const Frame& f, PointId w, const Diagram& d);

// Exact number of root-anchored homomorphisms.
std::uint64_t count_homs(const Frame& f, PointId w, const Diagram& d);

// All root-anchored homomorphisms (exhaustive).
std::vector<HomAssignment> enumerate_homs(const Frame& f, PointId w, const Diagram& d);

// satisfies_e at every point of f.
bool satisfies_e_globally(const Frame& f, const Diagram& d);

// Semantic evaluation of gamma_m without expanding the disjunction: true iff
// the guard fails within guard_depth of w, or some colour map kappa admits a
// homomorphism of the reduced syntactical tree of eta into f at w landing
// every x_i-marked node on a p_kappa(i) point.
bool gamma_semantic(const Frame& f, PointId w, const AxiomSpec& spec, int m,
                    const Valuation& v);

// Atom-free bisimulation check (zig/zag per label) plus (w1, w2) membership;
// when valuations are supplied, atoms are compared as well.
bool is_bisimulation(const Frame& f1, PointId w1, const Frame& f2, PointId w2,
                     const std::vector<std::pair<PointId, PointId>>& z,
                     const Valuation* v1 = nullptr, const Valuation* v2 = nullptr);

// map is a p-morphism f1 -> f2: edges map to edges and every out-edge of the
// image lifts.
bool is_pmorphism(const Frame& f1, const Frame& f2, const std::vector<PointId>& map);

struct UEResult {
    Frame frame;               // ultrafilter extension; point a is pi_a
    std::vector<PointId> iso;  // original point -> extension point (a |-> pi_a)
};

// Ultrafilter extension of a finite frame, materialised from the definition
// (R^-1(X) membership over all X in the principal ultrafilter). Over a finite
// carrier every ultrafilter is principal, so the result is isomorphic to f.
UEResult ultrafilter_extension_finite(const Frame& f);

// -- seeded generators (verification suites and property tests) -------------

Frame random_frame(std::mt19937_64& rng, int max_points,
                   const std::vector<Label>& alphabet, double density = 0.35);

// Rooted diagram with at most max_points points.
Diagram random_rooted_diagram(std::mt19937_64& rng, int max_points,
                              const std::vector<Label>& alphabet, double density = 0.4);

// Valuation of the given variables with uniform random point sets.
Valuation random_valuation(std::mt19937_64& rng, const std::vector<int>& variables,
                           int point_count);

// Valuation with at most k nonempty variables drawn from 1..m.
Valuation random_k_generated_valuation(std::mt19937_64& rng, int k, int m, int point_count);

}  // namespace mdl
