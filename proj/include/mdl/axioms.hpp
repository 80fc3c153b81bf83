#pragma once

#include <cstdint>
#include <vector>

#include "mdl/diagram.hpp"
#include "mdl/formula.hpp"

namespace mdl {

inline constexpr std::uint64_t kDefaultExpansionCap = 100000;

// Everything needed to generate axioms for one diagram: a spanning tree, its
// depth d, and the guard depth for the box prefix of gamma_m.
struct AxiomSpec {
    Diagram diagram;
    SpanningTree tree;
    int depth = 0;
    bool prune_redundant = true;
    int guard_depth = 0;

    static AxiomSpec make(const Diagram& d, bool prune = true);
};

// chi_i = j_i & /\ <lambda> j_k over the diagram edges out of x_i, conjuncts
// ordered by (label, target index).
Formula build_chi(const Diagram& d, PointId i);

// eta = eta_0 with eta_i = chi_i & /\ <lambda> eta_k over tree edges. With
// prune_redundant, chi_i drops each <lambda> j_k whose edge generates the
// sibling <lambda> eta_k conjunct (eta_k contains j_k, so nothing is lost).
Formula build_eta(const AxiomSpec& spec);

// Thrown when a gamma expansion would exceed the disjunct cap; callers then
// fall back to the semantic evaluator.
class ExpansionCapExceeded : public std::runtime_error {
public:
    ExpansionCapExceeded(std::uint64_t required, std::uint64_t cap)
        : std::runtime_error("gamma expansion needs " + std::to_string(required) +
                             " disjuncts, cap is " + std::to_string(cap)),
          required_(required) {}
    std::uint64_t required() const { return required_; }

private:
    std::uint64_t required_;
};

// \/ over all |psi|^(n+1) colour maps kappa of eta with psi[kappa(l)]
// substituted for j_l; disjuncts ordered lexicographically in kappa.
Formula gamma_psi(const AxiomSpec& spec, const std::vector<Formula>& psi,
                  std::uint64_t cap = kDefaultExpansionCap);

// gamma_m: the conjunction over all modality strings of length <= guard_depth
// (including the empty string) of [sigma](p1 | ... | pm), implying
// gamma_psi over {p1, ..., pm}.
Formula gamma_m(const AxiomSpec& spec, int m, std::uint64_t cap = kDefaultExpansionCap);

// Number of disjuncts gamma_psi would produce.
std::uint64_t gamma_disjunct_count(const AxiomSpec& spec, std::size_t psi_size);

}  // namespace mdl
