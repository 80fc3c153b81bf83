#include "mdl/axioms.hpp"

#include <algorithm>

namespace mdl {

AxiomSpec AxiomSpec::make(const Diagram& d, bool prune) {
    AxiomSpec spec;
    spec.diagram = d;
    spec.tree = spanning_tree(d);
    spec.depth = spec.tree.depth;
    spec.prune_redundant = prune;
    spec.guard_depth = spec.depth;
    return spec;
}

namespace {

std::vector<Edge> chi_edges(const Diagram& d, PointId i) {
    std::vector<Edge> out(d.frame().out_edges(i).begin(), d.frame().out_edges(i).end());
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.label, a.dst) < std::tie(b.label, b.dst);
    });
    return out;
}

Formula eta_at(const AxiomSpec& spec, PointId i) {
    std::vector<Edge> tree_edges = spec.tree.children(i);
    std::vector<Formula> parts{Formula::nominal(i)};
    for (const Edge& e : chi_edges(spec.diagram, i)) {
        if (spec.prune_redundant &&
            std::find(tree_edges.begin(), tree_edges.end(), e) != tree_edges.end())
            continue;
        parts.push_back(Formula::diamond(e.label, Formula::nominal(e.dst)));
    }
    for (const Edge& e : tree_edges)
        parts.push_back(Formula::diamond(e.label, eta_at(spec, e.dst)));
    return Formula::conj(std::move(parts));
}

}  // namespace

Formula build_chi(const Diagram& d, PointId i) {
    if (i < 0 || i >= d.point_count())
        throw std::invalid_argument("build_chi: point outside the diagram");
    std::vector<Formula> parts{Formula::nominal(i)};
    for (const Edge& e : chi_edges(d, i))
        parts.push_back(Formula::diamond(e.label, Formula::nominal(e.dst)));
    return Formula::conj(std::move(parts));
}

Formula build_eta(const AxiomSpec& spec) { return eta_at(spec, Diagram::kRoot); }

std::uint64_t gamma_disjunct_count(const AxiomSpec& spec, std::size_t psi_size) {
    std::uint64_t count = 1;
    for (int i = 0; i < spec.diagram.point_count(); ++i) {
        if (psi_size != 0 && count > UINT64_MAX / psi_size) return UINT64_MAX;  // saturate
        count *= psi_size;
    }
    return count;
}

Formula gamma_psi(const AxiomSpec& spec, const std::vector<Formula>& psi, std::uint64_t cap) {
    if (psi.empty()) throw std::invalid_argument("gamma_psi: psi must be nonempty");
    const int n_points = spec.diagram.point_count();
    std::uint64_t required = gamma_disjunct_count(spec, psi.size());
    if (required > cap) throw ExpansionCapExceeded(required, cap);

    Formula eta = build_eta(spec);
    std::vector<std::size_t> kappa(n_points, 0);
    std::vector<Formula> disjuncts;
    disjuncts.reserve(required);
    while (true) {
        Substitution sub;
        for (int l = 0; l < n_points; ++l) sub.nominals[l] = psi[kappa[l]];
        disjuncts.push_back(substitute(eta, sub));
        // next kappa, lexicographic with kappa(0) most significant
        int l = n_points - 1;
        while (l >= 0 && kappa[l] + 1 == psi.size()) kappa[l--] = 0;
        if (l < 0) break;
        ++kappa[l];
    }
    return Formula::disj(std::move(disjuncts));
}

Formula gamma_m(const AxiomSpec& spec, int m, std::uint64_t cap) {
    if (m < 1) throw std::invalid_argument("gamma_m: m must be positive");
    std::vector<Formula> psi;
    for (int i = 1; i <= m; ++i) psi.push_back(Formula::var(i));
    Formula any_colour = Formula::disj(std::vector<Formula>(psi));

    // Box prefixes over all label strings of length <= guard_depth, shortest
    // first, within a length in label order.
    const std::vector<Label>& alphabet = spec.diagram.frame().alphabet();
    std::vector<Formula> guard{any_colour};
    std::vector<Formula> level{any_colour};
    for (int len = 1; len <= spec.guard_depth && !alphabet.empty(); ++len) {
        std::vector<Formula> next;
        for (const Label& l : alphabet)
            for (const Formula& g : level) next.push_back(Formula::box(l, g));
        guard.insert(guard.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return Formula::implies(Formula::conj(std::move(guard)), gamma_psi(spec, psi, cap));
}

}  // namespace mdl
