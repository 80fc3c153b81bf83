#include "mdl/semantics.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace mdl {

bool Valuation::holds(int var, PointId p) const {
    auto it = sets.find(var);
    if (it == sets.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), p);
}

void Valuation::assign(int var, std::vector<PointId> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.empty())
        sets.erase(var);
    else
        sets[var] = std::move(points);
}

int Valuation::nonempty_count() const {
    int n = 0;
    for (const auto& [var, pts] : sets)
        if (!pts.empty()) ++n;
    return n;
}

namespace {

std::vector<char> eval_set(const Frame& f, const Valuation& v, const Formula& phi) {
    const int n = f.point_count();
    switch (phi.kind()) {
        case Connective::kBot:
            return std::vector<char>(n, 0);
        case Connective::kVar: {
            std::vector<char> out(n, 0);
            auto it = v.sets.find(phi.index());
            if (it != v.sets.end())
                for (PointId p : it->second)
                    if (p >= 0 && p < n) out[p] = 1;
            return out;
        }
        case Connective::kNominal:
            throw std::invalid_argument("eval: modal formula expected, found a nominal");
        case Connective::kNot: {
            std::vector<char> out = eval_set(f, v, phi.children()[0]);
            for (char& b : out) b = !b;
            return out;
        }
        case Connective::kAnd: {
            std::vector<char> out(n, 1);
            for (const Formula& c : phi.children()) {
                std::vector<char> part = eval_set(f, v, c);
                for (int p = 0; p < n; ++p) out[p] = out[p] && part[p];
            }
            return out;
        }
        case Connective::kOr: {
            std::vector<char> out(n, 0);
            for (const Formula& c : phi.children()) {
                std::vector<char> part = eval_set(f, v, c);
                for (int p = 0; p < n; ++p) out[p] = out[p] || part[p];
            }
            return out;
        }
        case Connective::kImplies: {
            std::vector<char> a = eval_set(f, v, phi.children()[0]);
            std::vector<char> b = eval_set(f, v, phi.children()[1]);
            for (int p = 0; p < n; ++p) a[p] = !a[p] || b[p];
            return a;
        }
        case Connective::kDiamond:
        case Connective::kBox: {
            std::vector<char> sub = eval_set(f, v, phi.children()[0]);
            std::vector<char> out(n, 0);
            int li = f.label_index(phi.label());
            bool box = phi.kind() == Connective::kBox;
            for (int p = 0; p < n; ++p) {
                bool exists = false, all = true;
                if (li >= 0)
                    for (PointId q : f.successors(p, li)) {
                        if (sub[q]) exists = true;
                        else all = false;
                    }
                out[p] = box ? all : exists;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::vector<char> truth_set(const Frame& f, const Valuation& v, const Formula& phi) {
    return eval_set(f, v, phi);
}

bool eval(const Frame& f, const Valuation& v, PointId w, const Formula& phi) {
    if (w < 0 || w >= f.point_count()) throw std::invalid_argument("eval: point outside frame");
    return eval_set(f, v, phi)[w] != 0;
}

namespace {

// Fast exhaustive sweep: valuations and truth sets as 64-bit masks. Only used
// when vars * points fits the budget, which keeps everything under 63 bits.
class MaskEval {
public:
    MaskEval(const Frame& f, const std::vector<int>& vars) : f_(f), vars_(vars) {}

    std::uint64_t var_mask(int var) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == var) return masks_[i];
        return 0;
    }

    void set_assignment(const std::vector<std::uint64_t>& masks) { masks_ = masks; }

    std::uint64_t run(const Formula& phi) const {
        const std::uint64_t all = f_.point_count() == 64
                                      ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << f_.point_count()) - 1;
        switch (phi.kind()) {
            case Connective::kBot:
                return 0;
            case Connective::kVar:
                return var_mask(phi.index());
            case Connective::kNominal:
                throw std::invalid_argument("valid_at: modal formula expected");
            case Connective::kNot:
                return all & ~run(phi.children()[0]);
            case Connective::kAnd: {
                std::uint64_t out = all;
                for (const Formula& c : phi.children()) out &= run(c);
                return out;
            }
            case Connective::kOr: {
                std::uint64_t out = 0;
                for (const Formula& c : phi.children()) out |= run(c);
                return out;
            }
            case Connective::kImplies:
                return (all & ~run(phi.children()[0])) | run(phi.children()[1]);
            case Connective::kDiamond:
            case Connective::kBox: {
                std::uint64_t sub = run(phi.children()[0]);
                std::uint64_t out = 0;
                int li = f_.label_index(phi.label());
                bool box = phi.kind() == Connective::kBox;
                for (int p = 0; p < f_.point_count(); ++p) {
                    bool exists = false, every = true;
                    if (li >= 0)
                        for (PointId q : f_.successors(p, li)) {
                            if (sub >> q & 1) exists = true;
                            else every = false;
                        }
                    if (box ? every : exists) out |= std::uint64_t{1} << p;
                }
                return out;
            }
        }
        throw std::logic_error("unreachable");
    }

private:
    const Frame& f_;
    std::vector<int> vars_;
    std::vector<std::uint64_t> masks_;
};

void check_budget(const Frame& f, const Formula& phi, std::uint64_t budget,
                  std::size_t* out_vars, int* out_bits) {
    std::vector<int> vars = variables_of(phi);
    std::uint64_t bits =
        static_cast<std::uint64_t>(vars.size()) * static_cast<std::uint64_t>(f.point_count());
    if (bits >= 63 || (std::uint64_t{1} << bits) > budget)
        throw BudgetExceeded("valid_at: 2^(vars*points) exceeds the valuation budget; "
                             "use sampled validity",
                             bits >= 63 ? 1e18 : static_cast<double>(std::uint64_t{1} << bits));
    *out_vars = vars.size();
    *out_bits = static_cast<int>(bits);
}

}  // namespace

std::vector<char> valid_points(const Frame& f, const Formula& phi, std::uint64_t budget) {
    std::size_t k = 0;
    int bits = 0;
    check_budget(f, phi, budget, &k, &bits);
    std::vector<int> vars = variables_of(phi);
    MaskEval me(f, vars);

    const std::uint64_t all = f.point_count() == 64
                                  ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << f.point_count()) - 1;
    std::uint64_t valid = all;
    const int w = f.point_count();
    std::vector<std::uint64_t> masks(k);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << bits) && valid; ++a) {
        for (std::size_t i = 0; i < k; ++i) masks[i] = (a >> (i * w)) & all;
        me.set_assignment(masks);
        valid &= me.run(phi);
    }
    std::vector<char> out(f.point_count());
    for (int p = 0; p < f.point_count(); ++p) out[p] = (valid >> p) & 1;
    return out;
}

bool valid_at(const Frame& f, PointId w, const Formula& phi, std::uint64_t budget) {
    if (w < 0 || w >= f.point_count())
        throw std::invalid_argument("valid_at: point outside frame");
    std::size_t k = 0;
    int bits = 0;
    check_budget(f, phi, budget, &k, &bits);
    std::vector<int> vars = variables_of(phi);
    MaskEval me(f, vars);

    const std::uint64_t all = f.point_count() == 64
                                  ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << f.point_count()) - 1;
    const int n = f.point_count();
    std::vector<std::uint64_t> masks(k);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << bits); ++a) {
        for (std::size_t i = 0; i < k; ++i) masks[i] = (a >> (i * n)) & all;
        me.set_assignment(masks);
        if (!(me.run(phi) >> w & 1)) return false;
    }
    return true;
}

SampledValidity valid_sampled(const Frame& f, PointId w, const Formula& phi, int samples,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> vars = variables_of(phi);
    for (int s = 0; s < samples; ++s) {
        Valuation v = random_valuation(rng, vars, f.point_count());
        if (!eval(f, v, w, phi)) return SampledValidity{false, std::move(v)};
    }
    return SampledValidity{};
}

namespace {

// Shared backtracking core for the root-anchored homomorphism search.
class HomSearch {
public:
    HomSearch(const Frame& f, PointId w, const Diagram& d) : f_(f), d_(d), w_(w) {
        const int n = d.point_count();
        order_.reserve(n);
        std::vector<int> dist = distances_from(d.frame(), Diagram::kRoot);
        std::vector<std::pair<int, int>> keyed;
        for (int p = 0; p < n; ++p)
            keyed.push_back({dist[p] == -1 ? INT32_MAX : dist[p], p});
        std::sort(keyed.begin(), keyed.end());
        for (auto& [r, p] : keyed) order_.push_back(p);
        assignment_.assign(n, -1);

        // Out-label requirement per diagram point, for forward checking.
        for (int p = 0; p < n; ++p) {
            std::set<Label> labels;
            for (const Edge& e : d.frame().out_edges(p)) labels.insert(e.label);
            required_labels_.push_back({labels.begin(), labels.end()});
        }
    }

    // Visits every homomorphism in search order; the callback returns true to
    // keep enumerating, false to stop.
    void run(const std::function<bool(const HomAssignment&)>& on_found) {
        on_found_ = &on_found;
        stopped_ = false;
        extend(0);
    }

private:
    bool candidate_ok(PointId x, PointId u) const {
        // forward check: u must offer every out-label x needs
        for (const Label& l : required_labels_[x]) {
            int li = f_.label_index(l);
            if (li < 0 || f_.successors(u, li).empty()) return false;
        }
        // edges between x and already-assigned points (self-loops included)
        for (const Edge& e : d_.frame().out_edges(x)) {
            PointId img = e.dst == x ? u : assignment_[e.dst];
            if (img != -1 && !f_.has_edge(u, img, e.label)) return false;
        }
        for (const Edge& e : d_.edges()) {
            if (e.dst != x || e.src == x) continue;
            PointId img = assignment_[e.src];
            if (img != -1 && !f_.has_edge(img, u, e.label)) return false;
        }
        return true;
    }

    void extend(int depth) {
        if (stopped_) return;
        if (depth == static_cast<int>(order_.size())) {
            if (!(*on_found_)(assignment_)) stopped_ = true;
            return;
        }
        PointId x = order_[depth];
        if (x == Diagram::kRoot) {
            if (candidate_ok(x, w_)) {
                assignment_[x] = w_;
                extend(depth + 1);
                assignment_[x] = -1;
            }
            return;
        }
        for (PointId u = 0; u < f_.point_count(); ++u) {
            if (!candidate_ok(x, u)) continue;
            assignment_[x] = u;
            extend(depth + 1);
            assignment_[x] = -1;
            if (stopped_) return;
        }
    }

    const Frame& f_;
    const Diagram& d_;
    PointId w_;
    std::vector<PointId> order_;
    HomAssignment assignment_;
    std::vector<std::vector<Label>> required_labels_;
    const std::function<bool(const HomAssignment&)>* on_found_ = nullptr;
    bool stopped_ = false;
};

}  // namespace

std::optional<HomAssignment> satisfies_e(const Frame& f, PointId w, const Diagram& d) {
    if (w < 0 || w >= f.point_count())
        throw std::invalid_argument("satisfies_e: point outside frame");
    std::optional<HomAssignment> found;
    HomSearch search(f, w, d);
    search.run([&](const HomAssignment& h) {
        found = h;
        return false;
    });
    return found;
}

std::uint64_t count_homs(const Frame& f, PointId w, const Diagram& d) {
    std::uint64_t count = 0;
    HomSearch search(f, w, d);
    search.run([&](const HomAssignment&) {
        ++count;
        return true;
    });
    return count;
}

std::vector<HomAssignment> enumerate_homs(const Frame& f, PointId w, const Diagram& d) {
    std::vector<HomAssignment> out;
    HomSearch search(f, w, d);
    search.run([&](const HomAssignment& h) {
        out.push_back(h);
        return true;
    });
    return out;
}

bool satisfies_e_globally(const Frame& f, const Diagram& d) {
    for (PointId w = 0; w < f.point_count(); ++w)
        if (!satisfies_e(f, w, d)) return false;
    return true;
}

namespace {

// Colour sets as dynamic bitsets over colours 1..m (bit c-1 = colour c).
struct ColourSet {
    std::vector<std::uint64_t> bits;

    static ColourSet full(int m) {
        ColourSet s;
        s.bits.assign((m + 63) / 64, ~std::uint64_t{0});
        int spare = static_cast<int>(s.bits.size()) * 64 - m;
        if (spare > 0 && !s.bits.empty()) s.bits.back() >>= spare;
        return s;
    }
    bool empty() const {
        for (std::uint64_t b : bits)
            if (b) return false;
        return true;
    }
    void intersect(const ColourSet& o) {
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] &= o.bits[i];
    }
};

}  // namespace

bool gamma_semantic(const Frame& f, PointId w, const AxiomSpec& spec, int m,
                    const Valuation& v) {
    if (m < 1) throw std::invalid_argument("gamma_semantic: m must be positive");

    // Guard: every point within guard_depth of w must satisfy some p_1..p_m;
    // otherwise the antecedent fails and gamma_m holds trivially.
    auto coloured = [&](PointId p) {
        for (int i = 1; i <= m; ++i)
            if (v.holds(i, p)) return true;
        return false;
    };
    {
        std::vector<int> dist(f.point_count(), -1);
        std::deque<PointId> queue{w};
        dist[w] = 0;
        if (!coloured(w)) return true;
        while (!queue.empty()) {
            PointId p = queue.front();
            queue.pop_front();
            if (dist[p] == spec.guard_depth) continue;
            for (const Edge& e : f.out_edges(p))
                if (dist[e.dst] == -1) {
                    dist[e.dst] = dist[p] + 1;
                    if (!coloured(e.dst)) return true;
                    queue.push_back(e.dst);
                }
        }
    }

    // Colour-respecting homomorphism of the reduced syntactical tree.
    LabelledTree tree = reduced_tree(build_eta(spec));
    const int n_points = spec.diagram.point_count();

    // colours(u): bitset of colours satisfied at frame point u.
    std::vector<ColourSet> point_colours(f.point_count(), ColourSet::full(m));
    for (PointId u = 0; u < f.point_count(); ++u) {
        ColourSet& s = point_colours[u];
        for (int c = 1; c <= m; ++c)
            if (!v.holds(c, u)) s.bits[(c - 1) / 64] &= ~(std::uint64_t{1} << ((c - 1) % 64));
    }

    std::vector<ColourSet> allowed(n_points, ColourSet::full(m));
    std::vector<PointId> where(tree.size(), -1);

    // Preorder: parents precede children by construction of reduced_tree.
    std::vector<int> order;
    order.reserve(tree.size());
    {
        std::vector<int> stack{tree.root()};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            order.push_back(t);
            for (auto it = tree.nodes[t].children.rbegin();
                 it != tree.nodes[t].children.rend(); ++it)
                stack.push_back(*it);
        }
    }

    std::function<bool(std::size_t)> place = [&](std::size_t idx) -> bool {
        if (idx == order.size()) return true;
        int t = order[idx];
        const LabelledTree::Node& node = tree.nodes[t];

        std::vector<PointId> candidates;
        if (node.parent == -1) {
            candidates.push_back(w);
        } else {
            int li = f.label_index(node.parent_label);
            if (li < 0) return false;
            const std::vector<PointId>& succ = f.successors(where[node.parent], li);
            candidates.assign(succ.begin(), succ.end());
        }

        for (PointId u : candidates) {
            // intersect the colour sets of this node's marks with u's colours
            std::vector<ColourSet> saved;
            bool feasible = true;
            for (int mark : node.marks) {
                saved.push_back(allowed[mark]);
                allowed[mark].intersect(point_colours[u]);
                if (allowed[mark].empty()) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                where[t] = u;
                if (place(idx + 1)) return true;
                where[t] = -1;
            }
            for (std::size_t i = saved.size(); i-- > 0;)
                allowed[node.marks[i]] = std::move(saved[i]);
        }
        return false;
    };

    return place(0);
}

bool is_bisimulation(const Frame& f1, PointId w1, const Frame& f2, PointId w2,
                     const std::vector<std::pair<PointId, PointId>>& z,
                     const Valuation* v1, const Valuation* v2) {
    std::set<std::pair<PointId, PointId>> rel(z.begin(), z.end());
    if (!rel.count({w1, w2})) return false;

    std::set<int> vars;
    if (v1)
        for (const auto& [var, pts] : v1->sets) vars.insert(var);
    if (v2)
        for (const auto& [var, pts] : v2->sets) vars.insert(var);

    for (const auto& [a, b] : rel) {
        if (a < 0 || a >= f1.point_count() || b < 0 || b >= f2.point_count()) return false;
        if (v1 && v2)
            for (int var : vars)
                if (v1->holds(var, a) != v2->holds(var, b)) return false;
        // zig
        for (const Edge& e : f1.out_edges(a)) {
            bool matched = false;
            int li = f2.label_index(e.label);
            if (li >= 0)
                for (PointId b2 : f2.successors(b, li))
                    if (rel.count({e.dst, b2})) {
                        matched = true;
                        break;
                    }
            if (!matched) return false;
        }
        // zag
        for (const Edge& e : f2.out_edges(b)) {
            bool matched = false;
            int li = f1.label_index(e.label);
            if (li >= 0)
                for (PointId a2 : f1.successors(a, li))
                    if (rel.count({a2, e.dst})) {
                        matched = true;
                        break;
                    }
            if (!matched) return false;
        }
    }
    return true;
}

bool is_pmorphism(const Frame& f1, const Frame& f2, const std::vector<PointId>& map) {
    if (static_cast<int>(map.size()) != f1.point_count()) return false;
    for (PointId p : map)
        if (p < 0 || p >= f2.point_count()) return false;
    // forth
    for (const Edge& e : f1.edges())
        if (!f2.has_edge(map[e.src], map[e.dst], e.label)) return false;
    // back
    for (PointId a = 0; a < f1.point_count(); ++a)
        for (const Edge& e : f2.out_edges(map[a])) {
            bool lifted = false;
            int li = f1.label_index(e.label);
            if (li >= 0)
                for (PointId b : f1.successors(a, li))
                    if (map[b] == e.dst) {
                        lifted = true;
                        break;
                    }
            if (!lifted) return false;
        }
    return true;
}

UEResult ultrafilter_extension_finite(const Frame& f) {
    const int n = f.point_count();
    if (n > 20)
        throw BudgetExceeded("ultrafilter_extension_finite: frame too large", std::pow(2.0, n));

    // Principal ultrafilters are the only ultrafilters over a finite carrier;
    // pi_a R^ue pi_b iff R^-1(X) contains a for every X containing b.
    std::vector<Edge> edges;
    for (const Label& label : f.alphabet()) {
        int li = f.label_index(label);
        for (PointId a = 0; a < n; ++a)
            for (PointId b = 0; b < n; ++b) {
                bool related = true;
                for (std::uint32_t x = 0; x < (1u << n) && related; ++x) {
                    if (!(x >> b & 1)) continue;  // X must contain b
                    bool a_sees_x = false;
                    for (PointId q : f.successors(a, li))
                        if (x >> q & 1) {
                            a_sees_x = true;
                            break;
                        }
                    if (!a_sees_x) related = false;  // a not in R^-1(X)
                }
                if (related) edges.push_back(Edge{a, b, label});
            }
    }
    UEResult result{Frame(n, std::move(edges)), {}};
    result.iso.resize(n);
    for (PointId a = 0; a < n; ++a) result.iso[a] = a;
    return result;
}

Frame random_frame(std::mt19937_64& rng, int max_points, const std::vector<Label>& alphabet,
                   double density) {
    std::uniform_int_distribution<int> size_dist(1, max_points);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int n = size_dist(rng);
    std::vector<Edge> edges;
    for (const Label& l : alphabet)
        for (PointId s = 0; s < n; ++s)
            for (PointId t = 0; t < n; ++t)
                if (coin(rng) < density) edges.push_back(Edge{s, t, l});
    return Frame(n, std::move(edges));
}

Diagram random_rooted_diagram(std::mt19937_64& rng, int max_points,
                              const std::vector<Label>& alphabet, double density) {
    std::uniform_int_distribution<int> size_dist(1, max_points);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int n = size_dist(rng);
    std::vector<Edge> edges;
    // spine first, so the diagram is rooted
    for (PointId p = 1; p < n; ++p) {
        std::uniform_int_distribution<int> src_dist(0, p - 1);
        std::uniform_int_distribution<int> label_dist(0, static_cast<int>(alphabet.size()) - 1);
        edges.push_back(Edge{src_dist(rng), p, alphabet[label_dist(rng)]});
    }
    for (const Label& l : alphabet)
        for (PointId s = 0; s < n; ++s)
            for (PointId t = 0; t < n; ++t)
                if (coin(rng) < density) edges.push_back(Edge{s, t, l});
    return Diagram(n, std::move(edges));
}

Valuation random_valuation(std::mt19937_64& rng, const std::vector<int>& variables,
                           int point_count) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Valuation v;
    for (int var : variables) {
        std::vector<PointId> pts;
        for (PointId p = 0; p < point_count; ++p)
            if (coin(rng) < 0.5) pts.push_back(p);
        v.assign(var, std::move(pts));
    }
    return v;
}

Valuation random_k_generated_valuation(std::mt19937_64& rng, int k, int m, int point_count) {
    std::vector<int> vars;
    for (int i = 1; i <= m; ++i) vars.push_back(i);
    std::shuffle(vars.begin(), vars.end(), rng);
    vars.resize(std::min<std::size_t>(vars.size(), static_cast<std::size_t>(k)));
    std::sort(vars.begin(), vars.end());
    return random_valuation(rng, vars, point_count);
}

}  // namespace mdl
