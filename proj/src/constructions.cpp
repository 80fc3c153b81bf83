#include "mdl/constructions.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace mdl {

Graph::Graph(int vertex_count, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count_ < 0) throw std::invalid_argument("negative vertex count");
    for (auto& [a, b] : edges_) {
        if (a < 0 || a >= vertex_count_ || b < 0 || b >= vertex_count_)
            throw std::invalid_argument("graph edge endpoint out of range");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Graph::adjacent(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
}

bool Graph::has_loop() const {
    for (const auto& [a, b] : edges_)
        if (a == b) return true;
    return false;
}

std::vector<int> Graph::neighbours(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v && a != v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int count = -1;
    std::vector<std::pair<int, int>> edges;

    auto fail = [&](int col, const std::string& msg) -> void {
        throw ParseError(line_no, col, msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = line.substr(0, line.find('#'));
        std::istringstream ls(stripped);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "graph") {
            if (count != -1) fail(1, "duplicate 'graph' header");
            if (!(ls >> count) || count < 0) fail(1, "expected 'graph <n>'");
        } else if (word == "edge") {
            if (count == -1) fail(1, "'graph <n>' header must come first");
            std::string a, dashes, b;
            if (!(ls >> a >> dashes >> b) || dashes != "--" || a.empty() || b.empty() ||
                a[0] != 'v' || b[0] != 'v')
                fail(1, "expected 'edge v<i> -- v<j>'");
            int va = 0, vb = 0;
            try {
                va = std::stoi(a.substr(1));
                vb = std::stoi(b.substr(1));
            } catch (const std::exception&) {
                fail(1, "expected 'edge v<i> -- v<j>'");
            }
            if (va >= count || vb >= count) fail(1, "dangling vertex reference");
            edges.emplace_back(va, vb);
        } else {
            fail(1, "unknown directive '" + word + "'");
        }
    }
    if (count == -1) throw ParseError(line_no, 1, "missing 'graph <n>' header");
    return Graph(count, std::move(edges));
}

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    return Graph(n, std::move(edges));
}

Graph mycielski(const Graph& g) {
    const int n = g.vertex_count();
    // originals 0..n-1, shadows n..2n-1, apex 2n
    std::vector<std::pair<int, int>> edges = g.edges();
    for (const auto& [a, b] : g.edges()) {
        edges.emplace_back(n + a, b);
        edges.emplace_back(n + b, a);
    }
    for (int v = 0; v < n; ++v) edges.emplace_back(n + v, 2 * n);
    return Graph(2 * n + 1, std::move(edges));
}

Graph graph_from_selector(const std::string& selector) {
    if (selector.rfind("complete:", 0) == 0) {
        int n = std::stoi(selector.substr(9));
        if (n < 0) throw std::invalid_argument("complete:<n> needs n >= 0");
        return complete_graph(n);
    }
    if (selector.rfind("mycielski:", 0) == 0)
        return mycielski(graph_from_selector(selector.substr(10)));
    if (selector.rfind("file:", 0) == 0) {
        std::ifstream in(selector.substr(5));
        if (!in) throw std::invalid_argument("cannot open graph file " + selector.substr(5));
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_graph(buf.str());
    }
    throw std::invalid_argument("unknown graph selector '" + selector +
                                "' (complete:<n>, mycielski:<base>, file:<path>)");
}

std::optional<std::vector<int>> find_colouring(const Graph& g, int colours) {
    if (colours < 0) return std::nullopt;
    if (g.has_loop()) return std::nullopt;
    const int n = g.vertex_count();
    std::vector<int> colour(n, 0);

    // most-constrained-first: static degree order is enough at this scale
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return g.neighbours(a).size() > g.neighbours(b).size();
    });

    std::function<bool(int)> assign = [&](int idx) -> bool {
        if (idx == n) return true;
        int v = order[idx];
        for (int c = 1; c <= colours; ++c) {
            bool ok = true;
            for (int u : g.neighbours(v))
                if (colour[u] == c) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            colour[v] = c;
            if (assign(idx + 1)) return true;
            colour[v] = 0;
        }
        return false;
    };
    if (!assign(0)) return std::nullopt;
    return colour;
}

std::optional<int> chromatic_number(const Graph& g, int budget_vertices) {
    if (g.has_loop()) return std::nullopt;
    if (g.vertex_count() > budget_vertices)
        throw BudgetExceeded("chromatic_number: graph exceeds the exact-search budget",
                             g.vertex_count());
    if (g.vertex_count() == 0) return 0;
    for (int n = 1; n <= g.vertex_count(); ++n)
        if (find_colouring(g, n)) return n;
    throw std::logic_error("chromatic_number: no colouring with |V| colours");
}

bool check_edge_lifting(const Graph& g_hi, const Graph& g_lo, const std::vector<int>& rho) {
    if (static_cast<int>(rho.size()) != g_hi.vertex_count())
        throw std::invalid_argument("check_edge_lifting: rho must be total on g_hi");
    for (int v : rho)
        if (v < 0 || v >= g_lo.vertex_count())
            throw std::invalid_argument("check_edge_lifting: rho image out of range");

    // surjective
    std::vector<bool> hit(g_lo.vertex_count(), false);
    for (int v : rho) hit[v] = true;
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return false;
    // homomorphism
    for (const auto& [a, b] : g_hi.edges())
        if (!g_lo.adjacent(rho[a], rho[b])) return false;
    // (E1) lifting, through both ends of every edge
    for (const auto& [x, y] : g_lo.edges()) {
        for (auto [from, to] : {std::pair{x, y}, std::pair{y, x}}) {
            for (int a = 0; a < g_hi.vertex_count(); ++a) {
                if (rho[a] != from) continue;
                bool lifted = false;
                for (int b : g_hi.neighbours(a))
                    if (rho[b] == to) {
                        lifted = true;
                        break;
                    }
                if (!lifted) return false;
            }
        }
    }
    return true;
}

std::string to_dot(const Graph& g, const std::string& graph_name) {
    std::ostringstream out;
    out << "graph \"" << graph_name << "\" {\n";
    for (int v = 0; v < g.vertex_count(); ++v) out << "  v" << v << ";\n";
    for (const auto& [a, b] : g.edges()) out << "  v" << a << " -- v" << b << ";\n";
    out << "}\n";
    return out.str();
}

Edge ConstructionBundle::selected_frame_edge() const {
    if (!selected) throw std::logic_error("bundle has no selected edge yet");
    return Edge{g[selected->src], g[selected->dst], selected->label};
}

ConstructionBundle build_f_plus(const Diagram& d) {
    if (!is_rooted(d)) throw std::invalid_argument("build_f_plus: not-rooted");
    if (!is_globally_minimal(d)) throw std::invalid_argument("build_f_plus: not-minimal");
    if (!has_inner_cycle(d)) throw std::invalid_argument("build_f_plus: no-inner-cycle");

    int r = 0;
    for (PointId p = 0; p < d.point_count(); ++p) r = std::max(r, rank(d, p));

    ChaseState ch = chase(d, r);
    const PointId circ = ch.frame.point_count();
    std::vector<Edge> edges = ch.frame.edges();
    for (const Label& l : d.frame().alphabet()) {
        for (PointId a : ch.active) edges.push_back(Edge{a, circ, l});
        edges.push_back(Edge{circ, circ, l});
    }

    ConstructionBundle bundle;
    bundle.diagram = d;
    bundle.f_plus = Frame(circ + 1, std::move(edges));
    bundle.w0 = ch.origin;
    bundle.reflexive_point = circ;
    bundle.g.resize(d.point_count());
    // the spine copy: the round-1 copy glued at c0 keeps the diagram's indices
    for (PointId p = 0; p < d.point_count(); ++p) bundle.g[p] = p;

    // structural sanity: g is an injective homomorphism rooted at w0
    for (const Edge& e : d.edges())
        if (!bundle.f_plus.has_edge(bundle.g[e.src], bundle.g[e.dst], e.label))
            throw std::logic_error("build_f_plus: g is not edge-preserving");
    return bundle;
}

ConstructionBundle select_edge_and_build_f_minus(ConstructionBundle bundle,
                                                 const SpanningTree& tree) {
    const Diagram& d = bundle.diagram;
    std::vector<Edge> candidates;
    for (const Edge& e : d.edges())
        if (!tree.contains(e) && edge_on_inner_cycle(d, e)) candidates.push_back(e);
    if (candidates.empty())
        throw std::logic_error("select_edge: no inner-cycle edge outside the spanning tree");
    // Deterministic selection order (dst, src, label); for the triangle
    // example this picks the d = 2, d' = 1 edge.
    std::sort(candidates.begin(), candidates.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.dst, a.src, a.label) < std::tie(b.dst, b.src, b.label);
    });
    bundle.selected = candidates.front();

    Edge removed = bundle.selected_frame_edge();
    std::vector<Edge> edges;
    for (const Edge& e : bundle.f_plus.edges())
        if (!(e == removed)) edges.push_back(e);
    if (edges.size() + 1 != bundle.f_plus.edges().size())
        throw std::logic_error("select_edge: selected edge missing from f_plus");
    bundle.f_minus = Frame(bundle.f_plus.point_count(), std::move(edges));
    return bundle;
}

namespace {

std::string describe_hom(const HomAssignment& h) {
    std::ostringstream out;
    for (std::size_t i = 0; i < h.size(); ++i)
        out << (i ? " " : "") << "x" << i << "->" << h[i];
    return out.str();
}

}  // namespace

Rank1Report verify_rank1(const Diagram& d, const ConstructionBundle& bundle) {
    if (!bundle.complete())
        throw std::invalid_argument("verify_rank1: bundle has no selected edge");
    Rank1Report report;
    const Frame& fp = bundle.f_plus;
    const Frame& fm = bundle.f_minus;
    const PointId w0 = bundle.w0;

    // C-i: the frames differ in exactly the selected edge.
    {
        Edge removed = bundle.selected_frame_edge();
        std::vector<Edge> difference;
        std::set_difference(fp.edges().begin(), fp.edges().end(), fm.edges().begin(),
                            fm.edges().end(), std::back_inserter(difference));
        bool ok = fp.point_count() == fm.point_count() && difference.size() == 1 &&
                  difference.front() == removed &&
                  fm.edges().size() + 1 == fp.edges().size();
        report.conditions.push_back(
            {"C-i", ok,
             "f_minus = f_plus - (" + std::to_string(removed.src) + "," +
                 std::to_string(removed.dst) + "," + removed.label.name + ")"});
    }

    // C-ii: e^D fails at w0 in f_minus.
    {
        auto hom = satisfies_e(fm, w0, d);
        report.conditions.push_back({"C-ii", !hom.has_value(),
                                     hom ? "unexpected witness: " + describe_hom(*hom)
                                         : "no root-anchored homomorphism"});
    }

    // C-iii: e^D holds at w0 in f_plus.
    {
        auto hom = satisfies_e(fp, w0, d);
        report.conditions.push_back({"C-iii", hom.has_value(),
                                     hom ? "witness: " + describe_hom(*hom) : "no witness"});
    }

    // C-iv: g(x_d) and g(x_d') connect in f_minus by an undirected path that
    // avoids w0 and stays inside the image of g.
    {
        std::set<PointId> avoid{w0};
        std::set<PointId> image(bundle.g.begin(), bundle.g.end());
        for (PointId p = 0; p < fm.point_count(); ++p)
            if (!image.count(p)) avoid.insert(p);
        Edge removed = bundle.selected_frame_edge();
        auto path = undirected_path(fm, removed.src, removed.dst, avoid);
        std::ostringstream detail;
        if (path) {
            detail << "path of length " << path->size();
            for (const UndirectedStep& s : *path)
                detail << " [" << s.from << (s.forward ? " -" : " <-") << s.label.name
                       << (s.forward ? "-> " : "- ") << s.to << "]";
        } else {
            detail << "no such path";
        }
        report.conditions.push_back({"C-iv", path.has_value(), detail.str()});
    }

    // C-v: every homomorphism has image exactly g's image and pulls the frame
    // edges among its image back to diagram edges.
    {
        std::vector<HomAssignment> homs = enumerate_homs(fp, w0, d);
        report.hom_count = homs.size();
        std::set<PointId> image(bundle.g.begin(), bundle.g.end());
        bool ok = true;
        std::string detail = std::to_string(homs.size()) + " homomorphism(s)";
        for (const HomAssignment& h : homs) {
            std::set<PointId> him(h.begin(), h.end());
            if (him != image) {
                ok = false;
                detail = "image mismatch for " + describe_hom(h);
                break;
            }
            for (int i = 0; i < d.point_count() && ok; ++i)
                for (int j = 0; j < d.point_count() && ok; ++j)
                    for (const Label& l : fp.alphabet())
                        if (fp.has_edge(h[i], h[j], l) &&
                            !d.frame().has_edge(i, j, l)) {
                            ok = false;
                            detail = "edge (" + std::to_string(h[i]) + "," +
                                     std::to_string(h[j]) + "," + l.name +
                                     ") does not pull back (5.2)";
                        }
            if (!ok) break;
        }
        report.conditions.push_back({"C-v", ok, detail});
    }

    // C-vi: e^D holds at every w != w0 in f_minus.
    {
        bool ok = true;
        std::string detail = "e^D holds at every non-root point";
        for (PointId w = 0; w < fm.point_count(); ++w) {
            if (w == w0) continue;
            if (!satisfies_e(fm, w, d)) {
                ok = false;
                detail = "fails at point " + std::to_string(w);
                break;
            }
        }
        report.conditions.push_back({"C-vi", ok, detail});
    }

    return report;
}

Pseudoproduct pseudoproduct(const ConstructionBundle& bundle, const Graph& g) {
    if (!bundle.complete())
        throw std::invalid_argument("pseudoproduct: bundle has no selected edge");
    const Frame& fp = bundle.f_plus;
    const Frame& fm = bundle.f_minus;
    const PointId w0 = bundle.w0;
    const int b = fp.point_count();
    const int nv = g.vertex_count();
    const Edge removed = bundle.selected_frame_edge();

    Pseudoproduct prod;
    prod.w0 = 0;
    prod.graph_vertices = nv;
    const int total = 1 + (b - 1) * nv;
    prod.pr.assign(total, w0);
    prod.h.assign(total, -1);
    for (PointId y = 1; y < b; ++y)
        for (int v = 0; v < nv; ++v) {
            prod.pr[prod.id(y, v)] = y;
            prod.h[prod.id(y, v)] = v;
        }

    // five-clause definition
    std::set<Edge> edges;
    for (const Edge& e : fm.edges()) {
        if (e.src == w0 && e.dst == w0) {
            edges.insert(Edge{0, 0, e.label});
        } else if (e.src == w0) {
            for (int v = 0; v < nv; ++v) edges.insert(Edge{0, prod.id(e.dst, v), e.label});
        } else if (e.dst == w0) {
            for (int v = 0; v < nv; ++v) edges.insert(Edge{prod.id(e.src, v), 0, e.label});
        } else {
            for (int v = 0; v < nv; ++v)
                edges.insert(Edge{prod.id(e.src, v), prod.id(e.dst, v), e.label});
        }
    }
    for (const auto& [v1, v2] : g.edges()) {
        edges.insert(Edge{prod.id(removed.src, v1), prod.id(removed.dst, v2), removed.label});
        edges.insert(Edge{prod.id(removed.src, v2), prod.id(removed.dst, v1), removed.label});
    }
    prod.frame = Frame(total, {edges.begin(), edges.end()});

    // independent projection characterisation; disagreement is a bug
    for (PointId eta = 0; eta < total; ++eta)
        for (PointId chi = 0; chi < total; ++chi)
            for (const Label& l : fp.alphabet()) {
                bool via_minus = fm.has_edge(prod.pr[eta], prod.pr[chi], l) &&
                                 (prod.h[eta] == prod.h[chi] || prod.h[eta] == -1 ||
                                  prod.h[chi] == -1);
                bool via_plus = !fm.has_edge(prod.pr[eta], prod.pr[chi], l) &&
                                fp.has_edge(prod.pr[eta], prod.pr[chi], l) &&
                                prod.h[eta] != -1 && prod.h[chi] != -1 &&
                                g.adjacent(prod.h[eta], prod.h[chi]);
                if ((via_minus || via_plus) != prod.frame.has_edge(eta, chi, l))
                    throw std::logic_error(
                        "pseudoproduct: five-clause and projection definitions disagree");
            }
    return prod;
}

Valuation refuting_valuation(const ConstructionBundle& bundle, const Graph& g,
                             const std::vector<int>& colouring, int colour_count) {
    if (static_cast<int>(colouring.size()) != g.vertex_count())
        throw std::invalid_argument("refuting_valuation: colouring must be total");
    for (const auto& [a, b] : g.edges())
        if (colouring[a] == colouring[b])
            throw std::invalid_argument("refuting_valuation: colouring is not proper");
    const int b = bundle.b();
    const int n_colours = colour_count;
    Pseudoproduct prod = pseudoproduct(bundle, g);

    Valuation theta;
    theta.assign(n_colours * (b - 1) + 1, {prod.w0});  // p_0, numbered last
    for (PointId y = 1; y < b; ++y)
        for (int c = 1; c <= n_colours; ++c) {
            std::vector<PointId> pts;
            for (int v = 0; v < g.vertex_count(); ++v)
                if (colouring[v] == c) pts.push_back(prod.id(y, v));
            theta.assign((y - 1) * n_colours + c, std::move(pts));
        }
    return theta;
}

C1Report c1_sample_check(const ConstructionBundle& bundle, const Graph& g, int k, int m,
                         int samples, std::uint64_t seed) {
    C1Report report;
    report.samples = samples;
    report.k = k;
    report.m = m;

    // 2^(b k), saturating
    std::uint64_t threshold = 1;
    for (int i = 0; i < bundle.b() * k && threshold <= (std::uint64_t{1} << 62); ++i)
        threshold <<= 1;
    report.threshold = threshold;

    // chromatic evidence: chi(G) must exceed the threshold
    bool evidence = false;
    if (g == complete_graph(g.vertex_count())) {
        evidence = static_cast<std::uint64_t>(g.vertex_count()) > threshold;
    } else {
        std::optional<int> chi = chromatic_number(g);
        evidence = chi && static_cast<std::uint64_t>(*chi) > threshold;
    }
    if (!evidence)
        throw std::invalid_argument(
            "c1_sample_check: no chromatic evidence that G needs more than 2^(bk) colours");

    Pseudoproduct prod = pseudoproduct(bundle, g);
    AxiomSpec spec = AxiomSpec::make(bundle.diagram);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        Valuation v = random_k_generated_valuation(rng, k, m, prod.frame.point_count());
        for (PointId w = 0; w < prod.frame.point_count(); ++w) {
            if (!gamma_semantic(prod.frame, w, spec, m, v)) {
                report.counterexample = {w, v};
                report.passed = false;
                return report;
            }
        }
    }
    report.passed = true;
    return report;
}

Complete1Report verify_complete1(const ConstructionBundle& bundle, int alpha_max) {
    if (alpha_max < 1) throw std::invalid_argument("verify_complete1: alpha_max must be >= 1");
    Complete1Report report;
    report.passed = true;
    for (int alpha = 1; alpha <= alpha_max; ++alpha) {
        Pseudoproduct prod = pseudoproduct(bundle, complete_graph(alpha));
        bool refuted = !satisfies_e(prod.frame, prod.w0, bundle.diagram).has_value();
        report.refuted.emplace_back(alpha, refuted);
        report.passed = report.passed && refuted;
    }
    return report;
}

namespace {

std::string bundle_node_name(const ConstructionBundle& bundle, PointId p) {
    for (std::size_t i = 0; i < bundle.g.size(); ++i)
        if (bundle.g[i] == p) return "g_x" + std::to_string(i);
    if (p == bundle.reflexive_point) return "circ";
    return "w" + std::to_string(p);
}

}  // namespace

std::string to_dot(const ConstructionBundle& bundle) {
    std::ostringstream out;
    out << "digraph \"bundle\" {\n  rankdir=LR;\n";
    for (PointId p = 0; p < bundle.f_plus.point_count(); ++p)
        out << "  " << bundle_node_name(bundle, p) << ";\n";
    std::optional<Edge> removed;
    if (bundle.complete()) removed = bundle.selected_frame_edge();
    for (const Edge& e : bundle.f_plus.edges()) {
        out << "  " << bundle_node_name(bundle, e.src) << " -> "
            << bundle_node_name(bundle, e.dst) << " [label=\"" << e.label.name << "\"";
        if (removed && e == *removed) out << " style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const Pseudoproduct& prod) {
    static const char* palette[] = {"lightblue",  "lightyellow", "lightpink",
                                    "lightgreen", "lightgrey",   "orange",
                                    "cyan",       "violet"};
    std::ostringstream out;
    out << "digraph \"pseudoproduct\" {\n  rankdir=LR;\n";
    out << "  w0 [style=filled fillcolor=white];\n";
    for (PointId p = 1; p < prod.frame.point_count(); ++p)
        out << "  p" << prod.pr[p] << "_v" << prod.h[p] << " [style=filled fillcolor="
            << palette[prod.h[p] % 8] << "];\n";
    auto name = [&](PointId p) {
        if (p == prod.w0) return std::string("w0");
        return "p" + std::to_string(prod.pr[p]) + "_v" + std::to_string(prod.h[p]);
    };
    for (const Edge& e : prod.frame.edges())
        out << "  " << name(e.src) << " -> " << name(e.dst) << " [label=\"" << e.label.name
            << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace mdl
