#include <doctest.h>

#include <random>
#include <set>

#include "mdl/constructions.hpp"

using namespace mdl;

namespace {

const Label kA{"a"};

Diagram get(const std::string& name) {
    auto d = catalog_lookup(name);
    REQUIRE(d.has_value());
    return *d;
}

ConstructionBundle bundle_for(const std::string& name) {
    Diagram d = get(name);
    return select_edge_and_build_f_minus(build_f_plus(d), spanning_tree(d));
}

}  // namespace

TEST_CASE("graph DSL and basics") {
    Graph g = parse_graph("graph 3\nedge v0 -- v1\nedge v1 -- v2\n# comment\n");
    CHECK(g.vertex_count() == 3);
    CHECK(g.adjacent(0, 1));
    CHECK(g.adjacent(1, 0));
    CHECK_FALSE(g.adjacent(0, 2));
    CHECK_FALSE(g.has_loop());
    CHECK(parse_graph("graph 1\nedge v0 -- v0\n").has_loop());
    CHECK_THROWS_AS(parse_graph("graph 2\nedge v0 -- v5\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("edge v0 -- v1\n"), ParseError);
}

TEST_CASE("graph selectors") {
    CHECK(graph_from_selector("complete:4") == complete_graph(4));
    CHECK(graph_from_selector("mycielski:complete:2") == mycielski(complete_graph(2)));
    CHECK_THROWS_AS(graph_from_selector("banana:3"), std::invalid_argument);
}

TEST_CASE("chromatic numbers of complete graphs") {
    for (int n = 1; n <= 6; ++n) {
        auto chi = chromatic_number(complete_graph(n));
        REQUIRE(chi.has_value());
        CHECK(*chi == n);
    }
    CHECK(chromatic_number(Graph(1, {{0, 0}})) == std::nullopt);  // loop: undefined
    CHECK_THROWS_AS(chromatic_number(complete_graph(13)), BudgetExceeded);
}

TEST_CASE("mycielski of K_2 is the 5-cycle") {
    Graph c5 = mycielski(complete_graph(2));
    CHECK(c5.vertex_count() == 5);
    CHECK(c5.edges().size() == 5);
    // two-regular and triangle-free
    for (int v = 0; v < 5; ++v) CHECK(c5.neighbours(v).size() == 2);
    CHECK_FALSE(find_colouring(c5, 2).has_value());  // odd cycle
    CHECK(chromatic_number(c5) == 3);
    // the Mycielski step preserves the chromatic bump once more
    CHECK(chromatic_number(mycielski(c5)) == 4);
}

TEST_CASE("find_colouring is proper when it exists") {
    Graph c5 = mycielski(complete_graph(2));
    auto col = find_colouring(c5, 3);
    REQUIRE(col.has_value());
    for (const auto& [a, b] : c5.edges()) CHECK((*col)[a] != (*col)[b]);
}

TEST_CASE("check_edge_lifting") {
    Graph k3 = complete_graph(3);
    CHECK(check_edge_lifting(k3, k3, {0, 1, 2}));  // identity

    // a tower step extended identically over a disjoint K_3 summand: two
    // copies of K_3 folding onto one
    std::vector<std::pair<int, int>> edges = k3.edges();
    for (const auto& [a, b] : k3.edges()) edges.emplace_back(a + 3, b + 3);
    Graph two_copies(6, edges);
    CHECK(check_edge_lifting(two_copies, k3, {0, 1, 2, 0, 1, 2}));

    // a proper colouring is a homomorphism but does not lift edges: in any
    // 3-colouring of C_5 some vertex misses a colour among its neighbours
    Graph c5 = mycielski(complete_graph(2));
    auto col = find_colouring(c5, 3);
    REQUIRE(col.has_value());
    std::vector<int> colour_map;
    for (int v = 0; v < 5; ++v) colour_map.push_back((*col)[v] - 1);
    CHECK_FALSE(check_edge_lifting(c5, k3, colour_map));

    // collapsing K_2 to a single loop-free vertex is not even a homomorphism
    CHECK_FALSE(check_edge_lifting(complete_graph(2), Graph(1, {}), {0, 0}));
    CHECK_THROWS_AS(check_edge_lifting(k3, k3, {0, 1}), std::invalid_argument);
}

TEST_CASE("build_f_plus preconditions are reported by name") {
    // D_refroot has an inner cycle but is not minimal
    CHECK_THROWS_WITH_AS(build_f_plus(get("D_refroot")), doctest::Contains("not-minimal"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_f_plus(Diagram(2, {{1, 1, kA}})),
                         doctest::Contains("not-rooted"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_f_plus(get("D_sym")), doctest::Contains("no-inner-cycle"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_f_plus(get("D_chain")), doctest::Contains("not-minimal"),
                         std::invalid_argument);
}

TEST_CASE("build_f_plus of the triangle matches figure 4") {
    ConstructionBundle b = build_f_plus(get("D_tri"));
    CHECK(b.b() == 4);
    CHECK(b.w0 == 0);
    CHECK(b.reflexive_point == 3);
    CHECK(b.g == std::vector<PointId>{0, 1, 2});
    CHECK(b.f_plus.edges() ==
          std::vector<Edge>{{0, 1, kA},
                            {0, 2, kA},
                            {1, 2, kA},
                            {1, 3, kA},
                            {2, 1, kA},
                            {2, 3, kA},
                            {3, 3, kA}});
}

TEST_CASE("build_f_plus of the reflexive successor diagram") {
    ConstructionBundle b = build_f_plus(get("D_refsucc"));
    CHECK(b.b() == 3);
    CHECK(b.f_plus.edges() ==
          std::vector<Edge>{{0, 1, kA}, {1, 1, kA}, {1, 2, kA}, {2, 2, kA}});
}

TEST_CASE("build_f_plus of the figure-3 diagram: chase saturation size") {
    ConstructionBundle b = build_f_plus(get("D_fig3"));
    // regression value: 1 + 3 + 9 + 27 chase points plus the reflexive point
    CHECK(b.b() == 41);
    CHECK(satisfies_e_globally(b.f_plus, get("D_fig3")));
}

TEST_CASE("edge selection is deterministic and matches the worked example") {
    ConstructionBundle tri = bundle_for("D_tri");
    REQUIRE(tri.selected.has_value());
    CHECK(*tri.selected == Edge{2, 1, kA});  // d = 2, d' = 1

    ConstructionBundle again = bundle_for("D_tri");
    CHECK(*again.selected == *tri.selected);

    ConstructionBundle refsucc = bundle_for("D_refsucc");
    CHECK(*refsucc.selected == Edge{1, 1, kA});
}

TEST_CASE("bundle self-consistency: one-edge difference") {
    for (const std::string name : {"D_refsucc", "D_tri", "D_fig3"}) {
        ConstructionBundle b = bundle_for(name);
        CHECK(b.f_plus.point_count() == b.f_minus.point_count());
        CHECK(b.f_plus.edges().size() == b.f_minus.edges().size() + 1);
        CHECK(b.f_plus.has_edge(b.selected_frame_edge()));
        CHECK_FALSE(b.f_minus.has_edge(b.selected_frame_edge()));
        // g stays injective
        std::set<PointId> image(b.g.begin(), b.g.end());
        CHECK(image.size() == b.g.size());
    }
}

TEST_CASE("verify_rank1 passes on the negative catalog diagrams") {
    for (const std::string name : {"D_refsucc", "D_tri", "D_fig3"}) {
        Diagram d = get(name);
        ConstructionBundle b = bundle_for(name);
        Rank1Report report = verify_rank1(d, b);
        INFO(name);
        for (const Rank1Condition& c : report.conditions) {
            INFO(c.name, ": ", c.detail);
            CHECK(c.passed);
        }
    }
    CHECK(verify_rank1(get("D_tri"), bundle_for("D_tri")).hom_count == 2);
    CHECK(verify_rank1(get("D_fig3"), bundle_for("D_fig3")).hom_count == 1);
}

TEST_CASE("the naive reflexive closure fails C-ii on the figure-3 diagram") {
    Diagram d = get("D_fig3");
    // reflexive point on top of the diagram itself, fed from every non-root
    std::vector<Edge> edges = d.edges();
    PointId circ = d.point_count();
    for (PointId p = 1; p < d.point_count(); ++p) edges.push_back({p, circ, kA});
    edges.push_back({circ, circ, kA});

    ConstructionBundle naive;
    naive.diagram = d;
    naive.f_plus = Frame(circ + 1, edges);
    naive.w0 = 0;
    naive.reflexive_point = circ;
    naive.g.resize(d.point_count());
    for (PointId p = 0; p < d.point_count(); ++p) naive.g[p] = p;
    naive.selected = Edge{3, 2, kA};
    std::vector<Edge> minus_edges;
    for (const Edge& e : naive.f_plus.edges())
        if (!(e == Edge{3, 2, kA})) minus_edges.push_back(e);
    naive.f_minus = Frame(circ + 1, minus_edges);

    Rank1Report report = verify_rank1(d, naive);
    bool c2_passed = true;
    for (const Rank1Condition& c : report.conditions)
        if (c.name == "C-ii") c2_passed = c.passed;
    CHECK_FALSE(c2_passed);
    // the repair routes the x2/x3 cycle through the reflexive point
    CHECK(satisfies_e(naive.f_minus, 0, d).has_value());
}

TEST_CASE("pseudoproduct with K_1 is f_minus itself") {
    for (const std::string name : {"D_refsucc", "D_tri", "D_fig3"}) {
        ConstructionBundle b = bundle_for(name);
        Pseudoproduct prod = pseudoproduct(b, complete_graph(1));
        CHECK(prod.frame == b.f_minus);
    }
}

TEST_CASE("pseudoproduct of the triangle with K_2 has the figure-7 shape") {
    ConstructionBundle b = bundle_for("D_tri");
    Pseudoproduct prod = pseudoproduct(b, complete_graph(2));
    CHECK(prod.frame.point_count() == 7);  // 1 + 3 * 2
    // w0 sees both copies of each of g(x1), g(x2)
    CHECK(prod.frame.has_edge(0, prod.id(1, 0), kA));
    CHECK(prod.frame.has_edge(0, prod.id(1, 1), kA));
    CHECK(prod.frame.has_edge(0, prod.id(2, 0), kA));
    CHECK(prod.frame.has_edge(0, prod.id(2, 1), kA));
    // in-layer edge g(x1) -> g(x2) survives; the deleted edge crosses layers
    CHECK(prod.frame.has_edge(prod.id(1, 0), prod.id(2, 0), kA));
    CHECK_FALSE(prod.frame.has_edge(prod.id(2, 0), prod.id(1, 0), kA));
    CHECK(prod.frame.has_edge(prod.id(2, 0), prod.id(1, 1), kA));
    CHECK(prod.frame.has_edge(prod.id(2, 1), prod.id(1, 0), kA));
}

TEST_CASE("pseudoproduct carrier size") {
    ConstructionBundle b = bundle_for("D_refsucc");
    for (int n = 1; n <= 5; ++n) {
        Pseudoproduct prod = pseudoproduct(b, complete_graph(n));
        CHECK(prod.frame.point_count() == 1 + (b.b() - 1) * n);
    }
}

TEST_CASE("refuting_valuation refutes gamma at w0 (C2)") {
    // D_tri: b = 4, K_2 two-colourable, so gamma_7 fails at w0
    {
        Diagram d = get("D_tri");
        ConstructionBundle b = bundle_for("D_tri");
        Graph k2 = complete_graph(2);
        std::vector<int> colouring = *find_colouring(k2, 2);
        Valuation theta = refuting_valuation(b, k2, colouring, 2);
        Pseudoproduct prod = pseudoproduct(b, k2);
        AxiomSpec spec = AxiomSpec::make(d);
        CHECK((b.b() - 1) * 2 + 1 == 7);
        CHECK_FALSE(gamma_semantic(prod.frame, prod.w0, spec, 7, theta));
    }
    // D_refsucc: b = 3, gamma_5
    {
        Diagram d = get("D_refsucc");
        ConstructionBundle b = bundle_for("D_refsucc");
        Graph k2 = complete_graph(2);
        Valuation theta = refuting_valuation(b, k2, *find_colouring(k2, 2), 2);
        Pseudoproduct prod = pseudoproduct(b, k2);
        CHECK_FALSE(gamma_semantic(prod.frame, prod.w0, AxiomSpec::make(d), 5, theta));
    }
    // K_1 with the degenerate 1-colouring refutes gamma_b
    {
        Diagram d = get("D_refsucc");
        ConstructionBundle b = bundle_for("D_refsucc");
        Graph k1 = complete_graph(1);
        Valuation theta = refuting_valuation(b, k1, {1}, 1);
        Pseudoproduct prod = pseudoproduct(b, k1);
        CHECK_FALSE(gamma_semantic(prod.frame, prod.w0, AxiomSpec::make(d), b.b(), theta));
    }
}

TEST_CASE("the expanded gamma_7 AST also fails at w0 under the C2 valuation") {
    Diagram d = get("D_tri");
    ConstructionBundle b = bundle_for("D_tri");
    Graph k2 = complete_graph(2);
    Valuation theta = refuting_valuation(b, k2, *find_colouring(k2, 2), 2);
    Pseudoproduct prod = pseudoproduct(b, k2);
    Formula gamma7 = gamma_m(AxiomSpec::make(d), 7);  // 343 disjuncts
    CHECK_FALSE(eval(prod.frame, theta, prod.w0, gamma7));
    // and the guard alone is satisfied, so the consequent is what fails
    CHECK(eval(prod.frame, theta, prod.w0, gamma7.children()[0]));
}

TEST_CASE("C2 contract across colourings of several graphs") {
    for (const std::string name : {"D_refsucc", "D_tri"}) {
        Diagram d = get(name);
        ConstructionBundle b = bundle_for(name);
        AxiomSpec spec = AxiomSpec::make(d);
        for (const Graph& g :
             {complete_graph(2), complete_graph(3), mycielski(complete_graph(2))}) {
            std::optional<int> chi = chromatic_number(g);
            REQUIRE(chi.has_value());
            std::vector<int> colouring = *find_colouring(g, *chi);
            int m = *chi * (b.b() - 1) + 1;
            Valuation theta = refuting_valuation(b, g, colouring, *chi);
            Pseudoproduct prod = pseudoproduct(b, g);
            INFO(name, " with ", g.vertex_count(), " vertices, m=", m);
            CHECK_FALSE(gamma_semantic(prod.frame, prod.w0, spec, m, theta));
        }
    }
}

TEST_CASE("an edge-lifting graph map induces a p-morphism of pseudoproducts") {
    ConstructionBundle b = bundle_for("D_tri");
    Graph lo = complete_graph(3);
    std::vector<std::pair<int, int>> edges = lo.edges();
    for (const auto& [x, y] : lo.edges()) edges.emplace_back(x + 3, y + 3);
    Graph hi(6, edges);
    std::vector<int> rho = {0, 1, 2, 0, 1, 2};
    REQUIRE(check_edge_lifting(hi, lo, rho));

    Pseudoproduct top = pseudoproduct(b, hi);
    Pseudoproduct bottom = pseudoproduct(b, lo);
    std::vector<PointId> map(top.frame.point_count());
    map[top.w0] = bottom.w0;
    for (PointId y = 1; y < b.b(); ++y)
        for (int v = 0; v < hi.vertex_count(); ++v)
            map[top.id(y, v)] = bottom.id(y, rho[v]);
    CHECK(is_pmorphism(top.frame, bottom.frame, map));

    // without (E1) the induced map does not lift: map C_5 onto K_3 through a
    // proper colouring and the backward clause breaks
    Graph c5 = mycielski(complete_graph(2));
    std::vector<int> colour_map;
    for (int v = 0; v < 5; ++v) colour_map.push_back((*find_colouring(c5, 3))[v] - 1);
    Pseudoproduct c5_top = pseudoproduct(b, c5);
    std::vector<PointId> bad(c5_top.frame.point_count());
    bad[c5_top.w0] = bottom.w0;
    for (PointId y = 1; y < b.b(); ++y)
        for (int v = 0; v < 5; ++v) bad[c5_top.id(y, v)] = bottom.id(y, colour_map[v]);
    CHECK_FALSE(is_pmorphism(c5_top.frame, bottom.frame, bad));
}

TEST_CASE("C-iv path for the triangle is the single backward step") {
    ConstructionBundle b = bundle_for("D_tri");
    Edge removed = b.selected_frame_edge();
    std::set<PointId> avoid{b.w0};
    for (PointId p = 0; p < b.f_minus.point_count(); ++p)
        if (std::find(b.g.begin(), b.g.end(), p) == b.g.end()) avoid.insert(p);
    auto path = undirected_path(b.f_minus, removed.src, removed.dst, avoid);
    REQUIRE(path.has_value());
    REQUIRE(path->size() == 1);
    CHECK((*path)[0].from == b.g[2]);
    CHECK((*path)[0].to == b.g[1]);
    CHECK_FALSE((*path)[0].forward);  // rides the surviving g(x1) -> g(x2) edge backwards
}

TEST_CASE("refuting_valuation rejects improper colourings") {
    ConstructionBundle b = bundle_for("D_tri");
    CHECK_THROWS_AS(refuting_valuation(b, complete_graph(2), {1, 1}, 1),
                    std::invalid_argument);
}

TEST_CASE("c1_sample_check quick run") {
    ConstructionBundle b = bundle_for("D_refsucc");
    // K_9 needs 9 > 2^(3*1) = 8 colours
    C1Report report = c1_sample_check(b, complete_graph(9), /*k=*/1, /*m=*/2,
                                      /*samples=*/50, /*seed=*/7);
    CHECK(report.passed);
    CHECK(report.threshold == 8);
    CHECK_FALSE(report.counterexample.has_value());

    // no chromatic evidence: K_8 is 8-colourable
    CHECK_THROWS_AS(c1_sample_check(b, complete_graph(8), 1, 2, 10, 7),
                    std::invalid_argument);
}

TEST_CASE("the empty valuation satisfies gamma everywhere on the product") {
    Diagram d = get("D_refsucc");
    ConstructionBundle b = bundle_for("D_refsucc");
    Pseudoproduct prod = pseudoproduct(b, complete_graph(3));
    AxiomSpec spec = AxiomSpec::make(d);
    for (PointId w = 0; w < prod.frame.point_count(); ++w)
        CHECK(gamma_semantic(prod.frame, w, spec, 2, Valuation{}));
}

TEST_CASE("verify_complete1 on small alphas, with the C-vi cross-check") {
    for (const std::string name : {"D_refsucc", "D_tri"}) {
        Diagram d = get(name);
        ConstructionBundle b = bundle_for(name);
        Complete1Report report = verify_complete1(b, 4);
        CHECK(report.passed);
        CHECK(report.refuted.size() == 4);
        // non-root points all satisfy e^D in the same pseudoproducts
        Pseudoproduct prod = pseudoproduct(b, complete_graph(3));
        for (PointId w = 1; w < prod.frame.point_count(); ++w)
            CHECK(satisfies_e(prod.frame, w, d).has_value());
    }
}

TEST_CASE("the C1 proof's bisimulation between the dagger frame and the product") {
    // D_tri with K_2; theta is 1-generated and constant across layers, so the
    // two vertices of the edge {0, 1} share a colour pattern.
    Diagram d = get("D_tri");
    ConstructionBundle b = bundle_for("D_tri");
    Graph k2 = complete_graph(2);
    Pseudoproduct prod = pseudoproduct(b, k2);

    Valuation theta;
    theta.assign(1, {prod.id(1, 0), prod.id(1, 1)});  // p1 on the whole layer of g(x1)

    // dagger frame: the product plus a fresh copy of f_plus sharing w0
    const int base = prod.frame.point_count();          // 7
    auto dagger_id = [&](PointId y) { return base + y - 1; };  // y in 1..b-1
    std::vector<Edge> edges = prod.frame.edges();
    for (const Edge& e : b.f_plus.edges()) {
        PointId s = e.src == b.w0 ? 0 : dagger_id(e.src);
        PointId t = e.dst == b.w0 ? 0 : dagger_id(e.dst);
        edges.push_back({s, t, e.label});
    }
    Frame dagger(base + b.b() - 1, edges);

    Valuation theta_dagger = theta;
    theta_dagger.assign(1, {prod.id(1, 0), prod.id(1, 1), dagger_id(1)});

    std::vector<std::pair<PointId, PointId>> z;
    for (PointId p = 0; p < base; ++p) z.push_back({p, p});
    for (PointId y = 1; y < b.b(); ++y) {
        z.push_back({dagger_id(y), prod.id(y, 0)});
        z.push_back({dagger_id(y), prod.id(y, 1)});
    }
    CHECK(is_bisimulation(dagger, 0, prod.frame, 0, z, &theta_dagger, &theta));
}

TEST_CASE("DOT exports carry the stable bundle names") {
    ConstructionBundle b = bundle_for("D_tri");
    std::string dot = to_dot(b);
    CHECK(dot.find("g_x0") != std::string::npos);
    CHECK(dot.find("circ") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);

    std::string pdot = to_dot(pseudoproduct(b, complete_graph(2)));
    CHECK(pdot.find("w0") != std::string::npos);
    CHECK(pdot.find("fillcolor") != std::string::npos);
}
