#include "mdl/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace mdl {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Cursor(const std::string& t) : text(t) {}

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_space_and_comments() {
        while (!done()) {
            char c = peek();
            if (c == '#') {
                while (!done() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(line, col, message);
    }

    void expect_word(const std::string& word) {
        for (char c : word) {
            if (done() || peek() != c) fail("expected '" + word + "'");
            advance();
        }
    }

    bool try_word(const std::string& word) {
        std::size_t save_pos = pos;
        int save_line = line, save_col = col;
        for (char c : word) {
            if (done() || peek() != c) {
                pos = save_pos;
                line = save_line;
                col = save_col;
                return false;
            }
            advance();
        }
        return true;
    }

    int read_nat() {
        if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected a number");
        long value = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + (peek() - '0');
            if (value > 1'000'000) fail("number too large");
            advance();
        }
        return static_cast<int>(value);
    }

    std::string read_identifier() {
        std::string out;
        while (!done()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(c);
                advance();
            } else {
                break;
            }
        }
        if (out.empty()) fail("expected an identifier");
        return out;
    }

    void skip_blanks() {
        while (!done() && (peek() == ' ' || peek() == '\t')) advance();
    }
};

struct RawGraphText {
    int count = 0;
    std::vector<Edge> edges;
    std::vector<std::string> warnings;
};

// Shared line scanner for the diagram/frame DSL ("points <n>" header,
// "edge x<i> -<label>-> x<j>" lines).
RawGraphText parse_pointed_dsl(const std::string& text) {
    Cursor cur(text);
    RawGraphText raw;

    cur.skip_space_and_comments();
    cur.expect_word("points");
    cur.skip_blanks();
    raw.count = cur.read_nat();
    if (raw.count < 1) cur.fail("point count must be positive");

    auto read_point = [&](const char* what) {
        cur.skip_blanks();
        if (!cur.try_word("x")) cur.fail(std::string("expected ") + what + " 'x<i>'");
        int idx = cur.read_nat();
        if (idx >= raw.count)
            cur.fail("dangling point reference x" + std::to_string(idx) +
                     " (only " + std::to_string(raw.count) + " points declared)");
        return idx;
    };

    std::set<Edge> seen;
    while (true) {
        cur.skip_space_and_comments();
        if (cur.done()) break;
        int at_line = cur.line;
        cur.expect_word("edge");
        int src = read_point("source point");
        cur.skip_blanks();
        cur.expect_word("-");
        std::string label = cur.read_identifier();
        cur.expect_word("->");
        int dst = read_point("target point");
        Edge e{src, dst, Label{label}};
        if (!seen.insert(e).second) {
            raw.warnings.push_back("line " + std::to_string(at_line) +
                                   ": duplicate edge x" + std::to_string(src) + " -" +
                                   label + "-> x" + std::to_string(dst) +
                                   " (deduplicated)");
        } else {
            raw.edges.push_back(e);
        }
    }
    return raw;
}

}  // namespace

ParsedDiagram parse_diagram(const std::string& text) {
    RawGraphText raw = parse_pointed_dsl(text);
    return ParsedDiagram{Diagram(raw.count, std::move(raw.edges)), std::move(raw.warnings)};
}

Frame parse_frame(const std::string& text) {
    RawGraphText raw = parse_pointed_dsl(text);
    return Frame(raw.count, std::move(raw.edges));
}

std::string to_dsl(const Diagram& d) {
    std::ostringstream out;
    out << "points " << d.point_count() << "\n";
    for (const Edge& e : d.edges())
        out << "edge x" << e.src << " -" << e.label.name << "-> x" << e.dst << "\n";
    return out.str();
}

bool is_rooted(const Diagram& d) {
    std::vector<int> dist = distances_from(d.frame(), Diagram::kRoot);
    return std::none_of(dist.begin(), dist.end(), [](int v) { return v == -1; });
}

int rank(const Diagram& d, PointId x) {
    if (!is_rooted(d)) throw std::invalid_argument("rank: diagram is not rooted");
    return distance(d.frame(), Diagram::kRoot, x);
}

std::set<PointId> del_set(const Diagram& d, PointId x) {
    if (x == Diagram::kRoot) throw std::invalid_argument("del_set: x must not be the root");
    // Reachability from the root with x removed.
    std::vector<bool> seen(d.point_count(), false);
    seen[x] = true;  // blocked
    std::deque<PointId> queue{Diagram::kRoot};
    seen[Diagram::kRoot] = true;
    while (!queue.empty()) {
        PointId p = queue.front();
        queue.pop_front();
        for (const Edge& e : d.frame().out_edges(p))
            if (!seen[e.dst]) {
                seen[e.dst] = true;
                queue.push_back(e.dst);
            }
    }
    std::set<PointId> out;
    for (PointId p = 0; p < d.point_count(); ++p)
        if (p != x && !seen[p] && distance(d.frame(), Diagram::kRoot, p) != -1)
            out.insert(p);
    return out;
}

std::vector<Edge> SpanningTree::children(PointId p) const {
    std::vector<Edge> out;
    for (std::size_t c = 1; c < parent.size(); ++c)
        if (parent[c].src == p) out.push_back(parent[c]);
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.label, a.dst) < std::tie(b.label, b.dst);
    });
    return out;
}

std::vector<Edge> SpanningTree::edges() const {
    std::vector<Edge> out(parent.begin() + 1, parent.end());
    std::sort(out.begin(), out.end());
    return out;
}

SpanningTree spanning_tree(const Diagram& d) {
    if (!is_rooted(d)) throw std::invalid_argument("spanning_tree: diagram is not rooted");
    std::vector<int> depth = distances_from(d.frame(), Diagram::kRoot);

    SpanningTree tree;
    tree.parent.assign(d.point_count(), Edge{});
    for (PointId y = 1; y < d.point_count(); ++y) {
        tree.depth = std::max(tree.depth, depth[y]);
        // Least (src index, label name) edge arriving from the previous level.
        bool found = false;
        Edge best;
        for (const Edge& e : d.edges()) {
            if (e.dst != y || depth[e.src] != depth[y] - 1) continue;
            if (!found || std::tie(e.src, e.label) < std::tie(best.src, best.label)) {
                best = e;
                found = true;
            }
        }
        tree.parent[y] = best;
    }
    return tree;
}

bool is_valid_spanning_tree(const Diagram& d, const SpanningTree& t) {
    if (static_cast<int>(t.parent.size()) != d.point_count()) return false;
    for (PointId y = 1; y < d.point_count(); ++y) {
        const Edge& e = t.parent[y];
        if (e.dst != y) return false;
        if (!d.has_edge(e)) return false;          // subset of diagram edges
        if (e.dst == Diagram::kRoot) return false; // nothing enters the root
    }
    // Unique directed path from the root: following parents must reach the
    // root without cycles.
    for (PointId y = 1; y < d.point_count(); ++y) {
        PointId p = y;
        int steps = 0;
        while (p != Diagram::kRoot) {
            p = t.parent[p].src;
            if (++steps > d.point_count()) return false;
        }
    }
    return true;
}

namespace {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    // Returns false if a and b were already connected.
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

bool has_inner_cycle(const Diagram& d) {
    UnionFind uf(d.point_count());
    for (const Edge& e : d.edges()) {
        if (e.src == Diagram::kRoot || e.dst == Diagram::kRoot) continue;
        if (e.src == e.dst) return true;          // loop
        if (!uf.unite(e.src, e.dst)) return true; // parallel identity or cycle
    }
    return false;
}

bool edge_on_inner_cycle(const Diagram& d, const Edge& e) {
    if (e.src == Diagram::kRoot || e.dst == Diagram::kRoot) return false;
    if (!d.has_edge(e)) return false;
    if (e.src == e.dst) return true;
    // e lies on an inner cycle iff its endpoints stay connected (over non-root
    // points) once e itself is removed.
    UnionFind uf(d.point_count());
    for (const Edge& other : d.edges()) {
        if (other == e) continue;
        if (other.src == Diagram::kRoot || other.dst == Diagram::kRoot) continue;
        uf.unite(other.src, other.dst);
    }
    return uf.find(e.src) == uf.find(e.dst);
}

Diagram delete_edge(const Diagram& d, const Edge& e) {
    if (!d.has_edge(e)) throw std::invalid_argument("delete_edge: edge not present");
    std::vector<Edge> edges;
    edges.reserve(d.edges().size() - 1);
    for (const Edge& other : d.edges())
        if (!(other == e)) edges.push_back(other);
    return Diagram(d.point_count(), std::move(edges));
}

std::optional<std::vector<UndirectedStep>> undirected_path(
    const Frame& f, PointId y, PointId z, const std::set<PointId>& avoid) {
    if (y == z) return std::vector<UndirectedStep>{};

    // BFS states: (point, edge identity + direction of the arriving step);
    // the same identity may not be re-traversed in the opposite direction
    // immediately.
    struct State {
        PointId point;
        int edge = -1;  // index into f.edges(); -1 at the start
        bool forward = true;
        int prev = -1;  // index into the visit log
    };
    const std::vector<Edge>& edges = f.edges();
    std::vector<State> log;
    std::set<std::tuple<PointId, int, bool>> seen;
    std::deque<int> queue;

    log.push_back(State{y, -1, true, -1});
    queue.push_back(0);
    seen.insert({y, -1, true});

    auto emit = [&](int tail) {
        std::vector<UndirectedStep> path;
        for (int i = tail; log[i].edge != -1; i = log[i].prev) {
            const Edge& e = edges[log[i].edge];
            UndirectedStep step;
            step.label = e.label;
            step.forward = log[i].forward;
            step.from = log[i].forward ? e.src : e.dst;
            step.to = log[i].forward ? e.dst : e.src;
            path.push_back(step);
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    while (!queue.empty()) {
        int at = queue.front();
        queue.pop_front();
        State state = log[at];
        for (int ei = 0; ei < static_cast<int>(edges.size()); ++ei) {
            const Edge& e = edges[ei];
            for (bool fw : {true, false}) {
                PointId from = fw ? e.src : e.dst;
                PointId to = fw ? e.dst : e.src;
                if (from != state.point) continue;
                if (ei == state.edge && fw != state.forward) continue;  // backtrack
                if (to != z && avoid.count(to)) continue;
                if (!seen.insert({to, ei, fw}).second) continue;
                log.push_back(State{to, ei, fw, at});
                if (to == z) return emit(static_cast<int>(log.size()) - 1);
                queue.push_back(static_cast<int>(log.size()) - 1);
            }
        }
    }
    return std::nullopt;
}

Diagram reachable_restriction(const Diagram& d) {
    std::vector<int> dist = distances_from(d.frame(), Diagram::kRoot);
    std::vector<PointId> renumber(d.point_count(), -1);
    int next = 0;
    for (PointId p = 0; p < d.point_count(); ++p)
        if (dist[p] != -1) renumber[p] = next++;
    std::vector<Edge> edges;
    for (const Edge& e : d.edges())
        if (renumber[e.src] != -1 && renumber[e.dst] != -1)
            edges.push_back(Edge{renumber[e.src], renumber[e.dst], e.label});
    return Diagram(next, std::move(edges));
}

std::string to_dot(const Diagram& d, const std::string& graph_name) {
    return to_dot(d.frame(), graph_name, "x");
}

namespace {

const std::map<std::string, const char*>& builtin_catalog() {
    static const std::map<std::string, const char*> catalog = {
        {"D_sym",
         "# forall x exists y (xRy & yRx)\n"
         "points 2\n"
         "edge x0 -a-> x1\n"
         "edge x1 -a-> x0\n"},
        {"D_refsucc",
         "# forall x exists y (xRy & yRy)\n"
         "points 2\n"
         "edge x0 -a-> x1\n"
         "edge x1 -a-> x1\n"},
        {"D_tri",
         "points 3\n"
         "edge x0 -a-> x1\n"
         "edge x0 -a-> x2\n"
         "edge x1 -a-> x2\n"
         "edge x2 -a-> x1\n"},
        {"D_chain",
         "# locally but not globally minimal\n"
         "points 3\n"
         "edge x0 -a-> x1\n"
         "edge x1 -a-> x2\n"},
        {"D_fig3",
         "# minimal, with an inner cycle two steps below the root; the naive\n"
         "# reflexive-point closure repairs the deleted edge, so the chase\n"
         "# construction is required\n"
         "points 4\n"
         "edge x0 -a-> x1\n"
         "edge x1 -a-> x2\n"
         "edge x2 -a-> x3\n"
         "edge x3 -a-> x2\n"},
        {"D_refroot",
         "# inner cycle, but equivalent to reflexivity; minimizes to a\n"
         "# reflexive root\n"
         "points 2\n"
         "edge x0 -a-> x0\n"
         "edge x0 -a-> x1\n"
         "edge x1 -a-> x1\n"},
    };
    return catalog;
}

}  // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : builtin_catalog()) names.push_back(name);
    return names;
}

std::optional<Diagram> catalog_lookup(const std::string& name) {
    if (const char* dir = std::getenv("MDL_CATALOG_DIR")) {
        std::ifstream in(std::string(dir) + "/" + name + ".diagram");
        if (in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            return parse_diagram(buf.str()).diagram;
        }
    }
    auto it = builtin_catalog().find(name);
    if (it == builtin_catalog().end()) return std::nullopt;
    return parse_diagram(it->second).diagram;
}

}  // namespace mdl
