#include "mdl/core.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace mdl {

Frame::Frame(int point_count, std::vector<Edge> edges)
    : point_count_(point_count), edges_(std::move(edges)) {
    if (point_count_ < 0) throw std::invalid_argument("negative point count");
    for (const Edge& e : edges_) {
        if (e.src < 0 || e.src >= point_count_ || e.dst < 0 || e.dst >= point_count_)
            throw std::invalid_argument("edge endpoint outside the point set");
        if (e.label.name.empty()) throw std::invalid_argument("empty edge label");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    for (const Edge& e : edges_) alphabet_.push_back(e.label);
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());

    out_begin_.assign(point_count_ + 1, 0);
    for (const Edge& e : edges_) ++out_begin_[e.src + 1];
    for (int p = 0; p < point_count_; ++p) out_begin_[p + 1] += out_begin_[p];

    const int nl = static_cast<int>(alphabet_.size());
    succ_.assign(nl, std::vector<std::vector<PointId>>(point_count_));
    pred_.assign(nl, std::vector<std::vector<PointId>>(point_count_));
    for (const Edge& e : edges_) {
        int li = label_index(e.label);
        succ_[li][e.src].push_back(e.dst);
        pred_[li][e.dst].push_back(e.src);
    }
    for (int li = 0; li < nl; ++li)
        for (int p = 0; p < point_count_; ++p) {
            std::sort(succ_[li][p].begin(), succ_[li][p].end());
            std::sort(pred_[li][p].begin(), pred_[li][p].end());
        }
}

int Frame::label_index(const Label& label) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), label);
    if (it == alphabet_.end() || *it != label) return -1;
    return static_cast<int>(it - alphabet_.begin());
}

bool Frame::has_edge(PointId src, PointId dst, const Label& label) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{src, dst, label});
}

const std::vector<PointId>& Frame::successors(PointId p, int label_idx) const {
    return succ_[label_idx][p];
}

const std::vector<PointId>& Frame::predecessors(PointId p, int label_idx) const {
    return pred_[label_idx][p];
}

std::span<const Edge> Frame::out_edges(PointId p) const {
    return {edges_.data() + out_begin_[p], edges_.data() + out_begin_[p + 1]};
}

std::vector<PointId> Frame::successors_any(PointId p) const {
    std::vector<PointId> out;
    for (const Edge& e : out_edges(p)) out.push_back(e.dst);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> distances_from(const Frame& f, PointId y) {
    std::vector<int> dist(f.point_count(), -1);
    std::deque<PointId> queue;
    dist[y] = 0;
    queue.push_back(y);
    while (!queue.empty()) {
        PointId p = queue.front();
        queue.pop_front();
        for (const Edge& e : f.out_edges(p)) {
            if (dist[e.dst] == -1) {
                dist[e.dst] = dist[p] + 1;
                queue.push_back(e.dst);
            }
        }
    }
    return dist;
}

int distance(const Frame& f, PointId y, PointId z) {
    return distances_from(f, y)[z];
}

std::string to_dot(const Frame& f, const std::string& graph_name,
                   const std::string& node_prefix) {
    std::ostringstream out;
    out << "digraph \"" << graph_name << "\" {\n";
    out << "  rankdir=LR;\n";
    for (int p = 0; p < f.point_count(); ++p)
        out << "  " << node_prefix << p << ";\n";
    for (const Edge& e : f.edges())
        out << "  " << node_prefix << e.src << " -> " << node_prefix << e.dst
            << " [label=\"" << e.label.name << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace mdl
