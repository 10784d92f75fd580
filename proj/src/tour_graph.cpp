#include "patrol/tour_graph.hpp"

#include <algorithm>
#include <deque>

namespace patrol {

TourGraph::TourGraph(std::vector<Tour> tours, std::set<Edge> edges, int v0)
    : v0_(v0) {
    for (auto& t : tours) {
        int id = t.id();
        if (!tours_.emplace(id, std::move(t)).second)
            throw std::invalid_argument("duplicate tour id " + std::to_string(id));
    }
    for (const auto& e : edges) edges_.insert(make_edge(e.first, e.second));
    for (const auto& [a, b] : edges_) {
        if (!has_tour(a) || !has_tour(b) || a == b)
            throw std::invalid_argument("edge references unknown tour");
    }
}

const Tour& TourGraph::tour(int id) const {
    auto it = tours_.find(id);
    if (it == tours_.end())
        throw std::invalid_argument("unknown tour id " + std::to_string(id));
    return it->second;
}

std::vector<int> TourGraph::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        else if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> TourGraph::validate() const {
    std::vector<std::string> bad;
    if (!has_tour(v0_)) {
        bad.push_back("base-station tour v0=" + std::to_string(v0_) + " missing");
        return bad;
    }
    if (!tour(v0_).base_position())
        bad.push_back("tour " + std::to_string(v0_) + " lacks a base position");
    for (const auto& [id, t] : tours_) {
        if (id != v0_ && t.base_position())
            bad.push_back("tour " + std::to_string(id) +
                          " carries a base position but is not v0");
        for (const auto& [n, p] : t.meeting_positions()) {
            (void)p;
            if (!has_edge(id, n))
                bad.push_back("tour " + std::to_string(id) +
                              " has a meeting position for " + std::to_string(n) +
                              " without an edge");
        }
    }
    for (const auto& [a, b] : edges_) {
        if (!tour(a).has_meeting(b))
            bad.push_back("edge {" + std::to_string(a) + "," + std::to_string(b) +
                          "}: no meeting position on tour " + std::to_string(a));
        if (!tour(b).has_meeting(a))
            bad.push_back("edge {" + std::to_string(a) + "," + std::to_string(b) +
                          "}: no meeting position on tour " + std::to_string(b));
    }
    auto dist = hop_distances_from_base();
    for (const auto& [id, t] : tours_) {
        (void)t;
        if (!dist.count(id))
            bad.push_back("tour " + std::to_string(id) + " unreachable from v0");
    }
    return bad;
}

std::map<int, int> TourGraph::hop_distances_from_base() const {
    std::map<int, int> dist;
    if (!has_tour(v0_)) return dist;
    std::deque<int> q{v0_};
    dist[v0_] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : neighbors(v)) {
            if (!dist.count(w)) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    return dist;
}

int TourGraph::depth_sp() const {
    int d = 0;
    for (const auto& [v, h] : hop_distances_from_base()) {
        (void)v;
        d = std::max(d, h);
    }
    return d;
}

TourMultiGraph::TourMultiGraph(std::vector<Tour> tours,
                               std::map<Edge, std::vector<MeetingCandidate>> candidates,
                               int v0)
    : candidates_(std::move(candidates)), v0_(v0) {
    for (auto& t : tours) {
        int id = t.id();
        tours_.emplace(id, std::move(t));
    }
    for (const auto& [e, cands] : candidates_) {
        if (!tours_.count(e.first) || !tours_.count(e.second))
            throw std::invalid_argument("candidate edge references unknown tour");
        if (cands.empty())
            throw std::invalid_argument("empty candidate list for edge");
    }
}

const Tour& TourMultiGraph::tour(int id) const {
    auto it = tours_.find(id);
    if (it == tours_.end())
        throw std::invalid_argument("unknown tour id " + std::to_string(id));
    return it->second;
}

std::vector<int> TourMultiGraph::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [e, c] : candidates_) {
        (void)c;
        if (e.first == v) out.push_back(e.second);
        else if (e.second == v) out.push_back(e.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool TourMultiGraph::connected() const {
    if (tours_.empty() || !tours_.count(v0_)) return false;
    std::set<int> seen{v0_};
    std::deque<int> q{v0_};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : neighbors(v))
            if (seen.insert(w).second) q.push_back(w);
    }
    return seen.size() == tours_.size();
}

TourTree::TourTree(TourGraph graph, std::map<int, int> parent)
    : graph_(std::move(graph)), parent_(std::move(parent)) {
    const int n = graph_.size();
    const int root = graph_.v0();
    if (!graph_.has_tour(root)) throw std::invalid_argument("tree root missing");
    if (static_cast<int>(parent_.size()) != n - 1)
        throw std::invalid_argument("tree must have exactly n-1 arcs");
    if (parent_.count(root))
        throw std::invalid_argument("root must not have a parent");
    for (const auto& [c, p] : parent_) {
        if (!graph_.has_tour(c) || !graph_.has_tour(p))
            throw std::invalid_argument("arc references unknown tour");
        if (!graph_.has_edge(c, p))
            throw std::invalid_argument("arc (" + std::to_string(c) + "," +
                                        std::to_string(p) + ") has no edge");
        children_[p].push_back(c);
    }
    for (auto& [p, cs] : children_) {
        (void)p;
        std::sort(cs.begin(), cs.end());
    }
    // depth + top-down order; detects cycles/disconnection
    depth_[root] = 0;
    order_.push_back(root);
    for (size_t i = 0; i < order_.size(); ++i) {
        int v = order_[i];
        auto it = children_.find(v);
        if (it == children_.end()) continue;
        for (int c : it->second) {
            depth_[c] = depth_[v] + 1;
            order_.push_back(c);
        }
    }
    if (static_cast<int>(order_.size()) != n)
        throw std::invalid_argument("arcs do not form a spanning tree");
}

int TourTree::parent(int v) const {
    auto it = parent_.find(v);
    if (it == parent_.end())
        throw std::invalid_argument("tour " + std::to_string(v) + " has no parent");
    return it->second;
}

const std::vector<int>& TourTree::children(int v) const {
    static const std::vector<int> empty;
    auto it = children_.find(v);
    return it == children_.end() ? empty : it->second;
}

int TourTree::depth_of(int v) const {
    auto it = depth_.find(v);
    if (it == depth_.end())
        throw std::invalid_argument("unknown tour id " + std::to_string(v));
    return it->second;
}

int TourTree::depth() const {
    int d = 0;
    for (const auto& [v, k] : depth_) {
        (void)v;
        d = std::max(d, k);
    }
    return d;
}

TourTree make_tree(const TourGraph& graph, const std::map<int, int>& parent) {
    std::set<Edge> tree_edges;
    for (const auto& [c, p] : parent) tree_edges.insert(make_edge(c, p));
    std::vector<Tour> tours;
    for (const auto& [id, t] : graph.tours()) {
        std::map<int, double> meets;
        for (const auto& [n, pos] : t.meeting_positions())
            if (tree_edges.count(make_edge(id, n))) meets[n] = pos;
        tours.emplace_back(id, t.length(), t.sensing_arcs(), std::move(meets),
                           t.base_position());
    }
    return TourTree(TourGraph(std::move(tours), std::move(tree_edges), graph.v0()),
                    parent);
}

}  // namespace patrol
