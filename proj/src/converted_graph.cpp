#include "patrol/converted_graph.hpp"

#include <algorithm>
#include <queue>

namespace patrol {

double ConvertedGraph::Vertex::position_on(int tour) const {
    if (tour == a) return pos_a;
    if (tour == b) return pos_b;
    throw std::invalid_argument("vertex not on tour " + std::to_string(tour));
}

int ConvertedGraph::vertex_of(int a, int b) const {
    auto it = index.find(make_edge(a, b));
    if (it == index.end())
        throw std::invalid_argument("no meeting vertex for pair {" +
                                    std::to_string(a) + "," + std::to_string(b) + "}");
    return it->second;
}

ConvertedGraph build_converted_graph(const TourGraph& graph) {
    ConvertedGraph cg;
    const Tour& base_tour = graph.tour(graph.v0());
    if (!base_tour.base_position())
        throw std::invalid_argument("v0 lacks a base position");
    ConvertedGraph::Vertex base;
    base.a = base.b = graph.v0();
    base.pos_a = base.pos_b = *base_tour.base_position();
    cg.vertices.push_back(base);
    for (const auto& [a, b] : graph.edges()) {
        ConvertedGraph::Vertex v;
        v.a = a;
        v.b = b;
        v.pos_a = graph.tour(a).meeting_position(b);
        v.pos_b = graph.tour(b).meeting_position(a);
        cg.index[{a, b}] = static_cast<int>(cg.vertices.size());
        cg.vertices.push_back(v);
    }
    cg.adj.assign(cg.vertices.size(), {});
    // per tour, connect every pair of incident vertices by the shorter arc
    for (const auto& [tid, tour] : graph.tours()) {
        std::vector<int> on_tour;
        for (size_t i = 0; i < cg.vertices.size(); ++i)
            if (cg.vertices[i].on(tid)) on_tour.push_back(static_cast<int>(i));
        for (size_t i = 0; i < on_tour.size(); ++i) {
            for (size_t j = i + 1; j < on_tour.size(); ++j) {
                int u = on_tour[i], v = on_tour[j];
                double pu = cg.vertices[u].position_on(tid);
                double pv = cg.vertices[v].position_on(tid);
                double ccw = travel_time(tour, pu, pv, Direction::CCW);
                double cw = travel_time(tour, pu, pv, Direction::CW);
                ConvertedGraph::Arc arc;
                arc.tour = tid;
                if (cw < ccw) {
                    arc.weight = cw;
                    arc.shorter = Direction::CW;
                } else {
                    arc.weight = ccw;
                    arc.shorter = Direction::CCW;
                }
                arc.to = v;
                cg.adj[u].push_back(arc);
                arc.to = u;
                arc.shorter = opposite(arc.shorter);
                cg.adj[v].push_back(arc);
            }
        }
    }
    for (auto& arcs : cg.adj)
        std::sort(arcs.begin(), arcs.end(), [](const auto& x, const auto& y) {
            return std::tie(x.to, x.tour) < std::tie(y.to, y.tour);
        });
    return cg;
}

std::vector<int> ShortestPaths::path_from(int v) const {
    std::vector<int> chain;
    for (int u = v; u != -1; u = pred[u]) chain.push_back(u);
    return chain;
}

ShortestPaths converted_shortest_paths(const ConvertedGraph& cg) {
    const size_t n = cg.vertices.size();
    ShortestPaths sp;
    sp.dist.assign(n, kInf);
    sp.pred.assign(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    sp.dist[0] = 0.0;
    pq.push({0.0, 0});
    std::vector<char> done(n, 0);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (const auto& arc : cg.adj[u]) {
            double nd = d + arc.weight;
            if (nd < sp.dist[arc.to]) {
                sp.dist[arc.to] = nd;
                sp.pred[arc.to] = u;
                pq.push({nd, arc.to});
            }
        }
    }
    return sp;
}

double delay_lower_bound(const TourGraph& graph) {
    auto cg = build_converted_graph(graph);
    auto sp = converted_shortest_paths(cg);
    double bound = 0.0;
    for (const auto& [tid, tour] : graph.tours()) {
        if (!tour.senses()) continue;
        double len = tid == graph.v0() ? 0.0 : kInf;
        double own_floor = kInf;
        for (size_t i = 1; i < cg.vertices.size(); ++i) {
            if (!cg.vertices[i].on(tid)) continue;
            len = std::min(len, sp.dist[i]);
            double p = cg.vertices[i].position_on(tid);
            own_floor = std::min(own_floor,
                                 std::min(tour.length() - first_sensing_offset(
                                                              tour, p, Direction::CW),
                                          tour.length() - first_sensing_offset(
                                                              tour, p, Direction::CCW)));
        }
        if (tid == graph.v0() && tour.base_position()) {
            double p = *tour.base_position();
            own_floor = std::min(own_floor,
                                 std::min(tour.length() - first_sensing_offset(
                                                              tour, p, Direction::CW),
                                          tour.length() - first_sensing_offset(
                                                              tour, p, Direction::CCW)));
        }
        if (len == kInf || own_floor == kInf) continue;
        bound = std::max(bound, len + own_floor);
    }
    return bound;
}

}  // namespace patrol
