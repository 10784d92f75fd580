#include "patrol/meeting_select.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace patrol {

namespace {

struct Point {
    int a, b;          // incident tours (a == b for the base vertex)
    double pos_a, pos_b;
    bool on(int t) const { return t == a || t == b; }
    double pos_on(int t) const { return t == a ? pos_a : pos_b; }
};

/// Shortest distance from the last point to point 0 over segments of
/// common tours (shorter arc each).
double dist_to_base(const TourMultiGraph& mg, const std::vector<Point>& pts) {
    const size_t n = pts.size();
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            for (int t : {pts[i].a, pts[i].b}) {
                if (!pts[j].on(t)) continue;
                const Tour& tour = mg.tour(t);
                double w = std::min(
                    travel_time(tour, pts[i].pos_on(t), pts[j].pos_on(t), Direction::CW),
                    travel_time(tour, pts[i].pos_on(t), pts[j].pos_on(t), Direction::CCW));
                adj[i].push_back({static_cast<int>(j), w});
                adj[j].push_back({static_cast<int>(i), w});
                if (pts[i].a == pts[i].b) break;  // base vertex: single tour
            }
        }
    }
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[n - 1] = 0.0;
    pq.push({0.0, static_cast<int>(n - 1)});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == 0) return d;
        for (auto [v, w] : adj[u]) {
            if (d + w < dist[v]) {
                dist[v] = d + w;
                pq.push({d + w, v});
            }
        }
    }
    return dist[0];
}

}  // namespace

std::pair<TourGraph, SelectionTrace> select_meeting_points(const TourMultiGraph& mg) {
    if (!mg.connected())
        throw std::invalid_argument("tour multigraph is not connected");
    const Tour& base_tour = mg.tour(mg.v0());
    if (!base_tour.base_position())
        throw std::invalid_argument("v0 lacks a base position");

    SelectionTrace trace;
    std::vector<Point> chosen_pts;
    chosen_pts.push_back({mg.v0(), mg.v0(), *base_tour.base_position(),
                          *base_tour.base_position()});

    std::deque<int> q{mg.v0()};
    std::set<int> visited{mg.v0()};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        trace.order.push_back(v);
        for (int w : mg.neighbors(v)) {
            Edge e = make_edge(v, w);
            if (!trace.chosen.count(e)) {
                const auto& cands = mg.candidates().at(e);
                int best_idx = -1;
                double best_dist = 0.0;
                for (size_t i = 0; i < cands.size(); ++i) {
                    std::vector<Point> pts = chosen_pts;
                    pts.push_back({e.first, e.second, cands[i].pos_a, cands[i].pos_b});
                    double d = dist_to_base(mg, pts);
                    bool better = best_idx < 0 || d < best_dist - 1e-12;
                    if (!better && best_idx >= 0 && std::abs(d - best_dist) <= 1e-12) {
                        const auto& cur = cands[best_idx];
                        better = cands[i].pos_a < cur.pos_a - 1e-12 ||
                                 (std::abs(cands[i].pos_a - cur.pos_a) <= 1e-12 &&
                                  cands[i].pos_b < cur.pos_b - 1e-12);
                    }
                    if (better) {
                        best_idx = static_cast<int>(i);
                        best_dist = d;
                    }
                }
                trace.chosen[e] = best_idx;
                trace.rationale[e] = best_dist;
                chosen_pts.push_back({e.first, e.second, cands[best_idx].pos_a,
                                      cands[best_idx].pos_b});
            }
            if (visited.insert(w).second) q.push_back(w);
        }
    }

    std::map<int, std::map<int, double>> meets;
    std::set<Edge> edges;
    for (const auto& [e, idx] : trace.chosen) {
        const auto& c = mg.candidates().at(e)[idx];
        meets[e.first][e.second] = c.pos_a;
        meets[e.second][e.first] = c.pos_b;
        edges.insert(e);
    }
    std::vector<Tour> tours;
    for (const auto& [id, t] : mg.tours())
        tours.emplace_back(id, t.length(), t.sensing_arcs(), meets[id],
                           t.base_position());
    return {TourGraph(std::move(tours), std::move(edges), mg.v0()), trace};
}

}  // namespace patrol
