#pragma once

#include <limits>

#include "patrol/tour_graph.hpp"

namespace patrol {

/// Meeting points as vertices, tour segments as weighted edges. Vertex 0
/// is the synthetic base vertex at the base position on tour v0; the
/// remaining vertices correspond one-to-one to TourGraph edges. Between
/// two meeting points on a common tour only the shorter arc is kept
/// (ties keep the CCW arc).
struct ConvertedGraph {
    struct Vertex {
        int a = -1, b = -1;     // incident tour pair (a <= b); base vertex: a == b == v0
        double pos_a = 0.0;     // position on tour a
        double pos_b = 0.0;     // position on tour b
        bool on(int tour) const { return tour == a || tour == b; }
        double position_on(int tour) const;
    };
    struct Arc {
        int to = -1;
        int tour = -1;          // tour carrying the segment
        double weight = 0.0;
        Direction shorter = Direction::CCW;  // direction realizing the weight
    };

    std::vector<Vertex> vertices;           // [0] is the base vertex
    std::map<Edge, int> index;              // tour pair -> vertex id
    std::vector<std::vector<Arc>> adj;      // symmetric

    int base_vertex() const { return 0; }
    int vertex_of(int a, int b) const;
};

ConvertedGraph build_converted_graph(const TourGraph& graph);

struct ShortestPaths {
    std::vector<double> dist;
    std::vector<int> pred;  // predecessor vertex toward the source, -1 at source/unreached

    /// Vertex chain from v to the source (inclusive).
    std::vector<int> path_from(int v) const;
};

/// Dijkstra from the base vertex; deterministic under equal distances.
ShortestPaths converted_shortest_paths(const ConvertedGraph& cg);

/// max_v (len_v + own-data floor) over sensing tours, where len_v is the
/// shortest converted-graph distance from any of v's meeting points to the
/// base vertex. A lower bound on the worst delay of every tree/direction
/// choice on this graph.
double delay_lower_bound(const TourGraph& graph);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace patrol
