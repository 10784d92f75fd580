#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "patrol/tour.hpp"

namespace patrol {

using Edge = std::pair<int, int>;  // stored normalized (min, max)

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Tours as vertices, meeting points as edges. The base station sits on
/// tour v0 at that tour's base position.
class TourGraph {
  public:
    TourGraph() = default;
    TourGraph(std::vector<Tour> tours, std::set<Edge> edges, int v0);

    const Tour& tour(int id) const;
    const std::map<int, Tour>& tours() const { return tours_; }
    const std::set<Edge>& edges() const { return edges_; }
    int v0() const { return v0_; }
    int size() const { return static_cast<int>(tours_.size()); }

    bool has_tour(int id) const { return tours_.count(id) > 0; }
    bool has_edge(int a, int b) const { return edges_.count(make_edge(a, b)) > 0; }
    std::vector<int> neighbors(int v) const;  // sorted ascending

    /// Structural invariant check; returns human-readable violations,
    /// empty when the graph is well formed (mutual meeting positions,
    /// base position on v0, connectivity).
    std::vector<std::string> validate() const;

    /// Hop distances from v0 (unit edge weights); missing tours are
    /// unreachable. Also used for depth_sp.
    std::map<int, int> hop_distances_from_base() const;
    int depth_sp() const;

  private:
    std::map<int, Tour> tours_;
    std::set<Edge> edges_;
    int v0_ = -1;
};

/// Candidate meeting point between a tour pair: positions on the lower-id
/// and higher-id tour respectively.
struct MeetingCandidate {
    double pos_a = 0.0;  // on min(id) tour
    double pos_b = 0.0;  // on max(id) tour
};

/// Tour graph with several candidate meeting points per tour pair; tours
/// carry no fixed meeting positions yet.
class TourMultiGraph {
  public:
    TourMultiGraph() = default;
    TourMultiGraph(std::vector<Tour> tours,
                   std::map<Edge, std::vector<MeetingCandidate>> candidates, int v0);

    const Tour& tour(int id) const;
    const std::map<int, Tour>& tours() const { return tours_; }
    const std::map<Edge, std::vector<MeetingCandidate>>& candidates() const {
        return candidates_;
    }
    int v0() const { return v0_; }
    int size() const { return static_cast<int>(tours_.size()); }
    std::vector<int> neighbors(int v) const;
    bool connected() const;

  private:
    std::map<int, Tour> tours_;
    std::map<Edge, std::vector<MeetingCandidate>> candidates_;
    int v0_ = -1;
};

/// Spanning tree of a TourGraph with arcs directed toward the root v0.
/// Holds the graph restricted to the tree edges.
class TourTree {
  public:
    TourTree() = default;
    /// `parent` maps every non-root tour to its parent. Throws on
    /// structural problems (wrong arc count, cycles, missing edges).
    TourTree(TourGraph graph, std::map<int, int> parent);

    const TourGraph& graph() const { return graph_; }
    int root() const { return graph_.v0(); }
    const std::map<int, int>& parents() const { return parent_; }
    bool has_parent(int v) const { return parent_.count(v) > 0; }
    int parent(int v) const;
    const std::vector<int>& children(int v) const;  // sorted ascending
    int depth_of(int v) const;
    int depth() const;
    int size() const { return graph_.size(); }
    /// Vertices ordered root first, children after parents.
    const std::vector<int>& top_down_order() const { return order_; }

  private:
    TourGraph graph_;
    std::map<int, int> parent_;
    std::map<int, std::vector<int>> children_;
    std::map<int, int> depth_;
    std::vector<int> order_;
};

/// Build a tree from a full tour graph and a parent map: the tree's graph
/// keeps all tours but only the tree edges.
TourTree make_tree(const TourGraph& graph, const std::map<int, int>& parent);

}  // namespace patrol
