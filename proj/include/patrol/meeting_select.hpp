#pragma once

#include "patrol/tour_graph.hpp"

namespace patrol {

struct SelectionTrace {
    std::vector<int> order;                      // breadth-first tour order
    std::map<Edge, int> chosen;                  // pair -> candidate index
    std::map<Edge, double> rationale;            // converted distance at selection
};

/// Greedy reduction of a tour multigraph to a tour graph: tours are
/// traversed breadth-first from the base-station tour; for every pair the
/// candidate whose shortest path to the base vertex in the incremental
/// converted graph (already chosen meeting points plus the candidate) is
/// minimal gets picked. Ties prefer the smaller position on the lower-id
/// tour, then on the other tour, then the lower candidate index.
std::pair<TourGraph, SelectionTrace> select_meeting_points(const TourMultiGraph& mg);

}  // namespace patrol
