#pragma once

#include <optional>

#include "patrol/converted_graph.hpp"
#include "patrol/schedule.hpp"

namespace patrol {

enum class SolveMethod { SP, CG, OPT };
const char* to_string(SolveMethod m);

struct SolveResult {
    TourTree tree;
    std::map<int, Direction> directions;
    DelayReport report;
    SolveMethod method = SolveMethod::SP;
    Schedule schedule;
};

/// Thrown when an exhaustive solver is asked for an instance above its
/// size cap.
class SizeCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shortest-path heuristic: breadth-first tree from v0 over unit edge
/// weights (ties prefer the lower parent id), directions from the
/// minimum-delay schedule.
SolveResult mdtd_sp(const TourGraph& graph);

/// Converted-graph heuristic: per-tour shortest converted paths, tours
/// processed in descending (len + del) order, path arcs grafted onto the
/// tree until an included tour is hit; directions follow the arc that
/// realizes each converted edge on the walk, leftovers use the leaf rule.
SolveResult mdtd_cg(const TourGraph& graph);

/// Exhaustive optimum over all spanning trees. With fixed_directions the
/// trees are scored by evaluate_tree_delay (the MDT variant); otherwise
/// each tree gets its minimum-delay schedule (MDTD). Ties resolve to the
/// lexicographically smallest edge set. Throws SizeCapError above
/// max_tours.
SolveResult brute_force_optimal(
    const TourGraph& graph,
    const std::optional<std::map<int, Direction>>& fixed_directions = std::nullopt,
    int max_tours = 10);

/// Exhaustive optimum over candidate meeting-point selections times
/// spanning trees (tiny instances only).
SolveResult brute_force_mdtdm(const TourMultiGraph& mg, int max_tours = 10,
                              long max_combinations = 100000);

/// Number of spanning trees visited by the enumerator (diagnostics).
long count_spanning_trees(const TourGraph& graph, int max_tours = 12);

}  // namespace patrol
