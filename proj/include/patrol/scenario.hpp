#pragma once

#include <cstdint>
#include <optional>

#include "patrol/grid.hpp"
#include "patrol/meeting_select.hpp"
#include "patrol/tree_select.hpp"

namespace patrol {

/// Grid realization of a scenario: tours are cyclic cell sequences; the
/// 1-D tour coordinate of a cell is its index in the sequence.
struct GridEmbedding {
    int width = 0, height = 0;
    int rcom = 1;
    Cell base_cell;
    std::set<Cell> obstacles;
    std::map<int, std::vector<Cell>> tour_cells;

    GridWorld world() const { return GridWorld(width, height, obstacles); }
};

/// Solve result in serializable form.
struct Solution {
    std::string method;
    std::map<int, int> parent;
    std::map<int, Direction> directions;
    std::map<int, double> start_waits;
    int vbar = -1;
    double gamma = 0.0;
    double wd_analytic = 0.0;
    double wi_analytic = 0.0;
};

/// One scenario file: a tour (multi)graph, optionally a grid embedding,
/// optionally a solve result and a meeting-selection trace.
struct Scenario {
    int version = 1;
    std::string kind = "abstract";  // abstract | grid | 3sat | chainarms | random | corridor
    std::uint64_t seed = 0;
    bool resolved = true;
    TourGraph graph;        // valid when resolved
    TourMultiGraph multi;   // valid when !resolved
    std::optional<GridEmbedding> grid;
    std::optional<Solution> solution;
    std::optional<SelectionTrace> trace;

    int n_tours() const { return resolved ? graph.size() : multi.size(); }
};

Solution solution_from_result(const SolveResult& res);
SolveResult result_from_solution(const TourGraph& graph, const Solution& sol);

/// Canonical JSON text (byte-stable; parse . emit is the identity on
/// canonical form). Schema documented in docs/formats.md.
std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& sc, const std::string& path);
Scenario load_scenario(const std::string& path);

/// Graphviz rendering; tree arcs drawn bold when a solution is present.
std::string scenario_to_dot(const Scenario& sc);

/// ASCII map for grid scenarios.
std::string scenario_ascii_map(const Scenario& sc);

/// Schedule rendering: one line per tour (start, direction, wait, tau).
std::string schedule_table(const TourGraph& graph, const Schedule& schedule);

}  // namespace patrol
