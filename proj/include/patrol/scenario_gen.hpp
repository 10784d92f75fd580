#pragma once

#include <array>

#include "patrol/rng.hpp"
#include "patrol/scenario.hpp"

namespace patrol {

/// Thrown when a scenario cannot be built (disconnected free space,
/// unreachable base, no communication candidates).
class InfeasibleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct GridScenarioSpec {
    int width = 20, height = 60;
    std::set<Cell> obstacles;
    Cell base_cell{0, 0};
    int rcom = 1;
    int n = 4;
    std::uint64_t seed = 1;
};

/// Closed grand tour over all free cells: nearest-neighbor construction
/// under the Chebyshev metric with seeded restarts, 2-opt improvement,
/// non-adjacent consecutive cells bridged by shortest grid paths.
std::vector<Cell> grand_tour(const GridWorld& world, Cell base, std::uint64_t seed);

/// Total unit-step length of a closed cell sequence (= its size).
inline int tour_length(const std::vector<Cell>& t) { return static_cast<int>(t.size()); }

/// Frederickson-style splitting of a closed grand tour into k contiguous
/// segments balanced by cumulative cost; every segment is closed into a
/// cycle by the shortest grid path between its endpoints. Segments
/// shrinking below two cells merge into their predecessor.
std::vector<std::vector<Cell>> k_splitour(const GridWorld& world,
                                          const std::vector<Cell>& tour, int k);

/// All mutually visible cell pairs within communication range become
/// meeting candidates; tours are fully sensed cyclic cell sequences.
/// Throws InfeasibleError when the resulting multigraph is disconnected.
TourMultiGraph candidate_meetings(const GridWorld& world,
                                  const std::map<int, std::vector<Cell>>& subtours,
                                  int rcom, int v0, Cell base_cell);

/// Whole grid pipeline: grand tour, k-SPLITOUR, candidates.
Scenario generate_grid(const GridScenarioSpec& spec);

/// Fixed 20x40 corridor with eight ring tours in a 4x2 lattice and wall
/// stubs that restrict communication to a serpentine; rcom = 2.
Scenario generate_corridor();

struct SingleHopPlan {
    std::map<int, std::vector<Cell>> cycles;      // detour-augmented tours
    std::map<int, std::vector<Cell>> own_cells;   // original tour cells (sensing)
    std::map<int, int> detours;
    double budget = 0.0;
    bool forced_over_budget = false;  // some robot needed its one detour over budget
};

/// Detour insertion for the uncooperative baseline: per robot the maximum
/// number of evenly spread base round-trips (via k-SPLITOUR anchors) that
/// keeps the tour within the budget; at least one detour is always
/// inserted so every robot can deliver. Throws InfeasibleError when a tour
/// cannot reach the base.
SingleHopPlan single_hop_tours(const GridEmbedding& grid, double budget);

/// Budget rule: max of the cooperative worst idleness and the largest
/// tour length including one cheapest base detour.
double single_hop_budget(const GridEmbedding& grid, double cooperative_wi);

/// 3-CNF formula; literal = (variable index >= 1, negated flag).
struct ThreeSatFormula {
    struct Literal {
        int var = 1;
        bool negated = false;
    };
    std::vector<std::array<Literal, 3>> clauses;
    int num_vars = 0;
};

ThreeSatFormula parse_3sat(const std::string& text);  // "x1,x2,~x3;..." or "paper-example"
bool exhaustive_sat(const ThreeSatFormula& f);

/// Hardness-instance generator: tour graph of the d-MDT reduction with
/// all directions fixed CCW. Clause tours have meeting spacing 2/3;
/// variable tours place clause meetings at the x side (position 0) for
/// positive literals and the negated side (position 1) otherwise; the
/// collector tours x, x-bar and t close the construction with the base on
/// t. Bound B = 4.
std::pair<Scenario, std::map<int, Direction>> gen_3sat_mdt(const ThreeSatFormula& f);

/// Chain of k large tours (length big) with antipodal chain meeting
/// points, each connected to v0 through an arm of k small tours (length
/// small). Separates the shortest-path heuristic from the converted-graph
/// heuristic.
Scenario gen_chain_arms(int k, double big, double small);

/// Random connected tour graph: lengths in [1, 20], random meeting
/// positions, edge probability plus a random spanning tree for
/// connectivity. fully_sensed=false mixes in partial and relay-only tours.
Scenario gen_random_graph(int n, std::uint64_t seed, double edge_prob = 0.25,
                          bool fully_sensed = true);

/// Random tree plus schedule-ready geometry (for oracle sweeps).
TourGraph gen_random_tree_graph(int n, Rng& rng, bool fully_sensed = true);

}  // namespace patrol
