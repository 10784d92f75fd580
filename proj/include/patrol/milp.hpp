#pragma once

#include <string>

#include "patrol/tour_graph.hpp"

namespace patrol {

/// Writes the tree/direction selection problem as a multi-commodity-flow
/// MILP in CPLEX LP text format. The model uses a virtual base vertex "b":
/// the arc set contains both orientations of every tour-graph edge plus
/// (v0,b) and (b,v0). Flows of commodity c run from b toward tour c
/// (opposite to the data); binary u_{ccw,j}/u_{cw,j} pick each tour's
/// direction; bilinear terms are linearized (pair products with three
/// constraints, triple products with four). Variable naming is documented
/// in docs/formats.md. Output is deterministic; solving is out of scope.
std::string emit_milp(const TourGraph& graph);

}  // namespace patrol
