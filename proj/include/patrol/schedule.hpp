#pragma once

#include <map>

#include "patrol/tour_graph.hpp"

namespace patrol {

/// Per-tour slice of a schedule. The start position is the meeting point
/// with the parent (the base position on the root tour); the only static
/// waiting position is the start. Waiting for children happens online as
/// stop-and-wait at the child meeting points and is not part of the static
/// wait map.
struct TourSchedule {
    double start_position = 0.0;
    Direction direction = Direction::CW;
    double start_wait = 0.0;
};

struct Schedule {
    std::map<int, TourSchedule> per_tour;

    const TourSchedule& at(int v) const;
    /// Total cycle time tau_v = l_v + start wait.
    double tau(int v, const TourGraph& g) const;
    double max_tau(const TourGraph& g) const;
};

/// Infinite repetition of a schedule, spaced by gamma after robot vbar's
/// cycles. Only gamma = 0 repetitions are ever constructed here; the field
/// exists for completeness.
struct RepeatedSchedule {
    Schedule schedule;
    int vbar = -1;
    double gamma = 0.0;

    /// Repetition period l_vbar + gamma (= L for gamma = 0 and vbar the
    /// longest tour).
    double period(const TourGraph& g) const;
};

struct DelayReport {
    double worst_delay = 0.0;
    double worst_idleness = 0.0;
    /// Branch delay per tour: worst delay of data from the subtree rooted
    /// at v measured up to the handover at v's parent (base for the root).
    std::map<int, double> per_tour_branch_delay;
};

/// Start position of tour v in a tree: meeting point with the parent, or
/// the base position on the root.
double start_position(const TourTree& tree, int v);

/// Worst-delay evaluation for fixed directions. Branch recursion:
/// leaf/own contribution is l_v - first_sensing_offset(start, d_v) if v
/// senses (0 otherwise); internal tours add each child's branch delay plus
/// the carry time from the child's meeting point to the exit toward the
/// parent. Worst idleness is max_v l_v.
DelayReport evaluate_tree_delay(const TourTree& tree,
                                const std::map<int, Direction>& directions);

/// Chooses the direction of every tour by minimizing, per tour, the
/// maximum of its own-data term and its children's carry terms (ties go
/// CW), which also minimizes the overall worst delay.
std::map<int, Direction> minimum_delay_directions(const TourTree& tree);

/// Waiting-time construction for given directions: child waits are
/// propagated root-down via delta_vw = time_v(start_v, meet(w), d_v) - l_w
/// and then shifted so the least start wait is exactly zero.
Schedule schedule_for_directions(const TourTree& tree,
                                 const std::map<int, Direction>& directions);

/// Direction optimization plus schedule construction.
std::pair<Schedule, DelayReport> minimum_delay_schedule(const TourTree& tree);

/// Wraps a schedule into its gamma = 0 repetition with vbar the longest
/// tour (ties to the lowest id) and verifies the repetition inequality.
RepeatedSchedule make_repeated_schedule(const Schedule& schedule,
                                        const TourTree& tree);

}  // namespace patrol
