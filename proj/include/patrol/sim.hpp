#pragma once

#include "patrol/scenario.hpp"
#include "patrol/scenario_gen.hpp"
#include "patrol/schedule.hpp"

namespace patrol {

enum class RobotPhase { INIT, AT_WAIT, MOVING };
const char* to_string(RobotPhase p);

struct RobotState {
    int tour = -1;
    RobotPhase phase = RobotPhase::INIT;
    double position = 0.0;     // at the last processed event
    double delta_t = 0.0;      // accumulated child-wait time of the current cycle
    std::vector<std::uint32_t> buffer;
};

struct DataItem {
    int tour = -1;
    double position = 0.0;
    double capture_time = 0.0;
    double arrival_time = -1.0;  // < 0: not delivered yet
    bool delivered() const { return arrival_time >= 0.0; }
};

struct SimEvent {
    double time = 0.0;
    int tour = -1;
    std::string kind;
    double position = 0.0;
};

struct Metrics {
    double wi_measured = 0.0;
    double wd_measured = 0.0;
    double convergence_time = 0.0;  // last instant a nonzero delta_t was cleared
    double max_wait = 0.0;          // longest single wait between transitions
    double sum_distance = 0.0;      // over the distance window
    std::map<int, double> distance_per_robot;
    bool short_horizon = false;     // window shorter than one period
    bool cold_start = false;        // warmup ended before convergence
    std::size_t items_total = 0;
    std::size_t items_undelivered = 0;
};

struct SimOptions {
    double samples_per_unit = 1.0;
    bool record_trace = false;
    bool record_idleness = false;
};

/// One visit of a tracked sample point: the idleness it had accumulated
/// when the visit (re)set it.
struct IdlenessPoint {
    double time = 0.0;
    int tour = -1;
    double position = 0.0;
    double idleness = 0.0;
};

/// Deterministic event-driven execution of the per-robot online state
/// machine over a solved tree scenario. Robots head to their start
/// positions (INIT), wait for the parent at the mutual meeting point
/// (AT_WAIT), and traverse their tour stopping at every child meeting
/// point until the child is present (MOVING). After the rendezvous a
/// robot idles max(slack - max(parent_wait, delta_t), 0) before departing,
/// where slack = period - l_v is the repeated-schedule gap of its tour;
/// this reproduces the analytic schedule and resynchronizes after
/// disturbances. Data moves child-to-parent at rendezvous and reaches the
/// base when the root passes the base position.
class SimWorld {
  public:
    SimWorld(const TourTree& tree, const std::map<int, Direction>& directions,
             const Schedule& schedule, const std::map<int, double>& initial_positions,
             SimOptions options = {});
    ~SimWorld();
    SimWorld(SimWorld&&) noexcept;
    SimWorld& operator=(SimWorld&&) noexcept;

    /// Extra hold applied when the robot's next departure comes up.
    void inject_disturbance(int tour, double extra_wait);
    /// Hold scheduled at a simulation time.
    void schedule_disturbance(int tour, double at_time, double extra_wait);

    bool has_event() const;
    double clock() const { return clock_; }
    /// Process a single event.
    void step();

    /// Run to the horizon and measure over [warmup, horizon]. Distances
    /// are accumulated over [warmup, warmup + distance_window] (full
    /// window when negative).
    Metrics run(double horizon, double warmup, double distance_window = -1.0);

    const RobotState& robot(int tour) const;
    const std::vector<DataItem>& items() const { return items_; }
    const std::vector<SimEvent>& trace() const { return trace_; }
    const std::vector<IdlenessPoint>& idleness_series() const { return idleness_; }
    double period() const { return period_; }

  private:
    struct Robot;
    struct Sample;
    struct Event;

    void push_event(double time, int robot, int kind);
    void start_leg(int r, double now);
    void arrive_stop(int r, double now);
    void complete_rendezvous(int parent, int child, double now, double parent_wait);
    void handle_trigger(int r, double now, double parent_wait);
    void process_leg_visits(int r, double leg_start, double from, double duration);
    void record_visit(int r, std::size_t sample_idx, double t);
    void exchange(int child, int parent, double now);
    void deliver(int r, double now);
    void note_wait(double from, double to);
    void trace_event(double t, int r, const char* kind, double pos);

    const TourTree* tree_;
    std::map<int, Direction> dirs_;
    Schedule schedule_;
    SimOptions opt_;
    double period_ = 0.0;
    double clock_ = 0.0;
    double warmup_ = 0.0;
    double horizon_ = 0.0;
    double dist_window_ = -1.0;
    double conv_time_ = 0.0;
    double max_wait_ = 0.0;
    std::vector<Robot> robots_;
    std::map<int, int> robot_index_;
    std::vector<DataItem> items_;
    std::vector<SimEvent> trace_;
    std::vector<IdlenessPoint> idleness_;
    std::uint64_t event_seq_ = 0;
    struct EventCmp;
    std::vector<Event> queue_;
};

/// Worst idleness / worst delay / distance of the uncooperative baseline:
/// robots loop their detour-augmented cycles with no exchanges, data is
/// delivered only at base passages. Integer time steps (one per cell).
Metrics run_single_hop(const GridEmbedding& grid, const SingleHopPlan& plan,
                       double horizon, double warmup, double distance_window = -1.0);

}  // namespace patrol
