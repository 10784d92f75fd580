#include "patrol/sim.hpp"

#include <algorithm>
#include <cmath>

namespace patrol {

const char* to_string(RobotPhase p) {
    switch (p) {
        case RobotPhase::INIT: return "init";
        case RobotPhase::AT_WAIT: return "at_wait";
        case RobotPhase::MOVING: return "moving";
    }
    return "?";
}

namespace {
constexpr double kTinyWait = 1e-12;
}

struct SimWorld::Sample {
    double pos = 0.0;
    bool sensed = false;
    double prev_visit = 0.0;  // instantaneous idleness counts from t = 0
    double max_gap = 0.0;
};

struct SimWorld::Robot {
    int id = -1;
    const Tour* tour = nullptr;
    Direction dir = Direction::CW;
    double start_pos = 0.0;
    double slack = 0.0;
    int parent = -1;
    std::vector<int> stop_child;
    std::vector<double> stop_cum;  // travel time from start, plus final l_v

    RobotState state;
    int next_stop = 0;
    bool moving_leg = false;
    double leg_start = 0.0, leg_from = 0.0, leg_dur = 0.0;
    bool blocked = false;
    int blocking_child = -1;
    double block_start = 0.0;
    bool pending_depart = false;
    double hold = 0.0;
    double at_wait_since = 0.0;
    double distance = 0.0;
    std::vector<Sample> samples;
};

struct SimWorld::Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    int robot = -1;
    int kind = 0;  // 0: leg end, 1: depart, 2: disturbance
    double aux = 0.0;
};

struct SimWorld::EventCmp {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

SimWorld::~SimWorld() = default;
SimWorld::SimWorld(SimWorld&&) noexcept = default;
SimWorld& SimWorld::operator=(SimWorld&&) noexcept = default;

SimWorld::SimWorld(const TourTree& tree, const std::map<int, Direction>& directions,
                   const Schedule& schedule, const std::map<int, double>& initial_positions,
                   SimOptions options)
    : tree_(&tree), dirs_(directions), schedule_(schedule), opt_(options) {
    horizon_ = std::numeric_limits<double>::infinity();
    for (const auto& [v, t] : tree.graph().tours()) {
        (void)v;
        period_ = std::max(period_, t.length());
    }
    for (int v : tree.top_down_order()) {
        Robot r;
        r.id = v;
        r.tour = &tree.graph().tour(v);
        r.dir = dirs_.at(v);
        r.start_pos = schedule.at(v).start_position;
        r.slack = period_ - r.tour->length();
        r.parent = tree.has_parent(v) ? tree.parent(v) : -1;
        // children in traversal order from the start position; a meeting
        // point coinciding with the start is visited at the cycle end
        std::vector<std::pair<double, int>> stops;
        for (int w : tree.children(v)) {
            double reach = travel_time(*r.tour, r.start_pos,
                                       r.tour->meeting_position(w), r.dir);
            if (reach == 0.0) reach = r.tour->length();
            stops.push_back({reach, w});
        }
        std::sort(stops.begin(), stops.end());
        for (const auto& [t, w] : stops) {
            r.stop_cum.push_back(t);
            r.stop_child.push_back(w);
        }
        r.stop_cum.push_back(r.tour->length());

        // sample points: meeting points, base, start, sensing arc
        // endpoints, plus a uniform grid of about samples_per_unit
        std::vector<double> pos;
        pos.push_back(r.start_pos);
        for (const auto& [n, p] : r.tour->meeting_positions()) {
            (void)n;
            pos.push_back(p);
        }
        if (r.tour->base_position()) pos.push_back(*r.tour->base_position());
        for (const auto& a : r.tour->sensing_arcs()) {
            pos.push_back(a.begin);
            if (a.end < r.tour->length()) pos.push_back(a.end);
        }
        int grid_n = std::max(1, static_cast<int>(
                                     std::ceil(r.tour->length() * opt_.samples_per_unit)));
        double step = r.tour->length() / grid_n;
        for (int k = 0; k < grid_n; ++k) pos.push_back(k * step);
        std::sort(pos.begin(), pos.end());
        for (double p : pos) {
            if (!r.samples.empty() && p - r.samples.back().pos < 1e-12) continue;
            Sample s;
            s.pos = p;
            for (const auto& a : r.tour->sensing_arcs())
                if (p >= a.begin && p <= a.end) s.sensed = true;  // measurement closure
            r.samples.push_back(s);
        }

        auto it = initial_positions.find(v);
        if (it == initial_positions.end())
            throw std::invalid_argument("missing initial position for tour " +
                                        std::to_string(v));
        if (it->second < 0 || it->second >= r.tour->length())
            throw std::invalid_argument("initial position off tour " + std::to_string(v));
        r.state.tour = v;
        r.state.phase = RobotPhase::INIT;
        r.state.position = it->second;
        robot_index_[v] = static_cast<int>(robots_.size());
        robots_.push_back(std::move(r));
    }
    // launch INIT legs
    for (size_t i = 0; i < robots_.size(); ++i) {
        Robot& r = robots_[i];
        r.moving_leg = true;
        r.leg_start = 0.0;
        r.leg_from = r.state.position;
        r.leg_dur = travel_time(*r.tour, r.state.position, r.start_pos, r.dir);
        push_event(r.leg_dur, static_cast<int>(i), 0);
    }
}

void SimWorld::push_event(double time, int robot, int kind) {
    queue_.push_back({time, event_seq_++, robot, kind, 0.0});
    std::push_heap(queue_.begin(), queue_.end(), EventCmp{});
}

bool SimWorld::has_event() const { return !queue_.empty(); }

void SimWorld::inject_disturbance(int tour, double extra_wait) {
    robots_[robot_index_.at(tour)].hold += extra_wait;
}

void SimWorld::schedule_disturbance(int tour, double at_time, double extra_wait) {
    queue_.push_back({at_time, event_seq_++, robot_index_.at(tour), 2, extra_wait});
    std::push_heap(queue_.begin(), queue_.end(), EventCmp{});
}

const RobotState& SimWorld::robot(int tour) const {
    return robots_[robot_index_.at(tour)].state;
}

void SimWorld::trace_event(double t, int r, const char* kind, double pos) {
    if (opt_.record_trace) trace_.push_back({t, robots_[r].id, kind, pos});
}

void SimWorld::note_wait(double from, double to) {
    max_wait_ = std::max(max_wait_, to - from);
}

void SimWorld::record_visit(int r, std::size_t sample_idx, double t) {
    Sample& s = robots_[r].samples[sample_idx];
    if (t > warmup_) {
        s.max_gap = std::max(s.max_gap, t - s.prev_visit);
        if (opt_.record_idleness)
            idleness_.push_back({t, robots_[r].id, s.pos, t - s.prev_visit});
    }
    s.prev_visit = t;
    if (s.sensed && t >= warmup_) {
        items_.push_back({robots_[r].id, s.pos, t, -1.0});
        robots_[r].state.buffer.push_back(static_cast<std::uint32_t>(items_.size() - 1));
    }
}

void SimWorld::process_leg_visits(int r, double leg_start, double from, double duration) {
    Robot& rob = robots_[r];
    if (duration <= 0) return;
    // distance over the window
    double w_end = warmup_ + (dist_window_ > 0 ? dist_window_ : horizon_ - warmup_);
    double lo = std::max(leg_start, warmup_);
    double hi = std::min(leg_start + duration, std::min(w_end, horizon_));
    if (hi > lo) rob.distance += hi - lo;
    for (std::size_t i = 0; i < rob.samples.size(); ++i) {
        double off = travel_time(*rob.tour, from, rob.samples[i].pos, rob.dir);
        if (off < duration) {
            double t = leg_start + off;
            if (t <= horizon_) record_visit(r, i, t);
        }
    }
}

void SimWorld::exchange(int child, int parent, double now) {
    Robot& c = robots_[child];
    Robot& p = robots_[parent];
    auto& pb = p.state.buffer;
    pb.insert(pb.end(), c.state.buffer.begin(), c.state.buffer.end());
    c.state.buffer.clear();
    trace_event(now, child, "exchange", c.state.position);
}

void SimWorld::deliver(int r, double now) {
    Robot& rob = robots_[r];
    for (std::uint32_t id : rob.state.buffer)
        if (items_[id].arrival_time < 0) items_[id].arrival_time = now;
    if (!rob.state.buffer.empty()) trace_event(now, r, "deliver", rob.state.position);
    rob.state.buffer.clear();
}

void SimWorld::handle_trigger(int r, double now, double parent_wait) {
    Robot& rob = robots_[r];
    if (rob.pending_depart) return;
    double lateness = std::max(parent_wait, rob.state.delta_t);
    if (rob.state.delta_t > kTinyWait || parent_wait > kTinyWait)
        conv_time_ = std::max(conv_time_, now);
    rob.state.delta_t = 0.0;
    double wait = std::max(rob.slack - lateness, 0.0);
    if (rob.hold > 0) {
        trace_event(now, r, "hold", rob.state.position);
        wait += rob.hold;
        rob.hold = 0.0;
    }
    rob.pending_depart = true;
    push_event(now + wait, robot_index_.at(rob.id), 1);
}

void SimWorld::start_leg(int r, double now) {
    Robot& rob = robots_[r];
    double begin = now;
    if (rob.hold > 0) {
        trace_event(now, r, "hold", rob.state.position);
        begin += rob.hold;
        rob.hold = 0.0;
    }
    double prev_cum = rob.next_stop == 0 ? 0.0 : rob.stop_cum[rob.next_stop - 1];
    double dur = rob.stop_cum[rob.next_stop] - prev_cum;
    rob.moving_leg = true;
    rob.leg_start = begin;
    rob.leg_from = rob.state.position;
    rob.leg_dur = dur;
    push_event(begin + dur, r, 0);
}

void SimWorld::complete_rendezvous(int parent, int child, double now, double parent_wait) {
    Robot& p = robots_[parent];
    p.state.delta_t += parent_wait;
    if (parent_wait > 0) note_wait(now - parent_wait, now);
    exchange(child, parent, now);
    p.blocked = false;
    p.blocking_child = -1;
    p.next_stop++;
    start_leg(parent, now);
    handle_trigger(child, now, parent_wait);
}

void SimWorld::arrive_stop(int r, double now) {
    Robot& rob = robots_[r];
    process_leg_visits(r, rob.leg_start, rob.leg_from, rob.leg_dur);
    rob.moving_leg = false;

    if (rob.state.phase == RobotPhase::INIT || rob.next_stop >=
                                                   static_cast<int>(rob.stop_child.size())) {
        // reached the start position (end of INIT or end of a cycle)
        rob.state.position = rob.start_pos;
        bool was_init = rob.state.phase == RobotPhase::INIT;
        rob.state.phase = RobotPhase::AT_WAIT;
        rob.at_wait_since = now;
        rob.next_stop = 0;
        trace_event(now, r, was_init ? "init_arrive" : "arrive_start", rob.start_pos);
        if (rob.parent < 0) {
            deliver(r, now);
            handle_trigger(r, now, 0.0);
        } else {
            int pi = robot_index_.at(rob.parent);
            Robot& p = robots_[pi];
            if (p.blocked && p.blocking_child == rob.id)
                complete_rendezvous(pi, r, now, now - p.block_start);
        }
        return;
    }
    // stop at a child meeting point
    int w = rob.stop_child[rob.next_stop];
    rob.state.position = rob.tour->meeting_position(w);
    trace_event(now, r, "arrive_meet", rob.state.position);
    Robot& c = robots_[robot_index_.at(w)];
    if (c.state.phase == RobotPhase::AT_WAIT) {
        exchange(robot_index_.at(w), r, now);
        rob.next_stop++;
        start_leg(r, now);
        handle_trigger(robot_index_.at(w), now, 0.0);
    } else {
        rob.blocked = true;
        rob.blocking_child = w;
        rob.block_start = now;
        trace_event(now, r, "blocked", rob.state.position);
    }
}

void SimWorld::step() {
    std::pop_heap(queue_.begin(), queue_.end(), EventCmp{});
    Event ev = queue_.back();
    queue_.pop_back();
    clock_ = ev.time;
    switch (ev.kind) {
        case 0:
            arrive_stop(ev.robot, ev.time);
            break;
        case 1: {
            Robot& rob = robots_[ev.robot];
            rob.pending_depart = false;
            note_wait(rob.at_wait_since, ev.time);
            rob.state.phase = RobotPhase::MOVING;
            rob.state.delta_t = 0.0;
            trace_event(ev.time, ev.robot, "depart", rob.state.position);
            rob.next_stop = 0;
            start_leg(ev.robot, ev.time);
            break;
        }
        case 2: {
            robots_[ev.robot].hold += ev.aux;
            trace_event(ev.time, ev.robot, "disturb", robots_[ev.robot].state.position);
            break;
        }
    }
}

Metrics SimWorld::run(double horizon, double warmup, double distance_window) {
    if (horizon <= warmup) throw std::invalid_argument("horizon must exceed warmup");
    warmup_ = warmup;
    horizon_ = horizon;
    dist_window_ = distance_window;
    while (!queue_.empty()) {
        const Event& top = queue_.front();
        if (top.time > horizon) break;
        step();
    }
    // partial legs up to the horizon
    for (size_t i = 0; i < robots_.size(); ++i) {
        Robot& r = robots_[i];
        if (r.moving_leg && r.leg_start < horizon) {
            double dur = std::min(r.leg_dur, horizon - r.leg_start);
            process_leg_visits(static_cast<int>(i), r.leg_start, r.leg_from, dur);
            r.moving_leg = false;
        }
    }
    Metrics m;
    m.convergence_time = conv_time_;
    m.short_horizon = horizon - warmup < period_;
    m.cold_start = warmup < conv_time_;
    for (auto& r : robots_) {
        for (auto& s : r.samples) {
            double tail = horizon - s.prev_visit;
            double g = std::max(s.max_gap, tail);
            m.wi_measured = std::max(m.wi_measured, g);
        }
        m.distance_per_robot[r.id] = r.distance;
        m.sum_distance += r.distance;
        if (r.state.phase == RobotPhase::AT_WAIT)
            max_wait_ = std::max(max_wait_, horizon - r.at_wait_since);
        if (r.blocked) max_wait_ = std::max(max_wait_, horizon - r.block_start);
    }
    m.max_wait = max_wait_;
    m.items_total = items_.size();
    for (const auto& it : items_) {
        if (it.delivered())
            m.wd_measured = std::max(m.wd_measured, it.arrival_time - it.capture_time);
        else
            m.items_undelivered++;
    }
    return m;
}

Metrics run_single_hop(const GridEmbedding& grid, const SingleHopPlan& plan,
                       double horizon, double warmup, double distance_window) {
    if (horizon <= warmup) throw std::invalid_argument("horizon must exceed warmup");
    struct CellStat {
        double prev = 0.0;
        double gap = 0.0;
    };
    struct Hold {
        std::vector<double> captures;  // capture times of buffered items
    };
    Metrics m;
    const long T = static_cast<long>(std::floor(horizon));
    double w_end = warmup + (distance_window > 0 ? distance_window : horizon - warmup);
    long period = 0;
    for (const auto& [id, cyc] : plan.cycles)
        period = std::max(period, static_cast<long>(cyc.size()));
    m.short_horizon = horizon - warmup < static_cast<double>(period);

    for (const auto& [id, cyc] : plan.cycles) {
        const auto& own = plan.own_cells.at(id);
        std::map<Cell, CellStat> stats;
        for (const Cell& c : own) stats[c];
        Hold buf;
        double dist = 0.0;
        const long mlen = static_cast<long>(cyc.size());
        for (long t = 0; t <= T; ++t) {
            const Cell& cell = cyc[t % mlen];
            // delivery happens before the capture at the base cell: the
            // base datum of this pass rides until the next delivery, so
            // the measured worst delay attains the inter-delivery gap
            // exactly as the deferred-capture convention does elsewhere
            if (cell == grid.base_cell) {
                for (double cap : buf.captures)
                    m.wd_measured = std::max(m.wd_measured, t - cap);
                buf.captures.clear();
            }
            auto it = stats.find(cell);
            if (it != stats.end()) {
                if (t > warmup)
                    it->second.gap = std::max(it->second.gap, t - it->second.prev);
                it->second.prev = t;
                if (t >= warmup) {
                    buf.captures.push_back(t);
                    m.items_total++;
                }
            }
            if (t + 1 <= T && t >= warmup && t + 1 <= w_end) dist += 1.0;
        }
        m.items_undelivered += buf.captures.size();
        for (auto& [c, st] : stats) {
            (void)c;
            double g = std::max(st.gap, horizon - st.prev);
            m.wi_measured = std::max(m.wi_measured, g);
        }
        m.distance_per_robot[id] = dist;
        m.sum_distance += dist;
    }
    return m;
}

}  // namespace patrol
