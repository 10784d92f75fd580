#include "patrol/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace patrol {

const TourSchedule& Schedule::at(int v) const {
    auto it = per_tour.find(v);
    if (it == per_tour.end())
        throw std::invalid_argument("no schedule entry for tour " + std::to_string(v));
    return it->second;
}

double Schedule::tau(int v, const TourGraph& g) const {
    return g.tour(v).length() + at(v).start_wait;
}

double Schedule::max_tau(const TourGraph& g) const {
    double m = 0;
    for (const auto& [v, s] : per_tour) {
        (void)s;
        m = std::max(m, tau(v, g));
    }
    return m;
}

double RepeatedSchedule::period(const TourGraph& g) const {
    return g.tour(vbar).length() + gamma;
}

double start_position(const TourTree& tree, int v) {
    const Tour& t = tree.graph().tour(v);
    if (v == tree.root()) {
        if (!t.base_position())
            throw std::invalid_argument("root tour lacks a base position");
        return *t.base_position();
    }
    return t.meeting_position(tree.parent(v));
}

namespace {

double own_term(const Tour& t, double start, Direction d) {
    if (!t.senses()) return 0.0;
    return t.length() - first_sensing_offset(t, start, d);
}

double children_term(const TourTree& tree, int v, double start, Direction d,
                     const std::map<int, double>& branch) {
    const Tour& t = tree.graph().tour(v);
    double m = 0.0;
    for (int w : tree.children(v)) {
        double carry = travel_time(t, t.meeting_position(w), start, d);
        m = std::max(m, branch.at(w) + carry);
    }
    return m;
}

}  // namespace

DelayReport evaluate_tree_delay(const TourTree& tree,
                                const std::map<int, Direction>& directions) {
    DelayReport rep;
    const auto& order = tree.top_down_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        auto dit = directions.find(v);
        if (dit == directions.end())
            throw std::invalid_argument("missing direction for tour " +
                                        std::to_string(v));
        const Tour& t = tree.graph().tour(v);
        double start = start_position(tree, v);
        double own = own_term(t, start, dit->second);
        double ch = children_term(tree, v, start, dit->second,
                                  rep.per_tour_branch_delay);
        rep.per_tour_branch_delay[v] = std::max(own, ch);
        rep.worst_idleness = std::max(rep.worst_idleness, t.length());
    }
    rep.worst_delay = rep.per_tour_branch_delay.at(tree.root());
    return rep;
}

std::map<int, Direction> minimum_delay_directions(const TourTree& tree) {
    std::map<int, Direction> dirs;
    std::map<int, double> branch;
    const auto& order = tree.top_down_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        const Tour& t = tree.graph().tour(v);
        double start = start_position(tree, v);
        double best = 0.0;
        Direction chosen = Direction::CW;
        bool first = true;
        for (Direction d : {Direction::CW, Direction::CCW}) {
            double val = std::max(own_term(t, start, d),
                                  children_term(tree, v, start, d, branch));
            if (first || val < best) {  // ties keep CW
                best = val;
                chosen = d;
                first = false;
            }
        }
        dirs[v] = chosen;
        branch[v] = best;
    }
    return dirs;
}

Schedule schedule_for_directions(const TourTree& tree,
                                 const std::map<int, Direction>& directions) {
    Schedule sched;
    for (int v : tree.top_down_order()) {
        const Tour& t = tree.graph().tour(v);
        TourSchedule ts;
        ts.start_position = start_position(tree, v);
        ts.direction = directions.at(v);
        if (v == tree.root()) {
            ts.start_wait = 0.0;
        } else {
            int u = tree.parent(v);
            const Tour& pt = tree.graph().tour(u);
            const TourSchedule& ps = sched.per_tour.at(u);
            double reach = travel_time(pt, ps.start_position,
                                       pt.meeting_position(v), ps.direction);
            // a meeting point coinciding with the parent's start is served
            // at the end of the parent's cycle, so the handover costs no
            // extra carry
            if (reach == 0.0) reach = pt.length();
            ts.start_wait = ps.start_wait + reach - t.length();
        }
        sched.per_tour[v] = ts;
    }
    double mw = 0.0;
    for (const auto& [v, ts] : sched.per_tour) {
        (void)v;
        mw = std::min(mw, ts.start_wait);
    }
    if (mw < 0)
        for (auto& [v, ts] : sched.per_tour) {
            (void)v;
            ts.start_wait -= mw;
        }
    return sched;
}

std::pair<Schedule, DelayReport> minimum_delay_schedule(const TourTree& tree) {
    auto dirs = minimum_delay_directions(tree);
    return {schedule_for_directions(tree, dirs), evaluate_tree_delay(tree, dirs)};
}

RepeatedSchedule make_repeated_schedule(const Schedule& schedule,
                                        const TourTree& tree) {
    RepeatedSchedule rep;
    rep.schedule = schedule;
    rep.gamma = 0.0;
    double longest = -1.0;
    for (const auto& [v, t] : tree.graph().tours()) {
        if (t.length() > longest + kEps) {
            longest = t.length();
            rep.vbar = v;
        }
    }
    // tau_w <= tau_vbar + (wait_w - wait_vbar) + gamma must hold for all w
    double tau_vbar = schedule.tau(rep.vbar, tree.graph());
    double wait_vbar = schedule.at(rep.vbar).start_wait;
    for (const auto& [w, ts] : schedule.per_tour) {
        double bound = tau_vbar + (ts.start_wait - wait_vbar) + rep.gamma;
        if (schedule.tau(w, tree.graph()) > bound + kEps)
            throw std::runtime_error("repeated-schedule inequality violated for tour " +
                                     std::to_string(w));
    }
    return rep;
}

}  // namespace patrol
