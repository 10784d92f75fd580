#include "doctest.h"
#include "patrol/sim.hpp"

using namespace patrol;

namespace {

TourTree two_tour_tree() {
    TourGraph g({make_fully_sensed_tour(0, 10.0, {{1, 3.0}}, 0.0),
                 make_fully_sensed_tour(1, 6.0, {{0, 0.0}})},
                {{0, 1}}, 0);
    return make_tree(g, {{1, 0}});
}

struct Solved {
    TourTree tree;
    std::map<int, Direction> dirs;
    Schedule sched;
    DelayReport report;
};

Solved solve(const TourTree& tree) {
    Solved s;
    s.tree = tree;
    s.dirs = minimum_delay_directions(tree);
    s.sched = schedule_for_directions(tree, s.dirs);
    s.report = evaluate_tree_delay(tree, s.dirs);
    return s;
}

std::map<int, double> starts_of(const Solved& s) {
    std::map<int, double> init;
    for (const auto& [v, ts] : s.sched.per_tour) init[v] = ts.start_position;
    return init;
}

}  // namespace

TEST_CASE("robots at their start positions transition immediately") {
    auto s = solve(two_tour_tree());
    SimWorld world(s.tree, s.dirs, s.sched, starts_of(s));
    while (world.has_event() && world.clock() == 0.0 &&
           world.robot(1).phase == RobotPhase::INIT)
        world.step();
    CHECK(world.robot(1).phase == RobotPhase::AT_WAIT);
}

TEST_CASE("single robot enters MOVING right away") {
    TourGraph g({make_fully_sensed_tour(0, 10.0, {}, 0.0)}, {}, 0);
    TourTree tree = make_tree(g, {});
    auto s = solve(tree);
    SimWorld world(s.tree, s.dirs, s.sched, {{0, 0.0}});
    Metrics m = world.run(35.0, 5.0);
    CHECK(m.wi_measured == doctest::Approx(10.0));
    CHECK(m.wd_measured == doctest::Approx(10.0));
    CHECK(m.convergence_time == 0.0);
}

TEST_CASE("two-tour run matches the analytic delay") {
    auto s = solve(two_tour_tree());
    SimWorld world(s.tree, s.dirs, s.sched, starts_of(s));
    Metrics m = world.run(10.0 * 8, 10.0 * 4);
    CHECK(m.wi_measured == doctest::Approx(10.0));
    CHECK(m.wd_measured == doctest::Approx(s.report.worst_delay).epsilon(1e-9));
    CHECK(m.items_total > 0);
}

TEST_CASE("direction choice agrees with the simulator over all four pairs") {
    TourTree tree = two_tour_tree();
    double best_sim = 1e18;
    for (Direction da : {Direction::CW, Direction::CCW}) {
        for (Direction db : {Direction::CW, Direction::CCW}) {
            std::map<int, Direction> dirs{{0, da}, {1, db}};
            Schedule sched = schedule_for_directions(tree, dirs);
            std::map<int, double> init;
            for (const auto& [v, ts] : sched.per_tour) init[v] = ts.start_position;
            SimWorld world(tree, dirs, sched, init);
            Metrics m = world.run(100.0, 50.0);
            CHECK(m.wd_measured ==
                  doctest::Approx(evaluate_tree_delay(tree, dirs).worst_delay)
                      .epsilon(1e-9));
            best_sim = std::min(best_sim, m.wd_measured);
        }
    }
    auto [sched, rep] = minimum_delay_schedule(tree);
    (void)sched;
    CHECK(rep.worst_delay == doctest::Approx(best_sim));
    CHECK(best_sim == doctest::Approx(10.0));
}

TEST_CASE("random initial positions converge to the analytic delay") {
    auto s = solve(two_tour_tree());
    SimWorld world(s.tree, s.dirs, s.sched, {{0, 7.5}, {1, 2.25}});
    Metrics m = world.run(10.0 * 12, 10.0 * 6);
    CHECK(m.wi_measured == doctest::Approx(10.0));
    CHECK(m.wd_measured == doctest::Approx(s.report.worst_delay).epsilon(1e-9));
    CHECK(m.convergence_time < 10.0 * 6);
}

TEST_CASE("a window opened before convergence is flagged") {
    auto s = solve(two_tour_tree());
    SimWorld cold(s.tree, s.dirs, s.sched, starts_of(s));
    cold.schedule_disturbance(1, 12.0, 2.0);
    CHECK(cold.run(10.0 * 12, 0.0).cold_start);

    SimWorld warm(s.tree, s.dirs, s.sched, starts_of(s));
    warm.schedule_disturbance(1, 12.0, 2.0);
    CHECK_FALSE(warm.run(10.0 * 12, 10.0 * 8).cold_start);
}

TEST_CASE("short horizon sets the warning flag") {
    auto s = solve(two_tour_tree());
    SimWorld world(s.tree, s.dirs, s.sched, starts_of(s));
    Metrics m = world.run(12.0, 6.0);
    CHECK(m.short_horizon);
}

TEST_CASE("leaf disturbance raises the parent's wait once and heals") {
    auto s = solve(two_tour_tree());
    SimOptions opt;
    opt.record_trace = true;
    SimWorld world(s.tree, s.dirs, s.sched, starts_of(s), opt);
    world.schedule_disturbance(1, 12.0, 2.0);  // robot 1 holds 2 at its next event
    Metrics m = world.run(10.0 * 14, 10.0 * 8);
    // the parent waited exactly once; afterwards delta stays zero
    CHECK(m.convergence_time > 12.0);
    CHECK(m.convergence_time < 12.0 + 3 * 10.0);
    CHECK(m.wd_measured == doctest::Approx(s.report.worst_delay).epsilon(1e-9));
    bool parent_waited = false;
    for (const auto& ev : world.trace())
        if (ev.kind == "blocked" && ev.tour == 0 && ev.time > 12.0)
            parent_waited = true;
    CHECK(parent_waited);
}

TEST_CASE("oversized disturbance still converges without deadlock") {
    auto s = solve(two_tour_tree());
    SimWorld world(s.tree, s.dirs, s.sched, starts_of(s));
    world.schedule_disturbance(1, 11.0, 25.0);  // larger than any tau
    Metrics m = world.run(10.0 * 25, 10.0 * 18);
    CHECK(m.wi_measured == doctest::Approx(10.0));
    CHECK(m.wd_measured == doctest::Approx(s.report.worst_delay).epsilon(1e-9));
}

TEST_CASE("zero disturbance is a no-op") {
    auto s = solve(two_tour_tree());
    SimOptions opt;
    opt.record_trace = true;
    SimWorld a(s.tree, s.dirs, s.sched, starts_of(s), opt);
    SimWorld b(s.tree, s.dirs, s.sched, starts_of(s), opt);
    b.schedule_disturbance(1, 12.0, 0.0);
    Metrics ma = a.run(80.0, 20.0);
    Metrics mb = b.run(80.0, 20.0);
    CHECK(ma.wd_measured == doctest::Approx(mb.wd_measured));
    CHECK(ma.convergence_time == doctest::Approx(mb.convergence_time));
}

TEST_CASE("identical runs produce identical traces") {
    auto s = solve(two_tour_tree());
    SimOptions opt;
    opt.record_trace = true;
    SimWorld a(s.tree, s.dirs, s.sched, {{0, 4.0}, {1, 1.0}}, opt);
    SimWorld b(s.tree, s.dirs, s.sched, {{0, 4.0}, {1, 1.0}}, opt);
    a.schedule_disturbance(1, 15.0, 1.5);
    b.schedule_disturbance(1, 15.0, 1.5);
    Metrics ma = a.run(100.0, 30.0);
    Metrics mb = b.run(100.0, 30.0);
    REQUIRE(a.trace().size() == b.trace().size());
    for (size_t i = 0; i < a.trace().size(); ++i) {
        CHECK(a.trace()[i].time == b.trace()[i].time);
        CHECK(a.trace()[i].tour == b.trace()[i].tour);
        CHECK(a.trace()[i].kind == b.trace()[i].kind);
    }
    CHECK(ma.wd_measured == mb.wd_measured);
}

TEST_CASE("staggered initial positions reach the start at distinct times") {
    // five-tour chain with equal lengths
    std::map<int, std::map<int, double>> meets;
    std::set<Edge> edges;
    for (int v = 1; v < 5; ++v) {
        meets[v][v - 1] = 0.0;
        meets[v - 1][v] = 6.0;
        edges.insert(make_edge(v, v - 1));
    }
    std::vector<Tour> tours;
    for (int v = 0; v < 5; ++v)
        tours.push_back(make_fully_sensed_tour(
            v, 10.0, meets[v], v == 0 ? std::optional<double>(2.0) : std::nullopt));
    TourGraph g(std::move(tours), edges, 0);
    std::map<int, int> parent;
    for (int v = 1; v < 5; ++v) parent[v] = v - 1;
    auto s = solve(make_tree(g, parent));
    SimOptions opt;
    opt.record_trace = true;
    SimWorld world(s.tree, s.dirs, s.sched,
                   {{0, 3.0}, {1, 1.0}, {2, 9.5}, {3, 4.0}, {4, 7.0}}, opt);
    Metrics m = world.run(10.0 * 16, 10.0 * 9);
    std::set<double> init_times;
    for (const auto& ev : world.trace())
        if (ev.kind == "init_arrive") init_times.insert(ev.time);
    CHECK(init_times.size() == 5);
    CHECK(m.wi_measured == doctest::Approx(10.0));
    CHECK(m.wd_measured == doctest::Approx(s.report.worst_delay).epsilon(1e-9));
}

TEST_CASE("every item captured early enough is delivered") {
    auto s = solve(two_tour_tree());
    SimWorld world(s.tree, s.dirs, s.sched, starts_of(s));
    double horizon = 10.0 * 10;
    Metrics m = world.run(horizon, 20.0);
    (void)m;
    for (const auto& it : world.items()) {
        if (it.capture_time <= horizon - s.report.worst_delay - 1e-9) {
            CHECK(it.delivered());
            CHECK(it.arrival_time >= it.capture_time);
        }
    }
}

TEST_CASE("single-hop on a base-crossing tour matches the cooperative run") {
    // one robot, square tour through the base
    GridEmbedding ge;
    ge.width = 4;
    ge.height = 4;
    ge.base_cell = {0, 0};
    ge.tour_cells[0] = {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
    auto plan = single_hop_tours(ge, 8.0);
    Metrics sh = run_single_hop(ge, plan, 40.0, 16.0);
    CHECK(sh.wi_measured == doctest::Approx(8.0));
    CHECK(sh.wd_measured == doctest::Approx(8.0));

    TourGraph g({make_fully_sensed_tour(0, 8.0, {}, 0.0)}, {}, 0);
    auto s = solve(make_tree(g, {}));
    SimWorld world(s.tree, s.dirs, s.sched, {{0, 0.0}});
    Metrics coop = world.run(40.0, 16.0);
    CHECK(coop.wi_measured == doctest::Approx(sh.wi_measured));
    CHECK(coop.wd_measured == doctest::Approx(sh.wd_measured));
}
