#include "doctest.h"
#include "patrol/scenario.hpp"
#include "patrol/scenario_gen.hpp"

using namespace patrol;

TEST_CASE("scenario json round-trips byte-stably") {
    SUBCASE("resolved graph with solution") {
        auto sc = gen_random_graph(5, 42, 0.3);
        sc.solution = solution_from_result(mdtd_cg(sc.graph));
        std::string once = scenario_to_json(sc);
        Scenario back = scenario_from_json(once);
        CHECK(scenario_to_json(back) == once);
        CHECK(back.graph.size() == 5);
        CHECK(back.solution->method == "cg");
        CHECK(back.solution->wd_analytic ==
              doctest::Approx(sc.solution->wd_analytic));
    }
    SUBCASE("unresolved grid scenario with candidates") {
        GridScenarioSpec spec;
        spec.width = 8;
        spec.height = 6;
        spec.n = 2;
        spec.seed = 3;
        auto sc = generate_grid(spec);
        std::string once = scenario_to_json(sc);
        Scenario back = scenario_from_json(once);
        CHECK(scenario_to_json(back) == once);
        CHECK_FALSE(back.resolved);
        CHECK(back.grid.has_value());
        CHECK(back.multi.candidates().size() == sc.multi.candidates().size());
    }
}

TEST_CASE("solution reconstruction matches the solve result") {
    auto sc = gen_random_graph(5, 9, 0.3);
    auto res = mdtd_sp(sc.graph);
    Solution sol = solution_from_result(res);
    auto back = result_from_solution(sc.graph, sol);
    CHECK(back.report.worst_delay == doctest::Approx(res.report.worst_delay));
    CHECK(back.directions == res.directions);
}

TEST_CASE("dot export is deterministic and marks tree arcs") {
    auto sc = gen_random_graph(4, 7, 0.5);
    sc.solution = solution_from_result(mdtd_sp(sc.graph));
    std::string dot = scenario_to_dot(sc);
    CHECK(dot == scenario_to_dot(sc));
    CHECK(dot.find("penwidth") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
}

TEST_CASE("ascii map export") {
    auto sc = generate_corridor();
    std::string map = scenario_ascii_map(sc);
    // 20 rows of 40 characters plus newlines
    CHECK(map.size() == 20 * 41);
    CHECK(map.find('B') != std::string::npos);
    CHECK(map.find('#') != std::string::npos);
}

TEST_CASE("schedule table lists every tour") {
    auto sc = gen_random_graph(4, 11, 0.4);
    auto res = mdtd_sp(sc.graph);
    std::string table = schedule_table(sc.graph, res.schedule);
    CHECK(table.find("tau") != std::string::npos);
    int lines = 0;
    for (char c : table)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 4);
}
