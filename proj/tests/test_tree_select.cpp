#include "doctest.h"
#include "patrol/rng.hpp"
#include "patrol/scenario_gen.hpp"
#include "patrol/tree_select.hpp"

using namespace patrol;

namespace {

/// Seven tours, edges {1-4, 2-7, 3-4, 3-5, 3-6, 3-7, 5-6}, base on 5.
/// Geometry chosen so the converted-graph walk reproduces the published
/// two-step tree construction.
TourGraph seven_tour_graph() {
    std::map<int, std::map<int, double>> meets;
    auto add = [&](int a, int b, double pa, double pb) {
        meets[a][b] = pa;
        meets[b][a] = pb;
    };
    add(2, 7, 0.0, 4.0);
    add(7, 3, 0.0, 0.0);
    add(3, 6, 3.0, 5.0);
    add(3, 4, 6.0, 4.0);
    add(3, 5, 6.0, 10.0);
    add(6, 5, 1.0, 2.0);
    add(1, 4, 0.0, 2.0);
    std::map<int, double> lens{{1, 6}, {2, 10}, {3, 12}, {4, 8},
                               {5, 14}, {6, 10}, {7, 10}};
    std::vector<Tour> tours;
    for (auto& [id, l] : lens)
        tours.push_back(make_fully_sensed_tour(
            id, l, meets[id], id == 5 ? std::optional<double>(5.0) : std::nullopt));
    return TourGraph(std::move(tours),
                     {{1, 4}, {2, 7}, {3, 4}, {3, 5}, {3, 6}, {3, 7}, {5, 6}}, 5);
}

TourGraph triangle_graph() {
    std::vector<Tour> tours{
        make_fully_sensed_tour(0, 10.0, {{1, 2.0}, {2, 7.0}}, 0.0),
        make_fully_sensed_tour(1, 8.0, {{0, 0.0}, {2, 4.0}}),
        make_fully_sensed_tour(2, 6.0, {{0, 0.0}, {1, 3.0}})};
    return TourGraph(std::move(tours), {{0, 1}, {0, 2}, {1, 2}}, 0);
}

}  // namespace

TEST_CASE("sp heuristic builds the breadth-first tree") {
    SUBCASE("triangle collapses to depth one") {
        auto res = mdtd_sp(triangle_graph());
        CHECK(res.tree.parents().at(1) == 0);
        CHECK(res.tree.parents().at(2) == 0);
        CHECK(res.method == SolveMethod::SP);
    }
    SUBCASE("tree-shaped graph is returned unchanged") {
        TourGraph g({make_fully_sensed_tour(0, 10.0, {{1, 3.0}}, 0.0),
                     make_fully_sensed_tour(1, 6.0, {{0, 0.0}, {2, 3.0}}),
                     make_fully_sensed_tour(2, 4.0, {{1, 0.0}})},
                    {{0, 1}, {1, 2}}, 0);
        auto res = mdtd_sp(g);
        CHECK(res.tree.parents().at(1) == 0);
        CHECK(res.tree.parents().at(2) == 1);
    }
    SUBCASE("chain-with-arms keeps the large tours in a chain") {
        auto sc = gen_chain_arms(4, 200.0, 0.5);
        auto res = mdtd_sp(sc.graph);
        for (int i = 1; i <= 4; ++i) CHECK(res.tree.parents().at(i) == i - 1);
    }
}

TEST_CASE("cg heuristic reproduces the two-step walkthrough") {
    auto res = mdtd_cg(seven_tour_graph());
    std::map<int, int> expect{{2, 7}, {7, 3}, {3, 6}, {6, 5}, {1, 4}, {4, 3}};
    CHECK(res.tree.parents() == expect);
    CHECK(res.directions.at(7) == Direction::CW);
    CHECK(res.directions.at(3) == Direction::CCW);
    CHECK(res.directions.at(6) == Direction::CW);
    CHECK(res.directions.at(5) == Direction::CCW);
    CHECK(res.directions.at(4) == Direction::CCW);
    // path-starting tours stay leaves and get the leaf rule (ties CW)
    CHECK(res.directions.at(1) == Direction::CW);
    CHECK(res.directions.at(2) == Direction::CW);
}

TEST_CASE("cg on a tree-shaped graph returns the tree at equal delay") {
    TourGraph g({make_fully_sensed_tour(0, 10.0, {{1, 3.0}}, 0.0),
                 make_fully_sensed_tour(1, 6.0, {{0, 0.0}, {2, 3.0}}),
                 make_fully_sensed_tour(2, 4.0, {{1, 0.0}})},
                {{0, 1}, {1, 2}}, 0);
    auto res = mdtd_cg(g);
    CHECK(res.tree.parents().at(1) == 0);
    CHECK(res.tree.parents().at(2) == 1);
    auto best = minimum_delay_schedule(res.tree).second;
    CHECK(res.report.worst_delay == doctest::Approx(best.worst_delay));
}

TEST_CASE("cg beats sp on the chain-with-arms family") {
    auto sc = gen_chain_arms(2, 100.0, 1.0);
    double sp = mdtd_sp(sc.graph).report.worst_delay;
    double cg = mdtd_cg(sc.graph).report.worst_delay;
    CHECK(sp / cg > 1.0);

    // with a large length ratio every large tour hangs off its arm head
    auto big = gen_chain_arms(4, 1000.0, 0.1);
    auto res = mdtd_cg(big.graph);
    const int k = 4;
    auto arm_head = [&](int i) { return k + (i - 1) * k + 1; };
    for (int i = 2; i <= k; ++i) CHECK(res.tree.parents().at(i) == arm_head(i));
    CHECK(res.tree.parents().at(1) == 0);
}

TEST_CASE("brute force on a tree-shaped graph matches the scheduler") {
    TourGraph g({make_fully_sensed_tour(0, 10.0, {{1, 3.0}}, 0.0),
                 make_fully_sensed_tour(1, 6.0, {{0, 0.0}, {2, 3.0}}),
                 make_fully_sensed_tour(2, 4.0, {{1, 0.0}})},
                {{0, 1}, {1, 2}}, 0);
    auto res = brute_force_optimal(g);
    auto tree = make_tree(g, {{1, 0}, {2, 1}});
    CHECK(res.report.worst_delay ==
          doctest::Approx(minimum_delay_schedule(tree).second.worst_delay));
}

TEST_CASE("triangle has three spanning trees") {
    CHECK(count_spanning_trees(triangle_graph()) == 3);
}

TEST_CASE("size cap refuses big instances") {
    Rng rng(2);
    auto sc = gen_random_graph(6, 2);
    CHECK_THROWS_AS(brute_force_optimal(sc.graph, std::nullopt, 5), SizeCapError);
}

TEST_CASE("heuristics never beat the exhaustive optimum") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        auto sc = gen_random_graph(5, seed, 0.35);
        double opt = brute_force_optimal(sc.graph).report.worst_delay;
        double sp = mdtd_sp(sc.graph).report.worst_delay;
        double cg = mdtd_cg(sc.graph).report.worst_delay;
        double lb = delay_lower_bound(sc.graph);
        CHECK(opt <= sp + 1e-9);
        CHECK(opt <= cg + 1e-9);
        CHECK(lb <= opt + 1e-9);
        for (const auto* res : {&sc}) (void)res;
    }
}

TEST_CASE("heuristics always return spanning trees") {
    for (std::uint64_t seed = 30; seed <= 45; ++seed) {
        auto sc = gen_random_graph(7, seed, 0.3, /*fully_sensed=*/seed % 2 == 0);
        for (const auto& res : {mdtd_sp(sc.graph), mdtd_cg(sc.graph)}) {
            CHECK(static_cast<int>(res.tree.parents().size()) == sc.graph.size() - 1);
            CHECK(res.tree.graph().validate().empty());
        }
    }
}

TEST_CASE("mdtdm brute force picks the best candidate") {
    // two candidates between the leaf and the base tour: one lands next to
    // the base, one on the far side
    std::vector<Tour> tours{make_fully_sensed_tour(0, 10.0, {}, 0.0),
                            make_fully_sensed_tour(1, 6.0)};
    std::map<Edge, std::vector<MeetingCandidate>> cands;
    cands[{0, 1}] = {{5.0, 0.0}, {1.0, 0.0}};
    TourMultiGraph mg(std::move(tours), std::move(cands), 0);
    auto res = brute_force_mdtdm(mg);
    CHECK(res.tree.graph().tour(0).meeting_position(1) == doctest::Approx(1.0));
}
