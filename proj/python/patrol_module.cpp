// Python bindings for the patrolling toolkit: scenario generation,
// meeting-point selection, tree/direction solving, online simulation and
// the export formats.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "patrol/meeting_select.hpp"
#include "patrol/milp.hpp"
#include "patrol/scenario_gen.hpp"
#include "patrol/sim.hpp"
#include "patrol/tree_select.hpp"

namespace py = pybind11;
using namespace patrol;

namespace {

Direction dir_of(const std::string& s) { return direction_from_string(s); }

Tour tour_from_args(int id, double length, const std::vector<std::pair<double, double>>& sensing,
                    const std::map<int, double>& meetings, py::object base) {
    std::vector<Interval> arcs;
    for (auto& [a, b] : sensing) arcs.push_back({a, b});
    std::optional<double> base_pos;
    if (!base.is_none()) base_pos = base.cast<double>();
    return Tour(id, length, std::move(arcs), meetings, base_pos);
}

SolveResult solve_impl(Scenario& sc, const std::string& method,
                       const std::string& directions, int cap) {
    if (!sc.resolved) {
        auto [graph, trace] = select_meeting_points(sc.multi);
        sc.graph = graph;
        sc.trace = trace;
        sc.resolved = true;
    }
    std::optional<std::map<int, Direction>> fixed;
    if (directions == "cw" || directions == "ccw") {
        std::map<int, Direction> all;
        for (const auto& [id, t] : sc.graph.tours()) {
            (void)t;
            all[id] = dir_of(directions);
        }
        fixed = all;
    }
    SolveResult res;
    if (method == "sp") {
        res = mdtd_sp(sc.graph);
        if (fixed) {
            res.directions = *fixed;
            res.report = evaluate_tree_delay(res.tree, *fixed);
            res.schedule = schedule_for_directions(res.tree, *fixed);
        }
    } else if (method == "cg") {
        res = mdtd_cg(sc.graph);
    } else if (method == "opt") {
        res = brute_force_optimal(sc.graph, fixed, cap);
    } else {
        throw std::invalid_argument("method must be sp, cg or opt");
    }
    sc.solution = solution_from_result(res);
    return res;
}

py::dict solution_dict(const Scenario& sc) {
    py::dict d;
    if (!sc.solution) return d;
    const Solution& s = *sc.solution;
    d["method"] = s.method;
    d["wd"] = s.wd_analytic;
    d["wi"] = s.wi_analytic;
    py::dict arcs;
    for (auto& [c, p] : s.parent) arcs[py::int_(c)] = p;
    d["parent"] = arcs;
    py::dict dirs;
    for (auto& [v, dir] : s.directions) dirs[py::int_(v)] = to_string(dir);
    d["directions"] = dirs;
    py::dict waits;
    for (auto& [v, w] : s.start_waits) waits[py::int_(v)] = w;
    d["start_waits"] = waits;
    d["vbar"] = s.vbar;
    d["gamma"] = s.gamma;
    return d;
}

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["wi_measured"] = m.wi_measured;
    d["wd_measured"] = m.wd_measured;
    d["convergence_time"] = m.convergence_time;
    d["max_wait"] = m.max_wait;
    d["sum_distance"] = m.sum_distance;
    d["short_horizon"] = m.short_horizon;
    d["cold_start"] = m.cold_start;
    d["items_total"] = m.items_total;
    d["items_undelivered"] = m.items_undelivered;
    return d;
}

py::dict simulate_impl(const Scenario& sc, double horizon, double warmup,
                       py::object initial,
                       const std::vector<std::tuple<int, double, double>>& disturbances,
                       double distance_window) {
    if (!sc.solution) throw std::invalid_argument("scenario has no solution");
    SolveResult res = result_from_solution(sc.graph, *sc.solution);
    std::map<int, double> init;
    for (const auto& [v, ts] : res.schedule.per_tour) init[v] = ts.start_position;
    if (!initial.is_none())
        for (auto& [k, v] : initial.cast<std::map<int, double>>()) init[k] = v;
    SimWorld world(res.tree, res.directions, res.schedule, init);
    for (auto& [tour, t, dt] : disturbances) world.schedule_disturbance(tour, t, dt);
    return metrics_dict(world.run(horizon, warmup, distance_window));
}

py::dict single_hop_impl(const Scenario& sc, double cooperative_wi, double horizon,
                         double warmup, double distance_window) {
    if (!sc.grid) throw std::invalid_argument("single-hop needs a grid scenario");
    auto plan = single_hop_tours(*sc.grid, single_hop_budget(*sc.grid, cooperative_wi));
    double m_max = 0;
    for (auto& [id, cyc] : plan.cycles) {
        (void)id;
        m_max = std::max(m_max, static_cast<double>(cyc.size()));
    }
    if (horizon <= 0) {
        warmup = 2 * m_max;
        horizon = 5 * m_max;
    }
    py::dict d = metrics_dict(run_single_hop(*sc.grid, plan, horizon, warmup,
                                             distance_window));
    d["max_cycle_length"] = m_max;
    py::dict det;
    for (auto& [id, q] : plan.detours) det[py::int_(id)] = q;
    d["detours"] = det;
    d["forced_over_budget"] = plan.forced_over_budget;
    return d;
}

}  // namespace

PYBIND11_MODULE(patrolcpp, m) {
    m.doc() = "multi-robot patrolling on closed tours: planning, tree selection "
              "and store-and-forward delay simulation";

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("kind", &Scenario::kind)
        .def_readonly("resolved", &Scenario::resolved)
        .def_property_readonly("n", &Scenario::n_tours)
        .def_property_readonly("solution", &solution_dict)
        .def("__repr__", [](const Scenario& sc) {
            return "<Scenario kind=" + sc.kind + " n=" +
                   std::to_string(sc.n_tours()) + ">";
        });

    m.def("travel_time",
          [](double length, double p, double q, const std::string& d) {
              return travel_time(make_fully_sensed_tour(0, length), p, q, dir_of(d));
          },
          py::arg("length"), py::arg("p"), py::arg("q"), py::arg("direction"));
    m.def("first_sensing_offset",
          [](double length, const std::vector<std::pair<double, double>>& arcs,
             double p, const std::string& d) {
              std::vector<Interval> iv;
              for (auto& [a, b] : arcs) iv.push_back({a, b});
              return first_sensing_offset(Tour(0, length, iv), p, dir_of(d));
          },
          py::arg("length"), py::arg("sensing"), py::arg("p"), py::arg("direction"));

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("loads_scenario", &scenario_from_json, py::arg("text"));
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
    m.def("dumps_scenario", &scenario_to_json, py::arg("scenario"));

    m.def("make_scenario",
          [](const std::vector<std::tuple<int, double,
                                          std::vector<std::pair<double, double>>,
                                          std::map<int, double>, py::object>>& tours,
             const std::vector<std::pair<int, int>>& edges, int v0) {
              std::vector<Tour> ts;
              for (auto& [id, len, sensing, meets, base] : tours)
                  ts.push_back(tour_from_args(id, len, sensing, meets, base));
              std::set<Edge> es;
              for (auto& [a, b] : edges) es.insert(make_edge(a, b));
              Scenario sc;
              sc.resolved = true;
              sc.graph = TourGraph(std::move(ts), std::move(es), v0);
              return sc;
          },
          py::arg("tours"), py::arg("edges"), py::arg("v0"),
          "Build an abstract scenario from (id, length, sensing, meetings, "
          "base_position) tuples");

    m.def("generate_grid",
          [](int width, int height, int n, int rcom, std::uint64_t seed) {
              GridScenarioSpec spec;
              spec.width = width;
              spec.height = height;
              spec.n = n;
              spec.rcom = rcom;
              spec.seed = seed;
              return generate_grid(spec);
          },
          py::arg("width") = 20, py::arg("height") = 60, py::arg("n") = 4,
          py::arg("rcom") = 1, py::arg("seed") = 1);
    m.def("generate_corridor", &generate_corridor);
    m.def("generate_3sat",
          [](const std::string& formula) {
              return gen_3sat_mdt(parse_3sat(formula)).first;
          },
          py::arg("formula") = "paper-example");
    m.def("generate_chain_arms", &gen_chain_arms, py::arg("k"), py::arg("big"),
          py::arg("small"));
    m.def("generate_random", &gen_random_graph, py::arg("n"), py::arg("seed"),
          py::arg("edge_prob") = 0.25, py::arg("fully_sensed") = true);

    m.def("is_satisfiable",
          [](const std::string& formula) { return exhaustive_sat(parse_3sat(formula)); },
          py::arg("formula"));

    m.def("solve",
          [](Scenario& sc, const std::string& method, const std::string& directions,
             int cap) {
              solve_impl(sc, method, directions, cap);
              return solution_dict(sc);
          },
          py::arg("scenario"), py::arg("method") = "cg",
          py::arg("directions") = "free", py::arg("cap") = 10,
          "Resolve meeting points if needed and attach a solve result "
          "(method: sp | cg | opt)");

    m.def("evaluate_tree",
          [](const Scenario& sc, const std::map<int, int>& parent,
             const std::map<int, std::string>& directions) {
              auto tree = make_tree(sc.graph, parent);
              std::map<int, Direction> dirs;
              for (auto& [v, d] : directions) dirs[v] = dir_of(d);
              auto rep = evaluate_tree_delay(tree, dirs);
              py::dict out;
              out["wd"] = rep.worst_delay;
              out["wi"] = rep.worst_idleness;
              py::dict branch;
              for (auto& [v, b] : rep.per_tour_branch_delay)
                  branch[py::int_(v)] = b;
              out["branch_delay"] = branch;
              return out;
          },
          py::arg("scenario"), py::arg("parent"), py::arg("directions"));

    m.def("delay_lower_bound",
          [](const Scenario& sc) { return delay_lower_bound(sc.graph); });

    m.def("simulate", &simulate_impl, py::arg("scenario"), py::arg("horizon"),
          py::arg("warmup") = 0.0, py::arg("initial") = py::none(),
          py::arg("disturbances") = std::vector<std::tuple<int, double, double>>{},
          py::arg("distance_window") = -1.0);

    m.def("single_hop", &single_hop_impl, py::arg("scenario"),
          py::arg("cooperative_wi"), py::arg("horizon") = -1.0,
          py::arg("warmup") = 0.0, py::arg("distance_window") = -1.0,
          "Simulate the uncooperative detour baseline on a grid scenario");

    m.def("emit_milp", [](const Scenario& sc) { return emit_milp(sc.graph); });
    m.def("export_dot", &scenario_to_dot);
    m.def("ascii_map", &scenario_ascii_map);
}
