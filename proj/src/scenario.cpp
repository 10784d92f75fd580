#include "patrol/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace patrol {

using ordered_json = nlohmann::ordered_json;

Solution solution_from_result(const SolveResult& res) {
    Solution sol;
    sol.method = to_string(res.method);
    sol.parent = res.tree.parents();
    sol.directions = res.directions;
    for (const auto& [v, ts] : res.schedule.per_tour) sol.start_waits[v] = ts.start_wait;
    auto rep = make_repeated_schedule(res.schedule, res.tree);
    sol.vbar = rep.vbar;
    sol.gamma = rep.gamma;
    sol.wd_analytic = res.report.worst_delay;
    sol.wi_analytic = res.report.worst_idleness;
    return sol;
}

SolveResult result_from_solution(const TourGraph& graph, const Solution& sol) {
    SolveResult res;
    res.tree = make_tree(graph, sol.parent);
    res.directions = sol.directions;
    res.report = evaluate_tree_delay(res.tree, res.directions);
    res.schedule = schedule_for_directions(res.tree, res.directions);
    if (sol.method == "sp") res.method = SolveMethod::SP;
    else if (sol.method == "cg") res.method = SolveMethod::CG;
    else res.method = SolveMethod::OPT;
    return res;
}

namespace {

ordered_json tour_to_json(const Tour& t, const std::optional<GridEmbedding>& grid,
                          bool resolved) {
    ordered_json j;
    j["id"] = t.id();
    j["length"] = t.length();
    ordered_json arcs = ordered_json::array();
    for (const auto& a : t.sensing_arcs()) arcs.push_back({a.begin, a.end});
    j["sensing"] = arcs;
    if (resolved) {
        ordered_json meets = ordered_json::object();
        for (const auto& [n, p] : t.meeting_positions()) meets[std::to_string(n)] = p;
        j["meetings"] = meets;
    }
    if (t.base_position()) j["base_position"] = *t.base_position();
    if (grid) {
        auto it = grid->tour_cells.find(t.id());
        if (it != grid->tour_cells.end()) {
            ordered_json cells = ordered_json::array();
            for (const Cell& c : it->second) cells.push_back({c.x, c.y});
            j["cells"] = cells;
        }
    }
    return j;
}

Tour tour_from_json(const ordered_json& j, bool resolved) {
    std::vector<Interval> arcs;
    for (const auto& a : j.at("sensing")) arcs.push_back({a.at(0), a.at(1)});
    std::map<int, double> meets;
    if (resolved && j.contains("meetings"))
        for (auto it = j.at("meetings").begin(); it != j.at("meetings").end(); ++it)
            meets[std::stoi(it.key())] = it.value().get<double>();
    std::optional<double> base;
    if (j.contains("base_position")) base = j.at("base_position").get<double>();
    return Tour(j.at("id"), j.at("length"), std::move(arcs), std::move(meets), base);
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
    ordered_json j;
    j["format"] = "patrol-scenario";
    j["version"] = sc.version;
    j["kind"] = sc.kind;
    j["seed"] = sc.seed;
    j["resolved"] = sc.resolved;
    j["v0"] = sc.resolved ? sc.graph.v0() : sc.multi.v0();
    ordered_json tours = ordered_json::array();
    if (sc.resolved) {
        for (const auto& [id, t] : sc.graph.tours()) {
            (void)id;
            tours.push_back(tour_to_json(t, sc.grid, true));
        }
        ordered_json edges = ordered_json::array();
        for (const auto& [a, b] : sc.graph.edges()) edges.push_back({a, b});
        j["tours"] = tours;
        j["edges"] = edges;
    } else {
        for (const auto& [id, t] : sc.multi.tours()) {
            (void)id;
            tours.push_back(tour_to_json(t, sc.grid, false));
        }
        j["tours"] = tours;
        ordered_json cands = ordered_json::array();
        for (const auto& [e, list] : sc.multi.candidates()) {
            ordered_json c;
            c["pair"] = {e.first, e.second};
            ordered_json pts = ordered_json::array();
            for (const auto& mc : list) pts.push_back({mc.pos_a, mc.pos_b});
            c["points"] = pts;
            cands.push_back(c);
        }
        j["candidates"] = cands;
    }
    if (sc.grid) {
        ordered_json g;
        g["width"] = sc.grid->width;
        g["height"] = sc.grid->height;
        g["rcom"] = sc.grid->rcom;
        g["base_cell"] = {sc.grid->base_cell.x, sc.grid->base_cell.y};
        ordered_json obs = ordered_json::array();
        for (const Cell& c : sc.grid->obstacles) obs.push_back({c.x, c.y});
        g["obstacles"] = obs;
        j["grid"] = g;
    }
    if (sc.solution) {
        const Solution& s = *sc.solution;
        ordered_json js;
        js["method"] = s.method;
        ordered_json arcs = ordered_json::array();
        for (const auto& [c, p] : s.parent) arcs.push_back({c, p});
        js["arcs"] = arcs;
        ordered_json dirs = ordered_json::object();
        for (const auto& [v, d] : s.directions) dirs[std::to_string(v)] = to_string(d);
        js["directions"] = dirs;
        ordered_json waits = ordered_json::object();
        for (const auto& [v, w] : s.start_waits) waits[std::to_string(v)] = w;
        js["start_waits"] = waits;
        js["vbar"] = s.vbar;
        js["gamma"] = s.gamma;
        js["wd_analytic"] = s.wd_analytic;
        js["wi_analytic"] = s.wi_analytic;
        j["solution"] = js;
    }
    if (sc.trace) {
        ordered_json jt;
        jt["order"] = sc.trace->order;
        ordered_json ch = ordered_json::array();
        for (const auto& [e, idx] : sc.trace->chosen) {
            ordered_json c;
            c["pair"] = {e.first, e.second};
            c["index"] = idx;
            c["distance"] = sc.trace->rationale.at(e);
            ch.push_back(c);
        }
        jt["chosen"] = ch;
        j["trace"] = jt;
    }
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    if (j.at("format") != "patrol-scenario")
        throw std::invalid_argument("not a patrol scenario file");
    Scenario sc;
    sc.version = j.at("version");
    sc.kind = j.at("kind");
    sc.seed = j.at("seed");
    sc.resolved = j.at("resolved");
    int v0 = j.at("v0");

    std::optional<GridEmbedding> grid;
    if (j.contains("grid")) {
        GridEmbedding g;
        g.width = j["grid"].at("width");
        g.height = j["grid"].at("height");
        g.rcom = j["grid"].at("rcom");
        g.base_cell = {j["grid"].at("base_cell").at(0), j["grid"].at("base_cell").at(1)};
        for (const auto& c : j["grid"].at("obstacles"))
            g.obstacles.insert({c.at(0), c.at(1)});
        grid = g;
    }

    std::vector<Tour> tours;
    for (const auto& jt : j.at("tours")) {
        tours.push_back(tour_from_json(jt, sc.resolved));
        if (grid && jt.contains("cells")) {
            std::vector<Cell> cells;
            for (const auto& c : jt.at("cells")) cells.push_back({c.at(0), c.at(1)});
            grid->tour_cells[tours.back().id()] = std::move(cells);
        }
    }
    if (sc.resolved) {
        std::set<Edge> edges;
        for (const auto& e : j.at("edges")) edges.insert(make_edge(e.at(0), e.at(1)));
        sc.graph = TourGraph(std::move(tours), std::move(edges), v0);
    } else {
        std::map<Edge, std::vector<MeetingCandidate>> cands;
        for (const auto& c : j.at("candidates")) {
            Edge e = make_edge(c.at("pair").at(0), c.at("pair").at(1));
            for (const auto& p : c.at("points"))
                cands[e].push_back({p.at(0), p.at(1)});
        }
        sc.multi = TourMultiGraph(std::move(tours), std::move(cands), v0);
    }
    sc.grid = grid;
    if (j.contains("solution")) {
        const auto& js = j["solution"];
        Solution s;
        s.method = js.at("method");
        for (const auto& a : js.at("arcs")) s.parent[a.at(0)] = a.at(1);
        for (auto it = js.at("directions").begin(); it != js.at("directions").end(); ++it)
            s.directions[std::stoi(it.key())] = direction_from_string(it.value());
        for (auto it = js.at("start_waits").begin(); it != js.at("start_waits").end(); ++it)
            s.start_waits[std::stoi(it.key())] = it.value().get<double>();
        s.vbar = js.at("vbar");
        s.gamma = js.at("gamma");
        s.wd_analytic = js.at("wd_analytic");
        s.wi_analytic = js.at("wi_analytic");
        sc.solution = s;
    }
    if (j.contains("trace")) {
        SelectionTrace t;
        for (const auto& v : j["trace"].at("order")) t.order.push_back(v);
        for (const auto& c : j["trace"].at("chosen")) {
            Edge e = make_edge(c.at("pair").at(0), c.at("pair").at(1));
            t.chosen[e] = c.at("index");
            t.rationale[e] = c.at("distance");
        }
        sc.trace = t;
    }
    return sc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << scenario_to_json(sc);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return scenario_from_json(ss.str());
}

std::string scenario_to_dot(const Scenario& sc) {
    if (!sc.resolved)
        throw std::invalid_argument("dot export needs resolved meeting points");
    std::ostringstream os;
    os << "graph tours {\n";
    os << "  node [shape=circle];\n";
    for (const auto& [id, t] : sc.graph.tours()) {
        os << "  t" << id << " [label=\"" << id << "\\nl=" << t.length() << "\"";
        if (id == sc.graph.v0()) os << " shape=doublecircle";
        os << "];\n";
    }
    std::set<Edge> tree_edges;
    if (sc.solution)
        for (const auto& [c, p] : sc.solution->parent) tree_edges.insert(make_edge(c, p));
    for (const auto& [a, b] : sc.graph.edges()) {
        os << "  t" << a << " -- t" << b;
        if (tree_edges.count({a, b}))
            os << " [penwidth=2.5 color=black]";
        else if (sc.solution)
            os << " [style=dashed color=gray]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string scenario_ascii_map(const Scenario& sc) {
    if (!sc.grid) throw std::invalid_argument("scenario has no grid embedding");
    return ascii_map(sc.grid->world(), sc.grid->tour_cells, sc.grid->base_cell);
}

std::string schedule_table(const TourGraph& graph, const Schedule& schedule) {
    std::ostringstream os;
    os << "tour  start      dir  start-wait  tau\n";
    for (const auto& [v, ts] : schedule.per_tour) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%-5d %-10.4g %-4s %-11.4g %.4g\n", v,
                      ts.start_position, to_string(ts.direction), ts.start_wait,
                      schedule.tau(v, graph));
        os << buf;
    }
    return os.str();
}

}  // namespace patrol
