// patrol: generate / solve / simulate / compare / export for multi-robot
// patrolling scenarios with store-and-forward data delivery.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "patrol/meeting_select.hpp"
#include "patrol/milp.hpp"
#include "patrol/scenario_gen.hpp"
#include "patrol/sim.hpp"
#include "patrol/tree_select.hpp"

using namespace patrol;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSizeCap = 4;

int opt_size_cap() {
    if (const char* env = std::getenv("PATROL_OPT_CAP")) return std::atoi(env);
    return 10;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

struct SolveOutput {
    Scenario scenario;  // resolved, with solution
    SolveResult result;
};

/// Resolve meeting points if needed and solve with the chosen method.
SolveOutput solve_scenario(const Scenario& in, const std::string& method,
                           const std::string& directions) {
    SolveOutput out;
    out.scenario = in;
    if (!in.resolved) {
        auto [graph, trace] = select_meeting_points(in.multi);
        out.scenario.graph = graph;
        out.scenario.resolved = true;
        out.scenario.trace = trace;
    }
    const TourGraph& g = out.scenario.graph;
    std::optional<std::map<int, Direction>> fixed;
    if (directions == "cw" || directions == "ccw") {
        std::map<int, Direction> all;
        for (const auto& [id, t] : g.tours()) {
            (void)t;
            all[id] = direction_from_string(directions);
        }
        fixed = all;
    }
    if (method == "sp") {
        out.result = mdtd_sp(g);
        if (fixed) {
            out.result.directions = *fixed;
            out.result.report = evaluate_tree_delay(out.result.tree, *fixed);
            out.result.schedule = schedule_for_directions(out.result.tree, *fixed);
        }
    } else if (method == "cg") {
        out.result = mdtd_cg(g);
    } else if (method == "opt") {
        out.result = brute_force_optimal(g, fixed, opt_size_cap());
    } else {
        throw CLI::ValidationError("--method must be sp, cg or opt");
    }
    out.scenario.solution = solution_from_result(out.result);
    return out;
}

std::map<int, double> default_positions(const Schedule& s) {
    std::map<int, double> init;
    for (const auto& [v, ts] : s.per_tour) init[v] = ts.start_position;
    return init;
}

struct SimRow {
    std::string method;
    int n = 0;
    std::uint64_t seed = 0;
    double wi_analytic = 0, wd_analytic = 0;
    Metrics m;
    std::string status = "ok";
};

std::string metrics_header() {
    return "method,n,seed,WI_analytic,WI_measured,WD_analytic,WD_measured,"
           "convergence_time,sum_distance,status\n";
}

std::string metrics_row(const SimRow& r) {
    std::ostringstream os;
    os << r.method << ',' << r.n << ',' << r.seed << ',' << fmt(r.wi_analytic) << ','
       << fmt(r.m.wi_measured) << ',' << fmt(r.wd_analytic) << ','
       << fmt(r.m.wd_measured) << ',' << fmt(r.m.convergence_time) << ','
       << fmt(r.m.sum_distance) << ',' << r.status << '\n';
    return os.str();
}

Metrics simulate_solution(const SolveResult& res, double horizon, double warmup,
                          double window, const std::map<int, double>& init,
                          const std::vector<std::array<double, 3>>& disturbances,
                          std::string* trace_csv, std::string* delay_csv,
                          std::string* idleness_csv) {
    SimOptions opt;
    opt.record_trace = trace_csv != nullptr;
    opt.record_idleness = idleness_csv != nullptr;
    SimWorld world(res.tree, res.directions, res.schedule, init, opt);
    for (const auto& d : disturbances)
        world.schedule_disturbance(static_cast<int>(d[0]), d[1], d[2]);
    Metrics m = world.run(horizon, warmup, window);
    if (trace_csv) {
        std::ostringstream os;
        os << "time,robot,event,position\n";
        for (const auto& ev : world.trace())
            os << fmt(ev.time) << ',' << ev.tour << ',' << ev.kind << ','
               << fmt(ev.position) << '\n';
        *trace_csv = os.str();
    }
    if (delay_csv) {
        std::ostringstream os;
        os << "capture_time,tour,position,delay\n";
        for (const auto& it : world.items())
            if (it.delivered())
                os << fmt(it.capture_time) << ',' << it.tour << ',' << fmt(it.position)
                   << ',' << fmt(it.arrival_time - it.capture_time) << '\n';
        *delay_csv = os.str();
    }
    if (idleness_csv) {
        auto series = world.idleness_series();
        std::sort(series.begin(), series.end(), [](const auto& a, const auto& b) {
            return std::tie(a.time, a.tour, a.position) <
                   std::tie(b.time, b.tour, b.position);
        });
        std::ostringstream os;
        os << "time,tour,position,idleness\n";
        for (const auto& p : series)
            os << fmt(p.time) << ',' << p.tour << ',' << fmt(p.position) << ','
               << fmt(p.idleness) << '\n';
        *idleness_csv = os.str();
    }
    return m;
}

/// One sweep cell: solve cooperatively, simulate, run the baseline.
std::vector<SimRow> compare_cell(const Scenario& sc, int n, std::uint64_t seed,
                                 const std::vector<std::string>& methods) {
    std::vector<SimRow> rows;
    double wi_coop = 0.0;
    double coop_window = -1.0;
    for (const auto& method : methods) {
        if (method == "singlehop") continue;
        auto solved = solve_scenario(sc, method, "free");
        const auto& res = solved.result;
        SimWorld world(res.tree, res.directions, res.schedule,
                       default_positions(res.schedule));
        double period = world.period();
        double warmup = (res.tree.depth() + 4) * period;
        double horizon = warmup + 3 * period + res.report.worst_delay;
        wi_coop = res.report.worst_idleness;
        coop_window = wi_coop;
        SimRow row;
        row.method = method;
        row.n = n;
        row.seed = seed;
        row.wi_analytic = res.report.worst_idleness;
        row.wd_analytic = res.report.worst_delay;
        row.m = world.run(horizon, warmup, coop_window);
        rows.push_back(std::move(row));
    }
    for (const auto& method : methods) {
        if (method != "singlehop") continue;
        SimRow row;
        row.method = "singlehop";
        row.n = n;
        row.seed = seed;
        if (!sc.grid) throw InfeasibleError("single-hop needs a grid scenario");
        try {
            auto plan = single_hop_tours(*sc.grid, single_hop_budget(*sc.grid, wi_coop));
            double m_max = 0;
            for (const auto& [id, cyc] : plan.cycles)
                m_max = std::max(m_max, static_cast<double>(cyc.size()));
            row.wi_analytic = m_max;
            row.wd_analytic = 0.0;
            row.m = run_single_hop(*sc.grid, plan, 5 * m_max, 2 * m_max, coop_window);
        } catch (const InfeasibleError&) {
            row.status = "unbounded";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"multi-robot patrolling on closed tours with cooperative "
                 "store-and-forward data delivery"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    auto add_sub = [&](const char* name, const char* desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "print help");
        return sub;
    };

    // generate ------------------------------------------------------------
    auto* gen = add_sub("generate", "create a scenario file");
    std::string gen_kind, gen_out = "scenario.json", gen_formula = "paper-example";
    int gw = 20, gh = 60, gn = 4, grcom = 1, gk = 6;
    std::uint64_t gseed = 1;
    double gbig = 1000.0, gsmall = 0.1, gedge = 0.25;
    gen->add_option("kind", gen_kind, "grid | corridor | 3sat | chainarms | random")
        ->required();
    gen->add_option("--width,--w", gw, "grid width in cells");
    gen->add_option("--height,--h", gh, "grid height in cells");
    gen->add_option("--n", gn, "number of robots / tours");
    gen->add_option("--rcom", grcom, "communication range in cells");
    gen->add_option("--seed", gseed, "generator seed");
    gen->add_option("--formula", gen_formula,
                    "3-CNF like \"x1,x2,~x3;x2,x3,x4\" or paper-example");
    gen->add_option("--k", gk, "chain length");
    gen->add_option("--big", gbig, "large tour length");
    gen->add_option("--small", gsmall, "small tour length");
    gen->add_option("--edge-prob", gedge, "extra edge probability (random)");
    gen->add_option("--out,-o", gen_out, "output scenario file");

    // solve ---------------------------------------------------------------
    auto* solve = add_sub("solve", "select a tree and directions");
    std::string s_in, s_out = "solved.json", s_method = "cg", s_dirs = "free";
    solve->add_option("--in,-i", s_in, "scenario file")->required();
    solve->add_option("--method,-m", s_method, "sp | cg | opt");
    solve->add_option("--directions", s_dirs,
                      "free (optimize) | cw | ccw (fix all, MDT variant)");
    solve->add_option("--out,-o", s_out, "solved scenario file");

    // simulate ------------------------------------------------------------
    auto* sim = add_sub("simulate", "run the online execution");
    std::string m_in, m_out = "metrics.csv", m_trace, m_delays, m_idle, m_init;
    double m_horizon = 0, m_warmup = 0;
    std::vector<std::string> m_disturb;
    sim->add_option("--in,-i", m_in, "solved scenario file")->required();
    sim->add_option("--horizon", m_horizon, "simulation end time")->required();
    sim->add_option("--warmup", m_warmup, "measurement window start");
    sim->add_option("--initial", m_init,
                    "initial positions tour:pos,tour:pos (default: schedule starts)");
    sim->add_option("--disturb", m_disturb,
                    "disturbance tour=ID,t=TIME,dt=EXTRA (repeatable)");
    sim->add_option("--trace", m_trace, "write the event trace CSV here");
    sim->add_option("--delays", m_delays, "write per-item delay CSV here");
    sim->add_option("--idleness", m_idle, "write the idleness time series CSV here");
    sim->add_option("--out,-o", m_out, "metrics CSV");

    // compare -------------------------------------------------------------
    auto* cmp = add_sub("compare", "cooperative methods vs the single-hop baseline");
    std::string c_in, c_out = "results.csv", c_methods = "cg,sp,singlehop";
    int c_nmin = 2, c_nmax = 8, cw_ = 20, ch_ = 60, c_rcom = 1;
    std::string c_seeds = "1";
    bool c_corridor = false;
    cmp->add_option("--in,-i", c_in, "fixed scenario file (skip the sweep)");
    cmp->add_flag("--corridor", c_corridor, "use the built-in corridor scenario");
    cmp->add_option("--methods", c_methods, "comma list from {cg,sp,singlehop}");
    cmp->add_option("--nmin", c_nmin, "sweep start");
    cmp->add_option("--nmax", c_nmax, "sweep end");
    cmp->add_option("--width,--w", cw_, "grid width");
    cmp->add_option("--height,--h", ch_, "grid height");
    cmp->add_option("--rcom", c_rcom, "communication range");
    cmp->add_option("--seeds", c_seeds, "comma list of seeds");
    cmp->add_option("--out,-o", c_out, "results CSV");

    // export --------------------------------------------------------------
    auto* exp = add_sub("export", "write dot / lp / ascii-map artifacts");
    std::string e_in, e_out = "", e_format = "dot";
    exp->add_option("--in,-i", e_in, "scenario file")->required();
    exp->add_option("--format,-f", e_format, "dot | lp | ascii-map");
    exp->add_option("--out,-o", e_out, "output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (gen->parsed()) {
        Scenario sc;
        if (gen_kind == "grid") {
            GridScenarioSpec spec;
            spec.width = gw;
            spec.height = gh;
            spec.n = gn;
            spec.rcom = grcom;
            spec.seed = gseed;
            sc = generate_grid(spec);
        } else if (gen_kind == "corridor") {
            sc = generate_corridor();
        } else if (gen_kind == "3sat") {
            sc = gen_3sat_mdt(parse_3sat(gen_formula)).first;
        } else if (gen_kind == "chainarms") {
            sc = gen_chain_arms(gk, gbig, gsmall);
        } else if (gen_kind == "random") {
            sc = gen_random_graph(gn, gseed, gedge);
        } else {
            throw CLI::ValidationError("unknown kind " + gen_kind);
        }
        save_scenario(sc, gen_out);
        double total = 0;
        const auto& tours = sc.resolved ? sc.graph.tours() : sc.multi.tours();
        for (const auto& [id, t] : tours) {
            (void)id;
            total += t.length();
        }
        std::size_t edges = sc.resolved ? sc.graph.edges().size()
                                        : sc.multi.candidates().size();
        std::printf("%s: n=%d total_length=%s edges=%zu -> %s\n", gen_kind.c_str(),
                    sc.n_tours(), fmt(total).c_str(), edges, gen_out.c_str());
        return 0;
    }

    if (solve->parsed()) {
        Scenario sc = load_scenario(s_in);
        SolveOutput out = solve_scenario(sc, s_method, s_dirs);
        save_scenario(out.scenario, s_out);
        std::printf("method=%s n=%d WI=%s WD=%s depth=%d\n", s_method.c_str(),
                    out.scenario.graph.size(),
                    fmt(out.result.report.worst_idleness).c_str(),
                    fmt(out.result.report.worst_delay).c_str(),
                    out.result.tree.depth());
        std::printf("%s",
                    schedule_table(out.scenario.graph, out.result.schedule).c_str());
        return 0;
    }

    if (sim->parsed()) {
        Scenario sc = load_scenario(m_in);
        if (!sc.solution)
            throw std::runtime_error("scenario has no solution; run solve first");
        SolveResult res = result_from_solution(sc.graph, *sc.solution);
        auto init = default_positions(res.schedule);
        if (!m_init.empty()) {
            std::stringstream ss(m_init);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto colon = item.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("--initial wants tour:pos pairs");
                init[std::stoi(item.substr(0, colon))] =
                    std::stod(item.substr(colon + 1));
            }
        }
        std::vector<std::array<double, 3>> disturbances;
        for (const auto& d : m_disturb) {
            std::array<double, 3> parsed{0, 0, 0};
            std::stringstream ss(d);
            std::string field;
            while (std::getline(ss, field, ',')) {
                auto eq = field.find('=');
                if (eq == std::string::npos)
                    throw CLI::ValidationError("--disturb wants tour=..,t=..,dt=..");
                std::string key = field.substr(0, eq);
                double val = std::stod(field.substr(eq + 1));
                if (key == "tour") parsed[0] = val;
                else if (key == "t") parsed[1] = val;
                else if (key == "dt") parsed[2] = val;
                else throw CLI::ValidationError("unknown disturbance field " + key);
            }
            disturbances.push_back(parsed);
        }
        std::string trace_csv, delay_csv, idleness_csv;
        Metrics m = simulate_solution(res, m_horizon, m_warmup, -1.0, init,
                                      disturbances,
                                      m_trace.empty() ? nullptr : &trace_csv,
                                      m_delays.empty() ? nullptr : &delay_csv,
                                      m_idle.empty() ? nullptr : &idleness_csv);
        if (!m_trace.empty()) write_file(m_trace, trace_csv);
        if (!m_delays.empty()) write_file(m_delays, delay_csv);
        if (!m_idle.empty()) write_file(m_idle, idleness_csv);
        SimRow row;
        row.method = sc.solution->method;
        row.n = sc.graph.size();
        row.seed = sc.seed;
        row.wi_analytic = sc.solution->wi_analytic;
        row.wd_analytic = sc.solution->wd_analytic;
        row.m = m;
        if (m.short_horizon) row.status = "short-horizon";
        write_file(m_out, metrics_header() + metrics_row(row));
        std::printf("WI=%s WD=%s convergence=%s%s\n", fmt(m.wi_measured).c_str(),
                    fmt(m.wd_measured).c_str(), fmt(m.convergence_time).c_str(),
                    m.short_horizon ? " (short horizon)" : "");
        return 0;
    }

    if (cmp->parsed()) {
        std::vector<std::string> methods;
        {
            std::stringstream ss(c_methods);
            std::string item;
            while (std::getline(ss, item, ',')) methods.push_back(item);
        }
        std::vector<SimRow> rows;
        if (!c_in.empty() || c_corridor) {
            Scenario sc = c_corridor ? generate_corridor() : load_scenario(c_in);
            rows = compare_cell(sc, sc.n_tours(), sc.seed, methods);
        } else {
            std::vector<std::uint64_t> seeds;
            std::stringstream ss(c_seeds);
            std::string item;
            while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
            std::vector<std::future<std::vector<SimRow>>> cells;
            for (std::uint64_t seed : seeds) {
                GridWorld world(cw_, ch_);
                auto tour = grand_tour(world, {0, 0}, seed);
                for (int n = c_nmin; n <= c_nmax; ++n) {
                    cells.push_back(std::async(std::launch::async, [=]() {
                        GridWorld w(cw_, ch_);
                        auto subs = k_splitour(w, tour, n);
                        std::map<int, std::vector<Cell>> subtours;
                        int v0 = 0;
                        for (size_t i = 0; i < subs.size(); ++i) {
                            subtours[static_cast<int>(i)] = subs[i];
                            if (std::find(subs[i].begin(), subs[i].end(),
                                          Cell{0, 0}) != subs[i].end())
                                v0 = static_cast<int>(i);
                        }
                        Scenario cell_sc;
                        cell_sc.kind = "grid";
                        cell_sc.seed = seed;
                        cell_sc.resolved = false;
                        cell_sc.multi =
                            candidate_meetings(w, subtours, c_rcom, v0, {0, 0});
                        GridEmbedding ge;
                        ge.width = cw_;
                        ge.height = ch_;
                        ge.rcom = c_rcom;
                        ge.base_cell = {0, 0};
                        ge.tour_cells = subtours;
                        cell_sc.grid = ge;
                        return compare_cell(cell_sc, n, seed, methods);
                    }));
                }
            }
            for (auto& fut : cells)
                for (auto& row : fut.get()) rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end(), [](const SimRow& a, const SimRow& b) {
            return std::tie(a.method, a.n, a.seed) < std::tie(b.method, b.n, b.seed);
        });
        std::string csv = metrics_header();
        for (const auto& r : rows) csv += metrics_row(r);
        write_file(c_out, csv);
        std::printf("%zu rows -> %s\n", rows.size(), c_out.c_str());
        return 0;
    }

    if (exp->parsed()) {
        Scenario sc = load_scenario(e_in);
        std::string text;
        if (e_format == "dot") {
            text = scenario_to_dot(sc);
        } else if (e_format == "lp") {
            if (!sc.resolved)
                throw std::runtime_error("lp export needs resolved meeting points");
            text = emit_milp(sc.graph);
        } else if (e_format == "ascii-map") {
            text = scenario_ascii_map(sc);
        } else {
            throw CLI::ValidationError("unknown format " + e_format);
        }
        if (e_out.empty()) std::fputs(text.c_str(), stdout);
        else write_file(e_out, text);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const SizeCapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSizeCap;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
