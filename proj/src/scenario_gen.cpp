#include "patrol/scenario_gen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace patrol {

namespace {

std::vector<int> nearest_neighbor_order(const std::vector<Cell>& cells, int start) {
    const int n = static_cast<int>(cells.size());
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> used(n, 0);
    int cur = start;
    used[cur] = 1;
    order.push_back(cur);
    for (int step = 1; step < n; ++step) {
        int best = -1, best_d = 0;
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            int d = chebyshev(cells[cur], cells[i]);
            if (best < 0 || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        used[best] = 1;
        order.push_back(best);
        cur = best;
    }
    return order;
}

long order_cost(const std::vector<Cell>& cells, const std::vector<int>& order) {
    long c = 0;
    for (size_t i = 0; i < order.size(); ++i) {
        size_t j = (i + 1) % order.size();
        c += chebyshev(cells[order[i]], cells[order[j]]);
    }
    return c;
}

void two_opt(const std::vector<Cell>& cells, std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    if (n < 4) return;
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 60) {
        improved = false;
        for (int i = 1; i < n - 1; ++i) {
            const Cell& a = cells[order[i - 1]];
            for (int j = i + 1; j < n; ++j) {
                const Cell& b = cells[order[i]];
                const Cell& c = cells[order[j]];
                const Cell& d = cells[order[(j + 1) % n]];
                int delta = chebyshev(a, c) + chebyshev(b, d) - chebyshev(a, b) -
                            chebyshev(c, d);
                if (delta < 0) {
                    std::reverse(order.begin() + i, order.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }
}

std::vector<Cell> bridge_order(const GridWorld& world, const std::vector<Cell>& cells,
                               const std::vector<int>& order) {
    std::vector<Cell> seq;
    for (size_t i = 0; i < order.size(); ++i) {
        Cell a = cells[order[i]];
        Cell b = cells[order[(i + 1) % order.size()]];
        seq.push_back(a);
        if (!world.step_allowed(a, b)) {
            auto path = grid_path(world, a, b);
            if (path.empty())
                throw InfeasibleError("free space is disconnected");
            for (size_t j = 1; j + 1 < path.size(); ++j) seq.push_back(path[j]);
        }
    }
    return seq;
}

}  // namespace

std::vector<Cell> grand_tour(const GridWorld& world, Cell base, std::uint64_t seed) {
    auto cells = world.free_cells();
    if (cells.empty()) throw InfeasibleError("no free cells");
    auto base_it = std::find(cells.begin(), cells.end(), base);
    if (base_it == cells.end()) throw InfeasibleError("base cell is not free");
    {
        auto dist = grid_distances(world, base);
        for (const Cell& c : cells)
            if (grid_distance_at(world, dist, c) < 0)
                throw InfeasibleError("free space is disconnected");
    }
    const int base_idx = static_cast<int>(base_it - cells.begin());

    Rng rng(seed);
    std::vector<int> starts{base_idx};
    for (int r = 0; r < 2 && static_cast<int>(cells.size()) > 1; ++r)
        starts.push_back(static_cast<int>(rng.below(cells.size())));

    std::vector<int> best_order;
    long best_cost = 0;
    for (int s : starts) {
        auto order = nearest_neighbor_order(cells, s);
        two_opt(cells, order);
        long cost = order_cost(cells, order);
        if (best_order.empty() || cost < best_cost) {
            best_order = std::move(order);
            best_cost = cost;
        }
    }
    auto it = std::find(best_order.begin(), best_order.end(), base_idx);
    std::rotate(best_order.begin(), it, best_order.end());
    return bridge_order(world, cells, best_order);
}

namespace {

/// Segment start indices of the balanced split (k segments, first starts
/// at 0). Cost along the tour is one unit per step; cmax is the largest
/// grid distance from the start cell.
std::vector<int> split_points(const GridWorld& world, const std::vector<Cell>& tour,
                              int k) {
    const int m = static_cast<int>(tour.size());
    auto dist = grid_distances(world, tour[0]);
    int cmax = 0;
    for (const Cell& c : tour) cmax = std::max(cmax, grid_distance_at(world, dist, c));
    std::vector<int> starts{0};
    int prev = 0;
    for (int j = 1; j < k; ++j) {
        double target = static_cast<double>(j) / k * (m - 2.0 * cmax) + cmax;
        int t = static_cast<int>(std::floor(target));
        t = std::max(t, prev);          // keep segments non-empty going forward
        t = std::min(t, m - 1);
        starts.push_back(t + 1 <= m - 1 ? t + 1 : m - 1);
        prev = starts.back();
    }
    return starts;
}

std::vector<Cell> close_segment(const GridWorld& world, std::vector<Cell> seg) {
    if (seg.size() >= 2 && seg.front() == seg.back()) seg.pop_back();
    if (seg.size() < 2) return seg;
    if (!world.step_allowed(seg.back(), seg.front())) {
        auto path = grid_path(world, seg.back(), seg.front());
        if (path.empty()) throw InfeasibleError("cannot close segment");
        for (size_t j = 1; j + 1 < path.size(); ++j) seg.push_back(path[j]);
    }
    return seg;
}

}  // namespace

std::vector<std::vector<Cell>> k_splitour(const GridWorld& world,
                                          const std::vector<Cell>& tour, int k) {
    const int m = static_cast<int>(tour.size());
    if (k < 1 || k > m)
        throw std::invalid_argument("k must be between 1 and the tour length");
    if (k == 1) return {tour};
    auto starts = split_points(world, tour, k);
    std::vector<std::vector<Cell>> raw;
    for (int j = 0; j < k; ++j) {
        int s = starts[j];
        int e = j + 1 < k ? starts[j + 1] : m;  // [s, e)
        std::vector<Cell> seg(tour.begin() + s, tour.begin() + e);
        raw.push_back(std::move(seg));
    }
    // merge degenerate segments into their predecessor
    std::vector<std::vector<Cell>> merged;
    for (auto& seg : raw) {
        if (seg.size() < 2 && !merged.empty()) {
            for (const Cell& c : seg) merged.back().push_back(c);
        } else {
            merged.push_back(std::move(seg));
        }
    }
    while (merged.size() > 1 && merged.front().size() < 2) {
        auto first = merged.front();
        merged.erase(merged.begin());
        for (size_t i = 0; i < first.size(); ++i)
            merged.front().insert(merged.front().begin() + i, first[i]);
    }
    std::vector<std::vector<Cell>> out;
    for (auto& seg : merged) out.push_back(close_segment(world, std::move(seg)));
    return out;
}

TourMultiGraph candidate_meetings(const GridWorld& world,
                                  const std::map<int, std::vector<Cell>>& subtours,
                                  int rcom, int v0, Cell base_cell) {
    std::map<Edge, std::vector<MeetingCandidate>> cands;
    std::vector<int> ids;
    for (const auto& [id, seq] : subtours) {
        (void)seq;
        ids.push_back(id);
    }
    // first occurrence of each cell along a tour
    auto first_index = [&](const std::vector<Cell>& seq) {
        std::map<Cell, int> idx;
        for (size_t i = 0; i < seq.size(); ++i)
            if (!idx.count(seq[i])) idx[seq[i]] = static_cast<int>(i);
        return idx;
    };
    std::map<int, std::map<Cell, int>> cell_idx;
    for (const auto& [id, seq] : subtours) cell_idx[id] = first_index(seq);

    for (size_t i = 0; i < ids.size(); ++i) {
        for (size_t j = i + 1; j < ids.size(); ++j) {
            int a = ids[i], b = ids[j];
            std::vector<MeetingCandidate> list;
            for (const auto& [ca, pa] : cell_idx[a]) {
                for (const auto& [cb, pb] : cell_idx[b]) {
                    if (chebyshev(ca, cb) > rcom) continue;
                    if (!line_of_sight(world, ca, cb)) continue;
                    list.push_back({static_cast<double>(pa), static_cast<double>(pb)});
                }
            }
            if (!list.empty()) cands[{a, b}] = std::move(list);
        }
    }
    std::vector<Tour> tours;
    for (const auto& [id, seq] : subtours) {
        double len = static_cast<double>(seq.size());
        std::optional<double> base;
        if (id == v0) {
            auto it = cell_idx[id].find(base_cell);
            if (it == cell_idx[id].end())
                throw InfeasibleError("base cell is not on tour v0");
            base = static_cast<double>(it->second);
        }
        tours.emplace_back(id, len, std::vector<Interval>{{0.0, len}},
                           std::map<int, double>{}, base);
    }
    TourMultiGraph mg(std::move(tours), std::move(cands), v0);
    if (!mg.connected())
        throw InfeasibleError("communication graph of the sub-tours is disconnected");
    return mg;
}

Scenario generate_grid(const GridScenarioSpec& spec) {
    GridWorld world(spec.width, spec.height, spec.obstacles);
    auto tour = grand_tour(world, spec.base_cell, spec.seed);
    auto subs = k_splitour(world, tour, spec.n);

    std::map<int, std::vector<Cell>> subtours;
    int v0 = 0;
    for (size_t i = 0; i < subs.size(); ++i) {
        subtours[static_cast<int>(i)] = subs[i];
        if (std::find(subs[i].begin(), subs[i].end(), spec.base_cell) != subs[i].end() &&
            std::find(subs[v0].begin(), subs[v0].end(), spec.base_cell) ==
                subs[v0].end())
            v0 = static_cast<int>(i);
    }
    Scenario sc;
    sc.kind = "grid";
    sc.seed = spec.seed;
    sc.resolved = false;
    sc.multi = candidate_meetings(world, subtours, spec.rcom, v0, spec.base_cell);
    GridEmbedding ge;
    ge.width = spec.width;
    ge.height = spec.height;
    ge.rcom = spec.rcom;
    ge.base_cell = spec.base_cell;
    ge.obstacles = spec.obstacles;
    ge.tour_cells = std::move(subtours);
    sc.grid = std::move(ge);
    return sc;
}

namespace {

std::vector<Cell> make_ring(int x0, int x1, int y0, int y1) {
    std::vector<Cell> ring;
    for (int x = x0; x <= x1; ++x) ring.push_back({x, y0});
    for (int y = y0 + 1; y <= y1; ++y) ring.push_back({x1, y});
    for (int x = x1 - 1; x >= x0; --x) ring.push_back({x, y1});
    for (int y = y1 - 1; y > y0; --y) ring.push_back({x0, y});
    return ring;
}

}  // namespace

Scenario generate_corridor() {
    const int W = 40, H = 20;
    std::set<Cell> obstacles;
    auto wall = [&](int x, int gap_lo, int gap_hi) {
        for (int y = 1; y < H; ++y)
            if (y < gap_lo || y > gap_hi) obstacles.insert({x, y});
    };
    wall(10, 14, 16);
    wall(20, 4, 6);
    wall(30, 14, 16);
    GridWorld world(W, H, obstacles);

    std::map<int, std::vector<Cell>> rings;
    for (int row = 0; row < 2; ++row) {
        for (int col = 0; col < 4; ++col) {
            int id = row * 4 + col;
            int x0 = col * 10 + 1, x1 = col * 10 + 9;
            // upper rings are one row shorter: tour lengths 30 vs 32
            int y0 = row * 10 + 1, y1 = row == 0 ? 9 : 18;
            rings[id] = make_ring(x0, x1, y0, y1);
        }
    }
    Cell base{1, 1};
    Scenario sc;
    sc.kind = "corridor";
    sc.resolved = false;
    sc.multi = candidate_meetings(world, rings, 2, 0, base);
    GridEmbedding ge;
    ge.width = W;
    ge.height = H;
    ge.rcom = 2;
    ge.base_cell = base;
    ge.obstacles = obstacles;
    ge.tour_cells = std::move(rings);
    sc.grid = std::move(ge);
    return sc;
}

double single_hop_budget(const GridEmbedding& grid, double cooperative_wi) {
    GridWorld world = grid.world();
    auto dist = grid_distances(world, grid.base_cell);
    double worst = 0.0;
    for (const auto& [id, seq] : grid.tour_cells) {
        (void)id;
        int dmin = -1;
        for (const Cell& c : seq) {
            int d = grid_distance_at(world, dist, c);
            if (d >= 0 && (dmin < 0 || d < dmin)) dmin = d;
        }
        if (dmin < 0)
            throw InfeasibleError("a tour cannot reach the base station: unbounded delay");
        worst = std::max(worst, static_cast<double>(seq.size()) + 2.0 * dmin);
    }
    return std::max(cooperative_wi, worst);
}

SingleHopPlan single_hop_tours(const GridEmbedding& grid, double budget) {
    GridWorld world = grid.world();
    auto dist = grid_distances(world, grid.base_cell);
    SingleHopPlan plan;
    plan.budget = budget;
    for (const auto& [id, seq] : grid.tour_cells) {
        plan.own_cells[id] = seq;
        const int m = static_cast<int>(seq.size());
        bool through_base =
            std::find(seq.begin(), seq.end(), grid.base_cell) != seq.end();
        if (through_base) {
            plan.cycles[id] = seq;
            plan.detours[id] = 0;
            continue;
        }
        // rotate so the cheapest detour anchor is first
        int best = -1, best_d = -1;
        for (int i = 0; i < m; ++i) {
            int d = grid_distance_at(world, dist, seq[i]);
            if (d < 0)
                throw InfeasibleError(
                    "a tour cannot reach the base station: unbounded delay");
            if (best < 0 || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        std::vector<Cell> rot(seq.begin() + best, seq.end());
        rot.insert(rot.end(), seq.begin(), seq.begin() + best);

        auto cost_of = [&](const std::vector<int>& anchors) {
            double c = m;
            for (int a : anchors)
                c += 2.0 * grid_distance_at(world, dist, rot[a]);
            return c;
        };
        std::vector<int> chosen_anchors{0};
        int q = 1;
        bool fits = cost_of(chosen_anchors) <= budget + kEps;
        for (int try_q = 2; try_q <= m; ++try_q) {
            auto anchors = split_points(world, rot, try_q);
            if (cost_of(anchors) > budget + kEps) break;
            chosen_anchors = anchors;
            q = try_q;
            fits = true;
        }
        if (!fits) plan.forced_over_budget = true;

        std::vector<Cell> cycle;
        std::set<int> anchor_set(chosen_anchors.begin(), chosen_anchors.end());
        for (int i = 0; i < m; ++i) {
            cycle.push_back(rot[i]);
            if (anchor_set.count(i)) {
                auto path = grid_path(world, rot[i], grid.base_cell);
                for (size_t j = 1; j < path.size(); ++j) cycle.push_back(path[j]);
                for (size_t j = path.size() - 1; j-- > 1;) cycle.push_back(path[j]);
                cycle.push_back(rot[i]);
            }
        }
        plan.cycles[id] = std::move(cycle);
        plan.detours[id] = q;
    }
    return plan;
}

ThreeSatFormula parse_3sat(const std::string& text) {
    std::string src = text;
    if (src == "paper-example") src = "x1,x2,x3;~x1,~x2,x4;x2,~x3,~x4";
    ThreeSatFormula f;
    std::stringstream clauses(src);
    std::string clause;
    while (std::getline(clauses, clause, ';')) {
        std::stringstream lits(clause);
        std::string lit;
        std::vector<ThreeSatFormula::Literal> parsed;
        while (std::getline(lits, lit, ',')) {
            std::string s;
            for (char ch : lit)
                if (!isspace(static_cast<unsigned char>(ch))) s += ch;
            if (s.empty()) continue;
            ThreeSatFormula::Literal l;
            size_t i = 0;
            if (s[i] == '~' || s[i] == '!' || s[i] == '-') {
                l.negated = true;
                ++i;
            }
            if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) ++i;
            if (i >= s.size()) throw std::invalid_argument("malformed literal: " + lit);
            l.var = std::stoi(s.substr(i));
            if (l.var < 1) throw std::invalid_argument("variables are numbered from 1");
            parsed.push_back(l);
        }
        if (parsed.size() != 3)
            throw std::invalid_argument("each clause needs exactly 3 literals");
        if (parsed[0].var == parsed[1].var || parsed[0].var == parsed[2].var ||
            parsed[1].var == parsed[2].var)
            throw std::invalid_argument("clause variables must be distinct");
        f.clauses.push_back({parsed[0], parsed[1], parsed[2]});
        for (const auto& l : parsed) f.num_vars = std::max(f.num_vars, l.var);
    }
    if (f.clauses.empty()) throw std::invalid_argument("empty formula");
    return f;
}

bool exhaustive_sat(const ThreeSatFormula& f) {
    if (f.num_vars > 24) throw std::invalid_argument("too many variables");
    for (std::uint32_t mask = 0; mask < (1u << f.num_vars); ++mask) {
        bool ok = true;
        for (const auto& cl : f.clauses) {
            bool sat = false;
            for (const auto& l : cl) {
                bool val = (mask >> (l.var - 1)) & 1;
                if (val != l.negated) sat = true;
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

std::pair<Scenario, std::map<int, Direction>> gen_3sat_mdt(const ThreeSatFormula& f) {
    const int a = f.num_vars;
    const int b = static_cast<int>(f.clauses.size());
    const int id_x = a + b + 1, id_xbar = a + b + 2, id_t = a + b + 3;
    auto clause_id = [&](int j) { return a + 1 + j; };  // j from 0

    std::map<int, std::map<int, double>> meets;
    std::set<Edge> edges;
    for (int j = 0; j < b; ++j) {
        for (int idx = 0; idx < 3; ++idx) {
            const auto& lit = f.clauses[j][idx];
            meets[clause_id(j)][lit.var] = idx * (2.0 / 3.0);
            meets[lit.var][clause_id(j)] = lit.negated ? 1.0 : 0.0;
            edges.insert(make_edge(clause_id(j), lit.var));
        }
    }
    for (int i = 1; i <= a; ++i) {
        meets[i][id_x] = 0.0;
        meets[i][id_xbar] = 1.0;
        meets[id_x][i] = 1.0;
        meets[id_xbar][i] = 1.0;
        edges.insert(make_edge(i, id_x));
        edges.insert(make_edge(i, id_xbar));
    }
    meets[id_x][id_t] = 0.0;
    meets[id_xbar][id_t] = 0.0;
    meets[id_t][id_x] = 0.0;
    meets[id_t][id_xbar] = 0.0;
    edges.insert(make_edge(id_x, id_t));
    edges.insert(make_edge(id_xbar, id_t));

    std::vector<Tour> tours;
    for (int id = 1; id <= a + b + 3; ++id) {
        std::optional<double> base;
        if (id == id_t) base = 1.0;
        tours.push_back(make_fully_sensed_tour(id, 2.0, meets[id], base));
    }
    Scenario sc;
    sc.kind = "3sat";
    sc.resolved = true;
    sc.graph = TourGraph(std::move(tours), std::move(edges), id_t);
    std::map<int, Direction> dirs;
    for (const auto& [id, t] : sc.graph.tours()) {
        (void)t;
        dirs[id] = Direction::CCW;
    }
    return {std::move(sc), std::move(dirs)};
}

Scenario gen_chain_arms(int k, double big, double small) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (!(big > small) || !(small > 0))
        throw std::invalid_argument("need big >> small > 0");
    std::map<int, std::map<int, double>> meets;
    std::set<Edge> edges;
    auto arm_id = [&](int i, int j) { return k + (i - 1) * k + j; };  // j in 1..k

    meets[0][1] = 0.0;
    for (int i = 1; i <= k; ++i) {
        meets[i][i - 1] = 0.0;
        meets[i - 1 == 0 ? 0 : i - 1][i] = i - 1 == 0 ? 0.0 : big / 2.0;
        if (i < k) meets[i][i + 1] = big / 2.0;
        edges.insert(make_edge(i - 1, i));
        // arm from v_i back to v0
        meets[i][arm_id(i, 1)] = 0.0;
        meets[arm_id(i, 1)][i] = 0.0;
        edges.insert(make_edge(i, arm_id(i, 1)));
        for (int j = 1; j <= k; ++j) {
            int id = arm_id(i, j);
            if (j > 1) {
                meets[id][arm_id(i, j - 1)] = 0.0;
                meets[arm_id(i, j - 1)][id] = small / 2.0;
                edges.insert(make_edge(id, arm_id(i, j - 1)));
            }
            if (j == k) {
                meets[id][0] = small / 2.0;
                meets[0][id] = 0.0;
                edges.insert(make_edge(id, 0));
            }
        }
    }
    std::vector<Tour> tours;
    tours.push_back(make_fully_sensed_tour(0, big, meets[0], 0.0));
    for (int i = 1; i <= k; ++i)
        tours.push_back(make_fully_sensed_tour(i, big, meets[i]));
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j)
            tours.push_back(make_fully_sensed_tour(arm_id(i, j), small,
                                                   meets[arm_id(i, j)]));
    Scenario sc;
    sc.kind = "chainarms";
    sc.resolved = true;
    sc.graph = TourGraph(std::move(tours), std::move(edges), 0);
    return sc;
}

TourGraph gen_random_tree_graph(int n, Rng& rng, bool fully_sensed) {
    std::map<int, std::map<int, double>> meets;
    std::set<Edge> edges;
    std::vector<double> lens(n);
    for (int i = 0; i < n; ++i) lens[i] = rng.uniform(1.0, 20.0);
    for (int i = 1; i < n; ++i) {
        int p = static_cast<int>(rng.below(i));
        edges.insert(make_edge(i, p));
        meets[i][p] = rng.uniform(0.0, lens[i]);
        meets[p][i] = rng.uniform(0.0, lens[p]);
    }
    std::vector<Tour> tours;
    for (int i = 0; i < n; ++i) {
        std::vector<Interval> arcs{{0.0, lens[i]}};
        if (!fully_sensed) {
            double r = rng.uniform();
            if (r < 0.15 && i != 0) {
                arcs.clear();  // relay-only
            } else if (r < 0.45) {
                double a = rng.uniform(0.0, lens[i] * 0.5);
                double bnd = a + rng.uniform(lens[i] * 0.1, lens[i] - a);
                arcs = {{a, std::min(bnd, lens[i])}};
            }
        }
        std::optional<double> base;
        if (i == 0) base = rng.uniform(0.0, lens[i]);
        tours.emplace_back(i, lens[i], arcs, meets[i], base);
    }
    return TourGraph(std::move(tours), std::move(edges), 0);
}

Scenario gen_random_graph(int n, std::uint64_t seed, double edge_prob,
                          bool fully_sensed) {
    Rng rng(seed);
    TourGraph tree = gen_random_tree_graph(n, rng, fully_sensed);
    std::set<Edge> edges = tree.edges();
    std::map<int, std::map<int, double>> extra;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (edges.count({i, j})) continue;
            if (rng.chance(edge_prob)) {
                edges.insert({i, j});
                extra[i][j] = rng.uniform(0.0, tree.tour(i).length());
                extra[j][i] = rng.uniform(0.0, tree.tour(j).length());
            }
        }
    }
    std::vector<Tour> tours;
    for (const auto& [id, t] : tree.tours()) {
        auto meets = t.meeting_positions();
        for (const auto& [nbr, pos] : extra[id]) meets[nbr] = pos;
        tours.emplace_back(id, t.length(), t.sensing_arcs(), meets, t.base_position());
    }
    Scenario sc;
    sc.kind = "random";
    sc.seed = seed;
    sc.resolved = true;
    sc.graph = TourGraph(std::move(tours), std::move(edges), 0);
    return sc;
}

}  // namespace patrol
