#include "patrol/tree_select.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace patrol {

const char* to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::SP: return "sp";
        case SolveMethod::CG: return "cg";
        case SolveMethod::OPT: return "opt";
    }
    return "?";
}

namespace {

void require_connected(const TourGraph& graph) {
    auto dist = graph.hop_distances_from_base();
    if (dist.size() != graph.tours().size())
        throw std::invalid_argument("tour graph is not connected");
}

SolveResult finish(const TourGraph& graph, std::map<int, int> parent,
                   std::map<int, Direction> dirs, SolveMethod method) {
    SolveResult res;
    res.tree = make_tree(graph, parent);
    res.directions = std::move(dirs);
    res.report = evaluate_tree_delay(res.tree, res.directions);
    res.schedule = schedule_for_directions(res.tree, res.directions);
    res.method = method;
    return res;
}

Direction leaf_rule(const Tour& t, double start) {
    if (!t.senses()) return Direction::CW;
    double cw = t.length() - first_sensing_offset(t, start, Direction::CW);
    double ccw = t.length() - first_sensing_offset(t, start, Direction::CCW);
    return cw <= ccw ? Direction::CW : Direction::CCW;
}

}  // namespace

SolveResult mdtd_sp(const TourGraph& graph) {
    require_connected(graph);
    auto dist = graph.hop_distances_from_base();
    std::map<int, int> parent;
    for (const auto& [v, d] : dist) {
        if (v == graph.v0()) continue;
        int best = -1;
        for (int w : graph.neighbors(v)) {
            if (dist.at(w) == d - 1) {
                best = w;
                break;  // neighbors sorted: lowest id wins
            }
        }
        parent[v] = best;
    }
    auto tree = make_tree(graph, parent);
    auto dirs = minimum_delay_directions(tree);
    SolveResult res;
    res.tree = std::move(tree);
    res.directions = std::move(dirs);
    res.report = evaluate_tree_delay(res.tree, res.directions);
    res.schedule = schedule_for_directions(res.tree, res.directions);
    res.method = SolveMethod::SP;
    return res;
}

SolveResult mdtd_cg(const TourGraph& graph) {
    require_connected(graph);
    if (graph.size() == 1) {
        std::map<int, Direction> dirs;
        auto tree = make_tree(graph, {});
        dirs[graph.v0()] = leaf_rule(graph.tour(graph.v0()),
                                     start_position(tree, graph.v0()));
        return finish(graph, {}, dirs, SolveMethod::CG);
    }
    auto cg = build_converted_graph(graph);
    auto sp = converted_shortest_paths(cg);

    struct Entry {
        double len = kInf;
        std::vector<int> path;  // vertex chain to the base vertex
        double del = 0.0;
    };
    std::map<int, Entry> best;
    for (const auto& [pair, idx] : cg.index) {
        for (int t : {pair.first, pair.second}) {
            auto& e = best[t];
            if (sp.dist[idx] < e.len) {  // strict: first vertex in index order wins ties
                e.len = sp.dist[idx];
                e.path = sp.path_from(idx);
            }
        }
    }
    for (auto& [t, e] : best) {
        if (e.len == kInf) {
            if (t == graph.v0()) continue;
            throw std::invalid_argument("tour " + std::to_string(t) +
                                        " unreachable in converted graph");
        }
        const Tour& tour = graph.tour(t);
        if (tour.senses()) {
            double p = cg.vertices[e.path.front()].position_on(t);
            e.del = std::min(tour.length() - first_sensing_offset(tour, p, Direction::CW),
                             tour.length() - first_sensing_offset(tour, p, Direction::CCW));
        }
    }

    std::vector<int> order;
    for (const auto& [t, e] : best) {
        (void)e;
        if (t != graph.v0()) order.push_back(t);
    }
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        double kx = best[x].len + best[x].del;
        double ky = best[y].len + best[y].del;
        if (kx != ky) return kx > ky;
        return x < y;
    });

    std::map<int, int> parent;
    std::map<int, Direction> dirs;
    std::set<int> in_tree{graph.v0()};  // the base tour roots the tree
    for (int i : order) {
        if (in_tree.count(i)) continue;
        int m = i;
        const auto& path = best[i].path;
        std::vector<std::pair<int, int>> walk;  // (child, parent) in walk order
        std::set<int> on_walk{i};
        int prev = -1;
        for (int vtx : path) {
            if (in_tree.count(m)) break;
            const auto& vert = cg.vertices[vtx];
            if (!vert.on(m)) {
                // the walk left tour m at the previous vertex
                const auto& pv = cg.vertices[prev];
                int other = pv.a == m ? pv.b : pv.a;
                if (on_walk.count(other)) {
                    // the shortest path re-entered a tour it already
                    // passed; contract the loop back to that tour
                    while (!walk.empty() && walk.back().second != other) {
                        on_walk.erase(walk.back().first);
                        walk.pop_back();
                    }
                    m = other;
                    prev = vtx;
                    continue;
                }
                walk.push_back({m, other});
                on_walk.insert(other);
                m = other;
                if (!dirs.count(m)) {
                    const Tour& t = graph.tour(m);
                    double enter = pv.position_on(m);
                    double leave = m == graph.v0()
                                       ? *graph.tour(graph.v0()).base_position()
                                       : vert.position_on(m);
                    double cw = travel_time(t, enter, leave, Direction::CW);
                    double ccw = travel_time(t, enter, leave, Direction::CCW);
                    dirs[m] = cw < ccw ? Direction::CW : Direction::CCW;
                }
            }
            prev = vtx;
        }
        for (const auto& [c, p] : walk) {
            parent[c] = p;
            in_tree.insert(c);
            in_tree.insert(p);
        }
    }

    auto tree = make_tree(graph, parent);
    for (const auto& [v, t] : graph.tours()) {
        (void)t;
        if (!dirs.count(v))
            dirs[v] = leaf_rule(graph.tour(v), start_position(tree, v));
    }
    SolveResult res;
    res.tree = std::move(tree);
    res.directions = std::move(dirs);
    res.report = evaluate_tree_delay(res.tree, res.directions);
    res.schedule = schedule_for_directions(res.tree, res.directions);
    res.method = SolveMethod::CG;
    return res;
}

namespace {

/// Spanning-tree enumeration in lexicographic order of the sorted edge
/// list, visiting parents as flat index arrays. Include branches are
/// explored before exclude branches, so the first tree attaining the best
/// value is the lexicographically smallest. Allocation-free in the hot
/// path: union-find with undo plus a component-merge connectivity prune.
class TreeEnumerator {
  public:
    TreeEnumerator(const TourGraph& graph,
                   std::function<void(const std::vector<int>&)> visit)
        : visit_(std::move(visit)) {
        for (const auto& [id, t] : graph.tours()) {
            (void)t;
            vid_[id] = n_++;
        }
        for (const auto& e : graph.edges())
            edges_.push_back({vid_.at(e.first), vid_.at(e.second)});
        std::sort(edges_.begin(), edges_.end());
        root_ = vid_.at(graph.v0());
    }

    const std::map<int, int>& vertex_ids() const { return vid_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    void run() {
        parent_.assign(n_, -1);
        rank_.assign(n_, 0);
        dsu_.resize(n_);
        for (int i = 0; i < n_; ++i) dsu_[i] = i;
        scratch_.resize(n_);
        chosen_.clear();
        adj_head_.assign(n_, -1);
        adj_next_.assign(2 * (n_ - 1) + 2, -1);
        adj_to_.assign(2 * (n_ - 1) + 2, -1);
        order_.resize(n_);
        recurse(0);
    }

  private:
    int find(int x) const {
        while (dsu_[x] != x) x = dsu_[x];
        return x;
    }

    bool connected_from(size_t from) {
        // can chosen components still merge using edges >= from?
        std::copy(dsu_.begin(), dsu_.end(), scratch_.begin());
        auto sfind = [&](int x) {
            while (scratch_[x] != x) x = scratch_[x];
            return x;
        };
        int comps = 0;
        for (int i = 0; i < n_; ++i)
            if (scratch_[i] == i) ++comps;
        for (size_t i = from; i < edges_.size() && comps > 1; ++i) {
            int a = sfind(edges_[i].first), b = sfind(edges_[i].second);
            if (a != b) {
                scratch_[a] = b;
                --comps;
            }
        }
        return comps == 1;
    }

    void recurse(size_t idx) {
        if (static_cast<int>(chosen_.size()) == n_ - 1) {
            emit();
            return;
        }
        if (idx >= edges_.size()) return;
        int a = find(edges_[idx].first), b = find(edges_[idx].second);
        if (a != b) {
            // union with undo
            if (rank_[a] < rank_[b]) std::swap(a, b);
            dsu_[b] = a;
            bool bumped = rank_[a] == rank_[b];
            if (bumped) ++rank_[a];
            chosen_.push_back(static_cast<int>(idx));
            recurse(idx + 1);
            chosen_.pop_back();
            dsu_[b] = b;
            if (bumped) --rank_[a];
        }
        if (connected_from(idx + 1)) recurse(idx + 1);
    }

    void emit() {
        // orient the chosen edges toward the root
        std::fill(adj_head_.begin(), adj_head_.end(), -1);
        int slot = 0;
        for (int c : chosen_) {
            auto [a, b] = edges_[c];
            adj_to_[slot] = b;
            adj_next_[slot] = adj_head_[a];
            adj_head_[a] = slot++;
            adj_to_[slot] = a;
            adj_next_[slot] = adj_head_[b];
            adj_head_[b] = slot++;
        }
        std::fill(parent_.begin(), parent_.end(), -2);
        parent_[root_] = -1;
        order_[0] = root_;
        int head = 0, tail = 1;
        while (head < tail) {
            int v = order_[head++];
            for (int s = adj_head_[v]; s != -1; s = adj_next_[s]) {
                int w = adj_to_[s];
                if (parent_[w] == -2) {
                    parent_[w] = v;
                    order_[tail++] = w;
                }
            }
        }
        visit_(parent_);
    }

    std::function<void(const std::vector<int>&)> visit_;
    std::vector<std::pair<int, int>> edges_;
    std::map<int, int> vid_;
    int n_ = 0;
    int root_ = 0;
    std::vector<int> dsu_, rank_, scratch_, chosen_, parent_, order_;
    std::vector<int> adj_head_, adj_next_, adj_to_;
};

/// Flat-array worst-delay evaluation used inside the exhaustive search.
class FastEvaluator {
  public:
    FastEvaluator(const TourGraph& graph, const std::map<int, int>& vid,
                  const std::optional<std::map<int, Direction>>& fixed) {
        n_ = static_cast<int>(vid.size());
        tours_.resize(n_);
        fixed_dir_.assign(n_, -1);
        meet_pos_.assign(static_cast<size_t>(n_) * n_, -1.0);
        for (const auto& [id, idx] : vid) {
            tours_[idx] = &graph.tour(id);
            if (fixed) fixed_dir_[idx] = fixed->at(id) == Direction::CW ? 0 : 1;
        }
        for (const auto& [id, idx] : vid) {
            for (const auto& [nbr, pos] : graph.tour(id).meeting_positions())
                meet_pos_[static_cast<size_t>(idx) * n_ + vid.at(nbr)] = pos;
        }
        root_ = vid.at(graph.v0());
        base_pos_ = *graph.tour(graph.v0()).base_position();
        branch_.resize(n_);
        order_.resize(n_);
        kids_head_.resize(n_);
        kids_next_.resize(n_);
    }

    double meet(int v, int w) const {
        return meet_pos_[static_cast<size_t>(v) * n_ + w];
    }

    /// Worst delay of the tree given by the parent index array.
    double evaluate(const std::vector<int>& parent) {
        std::fill(kids_head_.begin(), kids_head_.end(), -1);
        for (int v = 0; v < n_; ++v) {
            if (parent[v] < 0) continue;
            kids_next_[v] = kids_head_[parent[v]];
            kids_head_[parent[v]] = v;
        }
        order_[0] = root_;
        int head = 0, tail = 1;
        while (head < tail) {
            int v = order_[head++];
            for (int w = kids_head_[v]; w != -1; w = kids_next_[w]) order_[tail++] = w;
        }
        for (int i = n_ - 1; i >= 0; --i) {
            int v = order_[i];
            const Tour& t = *tours_[v];
            double start = v == root_ ? base_pos_ : meet(v, parent[v]);
            double best = kInf;
            for (int d = 0; d < 2; ++d) {
                if (fixed_dir_[v] >= 0 && fixed_dir_[v] != d) continue;
                Direction dir = d == 0 ? Direction::CW : Direction::CCW;
                double own = t.senses()
                                 ? t.length() - first_sensing_offset(t, start, dir)
                                 : 0.0;
                double val = own;
                for (int w = kids_head_[v]; w != -1; w = kids_next_[w])
                    val = std::max(val, branch_[w] +
                                            travel_time(t, meet(v, w), start, dir));
                best = std::min(best, val);
            }
            branch_[v] = best;
        }
        return branch_[root_];
    }

  private:
    int n_ = 0, root_ = 0;
    double base_pos_ = 0.0;
    std::vector<const Tour*> tours_;
    std::vector<int> fixed_dir_;
    std::vector<double> meet_pos_;
    std::vector<double> branch_;
    std::vector<int> order_, kids_head_, kids_next_;
};

}  // namespace

SolveResult brute_force_optimal(
    const TourGraph& graph,
    const std::optional<std::map<int, Direction>>& fixed_directions,
    int max_tours) {
    require_connected(graph);
    if (graph.size() > max_tours)
        throw SizeCapError("instance has " + std::to_string(graph.size()) +
                           " tours, above the exhaustive-solver cap of " +
                           std::to_string(max_tours));
    bool found = false;
    double best_wd = kInf;
    std::vector<int> best_parent;
    std::unique_ptr<TreeEnumerator> en;
    std::unique_ptr<FastEvaluator> eval;
    en = std::make_unique<TreeEnumerator>(graph, [&](const std::vector<int>& parent) {
        double wd = eval->evaluate(parent);
        if (!found || wd < best_wd - 1e-12) {
            found = true;
            best_wd = wd;
            best_parent = parent;
        }
    });
    eval = std::make_unique<FastEvaluator>(graph, en->vertex_ids(), fixed_directions);
    en->run();
    if (!found) throw std::invalid_argument("no spanning tree found");

    std::vector<int> idx_to_id(graph.size());
    for (const auto& [id, idx] : en->vertex_ids()) idx_to_id[idx] = id;
    std::map<int, int> parent;
    for (int v = 0; v < graph.size(); ++v)
        if (best_parent[v] >= 0) parent[idx_to_id[v]] = idx_to_id[best_parent[v]];
    SolveResult best;
    best.tree = make_tree(graph, parent);
    if (fixed_directions)
        best.directions = *fixed_directions;
    else
        best.directions = minimum_delay_directions(best.tree);
    best.report = evaluate_tree_delay(best.tree, best.directions);
    best.schedule = schedule_for_directions(best.tree, best.directions);
    best.method = SolveMethod::OPT;
    return best;
}

SolveResult brute_force_mdtdm(const TourMultiGraph& mg, int max_tours,
                              long max_combinations) {
    if (mg.size() > max_tours)
        throw SizeCapError("instance has " + std::to_string(mg.size()) +
                           " tours, above the exhaustive-solver cap");
    long combos = 1;
    std::vector<std::pair<Edge, size_t>> pairs;
    for (const auto& [e, cands] : mg.candidates()) {
        combos *= static_cast<long>(cands.size());
        if (combos > max_combinations)
            throw SizeCapError("too many meeting-point combinations");
        pairs.push_back({e, cands.size()});
    }
    bool found = false;
    SolveResult best;
    std::vector<size_t> pick(pairs.size(), 0);
    for (long iter = 0; iter < combos; ++iter) {
        std::vector<Tour> tours;
        std::map<int, std::map<int, double>> meets;
        for (size_t i = 0; i < pairs.size(); ++i) {
            const auto& [e, cnt] = pairs[i];
            (void)cnt;
            const auto& cand = mg.candidates().at(e)[pick[i]];
            meets[e.first][e.second] = cand.pos_a;
            meets[e.second][e.first] = cand.pos_b;
        }
        std::set<Edge> edges;
        for (const auto& [e, cnt] : pairs) {
            (void)cnt;
            edges.insert(e);
        }
        for (const auto& [id, t] : mg.tours())
            tours.emplace_back(id, t.length(), t.sensing_arcs(), meets[id],
                               t.base_position());
        TourGraph g(std::move(tours), std::move(edges), mg.v0());
        auto res = brute_force_optimal(g, std::nullopt, max_tours);
        if (!found || res.report.worst_delay < best.report.worst_delay - 1e-12) {
            found = true;
            best = std::move(res);
        }
        // odometer
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (++pick[i] < pairs[i].second) break;
            pick[i] = 0;
        }
    }
    if (!found) throw std::invalid_argument("no candidate combination found");
    best.method = SolveMethod::OPT;
    return best;
}

long count_spanning_trees(const TourGraph& graph, int max_tours) {
    if (graph.size() > max_tours)
        throw SizeCapError("instance above enumeration cap");
    long n = 0;
    TreeEnumerator en(graph, [&](const std::vector<int>&) { ++n; });
    en.run();
    return n;
}

}  // namespace patrol
