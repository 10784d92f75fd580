#include "patrol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace patrol {

GridWorld::GridWorld(int width, int height, std::set<Cell> obstacles)
    : width_(width), height_(height), obstacles_(std::move(obstacles)) {
    if (width_ <= 0 || height_ <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    blocked_.assign(static_cast<size_t>(width_) * height_, 0);
    for (const Cell& c : obstacles_) {
        if (!in_bounds(c)) throw std::invalid_argument("obstacle out of bounds");
        blocked_[idx(c)] = 1;
    }
}

bool GridWorld::step_allowed(Cell from, Cell to) const {
    if (!free(from) || !free(to)) return false;
    int dx = to.x - from.x, dy = to.y - from.y;
    if (std::abs(dx) > 1 || std::abs(dy) > 1 || (dx == 0 && dy == 0)) return false;
    if (dx != 0 && dy != 0) {
        if (!free({from.x + dx, from.y}) || !free({from.x, from.y + dy}))
            return false;
    }
    return true;
}

std::vector<Cell> GridWorld::neighbors(Cell c) const {
    static const int off[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                  {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    std::vector<Cell> out;
    out.reserve(8);
    for (const auto& o : off) {
        Cell n{c.x + o[0], c.y + o[1]};
        if (step_allowed(c, n)) out.push_back(n);
    }
    return out;
}

std::vector<Cell> GridWorld::free_cells() const {
    std::vector<Cell> out;
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            if (!blocked_[idx({x, y})]) out.push_back({x, y});
    return out;
}

std::vector<int> grid_distances(const GridWorld& g, Cell from) {
    std::vector<int> dist(static_cast<size_t>(g.width()) * g.height(), -1);
    if (!g.free(from)) return dist;
    auto at = [&](Cell c) -> int& {
        return dist[static_cast<size_t>(c.y) * g.width() + c.x];
    };
    std::deque<Cell> q{from};
    at(from) = 0;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop_front();
        for (Cell n : g.neighbors(c)) {
            if (at(n) < 0) {
                at(n) = at(c) + 1;
                q.push_back(n);
            }
        }
    }
    return dist;
}

int grid_distance_at(const GridWorld& g, const std::vector<int>& dist, Cell c) {
    return dist[static_cast<size_t>(c.y) * g.width() + c.x];
}

std::vector<Cell> grid_path(const GridWorld& g, Cell from, Cell to) {
    if (!g.free(from) || !g.free(to)) return {};
    const size_t n = static_cast<size_t>(g.width()) * g.height();
    std::vector<int> parent(n, -2);
    auto id = [&](Cell c) { return static_cast<size_t>(c.y) * g.width() + c.x; };
    std::deque<Cell> q{from};
    parent[id(from)] = -1;
    while (!q.empty()) {
        Cell c = q.front();
        q.pop_front();
        if (c == to) break;
        for (Cell nb : g.neighbors(c)) {
            if (parent[id(nb)] == -2) {
                parent[id(nb)] = static_cast<int>(id(c));
                q.push_back(nb);
            }
        }
    }
    if (parent[id(to)] == -2) return {};
    std::vector<Cell> path;
    for (int cur = static_cast<int>(id(to)); cur != -1; cur = parent[cur])
        path.push_back({cur % g.width(), cur / g.width()});
    std::reverse(path.begin(), path.end());
    return path;
}

bool line_of_sight(const GridWorld& g, Cell a, Cell b) {
    if (!g.free(a) || !g.free(b)) return false;
    int steps = 2 * std::max(1, chebyshev(a, b));
    for (int k = 0; k <= steps; ++k) {
        double t = static_cast<double>(k) / steps;
        double px = a.x + t * (b.x - a.x);
        double py = a.y + t * (b.y - a.y);
        Cell c{static_cast<int>(std::floor(px + 0.5)),
               static_cast<int>(std::floor(py + 0.5))};
        if (!g.free(c)) return false;
    }
    return true;
}

std::string ascii_map(const GridWorld& g, const std::map<int, std::vector<Cell>>& tours,
                      Cell base) {
    static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::vector<std::string> rows(g.height(), std::string(g.width(), '.'));
    auto put = [&](Cell c, char ch) { rows[c.y][c.x] = ch; };
    for (const Cell& c : g.obstacles()) put(c, '#');
    for (const auto& [id, cells] : tours)
        for (const Cell& c : cells) put(c, digits[((id % 36) + 36) % 36]);
    put(base, 'B');
    std::string out;
    for (int y = g.height() - 1; y >= 0; --y) {
        out += rows[y];
        out += '\n';
    }
    return out;
}

}  // namespace patrol
