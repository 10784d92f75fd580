#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace patrol {

struct Cell {
    int x = 0, y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline int chebyshev(Cell a, Cell b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Rectangular grid of unit cells with cell-occupying obstacles. Robots
/// move to one of the 8 neighbors per unit time; a diagonal step requires
/// both shared orthogonal cells to be free (no corner cutting).
class GridWorld {
  public:
    GridWorld() = default;
    GridWorld(int width, int height, std::set<Cell> obstacles = {});

    int width() const { return width_; }
    int height() const { return height_; }
    const std::set<Cell>& obstacles() const { return obstacles_; }
    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    bool free(Cell c) const { return in_bounds(c) && !blocked_[idx(c)]; }
    bool step_allowed(Cell from, Cell to) const;
    std::vector<Cell> neighbors(Cell c) const;  // deterministic order
    std::vector<Cell> free_cells() const;       // row-major

  private:
    size_t idx(Cell c) const { return static_cast<size_t>(c.y) * width_ + c.x; }
    int width_ = 0, height_ = 0;
    std::set<Cell> obstacles_;
    std::vector<char> blocked_;
};

/// Unit-cost shortest-path distances over 8-connected moves (plain BFS).
std::vector<int> grid_distances(const GridWorld& g, Cell from);
int grid_distance_at(const GridWorld& g, const std::vector<int>& dist, Cell c);

/// Shortest path including both endpoints; empty when unreachable.
std::vector<Cell> grid_path(const GridWorld& g, Cell from, Cell to);

/// Straight sight line between cell centers; every crossed cell must be
/// free. Obstacles block communication as well as movement.
bool line_of_sight(const GridWorld& g, Cell a, Cell b);

/// Map rendering: '#' obstacles, '.' free, digits/letters for tour cells,
/// 'B' for the base. Top row printed first.
std::string ascii_map(const GridWorld& g, const std::map<int, std::vector<Cell>>& tours,
                      Cell base);

}  // namespace patrol
