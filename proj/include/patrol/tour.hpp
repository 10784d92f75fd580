#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace patrol {

inline constexpr double kEps = 1e-9;

enum class Direction { CW, CCW };

inline Direction opposite(Direction d) {
    return d == Direction::CW ? Direction::CCW : Direction::CW;
}

const char* to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Half-open position interval [begin, end), oriented in the CCW (increasing)
/// direction of the tour's local coordinate system.
struct Interval {
    double begin = 0.0;
    double end = 0.0;
};

/// A closed curve of positive length with local 1-D coordinates in
/// [0, length), increasing in the CCW direction. Immutable after
/// construction. Sensing arcs are normalized (sorted, touching arcs merged)
/// and must be pairwise disjoint. An empty sensing list means the tour is
/// relay-only.
class Tour {
  public:
    Tour() = default;
    Tour(int id, double length, std::vector<Interval> sensing_arcs = {},
         std::map<int, double> meeting_positions = {},
         std::optional<double> base_position = std::nullopt);

    int id() const { return id_; }
    double length() const { return length_; }
    const std::vector<Interval>& sensing_arcs() const { return sensing_; }
    const std::map<int, double>& meeting_positions() const { return meets_; }
    std::optional<double> base_position() const { return base_; }

    bool senses() const { return !sensing_.empty(); }
    bool fully_sensed() const;
    bool has_meeting(int neighbor) const { return meets_.count(neighbor) > 0; }
    double meeting_position(int neighbor) const;

    /// Sum of sensing arc lengths.
    double sensed_length() const;

  private:
    int id_ = -1;
    double length_ = 1.0;
    std::vector<Interval> sensing_;
    std::map<int, double> meets_;
    std::optional<double> base_;
};

/// Convenience: a tour whose every point is a sensing location.
Tour make_fully_sensed_tour(int id, double length,
                            std::map<int, double> meeting_positions = {},
                            std::optional<double> base_position = std::nullopt);

/// Minimum time to travel from position p to q on the tour in direction d.
/// CCW moves toward increasing positions. Result lies in [0, length).
double travel_time(const Tour& tour, double p, double q, Direction d);

/// Least t >= 0 (infimum) such that the position reached from p after
/// traveling t in direction d lies in a sensing arc; 0 if p itself is
/// sensed. Approaching an arc's open end from outside yields the infimum
/// (the boundary offset). Throws std::domain_error for relay-only tours.
double first_sensing_offset(const Tour& tour, double p, Direction d);

}  // namespace patrol
