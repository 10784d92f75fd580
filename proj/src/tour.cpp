#include "patrol/tour.hpp"

#include <algorithm>
#include <cmath>

namespace patrol {

const char* to_string(Direction d) { return d == Direction::CW ? "cw" : "ccw"; }

Direction direction_from_string(const std::string& s) {
    if (s == "cw") return Direction::CW;
    if (s == "ccw") return Direction::CCW;
    throw std::invalid_argument("unknown direction: " + s);
}

namespace {

double wrap(double x, double length) {
    double r = std::fmod(x, length);
    if (r < 0) r += length;
    if (r >= length) r = 0.0;
    return r;
}

bool in_arc(const Interval& a, double p) { return p >= a.begin && p < a.end; }

}  // namespace

Tour::Tour(int id, double length, std::vector<Interval> sensing_arcs,
           std::map<int, double> meeting_positions,
           std::optional<double> base_position)
    : id_(id), length_(length), sensing_(std::move(sensing_arcs)),
      meets_(std::move(meeting_positions)), base_(base_position) {
    if (!(length_ > 0))
        throw std::invalid_argument("tour length must be positive");
    for (auto& [n, p] : meets_) {
        if (p < 0 || p >= length_)
            throw std::invalid_argument("meeting position out of range on tour " +
                                        std::to_string(id_));
        (void)n;
    }
    if (base_ && (*base_ < 0 || *base_ >= length_))
        throw std::invalid_argument("base position out of range");
    for (auto& a : sensing_) {
        if (!(a.begin < a.end) || a.begin < 0 || a.end > length_)
            throw std::invalid_argument("malformed sensing arc on tour " +
                                        std::to_string(id_));
    }
    std::sort(sensing_.begin(), sensing_.end(),
              [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
    // merge touching arcs, reject overlaps
    std::vector<Interval> norm;
    for (const auto& a : sensing_) {
        if (!norm.empty()) {
            if (a.begin < norm.back().end)
                throw std::invalid_argument("overlapping sensing arcs on tour " +
                                            std::to_string(id_));
            if (a.begin == norm.back().end) {
                norm.back().end = a.end;
                continue;
            }
        }
        norm.push_back(a);
    }
    sensing_ = std::move(norm);
}

bool Tour::fully_sensed() const {
    return sensing_.size() == 1 && sensing_[0].begin == 0.0 &&
           sensing_[0].end == length_;
}

double Tour::meeting_position(int neighbor) const {
    auto it = meets_.find(neighbor);
    if (it == meets_.end())
        throw std::invalid_argument("tour " + std::to_string(id_) +
                                    " has no meeting position for " +
                                    std::to_string(neighbor));
    return it->second;
}

double Tour::sensed_length() const {
    double s = 0;
    for (const auto& a : sensing_) s += a.end - a.begin;
    return s;
}

Tour make_fully_sensed_tour(int id, double length,
                            std::map<int, double> meeting_positions,
                            std::optional<double> base_position) {
    return Tour(id, length, {{0.0, length}}, std::move(meeting_positions),
                base_position);
}

double travel_time(const Tour& tour, double p, double q, Direction d) {
    const double l = tour.length();
    if (p < 0 || p >= l || q < 0 || q >= l)
        throw std::domain_error("position out of range on tour " +
                                std::to_string(tour.id()));
    return d == Direction::CCW ? wrap(q - p, l) : wrap(p - q, l);
}

double first_sensing_offset(const Tour& tour, double p, Direction d) {
    const double l = tour.length();
    if (p < 0 || p >= l)
        throw std::domain_error("position out of range on tour " +
                                std::to_string(tour.id()));
    if (!tour.senses())
        throw std::domain_error("tour " + std::to_string(tour.id()) +
                                " has no sensing arcs");
    double best = l;
    for (const auto& a : tour.sensing_arcs()) {
        if (in_arc(a, p)) return 0.0;
        // CCW enters an arc at its closed begin; CW reaches the open end
        // first, where the infimum offset is attained in the limit.
        double t = d == Direction::CCW ? wrap(a.begin - p, l) : wrap(p - a.end, l);
        best = std::min(best, t);
    }
    return best;
}

}  // namespace patrol
