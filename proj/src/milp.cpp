#include "patrol/milp.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

namespace patrol {

namespace {

constexpr int kBase = -1;  // virtual base station vertex

std::string vtx(int v) { return v == kBase ? "b" : std::to_string(v); }

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Arc {
    int tail, head;
};

}  // namespace

std::string emit_milp(const TourGraph& graph) {
    const int v0 = graph.v0();
    const Tour& base_tour = graph.tour(v0);
    if (!base_tour.base_position())
        throw std::invalid_argument("v0 lacks a base position");
    const double base_pos = *base_tour.base_position();

    std::vector<int> tours;
    for (const auto& [id, t] : graph.tours()) {
        (void)t;
        tours.push_back(id);
    }
    std::vector<Arc> arcs;
    for (const auto& [a, b] : graph.edges()) {
        arcs.push_back({a, b});
        arcs.push_back({b, a});
    }
    arcs.push_back({v0, kBase});
    arcs.push_back({kBase, v0});

    // position of the meeting point with x on tour j (x == kBase: the base)
    auto pos_on = [&](int j, int x) {
        return x == kBase ? base_pos : graph.tour(j).meeting_position(x);
    };
    auto xname = [&](const Arc& a) { return "x_" + vtx(a.tail) + "_" + vtx(a.head); };
    auto fname = [&](const Arc& a, int c) {
        return "f_" + vtx(a.tail) + "_" + vtx(a.head) + "_" + vtx(c);
    };
    auto uname = [&](Direction d, int j) {
        return std::string("u_") + to_string(d) + "_" + vtx(j);
    };
    auto gname = [&](int j, int c, Direction d) {
        return "g_" + vtx(j) + "_" + vtx(c) + "_" + to_string(d);
    };
    auto wname = [&](int i, int j, int k, int c, Direction d) {
        return "w_" + vtx(i) + "_" + vtx(j) + "_" + vtx(k) + "_" + vtx(c) + "_" +
               to_string(d);
    };

    std::ostringstream os;
    os << "\\ minimum delay tree with directions (multi-commodity flow)\n";
    os << "\\ vertices: tours";
    for (int t : tours) os << " " << t;
    os << ", virtual base b (tour " << v0 << " carries the base station)\n";
    os << "Minimize\n obj: z\n";
    os << "Subject To\n";

    // flow source at the virtual base, one unit per commodity
    for (int c : tours) {
        os << " src_" << vtx(c) << ":";
        bool first = true;
        for (const auto& a : arcs) {
            if (a.head == kBase) {
                os << (first ? " " : " + ") << fname(a, c);
                first = false;
            }
        }
        for (const auto& a : arcs)
            if (a.tail == kBase) os << " - " << fname(a, c);
        os << " = -1\n";
    }
    // conservation at every vertex except b and the commodity's own
    for (int c : tours) {
        for (int v : tours) {
            if (v == c) continue;
            os << " con_" << vtx(v) << "_" << vtx(c) << ":";
            bool first = true;
            for (const auto& a : arcs) {
                if (a.head == v) {
                    os << (first ? " " : " + ") << fname(a, c);
                    first = false;
                }
            }
            for (const auto& a : arcs)
                if (a.tail == v) os << " - " << fname(a, c);
            os << " = 0\n";
        }
    }
    // each commodity consumed at its own vertex
    for (int c : tours) {
        os << " snk_" << vtx(c) << ":";
        bool first = true;
        for (const auto& a : arcs) {
            if (a.head == c) {
                os << (first ? " " : " + ") << fname(a, c);
                first = false;
            }
        }
        for (const auto& a : arcs)
            if (a.tail == c) os << " - " << fname(a, c);
        os << " = 1\n";
    }
    // capacity: flow only on selected arcs
    for (const auto& a : arcs)
        for (int c : tours)
            os << " cap_" << vtx(a.tail) << "_" << vtx(a.head) << "_" << vtx(c) << ": "
               << fname(a, c) << " - " << xname(a) << " <= 0\n";
    // tree cardinality
    os << " card:";
    for (size_t i = 0; i < arcs.size(); ++i)
        os << (i == 0 ? " " : " + ") << xname(arcs[i]);
    os << " = " << tours.size() << "\n";
    // exactly one direction per tour
    for (int j : tours)
        os << " dir_" << vtx(j) << ": " << uname(Direction::CCW, j) << " + "
           << uname(Direction::CW, j) << " = 1\n";

    // delay definition per commodity, with linearized products
    std::vector<std::string> pair_lin, triple_lin;
    for (int c : tours) {
        const Tour& tc = graph.tour(c);
        os << " zdef_" << vtx(c) << ": z_" << vtx(c);
        // own-data term: arcs (j,c) carry the parent handover of c
        for (const auto& a : arcs) {
            if (a.head != c) continue;
            for (Direction d : {Direction::CCW, Direction::CW}) {
                double coef = 0.0;
                if (tc.senses())
                    coef = tc.length() -
                           first_sensing_offset(tc, pos_on(c, a.tail), d);
                std::string g = gname(a.tail, c, d);
                pair_lin.push_back(" pl1_" + g + ": " + g + " - " + fname(a, c) +
                                   " <= 0\n");
                pair_lin.push_back(" pl2_" + g + ": " + g + " - " + uname(d, c) +
                                   " <= 0\n");
                pair_lin.push_back(" pl3_" + g + ": " + g + " - " + fname(a, c) +
                                   " - " + uname(d, c) + " >= -1\n");
                if (coef != 0.0) os << " - " << num(coef) << " " << g;
            }
        }
        // relay terms: data of c entering tour j from k and leaving toward i
        for (int j : tours) {
            for (const auto& in : arcs) {
                if (in.head != j) continue;
                int i = in.tail;
                for (const auto& out : arcs) {
                    if (out.tail != j) continue;
                    int k = out.head;
                    if (i == k) continue;
                    for (Direction d : {Direction::CCW, Direction::CW}) {
                        double coef = travel_time(graph.tour(j), pos_on(j, k),
                                                  pos_on(j, i), d);
                        std::string w = wname(i, j, k, c, d);
                        triple_lin.push_back(" tl1_" + w + ": " + w + " - " +
                                             fname(in, c) + " <= 0\n");
                        triple_lin.push_back(" tl2_" + w + ": " + w + " - " +
                                             fname(out, c) + " <= 0\n");
                        triple_lin.push_back(" tl3_" + w + ": " + w + " - " +
                                             uname(d, j) + " <= 0\n");
                        triple_lin.push_back(" tl4_" + w + ": " + w + " - " +
                                             fname(in, c) + " - " + fname(out, c) +
                                             " - " + uname(d, j) + " >= -2\n");
                        if (coef != 0.0) os << " - " << num(coef) << " " << w;
                    }
                }
            }
        }
        os << " = 0\n";
        os << " zmax_" << vtx(c) << ": z_" << vtx(c) << " - z <= 0\n";
    }
    for (const auto& s : pair_lin) os << s;
    for (const auto& s : triple_lin) os << s;

    os << "Bounds\n";
    for (const auto& a : arcs)
        for (int c : tours) os << " 0 <= " << fname(a, c) << " <= 1\n";
    os << "Binary\n";
    for (const auto& a : arcs) os << " " << xname(a) << "\n";
    for (int j : tours) {
        os << " " << uname(Direction::CCW, j) << "\n";
        os << " " << uname(Direction::CW, j) << "\n";
    }
    os << "End\n";
    return os.str();
}

}  // namespace patrol
