#pragma once

// Test-only brute-force oracle: enumerates pairs of tropical lines through a
// generic planar configuration, independently of the recursion engine.
//
// A tropical line is the union of three rays from a vertex v: left (-1,0),
// down (0,-1), and diagonal (1,1).  Through two points in general position
// there is exactly one such line; a reducible degree-two curve of genus -1
// through four generic points is an unordered pair of lines covering a 2+2
// split of the points.  All edge weights are one, so every configuration
// counts with Welschinger sign +1.

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Point {
    long x = 0, y = 0;
    auto operator<=>(const Point&) const = default;
};

inline bool on_line(const Point& v, const Point& p) {
    if (p.y == v.y && p.x <= v.x) return true;                  // left ray
    if (p.x == v.x && p.y <= v.y) return true;                  // down ray
    return p.x - v.x == p.y - v.y && p.x >= v.x;                // diagonal ray
}

// Vertex of the unique tropical line through two generic points.
inline std::optional<Point> line_through(const Point& a, const Point& b) {
    std::set<Point> vertices;
    auto consider = [&](Point v) {
        if (on_line(v, a) && on_line(v, b)) vertices.insert(v);
    };
    for (const auto& [p, q] : {std::pair{a, b}, std::pair{b, a}}) {
        consider({q.x, p.y});                          // p left, q down
        consider({q.x - (q.y - p.y), p.y});            // p left, q diagonal
        consider({p.x, q.y - (q.x - p.x)});            // p down, q diagonal
    }
    if (vertices.size() > 1)
        throw std::domain_error("oracle: configuration not generic");
    if (vertices.empty()) return std::nullopt;
    return *vertices.begin();
}

// Number of unordered 2+2 splits of the four points into two tropical lines,
// each weighted +1.  Checks genericity: every pair spans a unique line and no
// line picks up a third point.
inline int count_line_pairs(const std::array<Point, 4>& pts) {
    static constexpr int splits[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    int total = 0;
    for (const auto& s : splits) {
        auto v1 = line_through(pts[s[0]], pts[s[1]]);
        auto v2 = line_through(pts[s[2]], pts[s[3]]);
        if (!v1 || !v2) continue;
        for (int i = 0; i < 4; ++i) {
            bool on1 = on_line(*v1, pts[i]);
            bool on2 = on_line(*v2, pts[i]);
            bool in1 = i == s[0] || i == s[1];
            if (on1 != in1 || on2 == in1)
                throw std::domain_error("oracle: configuration not generic");
        }
        total += 1;  // all weights odd, no interior points: sign +1
    }
    return total;
}

} // namespace oracle
