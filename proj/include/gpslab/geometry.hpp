#pragma once
#include <compare>
#include <cstddef>
#include <vector>

namespace gpslab {

struct Point {
    int i = 0;
    int j = 0;
    auto operator<=>(const Point&) const = default;
};

struct Box {
    int n1 = 0;
    int n2 = 0;
    bool operator==(const Box&) const = default;
};

enum class Mode { constrained, free };

using Trajectory = std::vector<Point>;

// a ≺ b : strictly smaller in both coordinates
inline bool precedes(Point a, Point b) { return a.i < b.i && a.j < b.j; }
// a ⪯ b
inline bool weakly_precedes(Point a, Point b) { return a.i <= b.i && a.j <= b.j; }
inline bool in_box(Point p, Box b) { return p.i >= 1 && p.j >= 1 && p.i <= b.n1 && p.j <= b.n2; }
inline bool aligned(Point a, Point b) { return a != b && (a.i == b.i || a.j == b.j); }

// strictly increasing in both coordinates, all points in N^2
bool valid_trajectory(const Trajectory& t);

Trajectory restrict_to_box(const Trajectory& t, Box b);

// Dense (n1+1) x (n2+1) grid, row-major.
struct Grid {
    int n1 = 0, n2 = 0;
    std::vector<double> v;

    Grid() = default;
    Grid(int a, int b, double fill = 0.0)
        : n1(a), n2(b), v(static_cast<std::size_t>(a + 1) * (b + 1), fill) {}
    double& operator()(int i, int j) { return v[static_cast<std::size_t>(i) * (n2 + 1) + j]; }
    double operator()(int i, int j) const { return v[static_cast<std::size_t>(i) * (n2 + 1) + j]; }
};

}  // namespace gpslab
