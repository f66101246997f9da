#pragma once

#include <vector>

#include "sareg/rational.hpp"

namespace sareg {

// A point of R^d with exact rational coordinates.
struct Point {
    std::vector<Rat> coords;

    Point() = default;
    explicit Point(std::vector<Rat> c) : coords(std::move(c)) {}
    Point(std::initializer_list<Rat> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    const Rat& operator[](std::size_t i) const { return coords[i]; }
    Rat& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point& o) const { return coords == o.coords; }
    bool operator!=(const Point& o) const { return !(*this == o); }
    bool operator<(const Point& o) const {
        return std::lexicographical_compare(coords.begin(), coords.end(),
                                            o.coords.begin(), o.coords.end());
    }
};

inline Rat squared_distance(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw input_error("squared_distance: dimension mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Rat d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// A finite point set with a declared ambient dimension.
struct PointSet {
    std::size_t dim = 0;
    std::vector<Point> points;

    PointSet() = default;
    PointSet(std::size_t d, std::vector<Point> pts) : dim(d), points(std::move(pts)) {
        for (const auto& p : points)
            if (p.dim() != dim) throw input_error("point dimension does not match set dimension");
    }

    std::size_t size() const { return points.size(); }
    const Point& operator[](std::size_t i) const { return points[i]; }
};

inline PointSet points_1d(std::initializer_list<long> xs) {
    std::vector<Point> pts;
    for (long x : xs) pts.emplace_back(std::vector<Rat>{Rat(x)});
    return PointSet(1, std::move(pts));
}

inline PointSet points_2d(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<Point> pts;
    for (auto [x, y] : xs) pts.emplace_back(std::vector<Rat>{Rat(x), Rat(y)});
    return PointSet(2, std::move(pts));
}

}  // namespace sareg
