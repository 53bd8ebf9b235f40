#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hodgeflow/complex.hpp"
#include "hodgeflow/rng.hpp"

namespace hodgeflow {

/** Circular exclusion region used by the random-complex generator. */
struct Hole {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
};

/**
 * Default hole layout for n holes in the unit square: radius 0.15, centers on
 * the horizontal midline. The two-hole layout is pinned at x = 0.3 and 0.7;
 * other counts spread evenly at x = (i+1)/(n+1).
 */
inline std::vector<Hole> standard_holes(int n) {
    std::vector<Hole> holes;
    if (n == 2) return {{0.3, 0.5, 0.15}, {0.7, 0.5, 0.15}};
    for (int i = 0; i < n; ++i)
        holes.push_back({static_cast<double>(i + 1) / (n + 1), 0.5, 0.15});
    return holes;
}

namespace detail {

struct Point2 {
    double x, y;
};

// Bowyer-Watson incremental Delaunay triangulation of a 2D point set.
// Returns vertex-index triples; empty when the input is degenerate
// (collinear points leave no triangle once the enclosing frame is removed).
inline std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Point2>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 3) return {};

    std::vector<Point2> v = pts;
    v.push_back({-50.0, -50.0});  // enclosing frame, far outside [0,1]^2
    v.push_back({150.0, -50.0});
    v.push_back({0.5, 150.0});

    struct Tri {
        int a, b, c;     // counterclockwise
        double cx, cy, rr;  // circumcenter and squared circumradius
    };
    auto make_tri = [&](int a, int b, int c) {
        double ax = v[static_cast<std::size_t>(a)].x, ay = v[static_cast<std::size_t>(a)].y;
        double bx = v[static_cast<std::size_t>(b)].x, by = v[static_cast<std::size_t>(b)].y;
        double cx = v[static_cast<std::size_t>(c)].x, cy = v[static_cast<std::size_t>(c)].y;
        double orient = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        if (orient < 0.0) {
            std::swap(b, c);
            std::swap(bx, cx);
            std::swap(by, cy);
        }
        Tri t{a, b, c, 0.0, 0.0, -1.0};
        double d = 2.0 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
        if (d != 0.0) {
            double b2 = (bx - ax) * (bx - ax) + (by - ay) * (by - ay);
            double c2 = (cx - ax) * (cx - ax) + (cy - ay) * (cy - ay);
            double ux = (cy - ay) * b2 - (by - ay) * c2;
            double uy = (bx - ax) * c2 - (cx - ax) * b2;
            t.cx = ax + ux / d;
            t.cy = ay + uy / d;
            t.rr = (t.cx - ax) * (t.cx - ax) + (t.cy - ay) * (t.cy - ay);
        }
        return t;
    };

    std::vector<Tri> tris = {make_tri(n, n + 1, n + 2)};
    for (int p = 0; p < n; ++p) {
        double px = v[static_cast<std::size_t>(p)].x, py = v[static_cast<std::size_t>(p)].y;
        // Cavity: triangles whose circumcircle contains the new point.
        std::vector<Tri> keep;
        std::vector<std::array<int, 2>> cavity_edges;
        for (const Tri& t : tris) {
            double dx = px - t.cx, dy = py - t.cy;
            bool bad = t.rr >= 0.0 && dx * dx + dy * dy < t.rr;
            if (!bad) {
                keep.push_back(t);
                continue;
            }
            cavity_edges.push_back({t.a, t.b});
            cavity_edges.push_back({t.b, t.c});
            cavity_edges.push_back({t.c, t.a});
        }
        // The cavity boundary consists of the edges seen exactly once
        // (unordered comparison; interior edges appear twice).
        auto same_edge = [](std::array<int, 2> e, std::array<int, 2> f) {
            return (e[0] == f[0] && e[1] == f[1]) || (e[0] == f[1] && e[1] == f[0]);
        };
        tris = std::move(keep);
        for (std::size_t i = 0; i < cavity_edges.size(); ++i) {
            bool duplicated = false;
            for (std::size_t j = 0; j < cavity_edges.size(); ++j)
                if (i != j && same_edge(cavity_edges[i], cavity_edges[j])) {
                    duplicated = true;
                    break;
                }
            if (!duplicated)
                tris.push_back(make_tri(cavity_edges[i][0], cavity_edges[i][1], p));
        }
    }

    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris) {
        if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches the frame
        if (t.rr < 0.0) continue;                        // degenerate sliver
        out.push_back({t.a, t.b, t.c});
    }
    return out;
}

inline bool inside_any_hole(double x, double y, const std::vector<Hole>& holes) {
    for (const Hole& h : holes) {
        double dx = x - h.cx, dy = y - h.cy;
        if (dx * dx + dy * dy < h.r * h.r) return true;
    }
    return false;
}

}  // namespace detail

/**
 * Random triangulated patch of the unit square with unfilled holes.
 * n_points are drawn uniformly (rejecting hole interiors), Delaunay
 * triangulated, and faces whose centroid lies inside a hole are removed.
 * Edges and vertices that no longer touch any kept face are dropped with
 * them, so each hole contributes exactly one independent cycle. The result
 * is validated combinatorially (connected, beta_1 = number of holes via the
 * Euler characteristic); failed draws deterministically retry the next seed
 * substream, which also covers degenerate (collinear or duplicated) point
 * sets. Same seed, same complex, bit for bit.
 */
inline SimplicialComplex generate_delaunay_with_holes(int n_points,
                                                      const std::vector<Hole>& holes,
                                                      std::uint64_t seed) {
    if (n_points < 3) throw ComplexError("need at least 3 points");
    constexpr int kMaxAttempts = 64;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        SplitMix64 rng(substream_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<detail::Point2> pts;
        pts.reserve(static_cast<std::size_t>(n_points));
        while (static_cast<int>(pts.size()) < n_points) {
            double x = rng.next_double();
            double y = rng.next_double();
            if (!detail::inside_any_hole(x, y, holes)) pts.push_back({x, y});
        }

        auto tris = detail::delaunay_triangulate(pts);
        std::vector<std::vector<int>> faces;
        for (const auto& t : tris) {
            double gx = (pts[static_cast<std::size_t>(t[0])].x +
                         pts[static_cast<std::size_t>(t[1])].x +
                         pts[static_cast<std::size_t>(t[2])].x) / 3.0;
            double gy = (pts[static_cast<std::size_t>(t[0])].y +
                         pts[static_cast<std::size_t>(t[1])].y +
                         pts[static_cast<std::size_t>(t[2])].y) / 3.0;
            if (!detail::inside_any_hole(gx, gy, holes))
                faces.push_back({t[0], t[1], t[2]});
        }
        if (faces.empty()) continue;

        auto c = build_complex({{}, {}, faces});
        int beta0 = connected_components(c);
        // Planar patch: no 2-cycles, so the Euler characteristic fixes beta_1.
        int beta1 = beta0 - c.count(0) + c.count(1) - c.count(2);
        if (beta0 == 1 && beta1 == static_cast<int>(holes.size())) return c;
    }
    throw ComplexError("could not generate a complex with the requested holes (seed " +
                       std::to_string(seed) + ")");
}

}  // namespace hodgeflow
