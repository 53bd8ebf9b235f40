#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hodgeflow/errors.hpp"

namespace hodgeflow {

/**
 * One oriented simplex: strictly increasing vertex ids plus an orientation
 * sign relative to that sorted order. A tuple given in another order picks up
 * the parity of the permutation that sorts it, so (2,1) is stored as (1,2)
 * with orientation -1.
 */
struct Simplex {
    std::vector<int> vertices;
    int orientation = 1;

    bool operator==(const Simplex&) const = default;
};

/**
 * Weighted oriented simplicial complex. levels[k] lists the k-simplices in
 * lexicographic vertex order; weights[k] holds the positive diagonal of W_k.
 * Construction goes through build_complex / the preset factories, which
 * enforce closure (every facet of a stored simplex is stored) and weight
 * positivity, so downstream operator code can assume both.
 */
struct SimplicialComplex {
    std::vector<std::vector<Simplex>> levels;
    std::vector<Eigen::VectorXd> weights;

    int max_order() const { return static_cast<int>(levels.size()) - 1; }

    /** Number of simplices at order k (0 outside [0, max_order]). */
    int count(int k) const {
        if (k < 0 || k > max_order()) return 0;
        return static_cast<int>(levels[k].size());
    }

    const Simplex& simplex(int k, int index) const {
        check_order(k);
        if (index < 0 || index >= count(k))
            throw IndexError("simplex index " + std::to_string(index) +
                             " out of range at order " + std::to_string(k));
        return levels[k][static_cast<std::size_t>(index)];
    }

    /** Index of the simplex with the given sorted vertex tuple, or -1. */
    int index_of(int k, const std::vector<int>& sorted_vertices) const {
        if (k < 0 || k > max_order()) return -1;
        const auto& lv = levels[k];
        auto it = std::lower_bound(lv.begin(), lv.end(), sorted_vertices,
                                   [](const Simplex& s, const std::vector<int>& v) {
                                       return s.vertices < v;
                                   });
        if (it == lv.end() || it->vertices != sorted_vertices) return -1;
        return static_cast<int>(it - lv.begin());
    }

    /** Replaces W_k. The vector must have length n_k with positive entries. */
    void set_weights(int k, const Eigen::VectorXd& w) {
        check_order(k);
        if (w.size() != count(k))
            throw WeightError("weight vector at order " + std::to_string(k) +
                              " has length " + std::to_string(w.size()) +
                              ", expected " + std::to_string(count(k)));
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (!(w[i] > 0.0) || !std::isfinite(w[i]))
                throw WeightError("weights must be positive and finite");
        weights[k] = w;
    }

    void check_order(int k) const {
        if (k < 0 || k > max_order())
            throw OrderError("order " + std::to_string(k) + " outside [0, " +
                             std::to_string(max_order()) + "]");
    }

    bool operator==(const SimplicialComplex& other) const {
        if (levels != other.levels) return false;
        if (weights.size() != other.weights.size()) return false;
        for (std::size_t k = 0; k < weights.size(); ++k)
            if (weights[k] != other.weights[k]) return false;
        return true;
    }
};

namespace detail {

// Sorts a vertex tuple in place and returns the permutation parity (+1/-1).
// Throws on repeated vertices.
inline int sort_parity(std::vector<int>& v) {
    int parity = 1;
    // Insertion sort; tuples have <= 4 entries in practice.
    for (std::size_t i = 1; i < v.size(); ++i) {
        int key = v[i];
        std::size_t j = i;
        while (j > 0 && v[j - 1] > key) {
            v[j] = v[j - 1];
            parity = -parity;
            --j;
        }
        v[j] = key;
    }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1])
            throw ComplexError("simplex tuple has a repeated vertex");
    return parity;
}

}  // namespace detail

/**
 * Builds a complex from vertex tuples grouped by order. Tuples may be given
 * in any vertex order (orientation follows permutation parity). Missing
 * faces are completed automatically with orientation +1; omitted weights
 * default to 1.
 *
 * @param tuples tuples[k] lists the k-simplices as (k+1)-vertex tuples.
 * @param weights optional map order -> diagonal of W_k (applied after closure).
 * @throws DuplicateError if the same simplex is given twice at one order.
 * @throws ComplexError on malformed tuples.
 * @throws WeightError on non-positive or wrongly sized weights.
 */
inline SimplicialComplex build_complex(
    std::vector<std::vector<std::vector<int>>> tuples,
    const std::map<int, Eigen::VectorXd>& weights = {}) {
    // Canonicalize orders: sorted sets per level, orientation from parity.
    std::vector<std::map<std::vector<int>, int>> canon;  // vertices -> orientation
    canon.resize(tuples.size());
    for (std::size_t k = 0; k < tuples.size(); ++k) {
        for (auto& tup : tuples[k]) {
            if (tup.size() != k + 1)
                throw ComplexError("tuple of " + std::to_string(tup.size()) +
                                   " vertices listed at order " + std::to_string(k));
            for (int v : tup)
                if (v < 0) throw ComplexError("negative vertex id");
            int parity = detail::sort_parity(tup);
            auto [it, inserted] = canon[k].emplace(std::move(tup), parity);
            if (!inserted)
                throw DuplicateError("duplicate simplex at order " + std::to_string(k));
        }
    }
    while (!canon.empty() && canon.back().empty()) canon.pop_back();
    if (canon.empty()) throw ComplexError("empty complex");

    // Close downward: every facet of a stored simplex must be stored.
    for (std::size_t k = canon.size() - 1; k >= 1; --k) {
        for (const auto& [verts, orient] : canon[k]) {
            std::vector<int> face(verts.size() - 1);
            for (std::size_t omit = 0; omit < verts.size(); ++omit) {
                face.clear();
                for (std::size_t i = 0; i < verts.size(); ++i)
                    if (i != omit) face.push_back(verts[i]);
                canon[k - 1].try_emplace(face, 1);
            }
        }
    }

    SimplicialComplex c;
    c.levels.resize(canon.size());
    c.weights.resize(canon.size());
    for (std::size_t k = 0; k < canon.size(); ++k) {
        if (canon[k].empty())
            throw ComplexError("no simplices at order " + std::to_string(k) +
                               " below populated order");
        c.levels[k].reserve(canon[k].size());
        for (const auto& [verts, orient] : canon[k])
            c.levels[k].push_back(Simplex{verts, orient});
        c.weights[k] = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(canon[k].size()));
    }
    for (const auto& [k, w] : weights) {
        c.check_order(k);
        c.set_weights(k, w);
    }
    return c;
}

/** Returns a copy with the orientation of one simplex reversed. */
inline SimplicialComplex flip_orientation(const SimplicialComplex& c, int k, int index) {
    c.check_order(k);
    if (index < 0 || index >= c.count(k))
        throw IndexError("flip index " + std::to_string(index) +
                         " out of range at order " + std::to_string(k));
    SimplicialComplex out = c;
    out.levels[k][static_cast<std::size_t>(index)].orientation *= -1;
    return out;
}

/**
 * Single triangle {0,1,2} with its face filled. The base orientation is
 * cyclic (edges 0->1->2->0, so edge (0,2) is stored with sign -1) and the
 * face sign is chosen so that its boundary row is uniform, which is what
 * makes the three edges equivalent under the face coupling. With
 * flipped=true the designated edge (0,2) is reversed, breaking that
 * equivalence down to a two-variable reduced system; the flipped variant
 * stores exactly one -1 sign (the face).
 */
inline SimplicialComplex preset_triangle(bool flipped = false) {
    auto c = build_complex({{}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}});
    int e02 = c.index_of(1, {0, 2});
    c.levels[1][static_cast<std::size_t>(e02)].orientation = -1;
    c.levels[2][0].orientation = -1;
    if (flipped) c = flip_orientation(c, 1, e02);
    return c;
}

/**
 * Triangulated annulus with one unfilled hole (beta_1 = 1): outer triangle
 * {0,1,2}, inner triangle {3,4,5} bounding the hole, six faces between them.
 * Every edge points from its lower to its higher vertex except (0,2) --
 * closing the outer ring into the directed cycle 0->1->2->0 -- and the spoke
 * (1,4), which points back outward. This layout keeps the phase-locked
 * branch stable across the whole frustration range, with only the harmonic
 * mode drifting. The designated transition edges are blue = outer edge (0,2)
 * (whose reversal lets the gradient component unlock while the curl stays
 * constant) and red = spoke (1,3) (whose additional reversal lets gradient
 * and curl unlock together).
 *
 * @param flip_blue reverse the blue edge (gradient-transition variant).
 * @param flip_red  reverse the red edge as well (gradient+curl variant).
 */
inline SimplicialComplex preset_holed(bool flip_blue = false, bool flip_red = false) {
    auto c = build_complex({{},
                            {},
                            {{0, 1, 3}, {1, 3, 4}, {1, 2, 4}, {2, 4, 5}, {0, 2, 5}, {0, 3, 5}}});
    // Stored orientation is -1 where the arrow runs against sorted order.
    c.levels[1][static_cast<std::size_t>(c.index_of(1, {0, 2}))].orientation = -1;
    c.levels[1][static_cast<std::size_t>(c.index_of(1, {1, 4}))].orientation = -1;
    if (flip_blue) c = flip_orientation(c, 1, c.index_of(1, {0, 2}));
    if (flip_red) c = flip_orientation(c, 1, c.index_of(1, {1, 3}));
    return c;
}

/**
 * Two triangles sharing edge (1,2); only (0,1,2) carries a face, weighted w.
 * w = 0 omits the face entirely (beta_1 = 2); w > 0 fills it (beta_1 = 1).
 * The filled triangle is cyclically oriented (edge (0,2) stored with -1).
 */
inline SimplicialComplex preset_two_triangles(double face_weight = 1.0) {
    if (face_weight < 0.0 || !std::isfinite(face_weight))
        throw WeightError("face weight must be finite and >= 0");
    std::vector<std::vector<std::vector<int>>> tuples = {
        {}, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, {{0, 1, 2}}};
    if (face_weight == 0.0) tuples.pop_back();
    auto c = build_complex(tuples);
    int e02 = c.index_of(1, {0, 2});
    c.levels[1][static_cast<std::size_t>(e02)].orientation = -1;
    if (face_weight != 0.0)
        c.set_weights(2, Eigen::VectorXd::Constant(1, face_weight));
    return c;
}

/**
 * Number of connected components of the 1-skeleton (union-find). Used by the
 * Delaunay generator's Euler-characteristic self-check; the spectral Betti
 * numbers live in the hodge module.
 */
inline int connected_components(const SimplicialComplex& c) {
    int n0 = c.count(0);
    std::vector<int> parent(static_cast<std::size_t>(n0));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    if (c.max_order() >= 1) {
        for (const auto& e : c.levels[1]) {
            int a = find(c.index_of(0, {e.vertices[0]}));
            int b = find(c.index_of(0, {e.vertices[1]}));
            if (a != b) parent[static_cast<std::size_t>(a)] = b;
        }
    }
    int components = 0;
    for (int v = 0; v < n0; ++v)
        if (find(v) == v) ++components;
    return components;
}

}  // namespace hodgeflow
