#pragma once

#include <Eigen/Dense>

#include "hodgeflow/complex.hpp"
#include "hodgeflow/errors.hpp"

namespace hodgeflow {

/**
 * Incidence matrix B_k of shape n_{k+1} x n_k: row f, column s holds
 * (-1)^i * orient(f) * orient(s) when s is the face of f omitting vertex
 * position i, else 0. Rows compose to zero across consecutive orders
 * (B_{k+1} B_k = 0). Requires 0 <= k < max_order.
 */
inline Eigen::MatrixXd incidence(const SimplicialComplex& c, int k) {
    if (k < 0 || k >= c.max_order())
        throw OrderError("incidence order " + std::to_string(k) + " outside [0, " +
                         std::to_string(c.max_order() - 1) + "]");
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(c.count(k + 1), c.count(k));
    std::vector<int> face;
    for (int f = 0; f < c.count(k + 1); ++f) {
        const Simplex& sf = c.levels[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(f)];
        int sign = sf.orientation;
        for (std::size_t omit = 0; omit < sf.vertices.size(); ++omit) {
            face.clear();
            for (std::size_t i = 0; i < sf.vertices.size(); ++i)
                if (i != omit) face.push_back(sf.vertices[i]);
            int s = c.index_of(k, face);
            if (s < 0) throw ComplexError("closure violation: missing face");
            const Simplex& ss = c.levels[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
            B(f, s) = (omit % 2 == 0 ? 1.0 : -1.0) * sign * ss.orientation;
        }
    }
    return B;
}

/** Coboundary N_k = B_k, mapping k-cochains to (k+1)-cochains. */
inline Eigen::MatrixXd coboundary(const SimplicialComplex& c, int k) {
    return incidence(c, k);
}

/**
 * Dual coboundary N_k^* = W_k B_k^T W_{k+1}^{-1}, the adjoint of N_k between
 * the weighted inner products <x,y>_{W^{-1}} on orders k and k+1.
 */
inline Eigen::MatrixXd dual_coboundary(const SimplicialComplex& c, int k) {
    Eigen::MatrixXd Bt = incidence(c, k).transpose();
    const Eigen::VectorXd& wk = c.weights[static_cast<std::size_t>(k)];
    const Eigen::VectorXd& wk1 = c.weights[static_cast<std::size_t>(k + 1)];
    return wk.asDiagonal() * Bt * wk1.cwiseInverse().asDiagonal();
}

/**
 * Hodge Laplacian L_k = N_{k-1} N_{k-1}^* + N_k^* N_k. Either term is
 * dropped when the adjacent order is absent. With unit weights at k = 0 this
 * is the graph Laplacian D - A; with W_0 = D^{-1} it is I - D^{-1} A.
 */
inline Eigen::MatrixXd hodge_laplacian(const SimplicialComplex& c, int k) {
    c.check_order(k);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(c.count(k), c.count(k));
    if (k > 0) L += incidence(c, k - 1) * dual_coboundary(c, k - 1);
    if (k < c.max_order() && c.count(k + 1) > 0)
        L += dual_coboundary(c, k) * incidence(c, k);
    return L;
}

/** Duplication lift V = [I; -I] of shape 2n x n; V^T V = 2I. */
inline Eigen::MatrixXd lift_matrix(int n) {
    Eigen::MatrixXd V(2 * n, n);
    V << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
    return V;
}

/**
 * Elementwise sign projection X^{+} = (X + |X|)/2 or X^{-} = (X - |X|)/2:
 * sign=+1 keeps the positive entries, sign=-1 the negative ones, and
 * X^+ + X^- = X.
 */
inline Eigen::MatrixXd pm_projection(const Eigen::MatrixXd& X, int sign) {
    if (sign == 1) return X.cwiseMax(0.0);
    if (sign == -1) return X.cwiseMin(0.0);
    throw DimensionError("pm_projection sign must be +1 or -1");
}

/**
 * Laplacian rebuilt through the lift/projection machinery: each term routes
 * the adjacent order through its duplicated copy and keeps the negative
 * entries,
 *   (N_{k-1} V_{k-1}^T)^- V_{k-1} N_{k-1}^*  +  (N_k^* V_{k+1}^T)^- V_{k+1} N_k.
 * The projections cancel pairwise, so this equals hodge_laplacian(c, k) to
 * machine precision; the lift only becomes substantive inside the nonlinear
 * dynamics.
 */
inline Eigen::MatrixXd lifted_laplacian(const SimplicialComplex& c, int k) {
    c.check_order(k);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(c.count(k), c.count(k));
    if (k > 0) {
        Eigen::MatrixXd V = lift_matrix(c.count(k - 1));
        L += pm_projection(incidence(c, k - 1) * V.transpose(), -1) *
             (V * dual_coboundary(c, k - 1));
    }
    if (k < c.max_order() && c.count(k + 1) > 0) {
        Eigen::MatrixXd V = lift_matrix(c.count(k + 1));
        L += pm_projection(dual_coboundary(c, k) * V.transpose(), -1) *
             (V * incidence(c, k));
    }
    return L;
}

/**
 * Fully lifted Laplacian on the duplicated k-cochain space (2n_k x 2n_k),
 *   1/2 (V_k N_{k-1} V_{k-1}^T)^- V_{k-1} N_{k-1}^* V_k^T
 * + 1/2 (V_k N_k^*  V_{k+1}^T)^- V_{k+1} N_k V_k^T,
 * satisfying 1/2 V_k^T lifted_laplacian_doubled V_k = L_k.
 */
inline Eigen::MatrixXd lifted_laplacian_doubled(const SimplicialComplex& c, int k) {
    c.check_order(k);
    Eigen::MatrixXd Vk = lift_matrix(c.count(k));
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2 * c.count(k), 2 * c.count(k));
    if (k > 0) {
        Eigen::MatrixXd V = lift_matrix(c.count(k - 1));
        L += 0.5 * pm_projection(Vk * incidence(c, k - 1) * V.transpose(), -1) *
             (V * dual_coboundary(c, k - 1) * Vk.transpose());
    }
    if (k < c.max_order() && c.count(k + 1) > 0) {
        Eigen::MatrixXd V = lift_matrix(c.count(k + 1));
        L += 0.5 * pm_projection(Vk * dual_coboundary(c, k) * V.transpose(), -1) *
             (V * incidence(c, k) * Vk.transpose());
    }
    return L;
}

/**
 * Generalized degree (N_k^* V_{k+1}^T)^- 1_{2 n_{k+1}}. Entries are
 * non-positive; the magnitude of entry i is the weighted count
 * sum_f |N_k^*|_{if} of (k+1)-simplices incident to simplex i.
 */
inline Eigen::VectorXd generalized_degree(const SimplicialComplex& c, int k) {
    c.check_order(k);
    if (k >= c.max_order() || c.count(k + 1) == 0)
        return Eigen::VectorXd::Zero(c.count(k));
    Eigen::MatrixXd V = lift_matrix(c.count(k + 1));
    return pm_projection(dual_coboundary(c, k) * V.transpose(), -1) *
           Eigen::VectorXd::Ones(2 * c.count(k + 1));
}

/**
 * Cached operator bundle for one (complex, order) pair. Integrators and
 * sweeps evaluate the right-hand side thousands of times; building the
 * matrices once per simulation (one bundle per worker, never shared hot)
 * keeps those evaluations allocation-free matrix products.
 */
struct Operators {
    int k = 0;
    bool has_down = false;  // order k-1 present
    bool has_up = false;    // order k+1 present
    Eigen::MatrixXd down_cobound;        // N_{k-1} (n_k x n_{k-1})
    Eigen::MatrixXd down_dual;           // N_{k-1}^* (n_{k-1} x n_k)
    Eigen::MatrixXd up_cobound;          // N_k (n_{k+1} x n_k)
    Eigen::MatrixXd up_dual;             // N_k^* (n_k x n_{k+1})
    Eigen::MatrixXd up_lift;             // V_{k+1} N_k (2n_{k+1} x n_k)
    Eigen::MatrixXd up_lift_dual_minus;  // (N_k^* V_{k+1}^T)^- (n_k x 2n_{k+1})
    Eigen::MatrixXd laplacian;           // L_k
    Eigen::VectorXd w_down, w_mid, w_up;  // diagonals of W_{k-1}, W_k, W_{k+1}
    int n_down = 0, n_mid = 0, n_up = 0;
};

inline Operators build_operators(const SimplicialComplex& c, int k) {
    c.check_order(k);
    Operators op;
    op.k = k;
    op.n_mid = c.count(k);
    op.w_mid = c.weights[static_cast<std::size_t>(k)];
    op.laplacian = hodge_laplacian(c, k);
    if (k > 0) {
        op.has_down = true;
        op.n_down = c.count(k - 1);
        op.w_down = c.weights[static_cast<std::size_t>(k - 1)];
        op.down_cobound = incidence(c, k - 1);
        op.down_dual = dual_coboundary(c, k - 1);
    }
    if (k < c.max_order() && c.count(k + 1) > 0) {
        op.has_up = true;
        op.n_up = c.count(k + 1);
        op.w_up = c.weights[static_cast<std::size_t>(k + 1)];
        op.up_cobound = incidence(c, k);
        op.up_dual = dual_coboundary(c, k);
        Eigen::MatrixXd V = lift_matrix(op.n_up);
        op.up_lift = V * op.up_cobound;
        op.up_lift_dual_minus = pm_projection(op.up_dual * V.transpose(), -1);
    }
    return op;
}

}  // namespace hodgeflow
