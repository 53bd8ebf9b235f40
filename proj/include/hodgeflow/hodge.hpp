#pragma once

#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hodgeflow/complex.hpp"
#include "hodgeflow/errors.hpp"
#include "hodgeflow/operators.hpp"

namespace hodgeflow {

enum class Subspace { grad, curl, harm };

inline const char* subspace_name(Subspace s) {
    switch (s) {
        case Subspace::grad: return "grad";
        case Subspace::curl: return "curl";
        default: return "harm";
    }
}

// Relative singular-value cutoff for rank decisions.
inline constexpr double kRankTolerance = 1e-10;

/**
 * Orthogonal splitting of k-cochains into gradient, curl and harmonic parts,
 * C^k = range(N_{k-1}) + ker(L_k) + range(N_k^*).
 *
 * Bases are computed in symmetrized coordinates y = W_k^{-1/2} theta, where
 * L_k is a symmetric matrix and the three subspaces are mutually orthogonal;
 * p_grad / p_curl / p_harm have orthonormal rows there (plain Euclidean
 * orthonormal rows for unit weights). Projectors act on raw cochains:
 * P = W^{1/2} p^T p W^{-1/2}, and P_grad + P_curl + P_harm = I.
 */
struct HodgeBasis {
    int k = 0;
    Eigen::MatrixXd p_grad, p_curl, p_harm;        // row bases, y coordinates
    Eigen::MatrixXd proj_grad, proj_curl, proj_harm;  // cochain-space projectors
    Eigen::VectorXd w_sqrt, w_inv_sqrt;            // W_k^{1/2}, W_k^{-1/2}

    int betti() const { return static_cast<int>(p_harm.rows()); }

    const Eigen::MatrixXd& projector(Subspace s) const {
        switch (s) {
            case Subspace::grad: return proj_grad;
            case Subspace::curl: return proj_curl;
            default: return proj_harm;
        }
    }

    const Eigen::MatrixXd& rows(Subspace s) const {
        switch (s) {
            case Subspace::grad: return p_grad;
            case Subspace::curl: return p_curl;
            default: return p_harm;
        }
    }

    /** Component of theta in the subspace, as a cochain. */
    Eigen::VectorXd project(const Eigen::VectorXd& theta, Subspace s) const {
        if (theta.size() != proj_harm.rows())
            throw DimensionError("cochain length mismatch in project");
        return projector(s) * theta;
    }

    /** Coefficients of theta against the subspace basis (y coordinates). */
    Eigen::VectorXd coords(const Eigen::VectorXd& theta, Subspace s) const {
        if (theta.size() != proj_harm.rows())
            throw DimensionError("cochain length mismatch in coords");
        return rows(s) * w_inv_sqrt.cwiseProduct(theta);
    }

    /** Harmonic basis as cochain-space rows (spans ker L_k). */
    Eigen::MatrixXd harmonic_vectors() const {
        return p_harm * w_sqrt.asDiagonal();
    }
};

namespace detail {

// Orthonormal basis of range(A) as rows, rank decided by relative cutoff.
inline Eigen::MatrixXd range_basis_rows(const Eigen::MatrixXd& A, double tol) {
    if (A.cols() == 0 || A.rows() == 0)
        return Eigen::MatrixXd(0, A.rows());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double cut = sv.size() > 0 ? sv[0] * tol : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;
    return svd.matrixU().leftCols(rank).transpose();
}

}  // namespace detail

/**
 * Computes the Hodge splitting at order k. Gradient rows come from the range
 * of N_{k-1}, curl rows from the range of N_k^*, harmonic rows from the
 * singular vectors of the (symmetrized) L_k with singular value below
 * tol x largest. Throws DecompositionError if the detected ranks do not add
 * up to n_k.
 */
inline HodgeBasis hodge_bases(const SimplicialComplex& c, int k,
                              double tol = kRankTolerance) {
    c.check_order(k);
    const int n = c.count(k);
    HodgeBasis hb;
    hb.k = k;
    hb.w_sqrt = c.weights[static_cast<std::size_t>(k)].cwiseSqrt();
    hb.w_inv_sqrt = hb.w_sqrt.cwiseInverse();

    // Subspace generators mapped to y coordinates, where they are orthogonal.
    Eigen::MatrixXd grad_gen(n, 0), curl_gen(n, 0);
    if (k > 0)
        grad_gen = hb.w_inv_sqrt.asDiagonal() * incidence(c, k - 1);
    if (k < c.max_order() && c.count(k + 1) > 0)
        curl_gen = hb.w_sqrt.asDiagonal() * incidence(c, k).transpose();
    hb.p_grad = detail::range_basis_rows(grad_gen, tol);
    hb.p_curl = detail::range_basis_rows(curl_gen, tol);

    Eigen::MatrixXd L_sym = hb.w_inv_sqrt.asDiagonal() * hodge_laplacian(c, k) *
                            hb.w_sqrt.asDiagonal();
    L_sym = 0.5 * (L_sym + L_sym.transpose().eval());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(L_sym, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cut = sv.size() > 0 ? sv[0] * tol : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;
    hb.p_harm = svd.matrixV().rightCols(n - rank).transpose();

    if (hb.p_grad.rows() + hb.p_curl.rows() + hb.p_harm.rows() != n)
        throw DecompositionError(
            "subspace ranks " + std::to_string(hb.p_grad.rows()) + "+" +
            std::to_string(hb.p_curl.rows()) + "+" + std::to_string(hb.p_harm.rows()) +
            " do not sum to n_k = " + std::to_string(n));

    auto projector = [&](const Eigen::MatrixXd& p) -> Eigen::MatrixXd {
        return hb.w_sqrt.asDiagonal() * (p.transpose() * p) * hb.w_inv_sqrt.asDiagonal();
    };
    hb.proj_grad = projector(hb.p_grad);
    hb.proj_curl = projector(hb.p_curl);
    hb.proj_harm = projector(hb.p_harm);
    return hb;
}

/** Betti number beta_k = dim ker L_k. */
inline int betti(const SimplicialComplex& c, int k, double tol = kRankTolerance) {
    return hodge_bases(c, k, tol).betti();
}

}  // namespace hodgeflow
