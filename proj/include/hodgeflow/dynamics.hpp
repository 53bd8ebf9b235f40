#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "hodgeflow/errors.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/rng.hpp"

namespace hodgeflow {

// Frustration vectors at the simulated order (level) and one order above
// (up). Either may be empty, meaning zero.
struct Frustration {
    Eigen::VectorXd level;
    Eigen::VectorXd up;

    // Broadcasts scalar frustrations to the sizes the operators expect.
    static Frustration uniform(const Operators& op, double alpha_level, double alpha_up) {
        Frustration f;
        f.level = Eigen::VectorXd::Constant(op.n_mid, alpha_level);
        if (op.has_up) f.up = Eigen::VectorXd::Constant(op.n_up, alpha_up);
        return f;
    }

    void validate(const Operators& op) const {
        if (level.size() != 0 && level.size() != op.n_mid)
            throw DimensionError("frustration at the simulated order has wrong length");
        if (up.size() != 0 && !(op.has_up && up.size() == op.n_up))
            throw DimensionError("frustration one order up has wrong length");
    }
};

enum class RhsKind { consensus, diffusion };

// Consensus-form frustrated flow:
//   dtheta = -alpha_k - N_{k-1} sin(N_{k-1}^* theta)
//            - (N_k^* V_{k+1}^T)^- sin(V_{k+1} N_k theta - (alpha_{k+1}; alpha_{k+1}))
// The up interaction routes each (k+1)-simplex through its duplicated copy;
// the minus projection keeps, per k-simplex, the copy whose sign convention
// yields attracting coupling, and the stacked offset shifts both copies
// identically so the flow is invariant under (k+1)-orientation flips. The
// offset enters with a minus sign: at k = 0 this reduces exactly to
//   dtheta_i = omega_i - sum_j A_ij sin(theta_i - theta_j + alpha),
// and on the fully oriented triangle to dtheta = -alpha_1 - sin(3 theta + alpha_2).
// With alpha_{k+1} = 0 the up term collapses to -N_k^* sin(N_k theta).
class ConsensusRhs {
  public:
    ConsensusRhs(const Operators& op, Frustration fr) : op_(op), fr_(std::move(fr)) {
        fr_.validate(op);
        if (fr_.level.size() == 0) fr_.level = Eigen::VectorXd::Zero(op.n_mid);
        if (op_.has_up) {
            stacked_up_ = Eigen::VectorXd::Zero(2 * op.n_up);
            if (fr_.up.size() != 0) {
                stacked_up_.head(op.n_up) = -fr_.up;
                stacked_up_.tail(op.n_up) = -fr_.up;
            }
            arg_up_.resize(2 * op.n_up);
        }
        if (op_.has_down) arg_down_.resize(op.n_down);
    }

    void operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& out) {
        out = -fr_.level;
        if (op_.has_down) {
            arg_down_.noalias() = op_.down_dual * theta;
            out.noalias() -= op_.down_cobound * arg_down_.array().sin().matrix();
        }
        if (op_.has_up) {
            arg_up_.noalias() = op_.up_lift * theta;
            arg_up_ += stacked_up_;
            out.noalias() -= op_.up_lift_dual_minus * arg_up_.array().sin().matrix();
        }
    }

    // Up-interaction term alone (used to probe gradient-curl coupling).
    Eigen::VectorXd up_term(const Eigen::VectorXd& theta) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(op_.n_mid);
        if (op_.has_up) {
            arg_up_.noalias() = op_.up_lift * theta;
            arg_up_ += stacked_up_;
            out.noalias() -= op_.up_lift_dual_minus * arg_up_.array().sin().matrix();
        }
        return out;
    }

  private:
    const Operators& op_;
    Frustration fr_;
    Eigen::VectorXd stacked_up_, arg_up_, arg_down_;
};

// Diffusion-form flow (transposed operator placement, no lift):
//   dtheta = -alpha_k - N_{k-1}^{*T} sin(N_{k-1}^T theta)
//            - N_k^T sin(N_k^{*T} theta + alpha_{k+1})
// Coincides with the consensus flow for unit weights and alpha_{k+1} = 0.
class DiffusionRhs {
  public:
    DiffusionRhs(const Operators& op, Frustration fr) : op_(op), fr_(std::move(fr)) {
        fr_.validate(op);
        if (fr_.level.size() == 0) fr_.level = Eigen::VectorXd::Zero(op.n_mid);
        if (op_.has_down) {
            down_a_ = op.down_dual.transpose();
            down_b_ = op.down_cobound.transpose();
            arg_down_.resize(op.n_down);
        }
        if (op_.has_up) {
            up_a_ = op.up_cobound.transpose();
            up_b_ = op.up_dual.transpose();
            up_alpha_ = fr_.up.size() != 0 ? fr_.up : Eigen::VectorXd::Zero(op.n_up);
            arg_up_.resize(op.n_up);
        }
    }

    void operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& out) {
        out = -fr_.level;
        if (op_.has_down) {
            arg_down_.noalias() = down_b_ * theta;
            out.noalias() -= down_a_ * arg_down_.array().sin().matrix();
        }
        if (op_.has_up) {
            arg_up_.noalias() = up_b_ * theta;
            arg_up_ += up_alpha_;
            out.noalias() -= up_a_ * arg_up_.array().sin().matrix();
        }
    }

  private:
    const Operators& op_;
    Frustration fr_;
    Eigen::MatrixXd down_a_, down_b_, up_a_, up_b_;
    Eigen::VectorXd up_alpha_, arg_down_, arg_up_;
};

inline Eigen::VectorXd rhs_consensus(const Operators& op, const Frustration& fr,
                                     const Eigen::VectorXd& theta) {
    if (theta.size() != op.n_mid) throw DimensionError("phase vector length mismatch");
    Eigen::VectorXd out(op.n_mid);
    ConsensusRhs rhs(op, fr);
    rhs(theta, out);
    return out;
}

inline Eigen::VectorXd rhs_diffusion(const Operators& op, const Frustration& fr,
                                     const Eigen::VectorXd& theta) {
    if (theta.size() != op.n_mid) throw DimensionError("phase vector length mismatch");
    Eigen::VectorXd out(op.n_mid);
    DiffusionRhs rhs(op, fr);
    rhs(theta, out);
    return out;
}

// Oracle form of the k = 0 flow on a plain graph:
//   dtheta_i = omega_i - sum_j A_ij sin(theta_i - theta_j + alpha).
inline Eigen::VectorXd rhs_node_adjacency(const Eigen::MatrixXd& adjacency,
                                          const Eigen::VectorXd& omega, double alpha,
                                          const Eigen::VectorXd& theta) {
    if (adjacency.rows() != adjacency.cols() || adjacency.rows() != theta.size() ||
        omega.size() != theta.size())
        throw DimensionError("adjacency / omega / theta size mismatch");
    Eigen::VectorXd out = omega;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        for (Eigen::Index j = 0; j < theta.size(); ++j)
            if (adjacency(i, j) != 0.0)
                out[i] -= adjacency(i, j) * std::sin(theta[i] - theta[j] + alpha);
    return out;
}

// Projections of the consensus flow onto the Hodge subspaces. The three
// parts always sum back to the full right-hand side.
struct DecomposedRhs {
    Eigen::VectorXd grad, curl, harm;
};

inline DecomposedRhs rhs_decomposed(const Operators& op, const HodgeBasis& basis,
                                    const Frustration& fr, const Eigen::VectorXd& theta) {
    Eigen::VectorXd full = rhs_consensus(op, fr, theta);
    return {basis.proj_grad * full, basis.proj_curl * full, basis.proj_harm * full};
}

// Gradient-subspace component of the up interaction. Identically zero when
// alpha_{k+1} = 0 (the collapsed up term lies in the curl subspace); a
// nonzero frustration leaks curl forcing into the gradient flow.
inline Eigen::VectorXd grad_curl_coupling(const Operators& op, const HodgeBasis& basis,
                                          const Frustration& fr,
                                          const Eigen::VectorXd& theta) {
    ConsensusRhs rhs(op, fr);
    return basis.proj_grad * rhs.up_term(theta);
}

struct IntegratorSettings {
    double t_max = 1000.0;
    double dt = 0.01;
    int sample_every = 10;

    void validate() const {
        if (!(t_max > 0.0) || !(dt > 0.0) || t_max < dt)
            throw ConfigError("need 0 < dt <= t_max");
        if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
    }
};

// Sampled trajectory; phases are unwrapped (never reduced mod 2 pi).
struct Trajectory {
    Eigen::VectorXd times;   // sample instants, starting at t = 0
    Eigen::MatrixXd phases;  // one row per sample, one column per simplex

    Eigen::Index samples() const { return times.size(); }
};

namespace detail {

template <class Rhs>
Trajectory integrate_rk4(Rhs& rhs, const Eigen::VectorXd& theta0,
                         const IntegratorSettings& s) {
    s.validate();
    const auto n = theta0.size();
    const long steps = std::lround(s.t_max / s.dt);
    const long n_samples = steps / s.sample_every + 1;

    Trajectory traj;
    traj.times.resize(n_samples);
    traj.phases.resize(n_samples, n);

    Eigen::VectorXd theta = theta0;
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n);
    long sample = 0;
    auto record = [&](long step) {
        double t = static_cast<double>(step) * s.dt;
        if (!theta.allFinite()) throw IntegrationError(t);
        traj.times[sample] = t;
        traj.phases.row(sample) = theta.transpose();
        ++sample;
    };
    record(0);
    for (long step = 1; step <= steps; ++step) {
        rhs(theta, k1);
        tmp = theta + (0.5 * s.dt) * k1;
        rhs(tmp, k2);
        tmp = theta + (0.5 * s.dt) * k2;
        rhs(tmp, k3);
        tmp = theta + s.dt * k3;
        rhs(tmp, k4);
        theta += (s.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % s.sample_every == 0) record(step);
    }
    return traj;
}

}  // namespace detail

/**
 * Fixed-step classic Runge-Kutta integration of the chosen flow. Phases are
 * recorded unwrapped every sample_every steps (including t = 0); a non-finite
 * state raises IntegrationError carrying the failure time.
 */
inline Trajectory integrate(const Operators& op, const Frustration& fr,
                            const Eigen::VectorXd& theta0, const IntegratorSettings& s,
                            RhsKind kind = RhsKind::consensus) {
    if (theta0.size() != op.n_mid) throw DimensionError("theta0 length mismatch");
    if (kind == RhsKind::consensus) {
        ConsensusRhs rhs(op, fr);
        return detail::integrate_rk4(rhs, theta0, s);
    }
    DiffusionRhs rhs(op, fr);
    return detail::integrate_rk4(rhs, theta0, s);
}

/** Independent uniform [0, 2 pi) phases from the deterministic generator. */
inline Eigen::VectorXd random_phases(Eigen::Index n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return rng.uniform_vector(n, 2.0 * std::numbers::pi);
}

/**
 * Subtracts the uniform drift rate * t * h from every sample, in place.
 * h must be harmonic for the supplied operators: the flow is invariant under
 * harmonic shifts, so this is a legitimate change of frame.
 */
inline void apply_rotating_frame(Trajectory& traj, const Operators& op,
                                 const Eigen::VectorXd& h, double rate) {
    if (h.size() != op.n_mid) throw DimensionError("frame vector length mismatch");
    double scale = std::max(1.0, h.norm());
    if ((op.laplacian * h).lpNorm<Eigen::Infinity>() > 1e-8 * scale)
        throw HarmonicError("frame vector is not in ker L_k");
    for (Eigen::Index i = 0; i < traj.samples(); ++i)
        traj.phases.row(i) -= (rate * traj.times[i]) * h.transpose();
}

}  // namespace hodgeflow
