#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "hodgeflow/dynamics.hpp"
#include "hodgeflow/errors.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/operators.hpp"

namespace hodgeflow {

/**
 * Squared simplicial order parameter
 *   R_k^2(theta) = (1/C_k) [ 1 . W_{k-1}^{-1} cos(N_{k-1}^* theta)
 *                          + 1 . W_{k+1}^{-1} cos(N_k theta) ],
 * with C_k the total inverse weight of the orders that are present (either
 * side drops from numerator and normalization when absent). Equals 1 exactly
 * on harmonic configurations and is invariant under harmonic shifts.
 */
inline double simplicial_order_parameter(const Operators& op, const Eigen::VectorXd& theta) {
    if (theta.size() != op.n_mid) throw DimensionError("phase vector length mismatch");
    double num = 0.0, denom = 0.0;
    if (op.has_down) {
        Eigen::VectorXd winv = op.w_down.cwiseInverse();
        num += winv.dot((op.down_dual * theta).array().cos().matrix());
        denom += winv.sum();
    }
    if (op.has_up) {
        Eigen::VectorXd winv = op.w_up.cwiseInverse();
        num += winv.dot((op.up_cobound * theta).array().cos().matrix());
        denom += winv.sum();
    }
    if (denom == 0.0) return 1.0;  // isolated order: everything is harmonic
    return num / denom;
}

namespace detail {

// First sample index of the trailing window [fraction of total time].
inline Eigen::Index window_start(const Trajectory& traj, double window_fraction) {
    if (traj.samples() < 2) throw AnalysisError("trajectory has fewer than 2 samples");
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw AnalysisError("window fraction must lie in (0, 1]");
    double t_cut = traj.times[traj.samples() - 1] * (1.0 - window_fraction);
    Eigen::Index start = 0;
    while (start < traj.samples() && traj.times[start] < t_cut) ++start;
    return std::min(start, traj.samples() - 2);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_std = 0.0;  // population std of residuals
};

inline LineFit fit_line(const Eigen::VectorXd& t, const Eigen::VectorXd& y) {
    const double n = static_cast<double>(t.size());
    double tm = t.mean(), ym = y.mean();
    double stt = (t.array() - tm).square().sum();
    LineFit f;
    f.slope = stt > 0.0 ? (t.array() - tm).cwiseProduct(y.array() - ym).sum() / stt : 0.0;
    f.intercept = ym - f.slope * tm;
    Eigen::ArrayXd r = y.array() - (f.slope * t.array() + f.intercept);
    f.residual_std = std::sqrt(r.square().sum() / n);
    return f;
}

}  // namespace detail

struct OrderParameterStats {
    double mean = 0.0;
    double std = 0.0;  // population convention
};

/** Mean/std of R_k^2 over the trailing window of the trajectory. */
inline OrderParameterStats order_parameter_stats(const Operators& op, const Trajectory& traj,
                                                 double window_fraction = 0.5) {
    Eigen::Index start = detail::window_start(traj, window_fraction);
    Eigen::Index m = traj.samples() - start;
    Eigen::VectorXd r2(m);
    for (Eigen::Index i = 0; i < m; ++i)
        r2[i] = simplicial_order_parameter(op, traj.phases.row(start + i).transpose());
    OrderParameterStats s;
    s.mean = r2.mean();
    s.std = std::sqrt((r2.array() - s.mean).square().sum() / static_cast<double>(m));
    return s;
}

enum class RegimeKind { constant, oscillating, drifting };

inline const char* regime_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::constant: return "constant";
        case RegimeKind::oscillating: return "oscillating";
        default: return "drifting";
    }
}

struct RegimeThresholds {
    double window_fraction = 0.5;
    double constant_residual = 1e-6;  // residual std below which a signal is flat
    double slope_threshold = 1e-3;    // |slope| at or above which it drifts
};

struct RegimeClass {
    RegimeKind kind = RegimeKind::constant;
    double slope = 0.0;           // norm of the drift vector, signed by dominant entry
    double slope_dominant = 0.0;  // slope of the strongest basis direction
    double residual_std = 0.0;    // worst detrended residual across directions
};

/**
 * Classifies the motion of theta(t) inside one Hodge subspace. Each basis
 * direction gives a scalar signal (basis coordinates of the samples); a line
 * is fitted to each over the trailing window. Drift wins over flatness:
 * a cleanly linear ramp is drifting, not constant.
 *   drifting    if max_i |slope_i| >= slope_threshold
 *   constant    else if max_i residual_i < constant_residual
 *   oscillating otherwise.
 * Classification is invariant under affine reparameterizations of the signal
 * offset (the fit removes mean and trend). An empty subspace is constant.
 */
inline RegimeClass classify_subspace(const Trajectory& traj, const HodgeBasis& basis,
                                     Subspace sub, const RegimeThresholds& th = {}) {
    RegimeClass rc;
    const Eigen::MatrixXd& p = basis.rows(sub);
    if (p.rows() == 0) return rc;
    if (traj.phases.cols() != p.cols())
        throw DimensionError("trajectory width does not match basis");

    Eigen::Index start = detail::window_start(traj, th.window_fraction);
    Eigen::Index m = traj.samples() - start;
    if (m < 3) throw AnalysisError("window too short to classify");
    Eigen::VectorXd t = traj.times.segment(start, m);
    // Signals: coordinates of each sample against the subspace basis.
    Eigen::MatrixXd signals = traj.phases.middleRows(start, m) *
                              basis.w_inv_sqrt.asDiagonal() * p.transpose();

    double max_abs_slope = 0.0, norm2 = 0.0;
    for (Eigen::Index j = 0; j < signals.cols(); ++j) {
        auto fit = detail::fit_line(t, signals.col(j));
        norm2 += fit.slope * fit.slope;
        if (std::abs(fit.slope) > max_abs_slope) {
            max_abs_slope = std::abs(fit.slope);
            rc.slope_dominant = fit.slope;
        }
        rc.residual_std = std::max(rc.residual_std, fit.residual_std);
    }
    rc.slope = std::copysign(std::sqrt(norm2), rc.slope_dominant == 0.0 ? 1.0 : rc.slope_dominant);
    if (max_abs_slope >= th.slope_threshold)
        rc.kind = RegimeKind::drifting;
    else if (rc.residual_std < th.constant_residual)
        rc.kind = RegimeKind::constant;
    else
        rc.kind = RegimeKind::oscillating;
    return rc;
}

/**
 * First-order prediction of the phase-locked response to a small up
 * frustration alpha2 at the simulated order (requires a harmonic subspace):
 * the locked state drifts uniformly along
 *   drift = P_harm g alpha2,    g = (N_k^* V_{k+1}^T)^- 1,
 * and carries a static offset epsilon solving L epsilon = (I - P_harm) g alpha2
 * on the orthogonal complement of the kernel. The sign follows the coupling
 * convention used by the consensus right-hand side (the offset is subtracted
 * inside the sine); g itself has non-positive entries, so the drift opposes
 * the generalized degree direction.
 */
struct LinearResponse {
    Eigen::VectorXd drift;           // predicted d theta / dt, a cochain
    Eigen::VectorXd drift_coords;    // same drift in harmonic basis coordinates
    Eigen::VectorXd epsilon;         // static offset, kernel-orthogonal part
    double residual = 0.0;           // || L eps + (I-P_h) g alpha2 ||_inf
};

inline LinearResponse predict_linear_response(const Operators& op, const HodgeBasis& basis,
                                              double alpha2) {
    if (!op.has_up) throw DimensionError("no simplices one order up");
    Eigen::VectorXd g = op.up_lift_dual_minus * Eigen::VectorXd::Ones(2 * op.n_up);
    LinearResponse lr;
    lr.drift = alpha2 * (basis.proj_harm * g);
    lr.drift_coords = basis.coords(lr.drift, Subspace::harm);

    Eigen::VectorXd b = alpha2 * (g - basis.proj_harm * g);
    // Solve L eps = b in symmetrized coordinates, inverting only away from
    // the kernel.
    Eigen::MatrixXd L_sym = basis.w_inv_sqrt.asDiagonal() * op.laplacian *
                            basis.w_sqrt.asDiagonal();
    L_sym = 0.5 * (L_sym + L_sym.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L_sym);
    const Eigen::VectorXd& ev = es.eigenvalues();
    double cut = ev.cwiseAbs().maxCoeff() * kRankTolerance;
    Eigen::VectorXd by = basis.w_inv_sqrt.cwiseProduct(b);
    Eigen::VectorXd ey = Eigen::VectorXd::Zero(op.n_mid);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i]) > cut)
            ey += (es.eigenvectors().col(i).dot(by) / ev[i]) * es.eigenvectors().col(i);
    lr.epsilon = basis.w_sqrt.cwiseProduct(ey);
    lr.residual = (op.laplacian * lr.epsilon - b).lpNorm<Eigen::Infinity>();
    return lr;
}

struct LyapunovSettings {
    int embed_dim = 5;
    int lag = 0;          // 0: first zero crossing of the autocorrelation
    int theiler = 0;      // 0: embed_dim * lag
    int max_steps = 0;    // 0: min(300, samples/10)
    double fit_fraction = 0.25;  // leading part of the divergence curve to fit
    double window_fraction = 0.5;
};

struct LyapunovSummary {
    Eigen::VectorXd per_signal;  // one exponent per simplex column
    double mean = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    int constant_signals = 0;  // columns flagged as flat (exponent fixed to 0)
};

namespace detail {

inline int autocorr_zero_lag(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd c = x.array() - x.mean();
    Eigen::Index cap = std::max<Eigen::Index>(2, n / 10);
    for (Eigen::Index lag = 1; lag <= cap; ++lag) {
        double acc = c.head(n - lag).dot(c.tail(n - lag));
        if (acc <= 0.0) return static_cast<int>(lag);
    }
    return static_cast<int>(std::max<Eigen::Index>(1, n / 100));
}

// Largest Lyapunov exponent of one scalar series by the nearest-neighbor
// divergence method: delay-embed, pair each point with its nearest
// temporally separated neighbor, track the mean log separation, and read the
// exponent off the initial slope.
inline double lyapunov_series(const Eigen::VectorXd& x, double dt_sample,
                              const LyapunovSettings& ls, bool& constant_flag) {
    const Eigen::Index n = x.size();
    double sd = std::sqrt((x.array() - x.mean()).square().sum() / static_cast<double>(n));
    if (sd < 1e-12) {
        constant_flag = true;
        return 0.0;
    }
    constant_flag = false;

    const int m = ls.embed_dim;
    const int tau = ls.lag > 0 ? ls.lag : autocorr_zero_lag(x);
    const Eigen::Index points = n - static_cast<Eigen::Index>(m - 1) * tau;
    if (points < 16) throw AnalysisError("series too short for the chosen embedding");
    const Eigen::Index theiler = ls.theiler > 0 ? ls.theiler : static_cast<Eigen::Index>(m) * tau;

    // Embedded points as rows.
    Eigen::MatrixXd E(points, m);
    for (int d = 0; d < m; ++d) E.col(d) = x.segment(d * tau, points);

    std::vector<Eigen::Index> neighbor(static_cast<std::size_t>(points), -1);
    for (Eigen::Index i = 0; i < points; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < points; ++j) {
            if (std::abs(i - j) <= theiler) continue;
            double d2 = (E.row(i) - E.row(j)).squaredNorm();
            if (d2 < best) {
                best = d2;
                neighbor[static_cast<std::size_t>(i)] = j;
            }
        }
    }

    Eigen::Index max_steps = ls.max_steps > 0
                                 ? ls.max_steps
                                 : std::min<Eigen::Index>(300, n / 10);
    max_steps = std::min(max_steps, points - 1);
    std::vector<double> mean_log;
    for (Eigen::Index s = 0; s <= max_steps; ++s) {
        double acc = 0.0;
        long cnt = 0;
        for (Eigen::Index i = 0; i + s < points; ++i) {
            Eigen::Index j = neighbor[static_cast<std::size_t>(i)];
            if (j < 0 || j + s >= points) continue;
            double d = (E.row(i + s) - E.row(j + s)).norm();
            if (d <= 0.0) continue;
            acc += std::log(d);
            ++cnt;
        }
        if (cnt == 0) break;
        mean_log.push_back(acc / static_cast<double>(cnt));
    }
    Eigen::Index fit_len = std::max<Eigen::Index>(
        2, static_cast<Eigen::Index>(std::floor(ls.fit_fraction *
                                                static_cast<double>(mean_log.size()))));
    fit_len = std::min<Eigen::Index>(fit_len, static_cast<Eigen::Index>(mean_log.size()));
    Eigen::VectorXd t(fit_len), y(fit_len);
    for (Eigen::Index i = 0; i < fit_len; ++i) {
        t[i] = static_cast<double>(i) * dt_sample;
        y[i] = mean_log[static_cast<std::size_t>(i)];
    }
    return fit_line(t, y).slope;
}

// Quartile by sorted linear interpolation at position q * (n - 1).
inline double quantile(Eigen::VectorXd v, double q) {
    std::sort(v.data(), v.data() + v.size());
    double pos = q * static_cast<double>(v.size() - 1);
    Eigen::Index lo = static_cast<Eigen::Index>(std::floor(pos));
    Eigen::Index hi = std::min<Eigen::Index>(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace detail

/**
 * Largest Lyapunov exponent per simplex column over the trailing window,
 * plus mean and quartiles across columns. Flat columns are flagged and
 * contribute an exponent of exactly 0.
 */
inline LyapunovSummary lyapunov_largest(const Trajectory& traj, const LyapunovSettings& ls = {}) {
    Eigen::Index start = detail::window_start(traj, ls.window_fraction);
    Eigen::Index m = traj.samples() - start;
    if (m < 64) throw AnalysisError("need at least 64 post-transient samples");
    double dt_sample = traj.times[start + 1] - traj.times[start];

    LyapunovSummary out;
    out.per_signal.resize(traj.phases.cols());
    for (Eigen::Index c = 0; c < traj.phases.cols(); ++c) {
        bool flat = false;
        out.per_signal[c] =
            detail::lyapunov_series(traj.phases.col(c).segment(start, m), dt_sample, ls, flat);
        if (flat) ++out.constant_signals;
    }
    out.mean = out.per_signal.mean();
    out.q25 = detail::quantile(out.per_signal, 0.25);
    out.q75 = detail::quantile(out.per_signal, 0.75);
    return out;
}

/** Everything the sweep records about one trajectory. */
struct AnalysisReport {
    OrderParameterStats r2;
    RegimeClass grad, curl, harm;
    LyapunovSummary lyapunov;
    bool has_lyapunov = false;
};

struct AnalysisOptions {
    RegimeThresholds thresholds;
    bool with_lyapunov = false;
    LyapunovSettings lyapunov;
};

inline AnalysisReport analyze_trajectory(const Operators& op, const HodgeBasis& basis,
                                         const Trajectory& traj,
                                         const AnalysisOptions& opt = {}) {
    AnalysisReport rep;
    rep.r2 = order_parameter_stats(op, traj, opt.thresholds.window_fraction);
    rep.grad = classify_subspace(traj, basis, Subspace::grad, opt.thresholds);
    rep.curl = classify_subspace(traj, basis, Subspace::curl, opt.thresholds);
    rep.harm = classify_subspace(traj, basis, Subspace::harm, opt.thresholds);
    if (opt.with_lyapunov) {
        LyapunovSettings ls = opt.lyapunov;
        ls.window_fraction = opt.thresholds.window_fraction;
        rep.lyapunov = lyapunov_largest(traj, ls);
        rep.has_lyapunov = true;
    }
    return rep;
}

}  // namespace hodgeflow
