#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hodgeflow/analysis.hpp"
#include "hodgeflow/complex.hpp"
#include "hodgeflow/dynamics.hpp"
#include "hodgeflow/hodge.hpp"
#include "hodgeflow/operators.hpp"
#include "hodgeflow/rng.hpp"

using namespace hodgeflow;

namespace {

// Random undirected graph as a 1-complex with randomized edge orientations.
SimplicialComplex random_graph(SplitMix64& rng, int n) {
    std::vector<std::vector<int>> vertices;
    for (int v = 0; v < n; ++v) vertices.push_back({v});
    std::vector<std::vector<int>> edges = {{0, 1}};
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (a == 0 && b == 1) continue;
            if (rng.next_double() < 0.45) edges.push_back({a, b});
        }
    auto c = build_complex({vertices, edges});
    for (auto& e : c.levels[1])
        if (rng.next_double() < 0.5) e.orientation = -1;
    return c;
}

Eigen::MatrixXd adjacency_of(const SimplicialComplex& c) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(c.count(0), c.count(0));
    for (const auto& e : c.levels[1]) {
        int a = c.index_of(0, {e.vertices[0]});
        int b = c.index_of(0, {e.vertices[1]});
        A(a, b) = A(b, a) = 1.0;
    }
    return A;
}

double max_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("node-level flow equals the adjacency-form oscillator model") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 4 + static_cast<int>(rng.next_double(9.0));
        auto c = random_graph(rng, n);
        Operators op = build_operators(c, 0);
        double a1 = rng.next_double(2.0) - 1.0;
        double alpha = rng.next_double(1.4);
        Frustration fr = Frustration::uniform(op, a1, alpha);
        Eigen::VectorXd theta = rng.uniform_vector(n, 2.0 * std::numbers::pi);
        Eigen::VectorXd lhs = rhs_consensus(op, fr, theta);
        Eigen::VectorXd rhs = rhs_node_adjacency(
            adjacency_of(c), Eigen::VectorXd::Constant(n, -a1), alpha, theta);
        CHECK(max_err(lhs, rhs) < 1e-12);
    }
    CHECK_THROWS_AS(rhs_node_adjacency(Eigen::MatrixXd::Zero(2, 3),
                                       Eigen::VectorXd::Zero(2), 0.0,
                                       Eigen::VectorXd::Zero(2)),
                    DimensionError);
}

TEST_CASE("fully oriented triangle reduces to a scalar law on equal phases") {
    auto c = preset_triangle(false);
    Operators op = build_operators(c, 1);
    for (double a1 : {0.0, 0.4, 1.2})
        for (double a2 : {0.0, 0.3, 1.1})
            for (double th : {0.0, 0.5, 2.5, -1.0}) {
                Frustration fr = Frustration::uniform(op, a1, a2);
                Eigen::VectorXd theta = Eigen::VectorXd::Constant(3, th);
                Eigen::VectorXd out = rhs_consensus(op, fr, theta);
                double expected = -a1 - std::sin(3.0 * th + a2);
                CHECK(max_err(out, Eigen::VectorXd::Constant(3, expected)) < 1e-14);
            }
}

TEST_CASE("flipped triangle reduces to two coupled equations") {
    // On the flipped complex the manifold {theta_01 = theta_12 = u, theta_02 = v}
    // is invariant, with
    //   du = -a1 - sin(u + v) - sin(2u - v + a2)
    //   dv = -a1 - 2 sin(u + v) - sin(v - 2u + a2).
    auto c = preset_triangle(true);
    Operators op = build_operators(c, 1);
    SplitMix64 rng(32);
    for (int trial = 0; trial < 25; ++trial) {
        double a1 = rng.next_double(2.0) - 1.0;
        double a2 = rng.next_double(1.5);
        double u = rng.next_double(6.0) - 3.0;
        double v = rng.next_double(6.0) - 3.0;
        Frustration fr = Frustration::uniform(op, a1, a2);
        Eigen::Vector3d theta(u, v, u);
        Eigen::VectorXd out = rhs_consensus(op, fr, theta);
        double du = -a1 - std::sin(u + v) - std::sin(2.0 * u - v + a2);
        double dv = -a1 - 2.0 * std::sin(u + v) - std::sin(v - 2.0 * u + a2);
        CHECK(std::abs(out[0] - du) < 1e-13);
        CHECK(std::abs(out[1] - dv) < 1e-13);
        CHECK(std::abs(out[2] - du) < 1e-13);
    }
}

TEST_CASE("constant-curl ansatz collapses the flipped triangle to one equation") {
    // With v = 2u (constant curl coordinate) and a1 = -sin(a2) the manifold is
    // invariant and the phase psi = 3u obeys dpsi/dtau = -a1 - sin(a2) - sin(psi)
    // after rescaling time by 3.
    auto c = preset_triangle(true);
    Operators op = build_operators(c, 1);
    for (double a2 : {0.2, 0.7, 1.3})
        for (double u : {0.0, 0.4, 1.9, -0.8}) {
            double a1 = -std::sin(a2);
            Frustration fr = Frustration::uniform(op, a1, a2);
            Eigen::Vector3d theta(u, 2.0 * u, u);
            Eigen::VectorXd out = rhs_consensus(op, fr, theta);
            double du = -a1 - std::sin(a2) - std::sin(3.0 * u);
            CHECK(std::abs(out[0] - du) < 1e-13);
            CHECK(std::abs(out[2] - du) < 1e-13);
            // The curl coordinate v - 2u stays constant: dv = 2 du.
            CHECK(std::abs(out[1] - 2.0 * du) < 1e-13);
        }
}

TEST_CASE("upper coupling collapses to the unlifted form when unfrustrated") {
    SplitMix64 rng(33);
    for (const auto& c : {preset_triangle(), preset_holed(), preset_two_triangles(0.5)}) {
        Operators op = build_operators(c, 1);
        Frustration fr = Frustration::uniform(op, 0.3, 0.0);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd theta = rng.uniform_vector(op.n_mid, 2.0 * std::numbers::pi);
            Eigen::VectorXd full = rhs_consensus(op, fr, theta);
            Eigen::VectorXd collapsed =
                Eigen::VectorXd::Constant(op.n_mid, -0.3) -
                op.down_cobound * (op.down_dual * theta).array().sin().matrix() -
                op.up_dual * (op.up_cobound * theta).array().sin().matrix();
            CHECK(max_err(full, collapsed) < 1e-13);
        }
    }
}

TEST_CASE("flow is invariant under face orientation flips") {
    SplitMix64 rng(34);
    for (const auto& c : {preset_triangle(), preset_holed(), preset_two_triangles(1.0)}) {
        Operators op = build_operators(c, 1);
        for (int trial = 0; trial < 20; ++trial) {
            int face = static_cast<int>(rng.next_double(c.count(2)));
            auto flipped = flip_orientation(c, 2, face);
            Operators op2 = build_operators(flipped, 1);
            double a1 = rng.next_double(2.0) - 1.0;
            double a2 = rng.next_double(1.5);
            Frustration fr = Frustration::uniform(op, a1, a2);
            Frustration fr2 = Frustration::uniform(op2, a1, a2);
            Eigen::VectorXd theta = rng.uniform_vector(op.n_mid, 2.0 * std::numbers::pi);
            CHECK(max_err(rhs_consensus(op, fr, theta), rhs_consensus(op2, fr2, theta))
                  < 1e-12);
        }
    }
}

TEST_CASE("flow is invariant under harmonic shifts") {
    auto c = preset_holed();
    Operators op = build_operators(c, 1);
    HodgeBasis basis = hodge_bases(c, 1);
    REQUIRE(basis.betti() == 1);
    Eigen::VectorXd h = basis.harmonic_vectors().row(0);
    Frustration fr = Frustration::uniform(op, 0.2, 0.6);
    SplitMix64 rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd theta = rng.uniform_vector(12, 2.0 * std::numbers::pi);
        double shift = rng.next_double(10.0) - 5.0;
        CHECK(max_err(rhs_consensus(op, fr, theta),
                      rhs_consensus(op, fr, theta + shift * h)) < 1e-11);
    }
}

TEST_CASE("unfrustrated flow is the weighted gradient of the order parameter") {
    SplitMix64 rng(36);
    for (auto c : {preset_triangle(), preset_holed()}) {
        // Non-trivial weights exercise the full identity.
        for (int k = 0; k <= c.max_order(); ++k) {
            Eigen::VectorXd w(c.count(k));
            for (Eigen::Index i = 0; i < w.size(); ++i)
                w[i] = 0.5 + 1.5 * rng.next_double();
            c.set_weights(k, w);
        }
        Operators op = build_operators(c, 1);
        Frustration fr = Frustration::uniform(op, 0.0, 0.0);
        double norm_const = op.w_down.cwiseInverse().sum() + op.w_up.cwiseInverse().sum();
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd theta = rng.uniform_vector(op.n_mid, 2.0 * std::numbers::pi);
            Eigen::VectorXd rhs = rhs_consensus(op, fr, theta);
            const double h = 1e-6;
            for (Eigen::Index i = 0; i < op.n_mid; ++i) {
                Eigen::VectorXd up = theta, dn = theta;
                up[i] += h;
                dn[i] -= h;
                double grad_i = (simplicial_order_parameter(op, up) -
                                 simplicial_order_parameter(op, dn)) / (2.0 * h);
                double expected = norm_const * op.w_mid[i] * grad_i;
                CHECK(std::abs(rhs[i] - expected) < 1e-5 * std::max(1.0, std::abs(rhs[i])));
            }
        }
    }
}

TEST_CASE("small phases follow the linearized Laplacian flow") {
    auto c = preset_holed();
    Operators op = build_operators(c, 1);
    Frustration fr = Frustration::uniform(op, 0.0, 0.0);
    SplitMix64 rng(37);
    Eigen::VectorXd dir = rng.uniform_vector(12, 2.0) - Eigen::VectorXd::Ones(12);
    dir.normalize();
    double e1 = max_err(rhs_consensus(op, fr, 1e-2 * dir), -1e-2 * (op.laplacian * dir));
    double e2 = max_err(rhs_consensus(op, fr, 5e-3 * dir), -5e-3 * (op.laplacian * dir));
    // The sine expansion is odd, so the error contracts cubically.
    CHECK(e2 < e1 / 6.0);
}

TEST_CASE("splay state is a fixed point of the node-level flow") {
    auto c = preset_triangle();
    Operators op = build_operators(c, 0);
    Frustration fr = Frustration::uniform(op, 0.0, 0.0);
    Eigen::Vector3d theta(0.0, 2.0 * std::numbers::pi / 3.0, 4.0 * std::numbers::pi / 3.0);
    CHECK(rhs_consensus(op, fr, theta).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("diffusion and consensus forms agree exactly for unit weights") {
    SplitMix64 rng(38);
    auto c = preset_triangle();
    Operators op = build_operators(c, 1);
    Frustration fr = Frustration::uniform(op, 0.7, 0.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd theta = rng.uniform_vector(3, 2.0 * std::numbers::pi);
        CHECK(max_err(rhs_consensus(op, fr, theta), rhs_diffusion(op, fr, theta)) < 1e-14);
    }

    // Short trajectories stay together as well.
    IntegratorSettings s;
    s.t_max = 100.0;
    Eigen::VectorXd theta0 = random_phases(3, 5);
    Trajectory a = integrate(op, fr, theta0, s, RhsKind::consensus);
    Trajectory b = integrate(op, fr, theta0, s, RhsKind::diffusion);
    CHECK((a.phases - b.phases).lpNorm<Eigen::Infinity>() < 1e-8);

    // A non-unit weight separates the two operator placements.
    auto cw = preset_triangle();
    cw.set_weights(1, Eigen::Vector3d(2.0, 1.0, 1.0));
    Operators opw = build_operators(cw, 1);
    Frustration frw = Frustration::uniform(opw, 0.7, 0.0);
    Eigen::VectorXd theta = rng.uniform_vector(3, 2.0 * std::numbers::pi);
    CHECK(max_err(rhs_consensus(opw, frw, theta), rhs_diffusion(opw, frw, theta)) > 1e-3);
}

TEST_CASE("inverse-degree node weights make the degree vector a diffusion fixed point") {
    auto c = preset_two_triangles(0.0);
    Eigen::VectorXd degree(4);
    for (int v = 0; v < 4; ++v) {
        double d = 0.0;
        for (const auto& e : c.levels[1])
            if (e.vertices[0] == v || e.vertices[1] == v) d += 1.0;
        degree[v] = d;
    }
    c.set_weights(0, degree.cwiseInverse());
    Operators op = build_operators(c, 0);
    Frustration fr = Frustration::uniform(op, 0.0, 0.0);
    // theta* proportional to the inverse node weights, i.e. to the degrees.
    // The cancellation (1/deg) * (c * deg) rounds differently per degree, so
    // the residual is rounding noise rather than an exact zero.
    CHECK(rhs_diffusion(op, fr, 0.37 * degree).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("integrator samples on schedule and starts at the initial state") {
    auto c = preset_triangle();
    Operators op = build_operators(c, 1);
    Frustration fr = Frustration::uniform(op, 0.1, 0.2);
    IntegratorSettings s;
    s.t_max = 1.0;
    s.dt = 0.01;
    s.sample_every = 10;
    Eigen::VectorXd theta0 = random_phases(3, 9);
    Trajectory traj = integrate(op, fr, theta0, s);
    REQUIRE(traj.samples() == 11);
    CHECK(traj.times[0] == 0.0);
    CHECK(std::abs(traj.times[10] - 1.0) < 1e-12);
    CHECK(std::abs(traj.times[1] - 0.1) < 1e-12);
    CHECK(max_err(traj.phases.row(0).transpose(), theta0) == 0.0);
}

TEST_CASE("integrator validates inputs and reports non-finite states") {
    auto c = preset_triangle();
    Operators op = build_operators(c, 1);
    Frustration fr = Frustration::uniform(op, 0.0, 0.0);
    IntegratorSettings bad;
    bad.dt = -0.1;
    CHECK_THROWS_AS(integrate(op, fr, Eigen::VectorXd::Zero(3), bad), ConfigError);
    bad = IntegratorSettings{};
    bad.sample_every = 0;
    CHECK_THROWS_AS(integrate(op, fr, Eigen::VectorXd::Zero(3), bad), ConfigError);
    bad = IntegratorSettings{};
    bad.t_max = 0.001;  // smaller than dt
    CHECK_THROWS_AS(integrate(op, fr, Eigen::VectorXd::Zero(3), bad), ConfigError);

    CHECK_THROWS_AS(integrate(op, fr, Eigen::VectorXd::Zero(5), IntegratorSettings{}),
                    DimensionError);

    Eigen::VectorXd nan0 = Eigen::VectorXd::Constant(3, std::nan(""));
    try {
        integrate(op, fr, nan0, IntegratorSettings{});
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.time == 0.0);
    }

    Frustration wrong;
    wrong.level = Eigen::VectorXd::Zero(7);
    CHECK_THROWS_AS(rhs_consensus(op, wrong, Eigen::VectorXd::Zero(3)), DimensionError);
    Frustration wrong_up;
    wrong_up.up = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_AS(rhs_consensus(op, wrong_up, Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("halving the step multiplies the error by about sixteen") {
    auto c = preset_holed();
    Operators op = build_operators(c, 1);
    Frustration fr = Frustration::uniform(op, 0.3, 0.9);
    Eigen::VectorXd theta0 = random_phases(12, 4);
    auto endpoint = [&](double dt) {
        IntegratorSettings s;
        s.t_max = 10.0;
        s.dt = dt;
        s.sample_every = static_cast<int>(std::lround(10.0 / dt));
        Trajectory t = integrate(op, fr, theta0, s);
        return Eigen::VectorXd(t.phases.row(t.samples() - 1).transpose());
    };
    Eigen::VectorXd fine = endpoint(0.0025);
    double err_coarse = max_err(endpoint(0.02), fine);
    double err_half = max_err(endpoint(0.01), fine);
    CHECK(err_half < err_coarse / 10.0);
}

TEST_CASE("trajectories shift rigidly under harmonic initial offsets") {
    auto c = preset_holed();
    Operators op = build_operators(c, 1);
    HodgeBasis basis = hodge_bases(c, 1);
    Eigen::VectorXd h = basis.harmonic_vectors().row(0);
    Frustration fr = Frustration::uniform(op, 0.1, 0.8);
    IntegratorSettings s;
    s.t_max = 20.0;
    Eigen::VectorXd theta0 = random_phases(12, 6);
    Trajectory a = integrate(op, fr, theta0, s);
    Trajectory b = integrate(op, fr, theta0 + 2.5 * h, s);
    Eigen::MatrixXd expected = a.phases;
    expected.rowwise() += 2.5 * h.transpose();
    CHECK((b.phases - expected).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("rotating frame subtracts a harmonic drift") {
    auto c = preset_holed();
    Operators op = build_operators(c, 1);
    HodgeBasis basis = hodge_bases(c, 1);
    Eigen::VectorXd h = basis.harmonic_vectors().row(0);
    Frustration fr = Frustration::uniform(op, 0.0, 0.5);
    IntegratorSettings s;
    s.t_max = 5.0;
    Trajectory traj = integrate(op, fr, random_phases(12, 8), s);
    Trajectory shifted = traj;
    apply_rotating_frame(shifted, op, h, 0.7);
    for (Eigen::Index i = 0; i < traj.samples(); ++i) {
        Eigen::VectorXd expected =
            traj.phases.row(i).transpose() - 0.7 * traj.times[i] * h;
        CHECK(max_err(shifted.phases.row(i).transpose(), expected) < 1e-12);
    }

    Eigen::VectorXd not_harmonic = Eigen::VectorXd::Unit(12, 3);
    CHECK_THROWS_AS(apply_rotating_frame(traj, op, not_harmonic, 1.0), HarmonicError);
    CHECK_THROWS_AS(apply_rotating_frame(traj, op, Eigen::VectorXd::Zero(5), 1.0),
                    DimensionError);
}

TEST_CASE("gradient-curl coupling vanishes exactly when the up frustration is zero") {
    SplitMix64 rng(39);
    for (const auto& c : {preset_triangle(), preset_triangle(true), preset_holed(),
                          preset_holed(true, true)}) {
        Operators op = build_operators(c, 1);
        HodgeBasis basis = hodge_bases(c, 1);
        Frustration none = Frustration::uniform(op, 0.0, 0.0);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd theta = rng.uniform_vector(op.n_mid, 2.0 * std::numbers::pi);
            CHECK(grad_curl_coupling(op, basis, none, theta).lpNorm<Eigen::Infinity>()
                  < 1e-10);
        }
    }
}

TEST_CASE("up frustration leaks curl forcing into the gradient subspace") {
    // The leak needs mixed face orientations: when every face drives its rim
    // the same way, as on the plain triangle, the up interaction stays a pure
    // curl vector for any offset and no gradient forcing appears.
    SplitMix64 rng(40);
    for (const auto& c : {preset_triangle(true), preset_holed(), preset_holed(true, true)}) {
        Operators op = build_operators(c, 1);
        HodgeBasis basis = hodge_bases(c, 1);
        Frustration some = Frustration::uniform(op, 0.0, 0.8);
        double max_coupled = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd theta = rng.uniform_vector(op.n_mid, 2.0 * std::numbers::pi);
            max_coupled = std::max(
                max_coupled,
                grad_curl_coupling(op, basis, some, theta).lpNorm<Eigen::Infinity>());
        }
        CHECK(max_coupled > 1e-3);
    }

    auto aligned = preset_triangle();
    Operators op = build_operators(aligned, 1);
    HodgeBasis basis = hodge_bases(aligned, 1);
    for (double offset : {0.3, 0.8, 1.4}) {
        Frustration fr = Frustration::uniform(op, 0.0, offset);
        Eigen::VectorXd theta = rng.uniform_vector(op.n_mid, 2.0 * std::numbers::pi);
        CHECK(grad_curl_coupling(op, basis, fr, theta).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("subspace projections of the flow sum back to the full flow") {
    auto c = preset_holed();
    Operators op = build_operators(c, 1);
    HodgeBasis basis = hodge_bases(c, 1);
    Frustration fr = Frustration::uniform(op, 0.4, 0.9);
    SplitMix64 rng(40);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd theta = rng.uniform_vector(12, 2.0 * std::numbers::pi);
        DecomposedRhs d = rhs_decomposed(op, basis, fr, theta);
        Eigen::VectorXd full = rhs_consensus(op, fr, theta);
        CHECK(max_err(d.grad + d.curl + d.harm, full) < 1e-12);
    }
}

TEST_CASE("equal-phase initial conditions converge to the predicted lock") {
    auto c = preset_triangle();
    Operators op = build_operators(c, 1);
    double a1 = 0.5, a2 = 0.4;
    Frustration fr = Frustration::uniform(op, a1, a2);
    IntegratorSettings s;
    s.t_max = 50.0;
    Trajectory traj = integrate(op, fr, Eigen::VectorXd::Zero(3), s);
    // The equal-phase manifold is preserved...
    Eigen::VectorXd last = traj.phases.row(traj.samples() - 1);
    CHECK(std::abs(last[0] - last[1]) < 1e-9);
    CHECK(std::abs(last[1] - last[2]) < 1e-9);
    // ...and lands on the analytic stationary phase.
    double expected = (std::asin(-a1) - a2) / 3.0;
    CHECK(std::abs(last[0] - expected) < 1e-5);
}

TEST_CASE("deterministic initial phases") {
    Eigen::VectorXd a = random_phases(8, 123);
    Eigen::VectorXd b = random_phases(8, 123);
    CHECK(a == b);
    CHECK((a.array() >= 0.0).all());
    CHECK((a.array() < 2.0 * std::numbers::pi).all());
    CHECK(random_phases(8, 124) != a);
}
