// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hill/dynamics.hpp"
#include "hill/symmetries.hpp"
#include "oracles.hpp"

using namespace hill;

namespace {
PhaseState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    PhaseState s;
    do {
        s.q = {u(rng), u(rng), u(rng)};
    } while (norm3(s.q) < 0.2);
    s.p = {u(rng), u(rng), u(rng)};
    return s;
}
}  // namespace

TEST_CASE("hamiltonian at the critical point") {
    const double a = std::pow(3.0, -1.0 / 3.0);
    const PhaseState s{{a, 0, 0}, {0, a, 0}};
    const double want = -0.5 * std::pow(3.0, 4.0 / 3.0);
    CHECK(hamiltonian(s) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("hamiltonian on unit data") {
    // direct arithmetic: 1/2 - 1 + 0 - 1 - 1 = -2.5
    const PhaseState s{{1, 0, 0}, {0, 1, 0}};
    CHECK(hamiltonian(s) == doctest::Approx(-2.5).epsilon(1e-15));
}

TEST_CASE("hamiltonian of the variational-orbit seed") {
    // Gamma = 6.5088  ->  c = -3.2544
    const double q1 = 0.176097;
    const double qd2 = std::sqrt(2 / q1 + 3 * q1 * q1 - 6.5088);
    const PhaseState s = to_phase({{q1, 0, 0}, {0, qd2, 0}});
    CHECK(hamiltonian(s) == doctest::Approx(-3.2544).epsilon(1e-12));
}

TEST_CASE("jacobi_gamma on the variational orbit seed") {
    const VelocityState v{{0.176097, 0, 0}, {0, 2.222972, 0}};
    CHECK(jacobi_gamma(v) == doctest::Approx(6.5088).epsilon(2e-5));
}

TEST_CASE("jacobi_gamma is -2H") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const PhaseState s = random_state(rng);
        const VelocityState v = to_velocity(s);
        CHECK(jacobi_gamma(v) + 2.0 * hamiltonian(s) ==
              doctest::Approx(0.0).epsilon(1e-12));
        // conversion round trip
        const PhaseState back = to_phase(v);
        for (int j = 0; j < 6; ++j)
            CHECK(back.flat()[j] == doctest::Approx(s.flat()[j]).epsilon(1e-15));
    }
}

TEST_CASE("family-f limit seed at Gamma = -100") {
    const VelocityState v{{-10, 0, 0}, {0, 20.0, 0}};
    CHECK(jacobi_gamma(v) == doctest::Approx(-99.8).epsilon(1e-10));
}

TEST_CASE("effective potential") {
    CHECK(effective_potential({1, 0, 0}) == doctest::Approx(-2.5));
    CHECK(effective_potential({0, 0, 1}) == doctest::Approx(-0.5));
    const double a = std::pow(3.0, -1.0 / 3.0);
    const double want = -std::pow(3.0, 1.0 / 3.0) - 1.5 * std::pow(3.0, -2.0 / 3.0);
    CHECK(effective_potential({a, 0, 0}) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("collision floor") {
    CHECK_THROWS_AS(hamiltonian(PhaseState{{1e-9, 0, 0}, {0, 0, 0}}), CollisionError);
    CHECK_THROWS_AS(effective_potential({0, 0, 0}), CollisionError);
    CHECK_THROWS_AS(jacobi_gamma(VelocityState{{1e-9, 0, 0}, {0, 0, 0}}), CollisionError);
}

TEST_CASE("vector field vanishes at the critical points") {
    const auto pts = critical_points();
    REQUIRE(pts.size() == 2);
    for (const auto& s : pts) {
        const Vec6 f = vector_field(s);
        for (double c : f) CHECK(std::abs(c) < 1e-12);
        CHECK(hamiltonian(s) ==
              doctest::Approx(-0.5 * std::pow(3.0, 4.0 / 3.0)).epsilon(1e-14));
    }
    CHECK(gamma_crit() == doctest::Approx(-2.0 * hamiltonian(pts[0])).epsilon(1e-14));
}

TEST_CASE("vector field is planar-invariant") {
    const PhaseState s{{0.3, -0.4, 0}, {0.2, 0.1, 0}};
    const Vec6 f = vector_field(s);
    CHECK(f[2] == 0.0);
    CHECK(f[5] == 0.0);
}

TEST_CASE("vector field matches the symplectic gradient of H") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 25; ++i) {
        const PhaseState s = random_state(rng);
        auto H = [](const Vec6& x) { return hamiltonian(PhaseState::from_flat(x)); };
        const Vec6 g = oracle::gradient_fd(H, s.flat());
        // X_H = (dH/dp, -dH/dq)
        const Vec6 f = vector_field(s);
        for (int j = 0; j < 3; ++j) {
            CHECK(f[j] == doctest::Approx(g[j + 3]).epsilon(1e-6));
            CHECK(f[j + 3] == doctest::Approx(-g[j]).epsilon(1e-6));
        }
    }
}

TEST_CASE("dH . X_H vanishes") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 25; ++i) {
        const PhaseState s = random_state(rng);
        auto H = [](const Vec6& x) { return hamiltonian(PhaseState::from_flat(x)); };
        const Vec6 g = oracle::gradient_fd(H, s.flat());
        const Vec6 f = vector_field(s);
        double dot = 0, scale = 0;
        for (int j = 0; j < 6; ++j) dot += g[j] * f[j];
        scale = norm6(g) * norm6(f);
        CHECK(std::abs(dot) < 1e-10 * (1.0 + scale));
    }
}

TEST_CASE("variational rhs against finite differences, with order check") {
    std::mt19937_64 rng(17);
    auto f = [](const Vec6& x) { return vector_field(PhaseState::from_flat(x)); };
    for (int i = 0; i < 10; ++i) {
        const PhaseState s = random_state(rng);
        std::uniform_real_distribution<double> u(-1, 1);
        Vec6 xi;
        for (auto& c : xi) c = u(rng);

        const Vec6 exact = variational_rhs(s, xi);
        const Vec6 fd = oracle::directional_fd(f, s.flat(), xi, 1e-6);
        for (int j = 0; j < 6; ++j)
            CHECK(exact[j] == doctest::Approx(fd[j]).epsilon(1e-5).scale(1.0));

        // fd error shrinks ~ h^2
        double e1 = 0, e2 = 0;
        const Vec6 fd1 = oracle::directional_fd(f, s.flat(), xi, 1e-3);
        const Vec6 fd2 = oracle::directional_fd(f, s.flat(), xi, 5e-4);
        for (int j = 0; j < 6; ++j) {
            e1 = std::max(e1, std::abs(fd1[j] - exact[j]));
            e2 = std::max(e2, std::abs(fd2[j] - exact[j]));
        }
        if (e1 > 1e-11) {
            const double slope = std::log(e1 / e2) / std::log(2.0);
            CHECK(slope > 1.5);
        }
    }
}

TEST_CASE("variational rhs respects the planar/spatial decoupling") {
    const PhaseState s{{0.3, -0.2, 0}, {0.1, 0.4, 0}};
    const Vec6 spatial_only{0, 0, 0.7, 0, 0, -0.3};
    const Vec6 out_s = variational_rhs(s, spatial_only);
    CHECK(out_s[0] == 0.0);
    CHECK(out_s[1] == 0.0);
    CHECK(out_s[3] == 0.0);
    CHECK(out_s[4] == 0.0);

    const Vec6 planar_only{0.5, -0.1, 0, 0.2, 0.3, 0};
    const Vec6 out_p = variational_rhs(s, planar_only);
    CHECK(out_p[2] == 0.0);
    CHECK(out_p[5] == 0.0);
}

TEST_CASE("variational rhs of X_H equals the derivative of X_H along the flow") {
    const PhaseState s{{0.35, 0.1, 0.05}, {-0.2, 0.9, 0.02}};
    const Vec6 xi = vector_field(s);
    const Vec6 lhs = variational_rhs(s, xi);
    auto f = [](const Vec6& x) { return vector_field(PhaseState::from_flat(x)); };
    const Vec6 rhs_fd = oracle::directional_fd(f, s.flat(), xi, 1e-6);
    for (int j = 0; j < 6; ++j)
        CHECK(lhs[j] == doctest::Approx(rhs_fd[j]).epsilon(1e-5).scale(1.0));
}

TEST_CASE("sigma equivariance and rho anti-equivariance of X_H") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_state(rng);
        for (Sym sym : {Sym::Sigma, Sym::NegSigma, Sym::NegId}) {
            const Vec6 lhs = vector_field(apply_symmetry(sym, s));
            const Vec6 rhs = apply_symmetry6(sym, vector_field(s));
            for (int j = 0; j < 6; ++j) CHECK(lhs[j] == rhs[j]);
        }
        for (Sym sym : {Sym::Rho1, Sym::Rho2, Sym::Rho1Bar, Sym::Rho2Bar}) {
            const Vec6 lhs = vector_field(apply_symmetry(sym, s));
            const Vec6 rhs = apply_symmetry6(sym, vector_field(s));
            for (int j = 0; j < 6; ++j) CHECK(lhs[j] == -rhs[j]);
        }
    }
}

TEST_CASE("grad_gamma matches finite differences of the Jacobi integral") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_state(rng);
        auto G = [](const Vec6& x) {
            return jacobi_gamma(to_velocity(PhaseState::from_flat(x)));
        };
        const Vec6 fd = oracle::gradient_fd(G, s.flat());
        const Vec6 g = grad_gamma(s);
        for (int j = 0; j < 6; ++j)
            CHECK(g[j] == doctest::Approx(fd[j]).epsilon(1e-6).scale(1.0));
    }
}
