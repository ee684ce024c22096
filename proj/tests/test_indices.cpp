// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hill/dynamics.hpp"
#include "hill/indices.hpp"

using namespace hill;

namespace {

PeriodicOrbit planar_orbit(const char* family, Sym start, Sym target, double gamma,
                           double q1, double step = 1e-5) {
    OrbitSeed s;
    s.family = family;
    s.start_sym = start;
    s.target_sym = target;
    s.gamma = gamma;
    s.planar = true;
    s.param1 = q1;
    IntegrationConfig cfg;
    cfg.step = step;
    return refine_orbit(s, cfg);
}

}  // namespace

TEST_CASE("variational orbit: angles, rotations and indices") {
    const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 6.5088, 0.176097);
    const auto an = analyze_orbit(orbit);
    const auto rep = cz_index(orbit, an);

    CHECK(rep.theta_final == doctest::Approx(2 * M_PI + 0.450236).epsilon(1.5e-3));
    CHECK(rep.vartheta_final == doctest::Approx(2 * M_PI + 0.534603).epsilon(1.5e-3));
    CHECK(rep.rot_p == 1);
    CHECK(rep.rot_s == 1);
    CHECK(rep.mu_p == 3);
    CHECK(rep.mu_s == 3);
    CHECK(rep.mu_total == 6);
    CHECK(rep.mu_p == 2 * rep.rot_p + 1);
    CHECK(rep.mu_s == 2 * rep.rot_s + 1);

    // consistency: snapped angle mod 2pi equals the classify angle
    const double mod_p = std::fmod(rep.theta_final, 2 * M_PI);
    CHECK(mod_p == doctest::Approx(an.stab.block_p.angle).epsilon(1e-10));

    // lunar periods; T_s carries the period, T_a/T_d the angles (the paper's
    // displayed values carry its ~1e-4 relative period error, see ledger)
    const auto periods = lunar_periods(orbit, rep, an.stab);
    CHECK(periods.t_synodic == doctest::Approx(29.530811).epsilon(2e-6));
    CHECK(periods.t_synodic == doctest::Approx(29.528396).epsilon(1e-4));
    REQUIRE(periods.t_anomalistic.has_value());
    REQUIRE(periods.t_draconitic.has_value());
    CHECK(*periods.t_anomalistic == doctest::Approx(27.553954).epsilon(4e-4));
    CHECK(*periods.t_draconitic == doctest::Approx(27.212712).epsilon(4e-4));
    CHECK(periods.lunarity == doctest::Approx(12.369448).epsilon(1e-4));
}

TEST_CASE("family f at Gamma = 6: no complete rotation") {
    const auto orbit = planar_orbit("f", Sym::Rho1, Sym::Rho2, 6.0, -0.147790);
    const auto an = analyze_orbit(orbit);
    const auto rep = cz_index(orbit, an);
    CHECK(rep.theta_final == doctest::Approx(5.93).epsilon(3.5e-3));
    CHECK(rep.rot_p == 0);
    CHECK(rep.mu_p == 1);
    CHECK(rep.mu_s == 1);
    CHECK(rep.mu_total == 2);
    // T_a and T_d are longer than T_s for the retrograde family
    const auto periods = lunar_periods(orbit, rep, an.stab);
    CHECK(*periods.t_anomalistic > periods.t_synodic);
    CHECK(*periods.t_draconitic > periods.t_synodic);
}

TEST_CASE("family g at Gamma = 8: shorter anomalistic and draconitic months") {
    const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 8.0, 0.13772);
    const auto an = analyze_orbit(orbit);
    const auto rep = cz_index(orbit, an);
    CHECK(rep.mu_p == 3);
    CHECK(rep.mu_s == 3);
    const auto periods = lunar_periods(orbit, rep, an.stab);
    CHECK(periods.t_synodic == doctest::Approx(19.783929).epsilon(1e-5));
    CHECK(*periods.t_anomalistic < periods.t_synodic);
    CHECK(*periods.t_draconitic < periods.t_synodic);
    // table row values at displayed precision
    CHECK(*periods.t_anomalistic == doctest::Approx(18.82).epsilon(1e-3));
    CHECK(*periods.t_draconitic == doctest::Approx(18.73).epsilon(1e-3));
}

TEST_CASE("family g at Gamma = 1: hyperbolic indices (2,4,6)") {
    const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 1.0, 0.130319, 2e-5);
    const auto an = analyze_orbit(orbit);
    CHECK(an.stab.block_p.cls == BlockClass::PosHyperbolicI);
    CHECK(an.stab.block_s.cls == BlockClass::PosHyperbolicII);
    const auto rep = cz_index(orbit, an);
    CHECK(rep.mu_p == 2);
    CHECK(rep.mu_s == 4);
    CHECK(rep.mu_total == 6);
    // hyperbolic blocks have no anomalistic/draconitic month
    const auto periods = lunar_periods(orbit, rep, an.stab);
    CHECK_FALSE(periods.t_anomalistic.has_value());
    CHECK_FALSE(periods.t_draconitic.has_value());
}

TEST_CASE("family f at Gamma = -100: indices (1,1,2)") {
    const auto orbit = planar_orbit("f", Sym::Rho1, Sym::Rho2, -100.0, -10.0, 2e-5);
    const auto rep = cz_index(orbit);
    CHECK(rep.mu_p == 1);
    CHECK(rep.mu_s == 1);
    CHECK(rep.mu_total == 2);
}

TEST_CASE("family f limit at Gamma = -1000") {
    const auto orbit = planar_orbit("f", Sym::Rho1, Sym::Rho2, -1000.0, -31.622776, 2e-5);
    const auto an = analyze_orbit(orbit);
    const auto rep = cz_index(orbit, an);
    const auto periods = lunar_periods(orbit, rep, an.stab);
    CHECK(periods.t_synodic == doctest::Approx(365.2).epsilon(3e-4));
    CHECK(an.stab.block_p.trace > 1.98);
    CHECK(an.stab.block_p.trace < 2.0);
    CHECK(an.stab.block_s.trace > 1.98);
    CHECK(an.stab.block_s.trace < 2.0);
    CHECK(std::abs(an.stab.block_p.angle - 2 * M_PI) < 0.03);
    CHECK(std::abs(an.stab.block_s.angle - 2 * M_PI) < 0.03);
}

TEST_CASE("snapped angle behaviour") {
    BlockReport b;
    b.cls = BlockClass::Elliptic;
    b.angle = 0.01;
    CHECK(snapped_angle(b, 0) == doctest::Approx(0.01));       // t -> 0 limit
    b.angle = 0.45;
    CHECK(snapped_angle(b, 2) == doctest::Approx(2 * M_PI + 0.45));
    b.angle = 5.93;
    CHECK(snapped_angle(b, 2) == doctest::Approx(5.93));
    CHECK_THROWS_AS(snapped_angle(b, 5), ConvergenceError);

    BlockReport h;
    h.cls = BlockClass::PosHyperbolicI;
    h.trace = 5.0;
    CHECK(snapped_angle(h, 2) == doctest::Approx(2 * M_PI));
    CHECK_THROWS_AS(snapped_angle(h, 3), ConvergenceError);
    h.cls = BlockClass::NegHyperbolicI;
    h.trace = -5.0;
    CHECK(snapped_angle(h, 3) == doctest::Approx(3 * M_PI));
}

TEST_CASE("rotation number is grid-refinement stable") {
    const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 6.5088, 0.176097);
    IntegrationConfig c1;
    c1.step = 2e-5;
    IntegrationConfig c2;
    c2.step = 1e-5;
    const double t1 = rotation_number(orbit, Block::Planar, c1);
    const double t2 = rotation_number(orbit, Block::Planar, c2);
    CHECK(std::abs(t1 - t2) < 1e-4);
    const double s1 = rotation_number(orbit, Block::Spatial, c1);
    const double s2 = rotation_number(orbit, Block::Spatial, c2);
    CHECK(std::abs(s1 - s2) < 1e-4);
}

TEST_CASE("index iteration") {
    SUBCASE("third cover of g just above the 3.876616 event") {
        const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 3.9, 0.3265);
        const auto an = analyze_orbit(orbit);
        const auto rep = cz_index(orbit, an);
        CHECK(rep.mu_p == 2);
        CHECK(rep.mu_s == 3);
        CHECK(index_iteration(rep, an.stab, 1) == rep.mu_total);
        CHECK(index_iteration(rep, an.stab, 3) == 13);
    }
    SUBCASE("third cover of g just below the event") {
        const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 3.85, 0.3285);
        const auto an = analyze_orbit(orbit);
        const auto rep = cz_index(orbit, an);
        CHECK(index_iteration(rep, an.stab, 3) == 15);
    }
    SUBCASE("fourth cover of g' before its jump") {
        OrbitSeed s;
        s.family = "gp";
        s.start_sym = Sym::Rho1;
        s.target_sym = Sym::Rho1;
        s.gamma = 4.45;
        s.planar = true;
        s.param1 = 0.383360;
        const auto orbit = refine_orbit(s, IntegrationConfig{});
        const auto an = analyze_orbit(orbit);
        const auto rep = cz_index(orbit, an);
        CHECK(rep.mu_total == 6);
        CHECK(index_iteration(rep, an.stab, 4) == 18);
    }
}

TEST_CASE("good and bad covers") {
    SUBCASE("simple orbits are always good") {
        const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 6.5088, 0.176097);
        const auto an = analyze_orbit(orbit);
        const auto rep = cz_index(orbit, an);
        CHECK(good_bad(rep, an.stab, 1).good);
    }
    SUBCASE("double cover inside the negative-hyperbolic window of g' is bad") {
        OrbitSeed s;
        s.family = "gp";
        s.start_sym = Sym::Rho1;
        s.target_sym = Sym::Rho1;
        s.gamma = 4.284;
        s.planar = true;
        s.param1 = 0.5724;
        const auto orbit = refine_orbit(s, IntegrationConfig{});
        const auto an = analyze_orbit(orbit);
        CHECK((an.stab.block_s.cls == BlockClass::NegHyperbolicI ||
               an.stab.block_s.cls == BlockClass::NegHyperbolicII));
        const auto rep = cz_index(orbit, an);
        const auto cover = good_bad(rep, an.stab, 2);
        CHECK_FALSE(cover.good);
    }
    SUBCASE("double cover of a positive-hyperbolic block is good") {
        const auto orbit = planar_orbit("g", Sym::Rho1, Sym::Rho2, 3.0, 0.306900);
        const auto an = analyze_orbit(orbit);
        const auto rep = cz_index(orbit, an);
        CHECK(an.stab.block_p.cls == BlockClass::PosHyperbolicI);
        CHECK(good_bad(rep, an.stab, 2).good);
    }
}

TEST_CASE("euler characteristic arithmetic") {
    // g' branch point
    CHECK(euler_characteristic({{3, 1, true}}) == -1);
    CHECK(euler_characteristic({{2, 1, true}, {3, 2, true}}) == -1);
    // empty
    CHECK(euler_characteristic({}) == 0);
    // f^5 imbalance
    CHECK(euler_characteristic({{15, 2, true}, {16, 1, true}}) == -1);
    CHECK(euler_characteristic({{14, 1, true}}) == +1);
    // bad entries contribute nothing
    CHECK(euler_characteristic({{14, 1, true}, {11, 7, false}}) == +1);
}
