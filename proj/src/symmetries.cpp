// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/symmetries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hill/dynamics.hpp"

namespace hill {

namespace {

const std::array<SymmetryElement, 8> kGroup = {{
    {Sym::Id, "id", {+1, +1, +1, +1, +1, +1}, true},
    {Sym::NegId, "-id", {-1, -1, -1, -1, -1, -1}, true},
    {Sym::Sigma, "sigma", {+1, +1, -1, +1, +1, -1}, true},
    {Sym::NegSigma, "-sigma", {-1, -1, +1, -1, -1, +1}, true},
    {Sym::Rho1, "rho1", {+1, -1, +1, -1, +1, -1}, false},
    {Sym::Rho2, "rho2", {-1, +1, +1, +1, -1, -1}, false},
    {Sym::Rho1Bar, "rho1bar", {+1, -1, -1, -1, +1, +1}, false},
    {Sym::Rho2Bar, "rho2bar", {-1, +1, -1, +1, -1, +1}, false},
}};

}  // namespace

const SymmetryElement& symmetry(Sym s) {
    return kGroup[static_cast<size_t>(s)];
}

const std::array<SymmetryElement, 8>& symmetry_group() { return kGroup; }

Sym compose(Sym a, Sym b) {
    const auto& sa = symmetry(a).signs;
    const auto& sb = symmetry(b).signs;
    std::array<int, 6> prod;
    for (int i = 0; i < 6; ++i) prod[i] = sa[i] * sb[i];
    for (const auto& e : kGroup)
        if (e.signs == prod) return e.id;
    throw StructureError("symmetry composition left the group");
}

PhaseState apply_symmetry(Sym s, const PhaseState& x) {
    return PhaseState::from_flat(apply_symmetry6(s, x.flat()));
}

Vec6 apply_symmetry6(Sym s, const Vec6& v) {
    const auto& sg = symmetry(s).signs;
    Vec6 out;
    for (int i = 0; i < 6; ++i) out[i] = sg[i] * v[i];
    return out;
}

FixedSetSpec fixed_set(Sym s) {
    const auto& e = symmetry(s);
    if (e.symplectic && s != Sym::Sigma && s != Sym::NegSigma)
        throw DomainError("fixed_set: expected an anti-symplectic element or sigma");
    FixedSetSpec spec;
    spec.sym = s;
    for (int i = 0; i < 6; ++i) spec.is_free[i] = e.signs[i] > 0;
    return spec;
}

std::vector<int> FixedSetSpec::free_coords() const {
    std::vector<int> out;
    for (int i = 0; i < 6; ++i)
        if (is_free[i]) out.push_back(i);
    return out;
}

std::vector<int> FixedSetSpec::zero_coords() const {
    std::vector<int> out;
    for (int i = 0; i < 6; ++i)
        if (!is_free[i]) out.push_back(i);
    return out;
}

int section_coord(Sym s) {
    switch (s) {
        case Sym::Rho1:
        case Sym::Rho1Bar:
            return 1;  // q2
        case Sym::Rho2:
        case Sym::Rho2Bar:
            return 0;  // q1
        default:
            throw DomainError("section_coord: not an anti-symplectic element");
    }
}

std::vector<double> perpendicularity_residual(const PhaseState& s, Sym target,
                                              bool planar_orbit) {
    const auto spec = fixed_set(target);
    const int sect = section_coord(target);
    const Vec6 v = s.flat();
    std::vector<double> res;
    for (int i : spec.zero_coords()) {
        if (i == sect) continue;
        if (planar_orbit && (i == 2 || i == 5)) continue;
        res.push_back(v[i]);
    }
    return res;
}

int OrbitSeed::n_params() const {
    if (start_sym == Sym::Rho1Bar || start_sym == Sym::Rho2Bar) return 2;
    return planar ? 1 : 2;
}

namespace {

// Radicand of the energy condition and the seed state pieces per start set.
struct SeedGeometry {
    Vec3 q;
    Vec3 qd;          // with the dependent component zeroed
    int dep;          // index of the dependent velocity component (0..2)
    double radicand;  // square of the dependent velocity
};

SeedGeometry seed_geometry(const OrbitSeed& s) {
    SeedGeometry g{};
    const double G = s.gamma;
    switch (s.start_sym) {
        case Sym::Rho1: {
            const double q1 = s.param1;
            const double q3 = s.planar ? 0.0 : s.param2;
            g.q = {q1, 0, q3};
            g.dep = 1;
            const double r = std::sqrt(q1 * q1 + q3 * q3);
            g.radicand = 2.0 / r + 3.0 * q1 * q1 - q3 * q3 - G;
            break;
        }
        case Sym::Rho2: {
            const double q2 = s.param1;
            const double q3 = s.planar ? 0.0 : s.param2;
            g.q = {0, q2, q3};
            g.dep = 0;
            const double r = std::sqrt(q2 * q2 + q3 * q3);
            g.radicand = 2.0 / r - q3 * q3 - G;
            break;
        }
        case Sym::Rho1Bar: {
            const double q1 = s.param1;
            const double qd2 = s.param2;
            g.q = {q1, 0, 0};
            g.qd[1] = qd2;
            g.dep = 2;
            g.radicand = 2.0 / std::abs(q1) + 3.0 * q1 * q1 - qd2 * qd2 - G;
            break;
        }
        case Sym::Rho2Bar: {
            const double q2 = s.param1;
            const double qd1 = s.param2;
            g.q = {0, q2, 0};
            g.qd[0] = qd1;
            g.dep = 2;
            g.radicand = 2.0 / std::abs(q2) - qd1 * qd1 - G;
            break;
        }
        default:
            throw DomainError("seed start set must be anti-symplectic");
    }
    return g;
}

}  // namespace

PhaseState build_seed_state(const OrbitSeed& seed) {
    SeedGeometry g = seed_geometry(seed);
    if (norm3(g.q) < kCollisionFloor)
        throw DomainError("seed position at collision");
    if (g.radicand < 0)
        throw DomainError("seed outside Hill region (negative radicand)");
    g.qd[g.dep] = seed.velocity_sign * std::sqrt(g.radicand);
    return to_phase(VelocityState{g.q, g.qd});
}

std::vector<Vec6> seed_state_tangents(const OrbitSeed& seed) {
    // Analytic d(state)/d(param); the dependent velocity varies through the
    // energy condition.
    SeedGeometry g = seed_geometry(seed);
    const double vdep = seed.velocity_sign * std::sqrt(g.radicand);
    if (vdep == 0.0) throw DomainError("seed tangents singular: zero dependent velocity");

    auto phase_tangent = [&](const Vec3& dq, const Vec3& dqd) {
        // d(p)/d(param) from p1 = qd1 - q2, p2 = qd2 + q1, p3 = qd3
        return Vec6{dq[0], dq[1], dq[2],
                    dqd[0] - dq[1], dqd[1] + dq[0], dqd[2]};
    };

    std::vector<Vec6> out;
    const int n = seed.n_params();
    for (int ip = 0; ip < n; ++ip) {
        Vec3 dq{}, dqd{};
        double drad = 0;  // d(radicand)/d(param)
        switch (seed.start_sym) {
            case Sym::Rho1: {
                const double q1 = seed.param1;
                const double q3 = seed.planar ? 0.0 : seed.param2;
                const double r = std::sqrt(q1 * q1 + q3 * q3);
                const double r3 = r * r * r;
                if (ip == 0) {
                    dq = {1, 0, 0};
                    drad = -2.0 * q1 / r3 + 6.0 * q1;
                } else {
                    dq = {0, 0, 1};
                    drad = -2.0 * q3 / r3 - 2.0 * q3;
                }
                dqd[1] = drad / (2.0 * vdep);
                break;
            }
            case Sym::Rho2: {
                const double q2 = seed.param1;
                const double q3 = seed.planar ? 0.0 : seed.param2;
                const double r = std::sqrt(q2 * q2 + q3 * q3);
                const double r3 = r * r * r;
                if (ip == 0) {
                    dq = {0, 1, 0};
                    drad = -2.0 * q2 / r3;
                } else {
                    dq = {0, 0, 1};
                    drad = -2.0 * q3 / r3 - 2.0 * q3;
                }
                dqd[0] = drad / (2.0 * vdep);
                break;
            }
            case Sym::Rho1Bar: {
                const double q1 = seed.param1;
                const double qd2 = seed.param2;
                if (ip == 0) {
                    dq = {1, 0, 0};
                    drad = -2.0 / (q1 * q1) * (q1 > 0 ? 1.0 : -1.0) + 6.0 * q1;
                } else {
                    dqd[1] = 1;
                    drad = -2.0 * qd2;
                }
                dqd[2] = drad / (2.0 * vdep);
                break;
            }
            case Sym::Rho2Bar: {
                const double q2 = seed.param1;
                const double qd1 = seed.param2;
                if (ip == 0) {
                    dq = {0, 1, 0};
                    drad = -2.0 / (q2 * q2) * (q2 > 0 ? 1.0 : -1.0);
                } else {
                    dqd[0] = 1;
                    drad = -2.0 * qd1;
                }
                dqd[2] = drad / (2.0 * vdep);
                break;
            }
            default:
                throw DomainError("seed start set must be anti-symplectic");
        }
        out.push_back(phase_tangent(dq, dqd));
    }
    return out;
}

Vec6 seed_gamma_tangent(const OrbitSeed& seed) {
    const SeedGeometry g = seed_geometry(seed);
    const double vdep = seed.velocity_sign * std::sqrt(g.radicand);
    if (vdep == 0.0) throw DomainError("seed gamma tangent singular");
    Vec3 dqd{};
    dqd[g.dep] = -1.0 / (2.0 * vdep);   // d(radicand)/dGamma = -1
    return {0, 0, 0, dqd[0], dqd[1], dqd[2]};
}

namespace {

std::vector<int> residual_indices(const OrbitSeed& seed) {
    const auto spec = fixed_set(seed.target_sym);
    const int sect = section_coord(seed.target_sym);
    std::vector<int> idx;
    for (int i : spec.zero_coords()) {
        if (i == sect) continue;
        if (seed.planar && (i == 2 || i == 5)) continue;
        idx.push_back(i);
    }
    return idx;
}

// Scans the first crossings of the section coordinate and picks the
// perpendicular one: the smallest k whose residual is within a factor 3 of
// the minimum seen.
int resolve_crossing_index(const OrbitSeed& seed, const PhaseState& s0,
                           const IntegrationConfig& cfg, int max_crossings = 16) {
    const int sect = section_coord(seed.target_sym);
    const auto idx = residual_indices(seed);
    IntegrationConfig c = cfg;
    c.max_time = std::min(cfg.max_time, 64.0);
    std::vector<double> res;
    for (int k = 1; k <= max_crossings; ++k) {
        SectionCrossing cr;
        try {
            cr = locate_section_crossing(s0, sect, c, k);
        } catch (const ConvergenceError&) {
            break;
        } catch (const CollisionError&) {
            break;
        }
        const Vec6 v = cr.state.flat();
        double r = 0;
        for (int i : idx) r = std::max(r, std::abs(v[i]));
        if (r < 1e-8) return k;  // unambiguously perpendicular
        res.push_back(r);
    }
    if (res.empty()) throw ConvergenceError("no section crossing found for seed");
    // earliest crossing already close to perpendicular; otherwise the best
    // candidate (rough seeds from branch switching)
    for (size_t k = 0; k < res.size(); ++k)
        if (res[k] < 1e-3) return static_cast<int>(k) + 1;
    const auto it = std::min_element(res.begin(), res.end());
    return static_cast<int>(it - res.begin()) + 1;
}

}  // namespace

ShootResult shoot(const OrbitSeed& seed, const IntegrationConfig& cfg) {
    const PhaseState s0 = build_seed_state(seed);
    OrbitSeed s = seed;
    if (s.crossing_index == 0)
        s.crossing_index = resolve_crossing_index(s, s0, cfg);
    const auto cr =
        locate_section_crossing(s0, section_coord(s.target_sym), cfg, s.crossing_index);
    ShootResult res;
    res.t_seg = cr.t;
    res.state = cr.state;
    res.crossing_index = s.crossing_index;
    res.residual = perpendicularity_residual(cr.state, s.target_sym, s.planar);
    return res;
}

PeriodicOrbit refine_orbit(const OrbitSeed& seed, const IntegrationConfig& cfg_in,
                           const RefineOptions& opt) {
    // strongly hyperbolic orbits amplify the section residual into the
    // closure by |lambda|; pin the crossing as sharply as double precision
    // allows
    IntegrationConfig cfg = cfg_in;
    cfg.tol_event = std::min(cfg.tol_event, 1e-14);
    OrbitSeed s = seed;
    if (s.crossing_index == 0)
        s.crossing_index = resolve_crossing_index(s, build_seed_state(s), cfg);
    const auto ridx = residual_indices(s);
    const int n = s.n_params();
    if (static_cast<int>(ridx.size()) != n)
        throw StructureError("seed parameter count does not match residual size");

    const int sect = section_coord(s.target_sym);
    double rnorm = 0;
    double t_seg = 0;
    int it = 0;
    bool polished = false;
    for (; it <= opt.max_iter; ++it) {
        const PhaseState s0 = build_seed_state(s);
        const auto cr =
            locate_section_crossing_with_frame(s0, TangentFrame{}, sect, cfg,
                                               s.crossing_index);
        t_seg = cr.t;
        const Vec6 v = cr.state.flat();
        rnorm = 0;
        std::vector<double> r(n);
        for (int i = 0; i < n; ++i) {
            r[i] = v[ridx[i]];
            rnorm = std::max(rnorm, std::abs(r[i]));
        }
        if (rnorm < opt.tol_residual) {
            // one extra step pushes the residual toward the evaluation floor;
            // hyperbolic orbits amplify it into the closure
            if (polished || rnorm < 1e-13) break;
            polished = true;
        }
        if (it == opt.max_iter)
            throw ConvergenceError("refine_orbit: no convergence after max_iter, residual = " +
                                   std::to_string(rnorm));

        // Newton step: J_ij = d r_i / d param_j along the section.
        const Vec6 f = vector_field(cr.state, cfg.collision_floor);
        const auto tang = seed_state_tangents(s);
        std::array<double, 4> J{};
        for (int j = 0; j < n; ++j) {
            const Vec6 u = cr.frame.apply(tang[j]);
            const double dt = -u[sect] / f[sect];
            for (int i = 0; i < n; ++i)
                J[i * 2 + j] = u[ridx[i]] + f[ridx[i]] * dt;
        }
        double dp1 = 0, dp2 = 0;
        if (n == 1) {
            if (J[0] == 0) throw ConvergenceError("refine_orbit: singular Jacobian");
            dp1 = -r[0] / J[0];
        } else {
            const double det = J[0] * J[3] - J[1] * J[2];
            if (det == 0) throw ConvergenceError("refine_orbit: singular Jacobian");
            dp1 = (-r[0] * J[3] + r[1] * J[1]) / det;
            dp2 = (-J[0] * r[1] + J[2] * r[0]) / det;
        }
        // step limiting keeps the radicand positive on wild guesses
        const double lim = 0.1 * std::max(1.0, std::abs(s.param1));
        const double sc = std::max({1.0, std::abs(dp1) / lim, std::abs(dp2) / lim});
        s.param1 += dp1 / sc;
        s.param2 += dp2 / sc;
    }

    PeriodicOrbit orbit;
    orbit.seed = s;
    orbit.initial = build_seed_state(s);
    orbit.t_seg = t_seg;
    orbit.period = s.multiplicity() * t_seg;
    orbit.residual = rnorm;
    const PhaseState back = flow(orbit.initial, orbit.period, cfg);
    orbit.closure = norm6(sub6(back.flat(), orbit.initial.flat()));
    if (orbit.closure > opt.tol_close)
        throw ConvergenceError("refine_orbit: closure " + std::to_string(orbit.closure) +
                               " exceeds tol_close");
    return orbit;
}

}  // namespace hill
