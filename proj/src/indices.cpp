// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/indices.hpp"

#include <cmath>
#include <limits>

#include "hill/dynamics.hpp"

namespace hill {

OrbitAnalysis analyze_orbit(const PeriodicOrbit& orbit, const IntegrationConfig& cfg) {
    OrbitAnalysis an;
    const bool planar = orbit.seed.planar;
    LagrangianBasis basis =
        reduced_basis(orbit.initial, orbit.seed.start_sym, planar, cfg.collision_floor);

    double last_eta = 0, last_q3 = 0;
    bool have_last = false;
    long zp = 0, zs = 0;
    double min_r = std::numeric_limits<double>::infinity();
    Mat6 final{};

    flow_with_frame_sampled(
        orbit.initial, TangentFrame{}, orbit.period, cfg,
        [&](double, const PhaseState& st, const Mat6& m) {
            min_r = std::min(min_r, norm3(st.q));
            if (planar) {
                const Vec6 f = vector_field(st, cfg.collision_floor);
                const Vec6 u = apply6(m, basis.vts[0]);
                // normal offset: <dq, nu> with nu = rot90(velocity)
                const double eta = -f[1] * u[0] + f[0] * u[1];
                const double q3c = apply6(m, basis.spatial_v)[2];
                if (have_last) {
                    if (eta != 0 && last_eta != 0 &&
                        std::signbit(eta) != std::signbit(last_eta))
                        ++zp;
                    if (q3c != 0 && last_q3 != 0 &&
                        std::signbit(q3c) != std::signbit(last_q3))
                        ++zs;
                }
                last_eta = eta;
                last_q3 = q3c;
                have_last = true;
            }
            final = m;
        });
    an.monodromy = final;
    an.min_r = min_r;
    if (planar) {
        an.zeros_p = zp;
        an.zeros_s = zs;
        an.counts_valid = true;
    }
    an.stab = stability_from_monodromy(orbit, an.monodromy, cfg.collision_floor);
    return an;
}

double snapped_angle(const BlockReport& block, long zeros) {
    const double zpi = static_cast<double>(zeros) * M_PI;
    if (is_elliptic(block.cls)) {
        const double k = std::round((zpi - block.angle) / (2.0 * M_PI));
        const double theta = 2.0 * M_PI * k + block.angle;
        if (std::abs(theta - zpi) > 0.5 * M_PI + 0.45)
            throw ConvergenceError("rotation number inconsistent with zero count");
        if (theta <= 0)
            throw ConvergenceError("rotation number snapped to a non-positive angle");
        return theta;
    }
    if (is_hyperbolic(block.cls)) {
        const bool positive = block.trace > 0;
        long m = zeros;
        if ((m % 2 == 0) != positive) {
            // parity mismatch: the true angle is an exact multiple of pi, a
            // zero can sit on the endpoint; allow a one-off correction
            throw ConvergenceError("hyperbolic zero count has wrong parity");
        }
        return static_cast<double>(m) * M_PI;
    }
    throw ConvergenceError("degenerate block has no rotation number");
}

IndexReport cz_index([[maybe_unused]] const PeriodicOrbit& orbit, const OrbitAnalysis& an) {
    if (!an.counts_valid)
        throw DomainError("cz_index (unwrapped) requires a planar orbit");
    IndexReport rep;
    rep.theta_final = snapped_angle(an.stab.block_p, an.zeros_p);
    rep.vartheta_final = snapped_angle(an.stab.block_s, an.zeros_s);

    auto block_mu = [](const BlockReport& b, double theta, int& rot) {
        if (is_elliptic(b.cls)) {
            rot = static_cast<int>(std::floor(theta / (2.0 * M_PI)));
            return 2 * rot + 1;
        }
        const int m = static_cast<int>(std::lround(theta / M_PI));
        rot = m / 2;
        return m;
    };
    rep.mu_p = block_mu(an.stab.block_p, rep.theta_final, rep.rot_p);
    rep.mu_s = block_mu(an.stab.block_s, rep.vartheta_final, rep.rot_s);
    rep.mu_total = rep.mu_p + rep.mu_s;
    rep.method = "unwrapped";
    return rep;
}

IndexReport cz_index(const PeriodicOrbit& orbit, const IntegrationConfig& cfg) {
    return cz_index(orbit, analyze_orbit(orbit, cfg));
}

double rotation_number(const PeriodicOrbit& orbit, Block which,
                       const IntegrationConfig& cfg) {
    const auto an = analyze_orbit(orbit, cfg);
    if (which == Block::Planar) return snapped_angle(an.stab.block_p, an.zeros_p);
    return snapped_angle(an.stab.block_s, an.zeros_s);
}

int index_iteration_block(const BlockReport& block, double theta_final, int n) {
    if (is_elliptic(block.cls))
        return 2 * static_cast<int>(std::floor(n * theta_final / (2.0 * M_PI))) + 1;
    if (is_hyperbolic(block.cls))
        return n * static_cast<int>(std::lround(theta_final / M_PI));
    throw DomainError("index iteration undefined for a degenerate block");
}

int index_iteration(const IndexReport& report, const StabilityReport& stab, int n) {
    return index_iteration_block(stab.block_p, report.theta_final, n) +
           index_iteration_block(stab.block_s, report.vartheta_final, n);
}

PeriodTriple lunar_periods(const PeriodicOrbit& orbit, const IndexReport& report,
                           const StabilityReport& stab) {
    PeriodTriple out;
    out.t_synodic = kDaysPerYear * orbit.period / (2.0 * M_PI);
    out.lunarity = 2.0 * M_PI / orbit.period;
    if (is_elliptic(stab.block_p.cls))
        out.t_anomalistic = 2.0 * M_PI * out.t_synodic /
                            ((report.mu_p - 1) * M_PI + stab.block_p.angle);
    if (is_elliptic(stab.block_s.cls))
        out.t_draconitic = 2.0 * M_PI * out.t_synodic /
                           ((report.mu_s - 1) * M_PI + stab.block_s.angle);
    return out;
}

CoverReport good_bad(const IndexReport& report, const StabilityReport& stab, int n) {
    CoverReport out;
    out.cover = n;
    const int mup = index_iteration_block(stab.block_p, report.theta_final, n);
    const int mus = index_iteration_block(stab.block_s, report.vartheta_final, n);
    out.mu_of_cover = mup + mus;
    out.good = ((mup - report.mu_p) % 2 == 0) && ((mus - report.mu_s) % 2 == 0);
    return out;
}

int euler_characteristic(const std::vector<IndexEntry>& entries) {
    int chi = 0;
    for (const auto& e : entries) {
        if (!e.good) continue;
        chi += e.multiplicity * ((e.mu % 2 == 0) ? 1 : -1);
    }
    return chi;
}

}  // namespace hill
