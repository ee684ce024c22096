// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hill/dynamics.hpp"

namespace hill {

namespace {

FamilyPoint make_point(const PeriodicOrbit& orbit, const IntegrationConfig& cfg) {
    FamilyPoint pt;
    pt.gamma = orbit.seed.gamma;
    pt.orbit = orbit;
    const auto an = analyze_orbit(orbit, cfg);
    pt.stab = an.stab;
    pt.min_r = an.min_r;
    pt.zeros_p = an.zeros_p;
    pt.zeros_s = an.zeros_s;
    if (orbit.seed.planar) {
        try {
            pt.index = cz_index(orbit, an);
            pt.has_index = true;
            pt.periods = lunar_periods(orbit, pt.index, pt.stab);
        } catch (const ConvergenceError&) {
            // at a degeneracy the index is undefined; the event machinery
            // brackets it
            pt.has_index = false;
            pt.periods.t_synodic = kDaysPerYear * orbit.period / (2 * M_PI);
            pt.periods.lunarity = 2 * M_PI / orbit.period;
        }
    } else {
        pt.periods.t_synodic = kDaysPerYear * orbit.period / (2 * M_PI);
        pt.periods.lunarity = 2 * M_PI / orbit.period;
    }
    return pt;
}

std::array<double, 2> params_of(const OrbitSeed& s) { return {s.param1, s.param2}; }

void set_params(OrbitSeed& s, const std::array<double, 2>& p) {
    s.param1 = p[0];
    s.param2 = p[1];
}

bool solve_small(int n, double* a, double* b) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
        b[r] = s / a[r * n + r];
    }
    return true;
}

std::vector<int> residual_indices_of(const OrbitSeed& seed) {
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

// Newton corrector in (params, Gamma) on the plane through `pred` with
// normal `tangent` (components ordered params..., gamma).
OrbitSeed arclength_correct(OrbitSeed seed, const std::array<double, 3>& pred,
                            const std::array<double, 3>& tangent,
                            const IntegrationConfig& cfg_in) {
    IntegrationConfig cfg = cfg_in;
    cfg.tol_event = std::min(cfg.tol_event, 1e-14);
    const int np = seed.n_params();
    const int dim = np + 1;
    const auto ridx = residual_indices_of(seed);
    const int sect = section_coord(seed.target_sym);

    for (int it = 0; it < 30; ++it) {
        const PhaseState s0 = build_seed_state(seed);
        const auto cr = locate_section_crossing_with_frame(s0, TangentFrame{}, sect,
                                                           cfg, seed.crossing_index);
        const Vec6 v = cr.state.flat();
        double rnorm = 0;
        double rhs[3] = {0, 0, 0};
        for (int i = 0; i < np; ++i) {
            rhs[i] = -v[ridx[i]];
            rnorm = std::max(rnorm, std::abs(v[ridx[i]]));
        }
        const std::array<double, 2> p = params_of(seed);
        std::array<double, 3> u{p[0], 0, 0};
        if (np == 2) {
            u[1] = p[1];
            u[2] = seed.gamma;
        } else {
            u[1] = seed.gamma;
        }
        double plane = 0;
        for (int i = 0; i < dim; ++i) plane += tangent[i] * (u[i] - pred[i]);
        rhs[np] = -plane;
        if (rnorm < 1e-11 && std::abs(plane) < 1e-11) return seed;

        const Vec6 f = vector_field(cr.state, cfg.collision_floor);
        auto tang = seed_state_tangents(seed);
        tang.push_back(seed_gamma_tangent(seed));
        double J[9] = {0};
        for (int j = 0; j < dim; ++j) {
            const Vec6 w = cr.frame.apply(tang[j]);
            const double dt = -w[sect] / f[sect];
            for (int i = 0; i < np; ++i) J[i * dim + j] = w[ridx[i]] + f[ridx[i]] * dt;
            J[np * dim + j] = tangent[j];
        }
        if (!solve_small(dim, J, rhs))
            throw ConvergenceError("arclength corrector: singular system");
        std::array<double, 2> pn = p;
        pn[0] += rhs[0];
        if (np == 2) pn[1] += rhs[1];
        set_params(seed, pn);
        seed.gamma += rhs[np];
    }
    throw ConvergenceError("arclength corrector: no convergence");
}

}  // namespace

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::IndexJump: return "index-jump";
        case EventKind::RootOfUnity: return "root-of-unity";
        case EventKind::BirthDeath: return "birth-death";
        case EventKind::CollisionApproach: return "collision-approach";
        case EventKind::FamilyEndpoint: return "family-endpoint";
    }
    return "?";
}

FamilyTrace continue_family(const OrbitSeed& seed0, double gamma_end,
                            const ContinuationOptions& opt,
                            const IntegrationConfig& cfg) {
    FamilyTrace trace;
    trace.name = seed0.family;

    PeriodicOrbit orbit = refine_orbit(seed0, cfg);
    trace.points.push_back(make_point(orbit, cfg));
    trace.direction = (gamma_end >= seed0.gamma) ? +1 : -1;

    const double glo = std::min(seed0.gamma, gamma_end) - 1e-12;
    const double ghi = std::max(seed0.gamma, gamma_end) + 1e-12;

    double step = opt.step0;
    bool last_fail_collision = false;

    auto push_event = [&](EventKind kind, double g, const std::string& detail) {
        FamilyEvent ev;
        ev.kind = kind;
        ev.gamma_star = g;
        ev.detail = detail;
        trace.events.push_back(ev);
    };

    while (static_cast<int>(trace.points.size()) < opt.max_points) {
        const FamilyPoint& last = trace.points.back();
        if (last.min_r < opt.collision_approach * cfg.collision_floor) {
            push_event(EventKind::CollisionApproach, last.gamma,
                       "orbit approaches the origin");
            break;
        }
        if (std::abs(last.gamma - gamma_end) < 1e-10) break;

        const int np = last.orbit.seed.n_params();
        std::array<double, 2> dp{0, 0};
        double dg = trace.direction * step;
        const FamilyPoint* prev =
            trace.points.size() >= 2 ? &trace.points[trace.points.size() - 2] : nullptr;
        double slope = 0;
        if (prev != nullptr) {
            const auto pl = params_of(last.orbit.seed);
            const auto pp = params_of(prev->orbit.seed);
            const double dgam = last.gamma - prev->gamma;
            for (int i = 0; i < np; ++i) {
                dp[i] = pl[i] - pp[i];
                if (std::abs(dgam) > 1e-14)
                    slope = std::max(slope, std::abs(dp[i] / dgam));
            }
            dg = dgam;
        }

        const bool use_arclength = prev != nullptr && slope > opt.arclength_switch;
        bool accepted = false;
        // orbits grow loops along families; retry with a fresh crossing scan
        // when the inherited crossing index stops converging
        auto attempt = [&](OrbitSeed next) {
            try {
                return refine_orbit(next, cfg);
            } catch (const ConvergenceError&) {
                next.crossing_index = 0;
                return refine_orbit(next, cfg);
            }
        };
        try {
            if (!use_arclength) {
                const double dir = prev != nullptr ? (dg >= 0 ? 1.0 : -1.0)
                                                   : static_cast<double>(trace.direction);
                double target = std::clamp(last.gamma + dir * step, glo, ghi);
                if (std::abs(target - gamma_end) < 0.3 * step) target = gamma_end;
                OrbitSeed next = last.orbit.seed;
                if (prev != nullptr && std::abs(dg) > 1e-14) {
                    const double f = (target - last.gamma) / dg;
                    std::array<double, 2> pn = params_of(last.orbit.seed);
                    for (int i = 0; i < np; ++i) pn[i] += f * dp[i];
                    set_params(next, pn);
                }
                next.gamma = target;
                orbit = attempt(next);
            } else {
                const auto pl = params_of(last.orbit.seed);
                std::array<double, 3> d{dp[0], 0, 0};
                if (np == 2) {
                    d[1] = dp[1];
                    d[2] = dg;
                } else {
                    d[1] = dg;
                }
                double ds = 0;
                for (int i = 0; i < np + 1; ++i) ds += d[i] * d[i];
                ds = std::sqrt(ds);
                std::array<double, 3> tau{};
                for (int i = 0; i < np + 1; ++i) tau[i] = d[i] / ds;
                const double hstep = std::min(1.5 * ds, step);
                std::array<double, 3> predv{};
                std::array<double, 3> u{pl[0], 0, 0};
                if (np == 2) {
                    u[1] = pl[1];
                    u[2] = last.gamma;
                } else {
                    u[1] = last.gamma;
                }
                for (int i = 0; i < np + 1; ++i) predv[i] = u[i] + tau[i] * hstep;
                OrbitSeed next = last.orbit.seed;
                next.param1 = predv[0];
                if (np == 2) next.param2 = predv[1];
                next.gamma = predv[np];
                next = arclength_correct(next, predv, tau, cfg);
                if (next.gamma < glo || next.gamma > ghi) {
                    push_event(EventKind::FamilyEndpoint, last.gamma,
                               "left the Gamma range");
                    break;
                }
                orbit = attempt(next);
            }
            accepted = true;
            last_fail_collision = false;
        } catch (const CollisionError&) {
            last_fail_collision = true;
        } catch (const ConvergenceError&) {
        } catch (const DomainError&) {
        }

        if (accepted) {
            trace.points.push_back(make_point(orbit, cfg));
            step = std::min(opt.step0, step * 1.6);
        } else {
            step *= 0.5;
            if (step < opt.step_min) {
                push_event(last_fail_collision ? EventKind::CollisionApproach
                                               : EventKind::FamilyEndpoint,
                           trace.points.back().gamma,
                           "corrector stagnation at step_min");
                break;
            }
        }
    }

    return trace;
}

namespace {

// Block view used by event detection: planar orbits expose the two genuine
// blocks, spatial ones the two eigen branches of A ordered by |alpha|.
struct VBlock {
    bool valid = false;
    double trace = 0;
    bool elliptic = false;
    double angle = 0;
};

VBlock vblock(const FamilyPoint& pt, int which) {
    VBlock b;
    if (pt.orbit.seed.planar) {
        const BlockReport& br = which == 0 ? pt.stab.block_p : pt.stab.block_s;
        b.valid = true;
        b.trace = br.trace;
        b.elliptic = is_elliptic(br.cls);
        b.angle = br.angle;
    } else {
        if (pt.stab.eigens.size() != 2) return b;
        std::array<SpatialEigen, 2> es{pt.stab.eigens[0], pt.stab.eigens[1]};
        if (std::abs(es[0].alpha) > std::abs(es[1].alpha)) std::swap(es[0], es[1]);
        const auto& e = es[which];
        if (!e.real) return b;  // off-circle quadruple: no block data
        b.valid = true;
        b.trace = 2.0 * e.alpha.real();
        b.elliptic = std::abs(e.alpha.real()) < 1.0;
        b.angle = e.angle;
    }
    return b;
}

FamilyPoint refine_at(const FamilyPoint& a, const FamilyPoint& b, double gamma,
                      const IntegrationConfig& cfg) {
    OrbitSeed seed = a.orbit.seed;
    const double span = b.gamma - a.gamma;
    if (std::abs(span) > 1e-14) {
        const double f = (gamma - a.gamma) / span;
        seed.param1 += f * (b.orbit.seed.param1 - a.orbit.seed.param1);
        seed.param2 += f * (b.orbit.seed.param2 - a.orbit.seed.param2);
    }
    seed.gamma = gamma;
    return make_point(refine_orbit(seed, cfg), cfg);
}

int cover_index_at(const FamilyPoint& pt, int cover) {
    if (!pt.has_index) return INT_MIN;
    return index_iteration(pt.index, pt.stab, cover);
}

}  // namespace

std::vector<FamilyEvent> detect_events(FamilyTrace& trace, int covers_up_to,
                                       const IntegrationConfig& cfg, double gamma_tol) {
    std::vector<FamilyEvent> found;
    if (trace.points.size() < 2) return found;

    struct Target {
        int k, j;
        double angle;
    };
    std::vector<Target> targets;
    for (int k = 3; k <= covers_up_to; ++k)
        for (int j = 1; j < k; ++j)
            if (std::gcd(j, k) == 1) targets.push_back({k, j, 2.0 * M_PI * j / k});

    auto bisect = [&](size_t i, int which, int kind_cover, double target_angle,
                      bool on_trace, double offset) {
        FamilyPoint lo = trace.points[i];
        FamilyPoint hi = trace.points[i + 1];
        auto val = [&](const FamilyPoint& p) -> double {
            const VBlock b = vblock(p, which);
            if (!b.valid) throw ConvergenceError("block undefined during bisection");
            if (!on_trace && !b.elliptic)
                throw ConvergenceError("block left the elliptic chart");
            return on_trace ? (b.trace - offset) : (b.angle - target_angle);
        };
        try {
            double flo = val(lo), fhi = val(hi);
            if (std::signbit(flo) == std::signbit(fhi)) return;
            while (std::abs(hi.gamma - lo.gamma) > gamma_tol) {
                const double gm = 0.5 * (lo.gamma + hi.gamma);
                FamilyPoint mid = refine_at(lo, hi, gm, cfg);
                const double fm = val(mid);
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
        } catch (const ConvergenceError&) {
            return;
        } catch (const CollisionError&) {
            return;
        }
        FamilyEvent ev;
        ev.kind = kind_cover == 1 ? EventKind::IndexJump : EventKind::RootOfUnity;
        ev.cover = kind_cover;
        ev.spatial_block = (which == 1);
        ev.gamma_star = 0.5 * (lo.gamma + hi.gamma);
        ev.target_angle = target_angle;
        const FamilyPoint& high = lo.gamma > hi.gamma ? lo : hi;
        const FamilyPoint& low = lo.gamma > hi.gamma ? hi : lo;
        ev.mu_high = cover_index_at(high, kind_cover);
        ev.mu_low = cover_index_at(low, kind_cover);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s block, cover %d, index %d -> %d",
                      which == 0 ? "planar" : "spatial", kind_cover, ev.mu_high,
                      ev.mu_low);
        ev.detail = buf;
        found.push_back(ev);
    };

    for (size_t i = 0; i + 1 < trace.points.size(); ++i) {
        for (int which = 0; which < 2; ++which) {
            const VBlock a = vblock(trace.points[i], which);
            const VBlock b = vblock(trace.points[i + 1], which);
            if (!a.valid || !b.valid) continue;
            bisect(i, which, 1, 0.0, true, 2.0);
            if (covers_up_to >= 2) bisect(i, which, 2, M_PI, true, -2.0);
            if (a.elliptic && b.elliptic) {
                for (const auto& t : targets)
                    if ((a.angle - t.angle) * (b.angle - t.angle) < 0)
                        bisect(i, which, t.k, t.angle, false, 0.0);
            }
        }
    }

    std::sort(found.begin(), found.end(), [](const FamilyEvent& a, const FamilyEvent& b) {
        if (std::abs(a.gamma_star - b.gamma_star) > 1e-4)
            return a.gamma_star > b.gamma_star;
        return !a.spatial_block && b.spatial_block;  // planar first on ties
    });
    trace.events.insert(trace.events.end(), found.begin(), found.end());
    return found;
}

std::vector<FamilyEvent> detect_birth_death(FamilyTrace& trace) {
    std::vector<FamilyEvent> found;
    const auto& pts = trace.points;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const double d0 = pts[i].gamma - pts[i - 1].gamma;
        const double d1 = pts[i + 1].gamma - pts[i].gamma;
        if (d0 == 0 || d1 == 0 || std::signbit(d0) == std::signbit(d1)) continue;
        const double g0 = pts[i - 1].gamma, g1 = pts[i].gamma, g2 = pts[i + 1].gamma;
        const double denom = g0 - 2 * g1 + g2;
        double gstar = g1;
        if (denom != 0) gstar = g1 - 0.125 * (g2 - g0) * (g2 - g0) / denom;

        FamilyEvent ev;
        ev.kind = EventKind::BirthDeath;
        ev.gamma_star = gstar;
        const int mu_a =
            pts[i - 1].has_index ? pts[i - 1].index.mu_total : pts[i - 1].mu_anchored;
        const int mu_b =
            pts[i + 1].has_index ? pts[i + 1].index.mu_total : pts[i + 1].mu_anchored;
        ev.mu_high = mu_a;
        ev.mu_low = mu_b;
        if (mu_a != INT_MIN && mu_b != INT_MIN && std::abs(mu_a - mu_b) != 1)
            ev.detail = "fold without unit index difference";
        else
            ev.detail = "fold";
        found.push_back(ev);
    }
    trace.events.insert(trace.events.end(), found.begin(), found.end());
    return found;
}

void annotate_anchored(FamilyTrace& trace, int anchor_mu) {
    int mu = anchor_mu;
    double prev_gamma = trace.points.empty() ? 0 : trace.points.front().gamma;
    for (auto& pt : trace.points) {
        for (const auto& ev : trace.events) {
            if (ev.cover != 1) continue;
            if (ev.kind != EventKind::IndexJump && ev.kind != EventKind::BirthDeath)
                continue;
            if (ev.mu_high == INT_MIN || ev.mu_low == INT_MIN) continue;
            const double a = std::min(prev_gamma, pt.gamma);
            const double b = std::max(prev_gamma, pt.gamma);
            if (ev.gamma_star > a && ev.gamma_star <= b)
                mu = (pt.gamma <= ev.gamma_star) ? ev.mu_low : ev.mu_high;
        }
        pt.mu_anchored = mu;
        if (pt.has_index && pt.index.mu_total != pt.mu_anchored)
            throw StructureError(
                "anchored and unwrapped Conley-Zehnder indices disagree at Gamma = " +
                std::to_string(pt.gamma));
        prev_gamma = pt.gamma;
    }
}

std::vector<OrbitSeed> branch_switch(const FamilyEvent& ev, const FamilyTrace& trace,
                                     double delta, const IntegrationConfig& cfg) {
    std::vector<OrbitSeed> out;
    if (ev.kind != EventKind::IndexJump && ev.kind != EventKind::RootOfUnity)
        return out;
    if (trace.points.empty()) return out;

    const FamilyPoint* nearest = &trace.points.front();
    for (const auto& p : trace.points)
        if (std::abs(p.gamma - ev.gamma_star) < std::abs(nearest->gamma - ev.gamma_star))
            nearest = &p;
    const OrbitSeed par = nearest->orbit.seed;

    for (int side = 0; side < 2; ++side) {
        const double g = ev.gamma_star + (side == 0 ? -delta : +delta);
        PeriodicOrbit parent_at;
        OrbitSeed pg = par;
        pg.gamma = g;
        try {
            parent_at = refine_orbit(pg, cfg);
        } catch (...) {
            continue;
        }

        const VelocityState pv = to_velocity(parent_at.initial);
        std::vector<OrbitSeed> candidates;
        auto add = [&](Sym start, Sym target, bool planar, double p1, double p2,
                       int vsign) {
            OrbitSeed c;
            c.family = trace.name + "-branch";
            c.start_sym = start;
            c.target_sym = target;
            c.gamma = g;
            c.planar = planar;
            c.param1 = p1;
            c.param2 = p2;
            c.velocity_sign = vsign;
            c.cover = ev.cover;
            candidates.push_back(c);
        };

        const double eps = 0.35 * std::sqrt(delta);
        if (par.start_sym == Sym::Rho1 || par.start_sym == Sym::Rho2) {
            const double q = par.start_sym == Sym::Rho1 ? pv.q[0] : pv.q[1];
            const double qd = par.start_sym == Sym::Rho1 ? pv.qdot[1] : pv.qdot[0];
            const int vs = qd >= 0 ? +1 : -1;
            if (!ev.spatial_block) {
                // planar children: the double symmetry breaks
                for (double e : {eps, -eps, 0.3 * eps, 3.0 * eps})
                    add(par.start_sym, par.start_sym, true, q * (1.0) + e, 0, vs);
            } else {
                // spatial children leave the plane through q3 or qd3
                for (double e : {eps, -eps, 0.3 * eps}) {
                    add(par.start_sym, par.start_sym, false, q, e, vs);
                    add(par.start_sym,
                        par.start_sym == Sym::Rho1 ? Sym::Rho2 : Sym::Rho1, false, q, e,
                        vs);
                }
                const Sym bar = par.start_sym == Sym::Rho1 ? Sym::Rho1Bar : Sym::Rho2Bar;
                const Sym obar = par.start_sym == Sym::Rho1 ? Sym::Rho2Bar : Sym::Rho1Bar;
                add(bar, par.start_sym, false, q, qd, vs);
                add(bar, bar, false, q, qd, vs);
                add(bar, obar, false, q, qd, vs);
            }
        } else {
            for (double e : {eps, -eps}) {
                add(par.start_sym, par.target_sym, false, par.param1 + e, par.param2,
                    par.velocity_sign);
                add(par.start_sym, par.target_sym, false, par.param1, par.param2 + e,
                    par.velocity_sign);
            }
        }

        for (auto& c : candidates) {
            try {
                const PeriodicOrbit child = refine_orbit(c, cfg);
                const Vec6 d = sub6(child.initial.flat(), parent_at.initial.flat());
                double dist = norm6(d);
                const Vec6 dm =
                    sub6(child.initial.flat(),
                         apply_symmetry(Sym::Sigma, parent_at.initial).flat());
                dist = std::min(dist, norm6(dm));
                if (dist < 1e-4) continue;
                const OrbitSeed converged = child.seed;
                bool dup = false;
                for (const auto& prev : out)
                    if (prev.start_sym == converged.start_sym &&
                        prev.target_sym == converged.target_sym &&
                        std::abs(prev.gamma - converged.gamma) < 1e-9 &&
                        std::abs(prev.param1 - converged.param1) < 1e-6 &&
                        std::abs(prev.param2 - converged.param2) < 1e-6)
                        dup = true;
                if (!dup) out.push_back(converged);
            } catch (...) {
                continue;
            }
        }
        if (!out.empty()) break;
    }
    return out;
}

namespace {

int chi_term(int mu, bool good) {
    if (!good) return 0;
    return (mu % 2 == 0) ? 1 : -1;
}

}  // namespace

BifurcationGraph build_graph(const std::vector<GraphMember>& members) {
    BifurcationGraph g;

    for (const auto& m : members) {
        const auto& tr = *m.trace;
        for (const auto& ev : tr.events) {
            if (ev.kind == EventKind::RootOfUnity && ev.cover != m.cover) continue;
            if (ev.kind == EventKind::CollisionApproach ||
                ev.kind == EventKind::FamilyEndpoint)
                continue;
            GraphVertex v;
            v.family = tr.name;
            v.cover = m.cover;
            v.gamma = ev.gamma_star;
            v.kind = event_kind_name(ev.kind);
            g.vertices.push_back(v);
        }
    }
    std::sort(g.vertices.begin(), g.vertices.end(), [](const auto& a, const auto& b) {
        if (a.family != b.family) return a.family < b.family;
        return a.gamma > b.gamma;
    });
    g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end(),
                                 [](const auto& a, const auto& b) {
                                     return a.family == b.family &&
                                            std::abs(a.gamma - b.gamma) < 1e-3;
                                 }),
                     g.vertices.end());

    auto vertex_of = [&](const std::string& family, double gamma) {
        for (size_t i = 0; i < g.vertices.size(); ++i)
            if (g.vertices[i].family == family &&
                std::abs(g.vertices[i].gamma - gamma) < 5e-3)
                return static_cast<int>(i);
        return -1;
    };

    for (const auto& m : members) {
        const auto& tr = *m.trace;
        std::vector<double> cuts;
        for (const auto& v : g.vertices)
            if (v.family == tr.name) cuts.push_back(v.gamma);
        std::sort(cuts.begin(), cuts.end());

        std::vector<GraphEdge> trace_edges;
        auto flush = [&](size_t from, size_t to) {
            if (to <= from) return;
            const FamilyPoint* rep = nullptr;
            for (size_t i = from; i <= to; ++i)
                if (tr.points[i].has_index || tr.points[i].mu_anchored != INT_MIN) {
                    rep = &tr.points[i];
                    if (i > from) break;
                }
            GraphEdge e;
            e.family = tr.name;
            e.cover = m.cover;
            e.gamma_high = std::max(tr.points[from].gamma, tr.points[to].gamma);
            e.gamma_low = std::min(tr.points[from].gamma, tr.points[to].gamma);
            if (rep != nullptr) {
                if (rep->has_index) {
                    e.mu = index_iteration(rep->index, rep->stab, m.cover);
                    e.good = good_bad(rep->index, rep->stab, m.cover).good;
                } else if (rep->mu_anchored != INT_MIN) {
                    e.mu = rep->mu_anchored;
                }
            }
            e.from_vertex = vertex_of(tr.name, e.gamma_high);
            e.to_vertex = vertex_of(tr.name, e.gamma_low);
            trace_edges.push_back(e);
        };

        size_t seg_start = 0;
        double prev_gamma = tr.points.empty() ? 0 : tr.points.front().gamma;
        for (size_t i = 1; i < tr.points.size(); ++i) {
            const double a = std::min(prev_gamma, tr.points[i].gamma);
            const double b = std::max(prev_gamma, tr.points[i].gamma);
            bool cut = false;
            for (double c : cuts)
                if (c > a + 1e-12 && c <= b - 1e-12) cut = true;
            if (cut) {
                flush(seg_start, i - 1);
                seg_start = i;
            }
            prev_gamma = tr.points[i].gamma;
        }
        if (!tr.points.empty()) flush(seg_start, tr.points.size() - 1);

        // attach birth/terminus ends to parent vertices
        if (!tr.parent.empty()) {
            const int pv = vertex_of(tr.parent, tr.birth_gamma);
            if (pv >= 0)
                for (auto& e : trace_edges) {
                    if (std::abs(e.gamma_high - tr.birth_gamma) < 5e-3 &&
                        e.from_vertex < 0)
                        e.from_vertex = pv;
                    if (std::abs(e.gamma_low - tr.birth_gamma) < 5e-3 &&
                        e.to_vertex < 0)
                        e.to_vertex = pv;
                }
        }

        for (const auto& e : trace_edges) {
            g.edges.push_back(e);
            if (m.with_mirror) {
                GraphEdge d = e;
                d.dashed = true;
                g.edges.push_back(d);
            }
        }
    }

    for (size_t vi = 0; vi < g.vertices.size(); ++vi) {
        GraphVertex& v = g.vertices[vi];
        int chi_hi = 0, chi_lo = 0;
        for (const auto& e : g.edges) {
            if (e.from_vertex == static_cast<int>(vi)) {
                chi_lo += chi_term(e.mu, e.good);  // edge extends below gamma*
                if (e.family == v.family && !e.dashed) {
                    v.mu_low = e.mu;
                    v.good_low = e.good;
                }
            }
            if (e.to_vertex == static_cast<int>(vi)) {
                chi_hi += chi_term(e.mu, e.good);  // edge extends above gamma*
                if (e.family == v.family && !e.dashed) {
                    v.mu_high = e.mu;
                    v.good_high = e.good;
                }
            }
        }
        v.chi_high = chi_hi;
        v.chi_low = chi_lo;
        v.balanced = (chi_hi == chi_lo);
    }
    return g;
}

void trace_to_csv(const FamilyTrace& trace, std::ostream& os) {
    os << "gamma,q1_0,q3_0,q2dot_0,q3dot_0,T_s,tr_Ap,class_p,angle_or_lambda_p,"
          "T_a,tr_As,class_s,angle_or_lambda_s,T_d,mu_p,mu_s,mu,sign_C,sign_B,"
          "events\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof(buf), "%.6g", x);
        return std::string(buf);
    };
    auto sgn = [](int s) { return s > 0 ? "+" : (s < 0 ? "-" : "0"); };
    for (size_t i = 0; i < trace.points.size(); ++i) {
        const auto& pt = trace.points[i];
        const VelocityState v = to_velocity(pt.orbit.initial);
        os << num(pt.gamma) << ',' << num(v.q[0]) << ',' << num(v.q[2]) << ','
           << num(v.qdot[1]) << ',' << num(v.qdot[2]) << ','
           << num(pt.periods.t_synodic) << ',';
        if (pt.orbit.seed.planar) {
            const auto& bp = pt.stab.block_p;
            const auto& bs = pt.stab.block_s;
            os << num(bp.trace) << ',' << block_class_name(bp.cls) << ','
               << num(is_elliptic(bp.cls) ? bp.angle : bp.lambda) << ','
               << (pt.periods.t_anomalistic ? num(*pt.periods.t_anomalistic) : "")
               << ',' << num(bs.trace) << ',' << block_class_name(bs.cls) << ','
               << num(is_elliptic(bs.cls) ? bs.angle : bs.lambda) << ','
               << (pt.periods.t_draconitic ? num(*pt.periods.t_draconitic) : "")
               << ',';
            if (pt.has_index)
                os << pt.index.mu_p << ',' << pt.index.mu_s << ',' << pt.index.mu_total
                   << ',';
            else
                os << ",,"
                   << (pt.mu_anchored != INT_MIN ? std::to_string(pt.mu_anchored) : "")
                   << ',';
            os << sgn(bp.sign_c) << sgn(bs.sign_c) << ',' << sgn(bp.sign_b)
               << sgn(bs.sign_b) << ',';
        } else {
            std::array<SpatialEigen, 2> es{pt.stab.eigens[0], pt.stab.eigens[1]};
            if (std::abs(es[0].alpha) > std::abs(es[1].alpha)) std::swap(es[0], es[1]);
            auto eig_cols = [&](const SpatialEigen& e) {
                if (!e.real)
                    return std::string("complex,") + num(e.lambda.real()) + "+" +
                           num(std::abs(e.lambda.imag())) + "i";
                if (e.elliptic) return std::string("elliptic,") + num(e.angle);
                return std::string(e.lambda.real() > 0 ? "pos-hyperbolic"
                                                       : "neg-hyperbolic") +
                       "," + num(e.lambda.real());
            };
            os << num(2 * es[0].alpha.real()) << ',' << eig_cols(es[0]) << ",,"
               << num(2 * es[1].alpha.real()) << ',' << eig_cols(es[1]) << ",,";
            os << ",,"
               << (pt.mu_anchored != INT_MIN ? std::to_string(pt.mu_anchored) : "")
               << ',';
            os << sgn(es[0].sign_C) << sgn(es[1].sign_C) << ',' << sgn(es[0].sign_B)
               << sgn(es[1].sign_B) << ',';
        }
        std::string evs;
        if (i + 1 < trace.points.size()) {
            const double a = std::min(pt.gamma, trace.points[i + 1].gamma);
            const double b = std::max(pt.gamma, trace.points[i + 1].gamma);
            for (const auto& ev : trace.events)
                if (ev.gamma_star > a && ev.gamma_star <= b) {
                    if (!evs.empty()) evs += '|';
                    evs += std::string(event_kind_name(ev.kind)) + "@" +
                           num(ev.gamma_star);
                }
        }
        os << evs << '\n';
    }
}

void graph_to_dot(const BifurcationGraph& graph, std::ostream& os) {
    os << "graph bifurcation {\n  rankdir=BT;\n";
    char buf[32];
    for (size_t i = 0; i < graph.vertices.size(); ++i) {
        const auto& v = graph.vertices[i];
        std::snprintf(buf, sizeof(buf), "%.6g", v.gamma);
        os << "  v" << i << " [label=\"" << v.family
           << (v.cover > 1 ? "^" + std::to_string(v.cover) : "") << " @ " << buf;
        if (v.mu_high != INT_MIN && v.mu_low != INT_MIN)
            os << "\\n" << v.mu_high << " -> " << v.mu_low;
        os << "\\nchi " << v.chi_high << (v.balanced ? " = " : " != ") << v.chi_low
           << "\"];\n";
    }
    int phantom = 0;
    for (const auto& e : graph.edges) {
        std::string from = e.from_vertex >= 0 ? "v" + std::to_string(e.from_vertex)
                                              : "p" + std::to_string(phantom++);
        std::string to = e.to_vertex >= 0 ? "v" + std::to_string(e.to_vertex)
                                          : "p" + std::to_string(phantom++);
        if (from[0] == 'p') os << "  " << from << " [shape=point];\n";
        if (to[0] == 'p') os << "  " << to << " [shape=point];\n";
        os << "  " << from << " -- " << to << " [label=\"" << e.family
           << (e.cover > 1 ? "^" + std::to_string(e.cover) : "") << " mu=" << e.mu
           << (e.good ? "" : " bad") << "\"" << (e.dashed ? ", style=dashed" : "")
           << "];\n";
    }
    os << "}\n";
}

void graph_to_json(const BifurcationGraph& graph, std::ostream& os) {
    os << "{\n  \"vertices\": [\n";
    char buf[64];
    for (size_t i = 0; i < graph.vertices.size(); ++i) {
        const auto& v = graph.vertices[i];
        std::snprintf(buf, sizeof(buf), "%.9g", v.gamma);
        os << "    {\"id\": " << i << ", \"family\": \"" << v.family
           << "\", \"cover\": " << v.cover << ", \"gamma\": " << buf;
        if (v.mu_high != INT_MIN) os << ", \"mu_high\": " << v.mu_high;
        if (v.mu_low != INT_MIN) os << ", \"mu_low\": " << v.mu_low;
        os << ", \"chi_high\": " << v.chi_high << ", \"chi_low\": " << v.chi_low
           << ", \"balanced\": " << (v.balanced ? "true" : "false")
           << ", \"kind\": \"" << v.kind << "\"}"
           << (i + 1 < graph.vertices.size() ? "," : "") << "\n";
    }
    os << "  ],\n  \"edges\": [\n";
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        const auto& e = graph.edges[i];
        char lo[64], hi[64];
        std::snprintf(hi, sizeof(hi), "%.9g", e.gamma_high);
        std::snprintf(lo, sizeof(lo), "%.9g", e.gamma_low);
        os << "    {\"family\": \"" << e.family << "\", \"cover\": " << e.cover
           << ", \"mu\": " << e.mu << ", \"good\": " << (e.good ? "true" : "false")
           << ", \"dashed\": " << (e.dashed ? "true" : "false")
           << ", \"gamma_high\": " << hi << ", \"gamma_low\": " << lo
           << ", \"from\": " << e.from_vertex << ", \"to\": " << e.to_vertex << "}"
           << (i + 1 < graph.edges.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

}  // namespace hill
