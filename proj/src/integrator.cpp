// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/integrator.hpp"

#include <cmath>

namespace hill {

namespace {

using kernels::PropState;

// RK4 on the packed block with the active kernel set.
bool packed_rk4(const kernels::KernelOps& ops, const PropState& y, double h,
                double floor2, PropState& out) {
    PropState k1, k2, k3, k4, tmp;
    if (!ops.combined_rhs(y.v, k1.v, floor2)) return false;
    ops.stage(y.v, k1.v, 0.5 * h, tmp.v);
    if (!ops.combined_rhs(tmp.v, k2.v, floor2)) return false;
    ops.stage(y.v, k2.v, 0.5 * h, tmp.v);
    if (!ops.combined_rhs(tmp.v, k3.v, floor2)) return false;
    ops.stage(y.v, k3.v, h, tmp.v);
    if (!ops.combined_rhs(tmp.v, k4.v, floor2)) return false;
    ops.combine(y.v, k1.v, k2.v, k3.v, k4.v, h / 6.0, out.v);
    return true;
}

[[noreturn]] void throw_collision(double t) {
    throw CollisionError("collision floor reached at t = " + std::to_string(t));
}

// State-only RK4 with the same per-element arithmetic as the packed path.
bool state_rk4(const double* y, double h, double floor2, double* out) {
    double k1[6], k2[6], k3[6], k4[6], tmp[6];
    if (!kernels::detail::state_rhs(y, k1, floor2)) return false;
    for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    if (!kernels::detail::state_rhs(tmp, k2, floor2)) return false;
    for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    if (!kernels::detail::state_rhs(tmp, k3, floor2)) return false;
    for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * k3[i];
    if (!kernels::detail::state_rhs(tmp, k4, floor2)) return false;
    const double h6 = h / 6.0;
    for (int i = 0; i < 6; ++i) {
        double t = k1[i] + 2.0 * k2[i];
        t = t + 2.0 * k3[i];
        t = t + k4[i];
        out[i] = y[i] + h6 * t;
    }
    return true;
}

}  // namespace

double symplecticity_residual(const Mat6& m) {
    // J = [[0,I],[-I,0]]; compute M^T J M - J entry-wise.
    Mat6 jm{};
    for (int c = 0; c < 6; ++c) {
        for (int r = 0; r < 3; ++r) jm[r * 6 + c] = m[(r + 3) * 6 + c];
        for (int r = 3; r < 6; ++r) jm[r * 6 + c] = -m[(r - 3) * 6 + c];
    }
    double worst = 0;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) {
            double s = 0;
            for (int k = 0; k < 6; ++k) s += m[k * 6 + r] * jm[k * 6 + c];
            double j = 0;
            if (r < 3 && c == r + 3) j = 1;
            if (r >= 3 && c == r - 3) j = -1;
            worst = std::max(worst, std::abs(s - j));
        }
    return worst;
}

PhaseState rk4_step(const PhaseState& s, double h, const IntegrationConfig& cfg) {
    const double floor2 = cfg.collision_floor * cfg.collision_floor;
    const Vec6 y = s.flat();
    Vec6 out;
    if (!state_rk4(y.data(), h, floor2, out.data())) throw_collision(0.0);
    return PhaseState::from_flat(out);
}

PhaseState flow(const PhaseState& s, double t, const IntegrationConfig& cfg) {
    if (!std::isfinite(t)) throw DomainError("flow: non-finite time");
    if (std::abs(t) > cfg.max_time)
        throw DomainError("flow: |t| exceeds max_time");
    const double floor2 = cfg.collision_floor * cfg.collision_floor;
    const double h = (t >= 0) ? cfg.step : -cfg.step;
    const long n = static_cast<long>(std::floor(std::abs(t) / cfg.step));
    Vec6 y = s.flat();
    Vec6 out;
    for (long i = 0; i < n; ++i) {
        if (!state_rk4(y.data(), h, floor2, out.data()))
            throw_collision(static_cast<double>(i) * h);
        y = out;
    }
    const double rem = t - static_cast<double>(n) * h;
    if (rem != 0.0) {
        if (!state_rk4(y.data(), rem, floor2, out.data())) throw_collision(t);
        y = out;
    }
    return PhaseState::from_flat(y);
}

FrameFlowResult flow_with_frame(const PhaseState& s, const TangentFrame& m0,
                                double t, const IntegrationConfig& cfg) {
    if (!std::isfinite(t)) throw DomainError("flow_with_frame: non-finite time");
    const auto& ops = kernels::active_kernels();
    const double floor2 = cfg.collision_floor * cfg.collision_floor;
    const double h = (t >= 0) ? cfg.step : -cfg.step;
    const long n = static_cast<long>(std::floor(std::abs(t) / cfg.step));
    PropState y = kernels::pack(s, m0.m);
    PropState out;
    for (long i = 0; i < n; ++i) {
        if (!packed_rk4(ops, y, h, floor2, out))
            throw_collision(static_cast<double>(i) * h);
        y = out;
    }
    const double rem = t - static_cast<double>(n) * h;
    if (rem != 0.0) {
        if (!packed_rk4(ops, y, rem, floor2, out)) throw_collision(t);
        y = out;
    }
    FrameFlowResult res;
    res.frame.basis_tag = m0.basis_tag;
    kernels::unpack(y, res.state, res.frame.m);
    return res;
}

void flow_with_frame_sampled(
    const PhaseState& s, const TangentFrame& m0, double t,
    const IntegrationConfig& cfg,
    const std::function<void(double, const PhaseState&, const Mat6&)>& cb) {
    const auto& ops = kernels::active_kernels();
    const double floor2 = cfg.collision_floor * cfg.collision_floor;
    const double h = (t >= 0) ? cfg.step : -cfg.step;
    const long n = static_cast<long>(std::floor(std::abs(t) / cfg.step));
    PropState y = kernels::pack(s, m0.m);
    PropState out;
    PhaseState st;
    Mat6 fr;
    kernels::unpack(y, st, fr);
    cb(0.0, st, fr);
    double tcur = 0;
    for (long i = 0; i < n; ++i) {
        if (!packed_rk4(ops, y, h, floor2, out)) throw_collision(tcur);
        y = out;
        tcur = static_cast<double>(i + 1) * h;
        kernels::unpack(y, st, fr);
        cb(tcur, st, fr);
    }
    const double rem = t - static_cast<double>(n) * h;
    if (rem != 0.0) {
        if (!packed_rk4(ops, y, rem, floor2, out)) throw_collision(t);
        y = out;
        kernels::unpack(y, st, fr);
        cb(t, st, fr);
    }
}

SectionCrossing locate_section_crossing_with_frame(const PhaseState& s,
                                                   const TangentFrame& m0,
                                                   int coord,
                                                   const IntegrationConfig& cfg,
                                                   int k) {
    if (coord < 0 || coord > 5) throw DomainError("section coordinate out of range");
    const auto& ops = kernels::active_kernels();
    const double floor2 = cfg.collision_floor * cfg.collision_floor;
    const double h = cfg.step;
    PropState y = kernels::pack(s, m0.m);
    PropState next;
    double t = 0;
    int count = 0;
    double prev = y.v[coord];
    while (t < cfg.max_time) {
        if (!packed_rk4(ops, y, h, floor2, next)) throw_collision(t);
        const double cur = next.v[coord];
        if (prev != 0.0 && cur != 0.0 && std::signbit(cur) != std::signbit(prev)) {
            ++count;
            if (count == k) {
                // cubic Hermite initial guess from coordinate values and
                // derivatives at both step ends, then safeguarded bisection on
                // partial steps from the step start.
                PropState f0, f1;
                ops.combined_rhs(y.v, f0.v, floor2);
                ops.combined_rhs(next.v, f1.v, floor2);
                const double c0 = y.v[coord], c1 = next.v[coord];
                const double d0 = f0.v[coord] * h, d1 = f1.v[coord] * h;
                double lo = 0.0, hi = 1.0, tau = 0.5;
                {
                    // Newton on the Hermite cubic in normalized time
                    double x = c0 / (c0 - c1);  // secant start
                    for (int it = 0; it < 12; ++it) {
                        const double h00 = 2 * x * x * x - 3 * x * x + 1;
                        const double h10 = x * x * x - 2 * x * x + x;
                        const double h01 = -2 * x * x * x + 3 * x * x;
                        const double h11 = x * x * x - x * x;
                        const double val = h00 * c0 + h10 * d0 + h01 * c1 + h11 * d1;
                        const double dh00 = 6 * x * x - 6 * x;
                        const double dh10 = 3 * x * x - 4 * x + 1;
                        const double dh01 = -6 * x * x + 6 * x;
                        const double dh11 = 3 * x * x - 2 * x;
                        const double der = dh00 * c0 + dh10 * d0 + dh01 * c1 + dh11 * d1;
                        if (der == 0) break;
                        const double xn = x - val / der;
                        if (!(xn > 0.0 && xn < 1.0)) break;
                        if (std::abs(xn - x) < 1e-14) { x = xn; break; }
                        x = xn;
                    }
                    if (x > 0.0 && x < 1.0) tau = x;
                }
                PropState probe;
                auto eval = [&](double frac, PropState& dst) {
                    if (!packed_rk4(ops, y, frac * h, floor2, dst)) throw_collision(t);
                    return dst.v[coord];
                };
                double cm = eval(tau, probe);
                for (int it = 0; it < 200 && std::abs(cm) > cfg.tol_event; ++it) {
                    if (std::signbit(cm) == std::signbit(c0)) lo = tau;
                    else hi = tau;
                    tau = 0.5 * (lo + hi);
                    cm = eval(tau, probe);
                    if (hi - lo < 1e-16) break;
                }
                SectionCrossing res;
                res.t = t + tau * h;
                res.frame.basis_tag = m0.basis_tag;
                kernels::unpack(probe, res.state, res.frame.m);
                return res;
            }
        }
        if (cur != 0.0) prev = cur;
        y = next;
        t += h;
    }
    throw ConvergenceError("no section crossing before max_time");
}

SectionCrossing locate_section_crossing(const PhaseState& s, int coord,
                                        const IntegrationConfig& cfg, int k,
                                        bool accept_initial) {
    if (coord < 0 || coord > 5) throw DomainError("section coordinate out of range");
    if (accept_initial && std::abs(s.flat()[coord]) < cfg.tol_event) {
        SectionCrossing res;
        res.t = 0.0;
        res.state = s;
        return res;
    }
    const double floor2 = cfg.collision_floor * cfg.collision_floor;
    const double h = cfg.step;
    Vec6 y = s.flat();
    Vec6 next;
    double t = 0;
    int count = 0;
    double prev = y[coord];
    while (t < cfg.max_time) {
        if (!state_rk4(y.data(), h, floor2, next.data())) throw_collision(t);
        const double cur = next[coord];
        if (prev != 0.0 && cur != 0.0 && std::signbit(cur) != std::signbit(prev)) {
            ++count;
            if (count == k) {
                double f0[6], f1[6];
                kernels::detail::state_rhs(y.data(), f0, floor2);
                kernels::detail::state_rhs(next.data(), f1, floor2);
                const double c0 = y[coord], c1 = next[coord];
                const double d0 = f0[coord] * h, d1 = f1[coord] * h;
                double lo = 0.0, hi = 1.0, tau = 0.5;
                {
                    double x = c0 / (c0 - c1);
                    for (int it = 0; it < 12; ++it) {
                        const double h00 = 2 * x * x * x - 3 * x * x + 1;
                        const double h10 = x * x * x - 2 * x * x + x;
                        const double h01 = -2 * x * x * x + 3 * x * x;
                        const double h11 = x * x * x - x * x;
                        const double val = h00 * c0 + h10 * d0 + h01 * c1 + h11 * d1;
                        const double dh00 = 6 * x * x - 6 * x;
                        const double dh10 = 3 * x * x - 4 * x + 1;
                        const double dh01 = -6 * x * x + 6 * x;
                        const double dh11 = 3 * x * x - 2 * x;
                        const double der = dh00 * c0 + dh10 * d0 + dh01 * c1 + dh11 * d1;
                        if (der == 0) break;
                        const double xn = x - val / der;
                        if (!(xn > 0.0 && xn < 1.0)) break;
                        if (std::abs(xn - x) < 1e-14) { x = xn; break; }
                        x = xn;
                    }
                    if (x > 0.0 && x < 1.0) tau = x;
                }
                Vec6 probe;
                auto eval = [&](double frac) {
                    if (!state_rk4(y.data(), frac * h, floor2, probe.data()))
                        throw_collision(t);
                    return probe[coord];
                };
                double cm = eval(tau);
                for (int it = 0; it < 200 && std::abs(cm) > cfg.tol_event; ++it) {
                    if (std::signbit(cm) == std::signbit(c0)) lo = tau;
                    else hi = tau;
                    tau = 0.5 * (lo + hi);
                    cm = eval(tau);
                    if (hi - lo < 1e-16) break;
                }
                SectionCrossing res;
                res.t = t + tau * h;
                res.state = PhaseState::from_flat(probe);
                return res;
            }
        }
        if (cur != 0.0) prev = cur;
        y = next;
        t += h;
    }
    throw ConvergenceError("no section crossing before max_time");
}

}  // namespace hill
