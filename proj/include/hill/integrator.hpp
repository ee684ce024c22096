// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_INTEGRATOR_HPP
#define HILL_INTEGRATOR_HPP

#include <functional>
#include <string>

#include "hill/dynamics.hpp"
#include "hill/kernels.hpp"
#include "hill/types.hpp"

namespace hill {

struct IntegrationConfig {
    double step = 1e-5;             // fixed RK4 step, Hill time units
    double tol_event = 1e-12;       // section coordinate residual at crossings
    double max_time = 400.0;
    double collision_floor = kCollisionFloor;
};

// Ordered 6-frame transported by the linearized flow.
struct TangentFrame {
    Mat6 m = identity6();           // row-major; columns are the basis images
    std::string basis_tag = "standard";

    Vec6 apply(const Vec6& v) const { return apply6(m, v); }
};

// || M^T J M - J ||_inf, zero for symplectic M.
double symplecticity_residual(const Mat6& m);

// One classical RK4 step of the state flow; h may be negative.
PhaseState rk4_step(const PhaseState& s, double h,
                    const IntegrationConfig& cfg = {});

// Generic RK4 step for an arbitrary 6-dim right-hand side (test oracles use
// this with the gravity-free limit system).
template <class RHS>
Vec6 rk4_step_generic(RHS&& f, const Vec6& y, double h) {
    const Vec6 k1 = f(y);
    Vec6 t;
    for (int i = 0; i < 6; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    const Vec6 k2 = f(t);
    for (int i = 0; i < 6; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    const Vec6 k3 = f(t);
    for (int i = 0; i < 6; ++i) t[i] = y[i] + h * k3[i];
    const Vec6 k4 = f(t);
    Vec6 out;
    for (int i = 0; i < 6; ++i) {
        double acc = k1[i] + 2.0 * k2[i];
        acc = acc + 2.0 * k3[i];
        acc = acc + k4[i];
        out[i] = y[i] + (h / 6.0) * acc;
    }
    return out;
}

// Flow for time t (composition of fixed steps, final partial step lands
// exactly at t).
PhaseState flow(const PhaseState& s, double t, const IntegrationConfig& cfg = {});

// Joint state + variational flow over time t.
struct FrameFlowResult {
    PhaseState state;
    TangentFrame frame;
};
FrameFlowResult flow_with_frame(const PhaseState& s, const TangentFrame& m0,
                                double t, const IntegrationConfig& cfg = {});

// Zero crossing of a state coordinate (0..5 for q1,q2,q3,p1,p2,p3).
struct SectionCrossing {
    double t = 0;
    PhaseState state;
    TangentFrame frame;     // valid when requested with a frame
};

// Integrates until the k-th sign change of coordinate `coord`, then refines
// the crossing inside the step (cubic Hermite guess + bisection) until
// |coordinate| < tol_event.  Throws ConvergenceError if no crossing occurs
// before max_time.  With accept_initial, a state already on the section
// (|coordinate| < tol_event) is returned at t = 0.
SectionCrossing locate_section_crossing(const PhaseState& s, int coord,
                                        const IntegrationConfig& cfg = {},
                                        int k = 1, bool accept_initial = false);

// Same, with the tangent frame transported to the crossing.
SectionCrossing locate_section_crossing_with_frame(const PhaseState& s,
                                                   const TangentFrame& m0,
                                                   int coord,
                                                   const IntegrationConfig& cfg = {},
                                                   int k = 1);

// Dense sampling callback variant of flow_with_frame; `cb` is invoked at
// t = 0, after every accepted step and at the final time.
void flow_with_frame_sampled(
    const PhaseState& s, const TangentFrame& m0, double t,
    const IntegrationConfig& cfg,
    const std::function<void(double, const PhaseState&, const Mat6&)>& cb);

}  // namespace hill

#endif
