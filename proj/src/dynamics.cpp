// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/dynamics.hpp"

#include <cmath>

namespace hill {

namespace {
double checked_r(const Vec3& q, double floor) {
    const double r = norm3(q);
    if (!(r >= floor))
        throw CollisionError("collision floor violated: |q| = " + std::to_string(r));
    return r;
}
}  // namespace

double hamiltonian(const PhaseState& s, double floor) {
    const double r = checked_r(s.q, floor);
    const auto& q = s.q;
    const auto& p = s.p;
    return 0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - 1.0 / r
         + p[0] * q[1] - p[1] * q[0]
         - q[0] * q[0] + 0.5 * q[1] * q[1] + 0.5 * q[2] * q[2];
}

double effective_potential(const Vec3& q, double floor) {
    const double r = checked_r(q, floor);
    return -1.0 / r - 1.5 * q[0] * q[0] + 0.5 * q[2] * q[2];
}

PhaseState to_phase(const VelocityState& v) {
    PhaseState s;
    s.q = v.q;
    s.p = {v.qdot[0] - v.q[1], v.qdot[1] + v.q[0], v.qdot[2]};
    return s;
}

VelocityState to_velocity(const PhaseState& s) {
    VelocityState v;
    v.q = s.q;
    v.qdot = {s.p[0] + s.q[1], s.p[1] - s.q[0], s.p[2]};
    return v;
}

double jacobi_gamma(const VelocityState& v, double floor) {
    const double r = checked_r(v.q, floor);
    const auto& q = v.q;
    const auto& qd = v.qdot;
    return 2.0 / r + 3.0 * q[0] * q[0] - q[2] * q[2]
         - qd[0] * qd[0] - qd[1] * qd[1] - qd[2] * qd[2];
}

Vec3 grad_V(const Vec3& q, double floor) {
    const double r = checked_r(q, floor);
    const double r3 = r * r * r;
    return {q[0] / r3 - 3.0 * q[0], q[1] / r3, q[2] / r3 + q[2]};
}

Vec6 vector_field(const PhaseState& s, double floor) {
    const Vec3 dV = grad_V(s.q, floor);
    const auto& q = s.q;
    const auto& p = s.p;
    return {p[0] + q[1],
            p[1] - q[0],
            p[2],
            p[1] - q[0] - dV[0],
            -p[0] - q[1] - dV[1],
            -dV[2]};
}

std::array<double, 9> hessian_V(const Vec3& q, double floor) {
    const double r = checked_r(q, floor);
    const double r2 = r * r;
    const double r3 = r2 * r;
    const double r5 = r3 * r2;
    std::array<double, 9> h{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = -3.0 * q[i] * q[j] / r5;
            if (i == j) v += 1.0 / r3;
            h[i * 3 + j] = v;
        }
    h[0] -= 3.0;  // d2/dq1^2 of -3/2 q1^2
    h[8] += 1.0;  // d2/dq3^2 of  1/2 q3^2
    return h;
}

Vec6 variational_rhs(const PhaseState& s, const Vec6& xi, double floor) {
    const auto hv = hessian_V(s.q, floor);
    const double hq0 = hv[0] * xi[0] + hv[1] * xi[1] + hv[2] * xi[2];
    const double hq1 = hv[3] * xi[0] + hv[4] * xi[1] + hv[5] * xi[2];
    const double hq2 = hv[6] * xi[0] + hv[7] * xi[1] + hv[8] * xi[2];
    return {xi[3] + xi[1],
            xi[4] - xi[0],
            xi[5],
            xi[4] - xi[0] - hq0,
            -xi[3] - xi[1] - hq1,
            -hq2};
}

Mat6 vector_field_jacobian(const PhaseState& s, double floor) {
    const auto hv = hessian_V(s.q, floor);
    Mat6 m{};
    m[0 * 6 + 1] = 1.0;
    m[0 * 6 + 3] = 1.0;
    m[1 * 6 + 0] = -1.0;
    m[1 * 6 + 4] = 1.0;
    m[2 * 6 + 5] = 1.0;
    m[3 * 6 + 0] = -1.0 - hv[0];
    m[3 * 6 + 1] = -hv[1];
    m[3 * 6 + 2] = -hv[2];
    m[3 * 6 + 4] = 1.0;
    m[4 * 6 + 0] = -hv[3];
    m[4 * 6 + 1] = -1.0 - hv[4];
    m[4 * 6 + 2] = -hv[5];
    m[4 * 6 + 3] = -1.0;
    m[5 * 6 + 0] = -hv[6];
    m[5 * 6 + 1] = -hv[7];
    m[5 * 6 + 2] = -hv[8];
    return m;
}

Vec6 grad_gamma(const PhaseState& s, double floor) {
    const double r = checked_r(s.q, floor);
    const double r3 = r * r * r;
    const auto& q = s.q;
    const auto& p = s.p;
    const double qd1 = p[0] + q[1];
    const double qd2 = p[1] - q[0];
    return {2.0 * (-q[0] / r3 + 2.0 * q[0] + p[1]),
            -2.0 * q[1] / r3 - 2.0 * qd1,
            -2.0 * q[2] / r3 - 2.0 * q[2],
            -2.0 * qd1,
            -2.0 * qd2,
            -2.0 * p[2]};
}

std::vector<PhaseState> critical_points() {
    const double a = std::pow(3.0, -1.0 / 3.0);
    return {PhaseState{{a, 0, 0}, {0, a, 0}},
            PhaseState{{-a, 0, 0}, {0, -a, 0}}};
}

}  // namespace hill
