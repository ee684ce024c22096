// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_TYPES_HPP
#define HILL_TYPES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hill {

using Vec3 = std::array<double, 3>;
using Vec6 = std::array<double, 6>;
using Mat2 = std::array<double, 4>;   // row-major [a b; c d]
using Mat6 = std::array<double, 36>;  // row-major

// Phase-space point (q,p) in Hill units.
struct PhaseState {
    Vec3 q{};
    Vec3 p{};

    Vec6 flat() const { return {q[0], q[1], q[2], p[0], p[1], p[2]}; }
    static PhaseState from_flat(const Vec6& v) {
        return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    }
};

// Position and velocity (q, qdot); bijective with PhaseState via the
// rotating-frame momentum shift p1 = qd1 - q2, p2 = qd2 + q1, p3 = qd3.
struct VelocityState {
    Vec3 q{};
    Vec3 qdot{};
};

// Energy, either as Hamiltonian value c or as traditional Jacobi integral
// Gamma = -2c.
struct EnergyLevel {
    double gamma = 0.0;

    static EnergyLevel from_gamma(double g) { return {g}; }
    static EnergyLevel from_c(double c) { return {-2.0 * c}; }
    double c() const { return -0.5 * gamma; }
};

struct CollisionError : std::runtime_error {
    explicit CollisionError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct StructureError : std::runtime_error {
    explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

inline double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline double norm6(const Vec6& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline Vec6 sub6(const Vec6& a, const Vec6& b) {
    Vec6 r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] - b[i];
    return r;
}

// Symplectic pairing omega(v,w) = <Jv,w> with J = [[0,I],[-I,0]], i.e.
// omega(v,w) = v_p . w_q - v_q . w_p.  All Lagrangian-basis constructions
// below use this convention.
inline double omega6(const Vec6& v, const Vec6& w) {
    return v[3] * w[0] + v[4] * w[1] + v[5] * w[2]
         - v[0] * w[3] - v[1] * w[4] - v[2] * w[5];
}

inline double trace2(const Mat2& m) { return m[0] + m[3]; }
inline double det2(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

inline Mat2 mul2(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 transpose2(const Mat2& m) { return {m[0], m[2], m[1], m[3]}; }

// y = M v for row-major 6x6.
inline Vec6 apply6(const Mat6& m, const Vec6& v) {
    Vec6 y{};
    for (int r = 0; r < 6; ++r) {
        double s = 0;
        for (int c = 0; c < 6; ++c) s += m[r * 6 + c] * v[c];
        y[r] = s;
    }
    return y;
}

inline Mat6 identity6() {
    Mat6 m{};
    for (int i = 0; i < 6; ++i) m[i * 6 + i] = 1.0;
    return m;
}

}  // namespace hill

#endif
