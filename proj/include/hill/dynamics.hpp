// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_DYNAMICS_HPP
#define HILL_DYNAMICS_HPP

#include <vector>

#include "hill/types.hpp"

namespace hill {

// Default lower bound on |q|.  Family g approaches collision as
// Gamma -> -inf; runs must fail loudly instead of blowing up.
inline constexpr double kCollisionFloor = 1e-6;

// H(q,p) = 1/2|p|^2 - 1/|q| + p1 q2 - p2 q1 - q1^2 + 1/2 q2^2 + 1/2 q3^2
double hamiltonian(const PhaseState& s, double floor = kCollisionFloor);

// V(q) = -1/|q| - 3/2 q1^2 + 1/2 q3^2
double effective_potential(const Vec3& q, double floor = kCollisionFloor);

// Traditional Jacobi integral in (q,qdot):
// Gamma = 2/|q| + 3 q1^2 - q3^2 - qd1^2 - qd2^2 - qd3^2 = -2 H.
double jacobi_gamma(const VelocityState& v, double floor = kCollisionFloor);

PhaseState to_phase(const VelocityState& v);
VelocityState to_velocity(const PhaseState& s);

// Hamiltonian vector field X_H in (q,p) coordinates.
Vec6 vector_field(const PhaseState& s, double floor = kCollisionFloor);

// grad V
Vec3 grad_V(const Vec3& q, double floor = kCollisionFloor);

// Hessian of V, closed form (variational accuracy drives monodromy accuracy).
std::array<double, 9> hessian_V(const Vec3& q, double floor = kCollisionFloor);

// d X_H(s) applied to xi (linearized Hill equation in (q,p) coordinates).
Vec6 variational_rhs(const PhaseState& s, const Vec6& xi,
                     double floor = kCollisionFloor);

// Jacobian of the vector field as a 6x6 matrix.
Mat6 vector_field_jacobian(const PhaseState& s, double floor = kCollisionFloor);

// Gradient of the Jacobi integral Gamma in (q,p) coordinates.
Vec6 grad_gamma(const PhaseState& s, double floor = kCollisionFloor);

// The two critical points q = (+-3^(-1/3),0,0), p = (0,+-3^(-1/3),0); both
// have H = -(1/2) 3^(4/3) (traditional Gamma_crit = 3^(4/3)).
std::vector<PhaseState> critical_points();

inline double gamma_crit() { return std::pow(3.0, 4.0 / 3.0); }

}  // namespace hill

#endif
