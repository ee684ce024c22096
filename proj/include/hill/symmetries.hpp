// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_SYMMETRIES_HPP
#define HILL_SYMMETRIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "hill/integrator.hpp"
#include "hill/types.hpp"

namespace hill {

// The eight linear symmetries; all are diagonal sign matrices in
// (q1,q2,q3,p1,p2,p3).
enum class Sym { Id, NegId, Sigma, NegSigma, Rho1, Rho2, Rho1Bar, Rho2Bar };

struct SymmetryElement {
    Sym id;
    const char* name;
    std::array<int, 6> signs;
    bool symplectic;   // M^T J M = +J; anti-symplectic otherwise
};

const SymmetryElement& symmetry(Sym s);
const std::array<SymmetryElement, 8>& symmetry_group();
Sym compose(Sym a, Sym b);

PhaseState apply_symmetry(Sym s, const PhaseState& x);
Vec6 apply_symmetry6(Sym s, const Vec6& v);

// Fixed-point set of an anti-symplectic element: free coordinates carry
// sign +1, zero coordinates sign -1.
struct FixedSetSpec {
    Sym sym;
    std::array<bool, 6> is_free;

    std::vector<int> free_coords() const;
    std::vector<int> zero_coords() const;
};

FixedSetSpec fixed_set(Sym s);

// Section coordinate used to time crossings of a fixed set: q2 for
// rho1/rho1bar starts, q1 for rho2/rho2bar.
int section_coord(Sym s);

// Zero coordinates of `target` evaluated at s, excluding the section
// coordinate; vanishes iff the orbit hits Fix(target) perpendicularly.
std::vector<double> perpendicularity_residual(const PhaseState& s, Sym target,
                                              bool planar_orbit);

// Symmetry-constrained initial data.  The free parameters per start set are
//   Fix(rho1),  planar : q1(0)                    (dependent qd2)
//   Fix(rho1),  spatial: q1(0), q3(0)             (dependent qd2)
//   Fix(rho2),  planar : q2(0)                    (dependent qd1)
//   Fix(rho2),  spatial: q2(0), q3(0)             (dependent qd1)
//   Fix(rho1bar)       : q1(0), qd2(0)            (dependent qd3)
//   Fix(rho2bar)       : q2(0), qd1(0)            (dependent qd3)
struct OrbitSeed {
    std::string family;
    Sym start_sym = Sym::Rho1;
    Sym target_sym = Sym::Rho2;
    double gamma = 0;
    bool planar = true;
    double param1 = 0;
    double param2 = 0;          // second free parameter (spatial seeds)
    int velocity_sign = +1;     // sign of the square-rooted dependent velocity
    int cover = 1;              // which iterate of the orbit is analyzed
    int crossing_index = 0;     // k-th crossing terminates the segment; 0 = auto

    int n_params() const;
    bool simply_symmetric() const { return target_sym == start_sym; }
    int multiplicity() const { return simply_symmetric() ? 2 : 4; }
};

// Fills the dependent velocity from the energy condition, applies
// velocity_sign and converts to momenta.  Throws DomainError when the
// radicand is negative (outside the Hill region).
PhaseState build_seed_state(const OrbitSeed& seed);

// d(state)/d(param_i) for the Newton corrector, energy condition included.
std::vector<Vec6> seed_state_tangents(const OrbitSeed& seed);

// d(state)/d(Gamma) at fixed parameters (pseudo-arclength corrector).
Vec6 seed_gamma_tangent(const OrbitSeed& seed);

struct ShootResult {
    double t_seg = 0;
    std::vector<double> residual;
    PhaseState state;        // state at the terminating crossing
    int crossing_index = 0;  // resolved k
};

// Integrates to the k-th crossing of the target section coordinate and
// evaluates the perpendicularity residual there.  crossing_index 0 scans the
// first crossings and freezes the first one whose residual is small.
ShootResult shoot(const OrbitSeed& seed, const IntegrationConfig& cfg = {});

struct PeriodicOrbit {
    OrbitSeed seed;            // converged parameters, resolved crossing index
    PhaseState initial;
    double t_seg = 0;          // shooting segment time (quarter or half period)
    double period = 0;         // first return time T_q
    double residual = 0;       // perpendicularity residual at convergence
    double closure = 0;        // || flow(x0, T_q) - x0 ||
};

struct RefineOptions {
    int max_iter = 25;
    double tol_residual = 1e-10;
    double tol_close = 1e-8;
};

// Newton iteration on the free parameters at fixed Gamma, Jacobian from the
// transported variational frame.  Throws ConvergenceError on divergence.
PeriodicOrbit refine_orbit(const OrbitSeed& seed, const IntegrationConfig& cfg = {},
                           const RefineOptions& opt = {});

}  // namespace hill

#endif
