// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_MONODROMY_HPP
#define HILL_MONODROMY_HPP

#include <complex>
#include <optional>
#include <vector>

#include "hill/symmetries.hpp"

namespace hill {

// Symmetry-adapted reduced basis at a point of Fix(rho).  vts and wts pair
// as omega(vt_i, wt_j) = delta_ij; both are omega-orthogonal to X_H via the
// linearized energy condition.
struct LagrangianBasis {
    std::vector<Vec6> vts;
    std::vector<Vec6> wts;
    Vec6 spatial_v{};   // planar orbits: (dq3, dp3) pair of the splitting
    Vec6 spatial_w{};
    int dependent = -1;  // coordinate eliminated through the energy condition
};

// Builds the reduced basis; planar = true gives the 1+1 split (planar pair +
// spatial pair), planar = false the Sp^rho0(2) basis.  When the preferred
// dependent coordinate has |dGamma/dcoord| below 1e-10 the next admissible
// one is used.
LagrangianBasis reduced_basis(const PhaseState& x0, Sym rho, bool planar,
                              double floor = kCollisionFloor);

struct ReducedMonodromyPlanar {
    Mat2 Ap{};   // raw entries; diagonal agreement ~ integration error
    Mat2 As{};
};

struct ReducedMonodromySpatial {
    Mat2 A{};
    Mat2 B{};
    Mat2 C{};
    // max of ||B-B^T||, ||C-C^T||, ||CA-(CA)^T||, ||AB-(AB)^T||, ||A^2-BC-I||
    double structure_residual() const;
};

ReducedMonodromyPlanar planar_reduced_monodromy(const PeriodicOrbit& orbit,
                                                const IntegrationConfig& cfg = {});
ReducedMonodromySpatial spatial_reduced_monodromy(const PeriodicOrbit& orbit,
                                                  const IntegrationConfig& cfg = {});

// Extraction from an already transported frame (the continuation reuses the
// transport it needs anyway).
ReducedMonodromyPlanar extract_planar_reduced(const Mat6& monodromy,
                                              const LagrangianBasis& basis);
ReducedMonodromySpatial extract_spatial_reduced(const Mat6& monodromy,
                                                const LagrangianBasis& basis);

enum class BlockClass {
    Elliptic,
    PosHyperbolicI,    // tr > 2, b < 0, c < 0
    PosHyperbolicII,   // tr > 2, b > 0, c > 0
    NegHyperbolicI,    // tr < -2, b > 0, c > 0
    NegHyperbolicII,   // tr < -2, b < 0, c < 0
    Degenerate,
};

const char* block_class_name(BlockClass c);
bool is_elliptic(BlockClass c);
bool is_hyperbolic(BlockClass c);

struct BlockReport {
    BlockClass cls = BlockClass::Degenerate;
    double trace = 0;
    double angle = 0;    // mean rotation angle in (0,2pi), elliptic only
    double lambda = 0;   // off-unit real multiplier, hyperbolic only
    int sign_b = 0;
    int sign_c = 0;
};

// Sp^rho0(1) classification with the section 4.5 subcases and the b-sign
// angle convention (b<0 -> theta, b>0 -> 2pi-theta).
BlockReport classify_block(const Mat2& m, double tol_det = 5e-4,
                           double tol_degenerate = 1e-12);

// lambda^2 - tr lambda + 1 = 0
std::array<std::complex<double>, 2> block_multipliers(const Mat2& m);

// Multipliers of the assembled Sp^rho0(2) matrix via the spectrum of A
// (lambda + 1/lambda = 2 alpha), sorted by |lambda| then argument.
std::vector<std::complex<double>> floquet_multipliers(const ReducedMonodromySpatial& r);
std::vector<std::complex<double>> floquet_multipliers(const ReducedMonodromyPlanar& r);

// Coefficients of the characteristic polynomial of [[A,B],[C,A^T]]:
// lambda^4 - 2trA lambda^3 + (2+4detA) lambda^2 - 2trA lambda + 1.
std::array<double, 5> characteristic_polynomial(const ReducedMonodromySpatial& r);

// Per-eigenvalue data of the Sp^rho0(2) reduced monodromy.
struct SpatialEigen {
    std::complex<double> alpha;           // eigenvalue of A
    bool real = true;
    std::complex<double> lambda;          // multiplier with |lambda| >= 1
    int sign_C = 0;                       // sign(v^T C v), 0 if unavailable
    int sign_B = 0;                       // sign(vt^T B vt)
    bool elliptic = false;
    double angle = 0;                     // in (0,2pi) when elliptic
};

// Signatures per simple real eigenvalue of A (Lagrangian-basis invariants);
// complex eigenvalues are reported with raw multipliers and no signs.
std::vector<SpatialEigen> signatures(const ReducedMonodromySpatial& r);

struct StabilityReport {
    bool planar = true;
    ReducedMonodromyPlanar rm_planar{};
    ReducedMonodromySpatial rm_spatial{};
    BlockReport block_p{};                 // planar orbits
    BlockReport block_s{};
    std::vector<SpatialEigen> eigens;      // spatial orbits
    std::vector<std::complex<double>> multipliers;
};

StabilityReport stability(const PeriodicOrbit& orbit,
                          const IntegrationConfig& cfg = {});

// Extraction-only variant when the full-period monodromy is already known.
StabilityReport stability_from_monodromy(const PeriodicOrbit& orbit,
                                         const Mat6& monodromy,
                                         double floor = kCollisionFloor);

}  // namespace hill

#endif
