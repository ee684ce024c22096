// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_INDICES_HPP
#define HILL_INDICES_HPP

#include <optional>
#include <string>
#include <vector>

#include "hill/monodromy.hpp"

namespace hill {

inline constexpr double kDaysPerYear = 365.25;

struct IndexReport {
    int mu_p = 0;
    int mu_s = 0;
    int mu_total = 0;
    int rot_p = 0;                // complete rotations, floor(theta/2pi)
    int rot_s = 0;
    double theta_final = 0;       // unwrapped theta(T_q)
    double vartheta_final = 0;    // unwrapped vartheta(T_q)
    std::string method = "unwrapped";
};

// Transverse-oscillation zero counts over one period: sign changes of the
// normal offset <dq, nu> of the transported planar basis vector, and of the
// dq3 component of the spatial one.  The reduced phase advances monotonically
// through these zeros (Sturm), so the counts pin the rotation windows
// theta(T_q) in ((Z-1/2)pi, (Z+1/2)pi).
struct OrbitAnalysis {
    StabilityReport stab;
    long zeros_p = 0;
    long zeros_s = 0;
    bool counts_valid = false;    // planar orbits only
    double min_r = 0;             // closest approach to the origin
    Mat6 monodromy{};
};

OrbitAnalysis analyze_orbit(const PeriodicOrbit& orbit,
                            const IntegrationConfig& cfg = {});

// Unwrapped rotation angle of one block, snapped to the endpoint data:
// elliptic -> 2 pi k + phi, hyperbolic -> m pi with the class parity.
// Throws ConvergenceError when the zero count and endpoint disagree.
double snapped_angle(const BlockReport& block, long zeros);

enum class Block { Planar, Spatial };
double rotation_number(const PeriodicOrbit& orbit, Block which,
                       const IntegrationConfig& cfg = {});

// Conley-Zehnder indices of a planar orbit from the unwrapped angles:
// elliptic mu = 2 floor(theta/2pi) + 1, hyperbolic mu = m.
IndexReport cz_index(const PeriodicOrbit& orbit, const OrbitAnalysis& analysis);
IndexReport cz_index(const PeriodicOrbit& orbit, const IntegrationConfig& cfg = {});

// Per-block index iteration: hyperbolic n mu, elliptic 2 floor(n theta / 2pi) + 1.
int index_iteration_block(const BlockReport& block, double theta_final, int n);

// Sum over both blocks of a planar orbit report.
int index_iteration(const IndexReport& report, const StabilityReport& stab, int n);

struct PeriodTriple {
    double t_synodic = 0;                     // days
    std::optional<double> t_anomalistic;      // absent when planar block not elliptic
    std::optional<double> t_draconitic;       // absent when spatial block not elliptic
    double lunarity = 0;                      // mean synodic months per year
};

PeriodTriple lunar_periods(const PeriodicOrbit& orbit, const IndexReport& report,
                           const StabilityReport& stab);

struct CoverReport {
    int cover = 1;
    int mu_of_cover = 0;
    bool good = true;
};

// Good iff both per-block index parities of the n-th cover match the simple
// orbit's; bad covers only arise from even covers of negative hyperbolic
// blocks.
CoverReport good_bad(const IndexReport& report, const StabilityReport& stab, int n);

struct IndexEntry {
    int mu = 0;
    int multiplicity = 1;
    bool good = true;
};

// Sum of multiplicity * (-1)^mu over good entries.
int euler_characteristic(const std::vector<IndexEntry>& entries);

}  // namespace hill

#endif
