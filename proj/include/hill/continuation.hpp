// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#ifndef HILL_CONTINUATION_HPP
#define HILL_CONTINUATION_HPP

#include <climits>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hill/indices.hpp"

namespace hill {

struct FamilyPoint {
    double gamma = 0;
    PeriodicOrbit orbit;
    StabilityReport stab;
    bool has_index = false;
    IndexReport index;            // unwrapped route, planar orbits
    PeriodTriple periods;         // planar orbits
    int mu_anchored = INT_MIN;    // anchored-continuation route
    double min_r = 0;             // closest approach to the origin
    long zeros_p = 0, zeros_s = 0;
};

enum class EventKind {
    IndexJump,          // the orbit's own block crosses eigenvalue 1
    RootOfUnity,        // k-th cover crosses eigenvalue 1 (k >= 2)
    BirthDeath,
    CollisionApproach,
    FamilyEndpoint,
};

const char* event_kind_name(EventKind k);

struct FamilyEvent {
    EventKind kind = EventKind::FamilyEndpoint;
    double gamma_star = 0;
    bool spatial_block = false;
    int cover = 1;
    double target_angle = 0;      // 2 pi j / k for root-of-unity events
    int mu_high = INT_MIN;        // index of the cover on the high-Gamma side
    int mu_low = INT_MIN;         // and on the low-Gamma side
    std::string detail;
};

struct ContinuationOptions {
    double step0 = 0.05;          // initial Gamma step magnitude
    double step_min = 1e-6;
    double arclength_switch = 50.0;
    int max_points = 4000;
    double collision_approach = 10.0;   // in units of the collision floor
    double gamma_tol_event = 1e-4;
};

struct FamilyTrace {
    std::string name;
    std::vector<FamilyPoint> points;
    std::vector<FamilyEvent> events;
    int direction = -1;           // sign of the initial Gamma stepping
    // provenance for graph assembly
    std::string parent;           // family this one bifurcated from, if any
    double birth_gamma = 0;
    int birth_cover = 1;
    bool mirror = false;          // sigma/-sigma image family (drawn dashed)
};

// Secant predictor in (Gamma, params), corrector refine_orbit at fixed
// Gamma; automatic step halving and a pseudo-arclength corrector near folds.
// Records stability, indices and periods per accepted point.
FamilyTrace continue_family(const OrbitSeed& seed0, double gamma_end,
                            const ContinuationOptions& opt = {},
                            const IntegrationConfig& cfg = {});

// Bisects sign changes of (tr -+ 2) and of (phi - 2 pi j/k) for k <= K,
// j coprime to k; annotates the index of the affected cover on both sides.
// Appends to trace.events and returns the newly found events.
std::vector<FamilyEvent> detect_events(FamilyTrace& trace, int covers_up_to,
                                       const IntegrationConfig& cfg = {},
                                       double gamma_tol = 1e-4);

// Folds of the Gamma axis along the trace.
std::vector<FamilyEvent> detect_birth_death(FamilyTrace& trace);

// Propagates the anchored index along the trace: constant between detected
// events (run detect_events first), cross-checked against the unwrapped
// route on planar orbits (hard error on mismatch).
void annotate_anchored(FamilyTrace& trace, int anchor_mu);

// Candidate seeds for families bifurcating at an index-jump or
// root-of-unity event; returns those whose refinement converges to an orbit
// distinct from the parent.
std::vector<OrbitSeed> branch_switch(const FamilyEvent& ev, const FamilyTrace& trace,
                                     double delta = 1e-3,
                                     const IntegrationConfig& cfg = {});

struct GraphVertex {
    std::string family;           // family owning the degenerate orbit
    int cover = 1;
    double gamma = 0;
    int mu_high = INT_MIN;
    int mu_low = INT_MIN;
    bool good_high = true, good_low = true;
    int chi_high = 0, chi_low = 0;
    bool balanced = true;
    std::string kind;
};

struct GraphEdge {
    std::string family;
    int cover = 1;
    int mu = 0;
    bool good = true;
    bool dashed = false;          // sigma-mirror family
    double gamma_high = 0, gamma_low = 0;
    int from_vertex = -1;         // vertex at gamma_high side (-1: open end)
    int to_vertex = -1;           // vertex at gamma_low side
};

struct BifurcationGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;
};

// Scenario description for graph assembly: which covers of which traces
// participate, and whether a sigma-mirror copy exists.
struct GraphMember {
    const FamilyTrace* trace;
    int cover = 1;
    bool with_mirror = false;
};

BifurcationGraph build_graph(const std::vector<GraphMember>& members);

// Exports.
void trace_to_csv(const FamilyTrace& trace, std::ostream& os);
void graph_to_dot(const BifurcationGraph& graph, std::ostream& os);
void graph_to_json(const BifurcationGraph& graph, std::ostream& os);

}  // namespace hill

#endif
