// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.
//
// Plain-text seed fixtures, one record per line:
//   family gamma start target geometry param1 param2 vsign cover kcross mu_p mu_s mu
// where start/target are rho1|rho2|rho1bar|rho2bar, geometry is
// planar|spatial, vsign is +|-, kcross is auto or a crossing count, and the
// three trailing columns are published index annotations ('-' if absent).

#ifndef HILL_SEEDS_HPP
#define HILL_SEEDS_HPP

#include <climits>
#include <iosfwd>
#include <string>
#include <vector>

#include "hill/symmetries.hpp"

namespace hill {

struct SeedRecord {
    OrbitSeed seed;
    int mu_p = INT_MIN;   // published per-block indices, when stated
    int mu_s = INT_MIN;
    int mu = INT_MIN;
};

SeedRecord parse_seed_line(const std::string& line);
std::vector<SeedRecord> load_seeds(std::istream& is);
std::vector<SeedRecord> load_seed_file(const std::string& path);

std::vector<SeedRecord> seeds_for_family(const std::vector<SeedRecord>& all,
                                         const std::string& family);

// The record of `family` closest to gamma.
const SeedRecord* nearest_seed(const std::vector<SeedRecord>& all,
                               const std::string& family, double gamma);

std::string format_seed_line(const SeedRecord& rec);

}  // namespace hill

#endif
