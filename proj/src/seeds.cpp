// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/seeds.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hill {

namespace {

Sym sym_of(const std::string& s) {
    if (s == "rho1") return Sym::Rho1;
    if (s == "rho2") return Sym::Rho2;
    if (s == "rho1bar") return Sym::Rho1Bar;
    if (s == "rho2bar") return Sym::Rho2Bar;
    throw DomainError("seed file: unknown symmetry '" + s + "'");
}

const char* sym_name(Sym s) {
    switch (s) {
        case Sym::Rho1: return "rho1";
        case Sym::Rho2: return "rho2";
        case Sym::Rho1Bar: return "rho1bar";
        case Sym::Rho2Bar: return "rho2bar";
        default: throw DomainError("seed file: symmetry has no seed-file name");
    }
}

}  // namespace

SeedRecord parse_seed_line(const std::string& line) {
    std::istringstream is(line);
    std::string family, start, target, geom, vsign, kcross, mp, ms, mu;
    SeedRecord rec;
    if (!(is >> family >> rec.seed.gamma >> start >> target >> geom >>
          rec.seed.param1 >> rec.seed.param2 >> vsign >> rec.seed.cover >> kcross >>
          mp >> ms >> mu))
        throw DomainError("seed file: malformed record '" + line + "'");
    rec.seed.family = family;
    rec.seed.start_sym = sym_of(start);
    rec.seed.target_sym = sym_of(target);
    if (geom == "planar") rec.seed.planar = true;
    else if (geom == "spatial") rec.seed.planar = false;
    else throw DomainError("seed file: geometry must be planar or spatial");
    if (vsign == "+") rec.seed.velocity_sign = +1;
    else if (vsign == "-") rec.seed.velocity_sign = -1;
    else throw DomainError("seed file: velocity sign must be + or -");
    rec.seed.crossing_index = (kcross == "auto") ? 0 : std::stoi(kcross);
    if (mp != "-") rec.mu_p = std::stoi(mp);
    if (ms != "-") rec.mu_s = std::stoi(ms);
    if (mu != "-") rec.mu = std::stoi(mu);
    return rec;
}

std::vector<SeedRecord> load_seeds(std::istream& is) {
    std::vector<SeedRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        const auto pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        out.push_back(parse_seed_line(line));
    }
    return out;
}

std::vector<SeedRecord> load_seed_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open seed file: " + path);
    return load_seeds(f);
}

std::vector<SeedRecord> seeds_for_family(const std::vector<SeedRecord>& all,
                                         const std::string& family) {
    std::vector<SeedRecord> out;
    for (const auto& r : all)
        if (r.seed.family == family) out.push_back(r);
    return out;
}

const SeedRecord* nearest_seed(const std::vector<SeedRecord>& all,
                               const std::string& family, double gamma) {
    const SeedRecord* best = nullptr;
    for (const auto& r : all) {
        if (r.seed.family != family) continue;
        if (best == nullptr ||
            std::abs(r.seed.gamma - gamma) < std::abs(best->seed.gamma - gamma))
            best = &r;
    }
    return best;
}

std::string format_seed_line(const SeedRecord& rec) {
    std::ostringstream os;
    os.precision(12);
    os << rec.seed.family << ' ' << rec.seed.gamma << ' '
       << sym_name(rec.seed.start_sym) << ' ' << sym_name(rec.seed.target_sym) << ' '
       << (rec.seed.planar ? "planar" : "spatial") << ' ' << rec.seed.param1 << ' '
       << rec.seed.param2 << ' ' << (rec.seed.velocity_sign > 0 ? '+' : '-') << ' '
       << rec.seed.cover << ' ';
    if (rec.seed.crossing_index == 0) os << "auto";
    else os << rec.seed.crossing_index;
    auto mu_str = [](int m) { return m == INT_MIN ? std::string("-") : std::to_string(m); };
    os << ' ' << mu_str(rec.mu_p) << ' ' << mu_str(rec.mu_s) << ' ' << mu_str(rec.mu);
    return os.str();
}

}  // namespace hill
