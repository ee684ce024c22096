// SPDX-License-Identifier: Apache-2.0
//
// hill-orbits: periodic orbits, Floquet multipliers and Conley-Zehnder
// indices in the spatial Hill lunar problem.

#include "hill/monodromy.hpp"

#include <algorithm>
#include <cmath>

#include "hill/dynamics.hpp"

namespace hill {

namespace {

Vec6 unit6(int i) {
    Vec6 v{};
    v[i] = 1.0;
    return v;
}

// omega(e_qi, -e_pi) = 1 and omega(e_pi, e_qi) = 1 in the <Jv,w> convention.
Vec6 partner(int coord) {
    Vec6 v{};
    if (coord < 3) v[coord + 3] = -1.0;
    else v[coord - 3] = 1.0;
    return v;
}

}  // namespace

LagrangianBasis reduced_basis(const PhaseState& x0, Sym rho, bool planar,
                              double floor) {
    const auto spec = fixed_set(rho);
    const Vec6 g = grad_gamma(x0, floor);

    LagrangianBasis basis;

    std::vector<int> free = spec.free_coords();
    if (planar) {
        // keep the planar free pair; the spatial split pair is separate
        std::vector<int> pf;
        for (int i : free)
            if (i != 2 && i != 5) pf.push_back(i);
        free = pf;
    }

    // dependent coordinate: prefer p3, then the in-plane momentum; fall back
    // when the energy gradient is degenerate in that direction.
    std::vector<int> pref;
    for (int c : {5, 4, 3, 0, 1}) {
        if (planar && (c == 2 || c == 5)) continue;
        if (std::find(free.begin(), free.end(), c) != free.end()) pref.push_back(c);
    }
    int dep = -1;
    for (int c : pref)
        if (std::abs(g[c]) > 1e-10) {
            dep = c;
            break;
        }
    if (dep < 0) throw DomainError("reduced_basis: degenerate energy gradient");
    basis.dependent = dep;

    for (int c : free) {
        if (c == dep) continue;
        Vec6 vt = unit6(c);
        vt[dep] = -g[c] / g[dep];
        basis.vts.push_back(vt);
        basis.wts.push_back(partner(c));
    }

    if (planar) {
        // spatial pair of the sigma-splitting: q3 is free for rho1/rho2
        basis.spatial_v = unit6(2);
        basis.spatial_w = partner(2);
    }
    return basis;
}

ReducedMonodromyPlanar extract_planar_reduced(const Mat6& m,
                                              const LagrangianBasis& basis) {
    if (basis.vts.size() != 1)
        throw StructureError("extract_planar_reduced: expected a 1-pair basis");
    const Vec6& vt = basis.vts[0];
    const Vec6& wt = basis.wts[0];
    const Vec6 u1 = apply6(m, vt);
    const Vec6 u2 = apply6(m, wt);
    ReducedMonodromyPlanar r;
    r.Ap = {omega6(u1, wt), omega6(u2, wt), omega6(vt, u1), omega6(vt, u2)};
    const Vec6 u3 = apply6(m, basis.spatial_v);
    const Vec6 u4 = apply6(m, basis.spatial_w);
    r.As = {omega6(u3, basis.spatial_w), omega6(u4, basis.spatial_w),
            omega6(basis.spatial_v, u3), omega6(basis.spatial_v, u4)};
    return r;
}

ReducedMonodromySpatial extract_spatial_reduced(const Mat6& m,
                                                const LagrangianBasis& basis) {
    if (basis.vts.size() != 2)
        throw StructureError("extract_spatial_reduced: expected a 2-pair basis");
    ReducedMonodromySpatial r;
    for (int j = 0; j < 2; ++j) {
        const Vec6 u = apply6(m, basis.vts[j]);
        for (int i = 0; i < 2; ++i) {
            r.A[i * 2 + j] = omega6(u, basis.wts[i]);
            r.C[i * 2 + j] = omega6(basis.vts[i], u);
        }
    }
    for (int j = 0; j < 2; ++j) {
        const Vec6 u = apply6(m, basis.wts[j]);
        for (int i = 0; i < 2; ++i) r.B[i * 2 + j] = omega6(u, basis.wts[i]);
    }
    return r;
}

double ReducedMonodromySpatial::structure_residual() const {
    auto asym = [](const Mat2& m) { return std::abs(m[1] - m[2]); };
    const Mat2 ca = mul2(C, A);
    const Mat2 ab = mul2(A, B);
    const Mat2 a2 = mul2(A, A);
    const Mat2 bc = mul2(B, C);
    double worst = std::max({asym(B), asym(C), asym(ca), asym(ab)});
    const Mat2 want_i{a2[0] - bc[0] - 1.0, a2[1] - bc[1], a2[2] - bc[2],
                      a2[3] - bc[3] - 1.0};
    for (double x : want_i) worst = std::max(worst, std::abs(x));
    return worst;
}

namespace {

void require_planar(const PeriodicOrbit& orbit) {
    if (!orbit.seed.planar)
        throw DomainError("operation requires a planar orbit");
    if (std::abs(orbit.initial.q[2]) > 1e-12 || std::abs(orbit.initial.p[2]) > 1e-12)
        throw DomainError("orbit initial state is not planar");
}

}  // namespace

ReducedMonodromyPlanar planar_reduced_monodromy(const PeriodicOrbit& orbit,
                                                const IntegrationConfig& cfg) {
    require_planar(orbit);
    const auto basis =
        reduced_basis(orbit.initial, orbit.seed.start_sym, true, cfg.collision_floor);
    const auto res = flow_with_frame(orbit.initial, TangentFrame{}, orbit.period, cfg);
    return extract_planar_reduced(res.frame.m, basis);
}

ReducedMonodromySpatial spatial_reduced_monodromy(const PeriodicOrbit& orbit,
                                                  const IntegrationConfig& cfg) {
    const auto basis =
        reduced_basis(orbit.initial, orbit.seed.start_sym, false, cfg.collision_floor);
    const auto res = flow_with_frame(orbit.initial, TangentFrame{}, orbit.period, cfg);
    return extract_spatial_reduced(res.frame.m, basis);
}

const char* block_class_name(BlockClass c) {
    switch (c) {
        case BlockClass::Elliptic: return "elliptic";
        case BlockClass::PosHyperbolicI: return "pos-hyperbolic-I";
        case BlockClass::PosHyperbolicII: return "pos-hyperbolic-II";
        case BlockClass::NegHyperbolicI: return "neg-hyperbolic-I";
        case BlockClass::NegHyperbolicII: return "neg-hyperbolic-II";
        case BlockClass::Degenerate: return "degenerate";
    }
    return "?";
}

bool is_elliptic(BlockClass c) { return c == BlockClass::Elliptic; }

bool is_hyperbolic(BlockClass c) {
    return c == BlockClass::PosHyperbolicI || c == BlockClass::PosHyperbolicII ||
           c == BlockClass::NegHyperbolicI || c == BlockClass::NegHyperbolicII;
}

BlockReport classify_block(const Mat2& m, double tol_det, double tol_degenerate) {
    if (std::abs(det2(m) - 1.0) > tol_det)
        throw StructureError("classify_block: determinant deviates from 1 by more than tol_det");
    BlockReport rep;
    rep.trace = trace2(m);
    const double b = m[1], c = m[2];
    rep.sign_b = (b > 0) - (b < 0);
    rep.sign_c = (c > 0) - (c < 0);
    const double tr = rep.trace;
    if (std::abs(tr) < 2.0 - tol_degenerate) {
        rep.cls = BlockClass::Elliptic;
        const double theta = std::acos(std::clamp(tr / 2.0, -1.0, 1.0));
        rep.angle = (b < 0) ? theta : 2.0 * M_PI - theta;
        if (b * c > 0)
            throw StructureError("classify_block: elliptic block with b*c > 0");
    } else if (std::abs(tr) > 2.0 + tol_degenerate) {
        if (b * c < 0)
            throw StructureError("classify_block: hyperbolic block with b*c < 0");
        rep.lambda = tr / 2.0 + (tr > 0 ? 1.0 : -1.0) * std::sqrt(tr * tr / 4.0 - 1.0);
        if (tr > 0)
            rep.cls = (b < 0 && c < 0) ? BlockClass::PosHyperbolicI
                                       : BlockClass::PosHyperbolicII;
        else
            rep.cls = (b > 0 && c > 0) ? BlockClass::NegHyperbolicI
                                       : BlockClass::NegHyperbolicII;
    } else {
        rep.cls = BlockClass::Degenerate;
    }
    return rep;
}

std::array<std::complex<double>, 2> block_multipliers(const Mat2& m) {
    const std::complex<double> tr(trace2(m), 0);
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

namespace {

std::array<std::complex<double>, 2> eig2(const Mat2& a) {
    const std::complex<double> tr(trace2(a), 0);
    const std::complex<double> det(det2(a), 0);
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

void sort_multipliers(std::vector<std::complex<double>>& mults) {
    std::sort(mults.begin(), mults.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (std::abs(ma - mb) > 1e-14 * std::max(ma, mb)) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
}

}  // namespace

std::vector<std::complex<double>> floquet_multipliers(const ReducedMonodromySpatial& r) {
    std::vector<std::complex<double>> out;
    for (const auto& alpha : eig2(r.A)) {
        const std::complex<double> disc = std::sqrt(alpha * alpha - 1.0);
        out.push_back(alpha + disc);
        out.push_back(alpha - disc);
    }
    sort_multipliers(out);
    return out;
}

std::vector<std::complex<double>> floquet_multipliers(const ReducedMonodromyPlanar& r) {
    std::vector<std::complex<double>> out;
    for (const auto& l : block_multipliers(r.Ap)) out.push_back(l);
    for (const auto& l : block_multipliers(r.As)) out.push_back(l);
    sort_multipliers(out);
    return out;
}

std::array<double, 5> characteristic_polynomial(const ReducedMonodromySpatial& r) {
    const double tr = trace2(r.A);
    const double det = det2(r.A);
    return {1.0, -2.0 * tr, 2.0 + 4.0 * det, -2.0 * tr, 1.0};
}

std::vector<SpatialEigen> signatures(const ReducedMonodromySpatial& r) {
    std::vector<SpatialEigen> out;
    const auto alphas = eig2(r.A);
    const bool real = std::abs(alphas[0].imag()) < 1e-9 * (1.0 + std::abs(alphas[0]));
    const bool simple = std::abs(alphas[0] - alphas[1]) >
                        1e-6 * (1.0 + std::abs(alphas[0]));

    auto eigvec = [](const Mat2& a, double alpha) -> std::array<double, 2> {
        // rows of (A - alpha I) are both orthogonal-ish to the eigenvector
        const std::array<double, 2> v1{a[1], alpha - a[0]};
        const std::array<double, 2> v2{alpha - a[3], a[2]};
        const double n1 = std::abs(v1[0]) + std::abs(v1[1]);
        const double n2 = std::abs(v2[0]) + std::abs(v2[1]);
        return n1 >= n2 ? v1 : v2;
    };

    for (const auto& alpha : alphas) {
        SpatialEigen e;
        e.alpha = alpha;
        e.real = real;
        const std::complex<double> disc = std::sqrt(alpha * alpha - 1.0);
        std::complex<double> lam = alpha + disc;
        if (std::abs(lam) < 1.0) lam = alpha - disc;
        e.lambda = lam;
        if (real && simple) {
            const double al = alpha.real();
            const auto v = eigvec(r.A, al);
            const auto vt = eigvec(transpose2(r.A), al);
            const double qC =
                v[0] * (r.C[0] * v[0] + r.C[1] * v[1]) + v[1] * (r.C[2] * v[0] + r.C[3] * v[1]);
            const double qB = vt[0] * (r.B[0] * vt[0] + r.B[1] * vt[1]) +
                              vt[1] * (r.B[2] * vt[0] + r.B[3] * vt[1]);
            e.sign_C = (qC > 0) - (qC < 0);
            e.sign_B = (qB > 0) - (qB < 0);
            if (std::abs(al) < 1.0) {
                e.elliptic = true;
                const double theta = std::acos(std::clamp(al, -1.0, 1.0));
                e.angle = (qB < 0) ? theta : 2.0 * M_PI - theta;
            }
        }
        out.push_back(e);
    }
    return out;
}

StabilityReport stability_from_monodromy(const PeriodicOrbit& orbit,
                                         const Mat6& monodromy, double floor) {
    StabilityReport rep;
    rep.planar = orbit.seed.planar;
    const auto basis =
        reduced_basis(orbit.initial, orbit.seed.start_sym, rep.planar, floor);
    if (rep.planar) {
        rep.rm_planar = extract_planar_reduced(monodromy, basis);
        rep.block_p = classify_block(rep.rm_planar.Ap);
        rep.block_s = classify_block(rep.rm_planar.As);
        rep.multipliers = floquet_multipliers(rep.rm_planar);
    } else {
        rep.rm_spatial = extract_spatial_reduced(monodromy, basis);
        rep.eigens = signatures(rep.rm_spatial);
        rep.multipliers = floquet_multipliers(rep.rm_spatial);
    }
    return rep;
}

StabilityReport stability(const PeriodicOrbit& orbit, const IntegrationConfig& cfg) {
    const auto res = flow_with_frame(orbit.initial, TangentFrame{}, orbit.period, cfg);
    return stability_from_monodromy(orbit, res.frame.m, cfg.collision_floor);
}

}  // namespace hill
