#include "nlsdbar/dbar.hpp"

#include <cmath>

#include "nlsdbar/nls.hpp"

namespace nlsdbar::dbar {

namespace {

constexpr double quarter = pi / 4;

bool in_closure(int sector, double phi, double v) {
    switch (sector) {
        case 1: return phi >= 0.0 && phi <= quarter && v >= 0.0;
        case 2: return phi > quarter && phi < 3 * quarter;
        case 3: return phi >= 3 * quarter && v >= 0.0;
        case 4: return phi <= -3 * quarter && v <= 0.0;
        case 5: return phi > -3 * quarter && phi < -quarter;
        case 6: return phi >= -quarter && phi <= 0.0 && v <= 0.0;
        default: return false;
    }
}

phase::Side side_of(int sector) {
    if (sector == 3) return phase::Side::upper;
    if (sector == 4) return phase::Side::lower;
    return phase::Side::none;
}

// E_j = K + cos(2 phi) (F(z) R(u) - K) with F analytic in the sector.
struct Parts {
    cplx F, R, dR, K;
};

Parts parts(int j, double u, double v, const phase::FFunction& f, const ScatteringData& sd,
            double m, cplx rot) {
    Parts p;
    const cplx r = sd.r(u);
    const cplx dr = sd.dr(u);
    const double n = std::norm(r);
    const double dn = 2.0 * (std::conj(r) * dr).real();
    const double k0 = 1.0 / (1.0 - m * m);
    const cplx lf = sd.is_zero() ? cplx(0.0) : f.log_f(cplx(u, v), side_of(j));
    switch (j) {
        case 1:
            p.F = std::exp(-2.0 * lf) * rot;
            p.R = r;
            p.dR = dr;
            p.K = m;
            break;
        case 4:
            p.F = std::exp(-2.0 * lf) * rot;
            p.R = r / (1.0 - n);
            p.dR = dr / (1.0 - n) + r * dn / ((1.0 - n) * (1.0 - n));
            p.K = m * k0;
            break;
        case 3:
            p.F = -std::exp(2.0 * lf) * std::conj(rot);
            p.R = std::conj(r) / (1.0 - n);
            p.dR = std::conj(dr) / (1.0 - n) + std::conj(r) * dn / ((1.0 - n) * (1.0 - n));
            p.K = -m * k0;
            break;
        case 6:
            p.F = -std::exp(2.0 * lf) * std::conj(rot);
            p.R = std::conj(r);
            p.dR = std::conj(dr);
            p.K = -m;
            break;
        default: throw InputError("dbar_correction", "extension_E", "sector must be 1, 3, 4 or 6");
    }
    return p;
}

cplx dbar_from_parts(const Parts& q, double rho, double phi) {
    const double c2 = std::cos(2.0 * phi);
    const double s2 = std::sin(2.0 * phi);
    return c2 * q.F * q.dR * 0.5 + (q.F * q.R - q.K) * (-I * std::polar(1.0, phi) * s2 / rho);
}

void check_j(int j, const SectorPoint& p, const char* op) {
    if (j != 1 && j != 3 && j != 4 && j != 6)
        throw InputError("dbar_correction", op, "sector must be 1, 3, 4 or 6");
    if (p.sector != j) throw InputError("dbar_correction", op, "point outside the sector");
}

// Angle of the wedge point at distance psi from the real-axis edge.
double wedge_phi(int j, double psi) {
    switch (j) {
        case 1: return psi;
        case 3: return pi - psi;
        case 4: return -pi + psi;
        default: return -psi;
    }
}

// Rescaled-plane sector of the parametrix formula used in Omega_j.
int zeta_sector(int j) {
    switch (j) {
        case 2: return 1;
        case 3: return 2;
        case 4: return -2;
        case 5: return -1;
        default: return 0;
    }
}

cplx rotation_for(const ScatteringData& sd, double z0) {
    const cplx r0 = sd.r(z0);
    const double m = std::abs(r0);
    return m > 0.0 ? std::conj(r0) / m : cplx(1.0);
}

cplx prefactor(double z0, double t, double nu, cplx c, cplx rot) {
    // e^{-2it theta(z0; z0)} = e^{4 i t z0^2}
    const double ph = 4.0 * t * z0 * z0 - 2.0 * nu * std::log(2.0 * std::sqrt(t));
    return rot * std::polar(1.0, ph) / (c * c);
}

double check_z0(double x, double t, const char* op) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("dbar_correction", op, "t must be positive");
    if (!std::isfinite(x)) throw InputError("dbar_correction", op, "x must be finite");
    return -x / (4.0 * t);
}

double check_m(const ScatteringData& sd, double z0, const char* op) {
    const double m = std::abs(sd.r(z0));
    if (!(m < 1.0)) throw InputError("dbar_correction", op, "|r(z0)| must be below 1");
    return m;
}

}  // namespace

SectorPoint sector_point(double u, double v, double z0) {
    if (u == z0 && v == 0.0) throw InputError("dbar_correction", "sector_point", "point is the vertex");
    SectorPoint p;
    p.u = u;
    p.v = v;
    p.rho = std::hypot(u - z0, v);
    p.phi = std::atan2(v, u - z0);
    if (v == 0.0) {
        p.phi = u > z0 ? 0.0 : pi;
        p.sector = u > z0 ? 1 : 3;
        return p;
    }
    const double a = p.phi;
    if (a > 0.0 && a <= quarter) p.sector = 1;
    else if (a > quarter && a < 3 * quarter) p.sector = 2;
    else if (a >= 3 * quarter) p.sector = 3;
    else if (a <= -3 * quarter) p.sector = 4;
    else if (a < -quarter) p.sector = 5;
    else p.sector = 6;
    return p;
}

SectorPoint sector_point(double u, double v, double z0, int sector) {
    if (u == z0 && v == 0.0) throw InputError("dbar_correction", "sector_point", "point is the vertex");
    SectorPoint p;
    p.u = u;
    p.v = v;
    p.sector = sector;
    p.rho = std::hypot(u - z0, v);
    p.phi = std::atan2(v, u - z0);
    if (v == 0.0) {
        if (u > z0) p.phi = 0.0;
        else p.phi = sector == 4 ? -pi : pi;
    }
    if (!in_closure(sector, p.phi, v))
        throw InputError("dbar_correction", "sector_point", "point outside the requested sector");
    return p;
}

CorrectionContext::CorrectionContext(const ScatteringData& sd, double x, double t, CorrectionOptions opt)
    : sd_(&sd), x_(x), t_(t), opt_(opt) {
    z0_ = check_z0(x, t, "CorrectionContext");
    m_ = check_m(sd, z0_, "CorrectionContext");
    f_ = std::make_shared<phase::FFunction>(sd, z0_, opt.phase);
    pc_ = std::make_shared<pc::Parametrix>(m_);
    pd_ = phase::phase_data(z0_, sd);
    rot_ = rotation_for(sd, z0_);
}

cplx extension_E(int j, const SectorPoint& p, const CorrectionContext& ctx) {
    check_j(j, p, "extension_E");
    if (ctx.data().is_zero()) return 0.0;
    const Parts q = parts(j, p.u, p.v, ctx.f(), ctx.data(), ctx.m(), ctx.rotation());
    return q.K + std::cos(2.0 * p.phi) * (q.F * q.R - q.K);
}

cplx dbar_E(int j, const SectorPoint& p, const CorrectionContext& ctx) {
    check_j(j, p, "dbar_E");
    if (!(p.rho > 0.0)) throw InputError("dbar_correction", "dbar_E", "vertex excluded");
    if (ctx.data().is_zero()) return 0.0;
    const Parts q = parts(j, p.u, p.v, ctx.f(), ctx.data(), ctx.m(), ctx.rotation());
    return dbar_from_parts(q, p.rho, p.phi);
}

Mat2 Delta_matrix(const SectorPoint& p, const CorrectionContext& ctx) {
    const int j = p.sector;
    if (j == 2 || j == 5) return Mat2::zero();
    const cplx d = dbar_E(j, p, ctx);
    // e^{2it(theta(z) - theta(z0))} = e^{4it(z - z0)^2}
    const cplx w = cplx(p.u - ctx.z0(), p.v);
    const cplx e = std::exp(4.0 * I * ctx.t() * w * w);
    switch (j) {
        case 1: return {0.0, 0.0, -d * e, 0.0};
        case 4: return {0.0, 0.0, d * e, 0.0};
        case 3: return {0.0, -d / e, 0.0, 0.0};
        default: return {0.0, d / e, 0.0, 0.0};
    }
}

Mat2 W_matrix(const SectorPoint& p, const CorrectionContext& ctx) {
    const Mat2 D = Delta_matrix(p, ctx);
    if (p.sector == 2 || p.sector == 5) return D;
    const cplx zeta = 2.0 * std::sqrt(ctx.t()) * cplx(p.u - ctx.z0(), p.v);
    const Mat2 P = ctx.pc().P(zeta, zeta_sector(p.sector));
    return P * D * P.inverse_unimodular();
}

cplx reconstruction_prefactor(const CorrectionContext& ctx) {
    return prefactor(ctx.z0(), ctx.t(), ctx.f().nu(), ctx.f().c(), ctx.rotation());
}

cplx leading_from_parametrix(const CorrectionContext& ctx) {
    return reconstruction_prefactor(ctx) * 0.5 * ctx.pc().beta() / std::sqrt(ctx.t());
}

CorrectionIntegrator::CorrectionIntegrator(const ScatteringData& sd, double z0, CorrectionOptions opt)
    : sd_(&sd), z0_(z0), opt_(opt) {
    if (!std::isfinite(z0)) throw InputError("dbar_correction", "q1_correction", "z0 must be finite");
    if (!(opt.cutoff_inner > 0.0 && opt.cutoff_outer > opt.cutoff_inner))
        throw InputError("dbar_correction", "q1_correction", "cutoff radii must satisfy 0 < inner < outer");
    const double m = check_m(sd, z0, "q1_correction");
    f_ = std::make_shared<phase::FFunction>(sd, z0, opt.phase);
    pc_ = std::make_shared<pc::Parametrix>(m);
    if (sd.is_zero()) return;
    numerics::PolarRuleOptions ro = opt.rule;
    ro.rho_max = opt.cutoff_outer;
    const auto rule = numerics::polar_wedge_rule(ro);
    const double span = opt.cutoff_outer - opt.cutoff_inner;
    for (int j : {1, 3, 4, 6}) {
        for (const auto& nd : rule) {
            const double w = nd.w * numerics::smooth_cutoff((nd.rho - opt.cutoff_inner) / span);
            if (w == 0.0) continue;
            const cplx zeta = std::polar(nd.rho, wedge_phi(j, nd.psi));
            cplx u11, u12;
            pc_->U_row1(zeta, zeta_sector(j), u11, u12);
            // W12 = dbar E_j times e^{+-i zeta^2} P1k^2, which is +-U1k^2.
            cplx uu;
            switch (j) {
                case 1: uu = u12 * u12; break;
                case 4: uu = -u12 * u12; break;
                case 3: uu = -u11 * u11; break;
                default: uu = u11 * u11; break;
            }
            if (uu == 0.0) continue;
            nodes_.push_back({nd.rho, nd.psi, w, j, uu});
        }
    }
}

cplx CorrectionIntegrator::W12_integral(double t) const {
    if (!(t > 0.0)) throw InputError("dbar_correction", "q1_correction", "t must be positive");
    if (nodes_.empty()) return 0.0;
    const double s = 2.0 * std::sqrt(t);
    const double m = pc_->m();
    const cplx rot = rotation_for(*sd_, z0_);
    cplx sum = 0.0;
    for (const auto& nd : nodes_) {
        const double phi = wedge_phi(nd.sector, nd.psi);
        const double rz = nd.rho / s;
        const double u = z0_ + rz * std::cos(phi);
        const double v = rz * std::sin(phi);
        const Parts q = parts(nd.sector, u, v, *f_, *sd_, m, rot);
        sum += nd.w * nd.uu * dbar_from_parts(q, rz, phi);
    }
    return sum / (s * s);
}

cplx CorrectionIntegrator::q1(double t) const {
    const cplx J = W12_integral(t);
    if (J == 0.0) return 0.0;
    const cplx pf = prefactor(z0_, t, f_->nu(), f_->c(), rotation_for(*sd_, z0_));
    return 2.0 * I / pi * pf * J;
}

double CorrectionIntegrator::W_L1(double t) const {
    if (!(t > 0.0)) throw InputError("dbar_correction", "W_L1", "t must be positive");
    if (sd_->is_zero()) return 0.0;
    const double s = 2.0 * std::sqrt(t);
    // Beyond the support dbar E reduces to the K term, which decays like rho^{-4}
    // after the angular integration; a few units of margin suffice.
    const double reach = std::max(std::abs(sd_->support_max() - z0_), std::abs(z0_ - sd_->support_min()));
    numerics::PolarRuleOptions ro = opt_.rule;
    ro.rho_max = std::max(2.0, s * reach + 20.0);
    ro.radial_ratio = opt_.norm_ratio;
    ro.radial_nodes = opt_.norm_radial_nodes;
    const auto rule = numerics::polar_wedge_rule(ro);
    const double m = pc_->m();
    const cplx rot = rotation_for(*sd_, z0_);
    double sum = 0.0;
    for (int j : {1, 3, 4, 6}) {
        for (const auto& nd : rule) {
            const double phi = wedge_phi(j, nd.psi);
            const cplx zeta = std::polar(nd.rho, phi);
            const Mat2 U = pc_->U(zeta, zeta_sector(j));
            // W is rank one; its norm is |dbar E| times the squared length of
            // the relevant column of U.
            const double col = (j == 1 || j == 4) ? std::norm(U.a12) + std::norm(U.a22)
                                                  : std::norm(U.a11) + std::norm(U.a21);
            const double rz = nd.rho / s;
            const Parts q = parts(j, z0_ + rz * std::cos(phi), rz * std::sin(phi), *f_, *sd_, m, rot);
            sum += nd.w * col * std::abs(dbar_from_parts(q, rz, phi));
        }
    }
    return sum / (s * s);
}

cplx q1_correction(double x, double t, const ScatteringData& sd, const CorrectionOptions& opt) {
    const double z0 = check_z0(x, t, "q1_correction");
    return CorrectionIntegrator(sd, z0, opt).q1(t);
}

double W_L1(double x, double t, const ScatteringData& sd, const CorrectionOptions& opt) {
    const double z0 = check_z0(x, t, "W_L1");
    return CorrectionIntegrator(sd, z0, opt).W_L1(t);
}

cplx corrected_q(double x, double t, const ScatteringData& sd, const CorrectionOptions& opt) {
    return evolution::nls_leading(sd, x, t) + q1_correction(x, t, sd, opt);
}

}  // namespace nlsdbar::dbar
