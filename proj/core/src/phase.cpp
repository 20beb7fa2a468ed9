#include "nlsdbar/phase.hpp"

#include <cmath>

#include "json.hpp"

namespace nlsdbar::phase {

cplx theta(cplx z, double z0) { return 2.0 * z * z - 4.0 * z0 * z; }

double nu(double r_abs) {
    if (!(r_abs >= 0.0 && r_abs < 1.0))
        throw InputError("phase_functionals", "nu", "|r| must lie in [0, 1)");
    return -std::log1p(-r_abs * r_abs) / (2.0 * pi);
}

namespace {

bool finite_check(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Principal log, with the boundary value chosen by side on the negative axis.
cplx side_log(cplx w, Side side, const char* op) {
    if (w.imag() == 0.0 && w.real() < 0.0) {
        if (side == Side::none)
            throw InputError("phase_functionals", op, "point on the cut needs a side");
        return {std::log(-w.real()), side == Side::upper ? pi : -pi};
    }
    if (w == 0.0) throw InputError("phase_functionals", op, "evaluation at z0");
    return std::log(w);
}

numerics::QuadOptions quad_opts(const PhaseOptions& o) {
    numerics::QuadOptions q;
    q.abs_tol = o.abs_tol;
    q.rel_tol = o.rel_tol;
    q.max_intervals = 20000;
    return q;
}

}  // namespace

FFunction::FFunction(const ScatteringData& sd, double z0, PhaseOptions opt)
    : sd_(&sd), z0_(z0), A_(sd.support_min()), opt_(opt) {
    if (!std::isfinite(z0)) throw InputError("phase_functionals", "f_function", "z0 must be finite");
    g0_ = sd.g(z0);
    nu_ = -g0_ / (2.0 * pi);
    split_ = 0.0;
    if (!sd.is_zero() && z0 > A_) {
        numerics::QuadOptions q = quad_opts(opt_);
        const double smax = sd.support_max();
        q.breakpoints = {smax};
        const double m = std::max(A_, z0 - 1.0);
        if (m > A_) {
            auto f1 = [&](double s) { return sd.g(s) / (s - z0); };
            split_ += numerics::adaptive_quad_t(f1, A_, m, q).value.real();
        }
        // g vanishes on [z0-1, A) so that piece is -g0 ln(z0 - A) in closed form.
        if (m > z0 - 1.0) split_ += -g0_ * std::log(z0 - m);
        auto f2 = [&](double s) { return (sd.g(s) - g0_) / (s - z0); };
        split_ += numerics::adaptive_quad_t(f2, m, z0, q).value.real();
    }
    c_ = std::polar(1.0, split_ / (2.0 * pi));
}

cplx FFunction::cauchy(cplx z, Side side) const {
    if (sd_->is_zero() || !(z0_ > A_)) return 0.0;
    const double p = std::clamp(z.real(), A_, z0_);
    const double gp = sd_->g(p);
    const double dgp = sd_->dg(p);
    const cplx l0 = side_log(z - z0_, side, "delta");
    const cplx lA = side_log(z - A_, side, "delta");
    const cplx closed = gp * (l0 - lA) + dgp * ((z0_ - A_) + (z - p) * (l0 - lA));
    auto rem = [&](double s) {
        const double R = sd_->g(s) - gp - dgp * (s - p);
        return R / (s - z);
    };
    numerics::QuadOptions q = quad_opts(opt_);
    q.breakpoints = {p, sd_->support_max()};
    return closed + numerics::adaptive_quad_t(rem, A_, z0_, q).value;
}

cplx FFunction::log_delta(cplx z, Side side) const {
    if (!finite_check(z)) throw InputError("phase_functionals", "delta", "non-finite z");
    if (z.imag() == 0.0 && z.real() < z0_ && side == Side::none)
        throw InputError("phase_functionals", "delta", "point on the cut needs a side");
    if (z == cplx(z0_)) throw InputError("phase_functionals", "delta", "evaluation at z0");
    return cauchy(z, side) / (2.0 * pi * I);
}

cplx FFunction::log_f(cplx z, Side side) const {
    if (!finite_check(z)) throw InputError("phase_functionals", "f_function", "non-finite z");
    if (z == cplx(z0_)) throw InputError("phase_functionals", "f_function", "evaluation at z0");
    if (z.imag() == 0.0 && z.real() < z0_ && side == Side::none)
        throw InputError("phase_functionals", "f_function", "point on the cut needs a side");
    if (sd_->is_zero()) return 0.0;
    const cplx l0 = side_log(z - z0_, side, "f_function");
    return I * split_ / (2.0 * pi) + (cauchy(z, side) - g0_ * l0) / (2.0 * pi * I);
}

cplx delta(cplx z, double z0, const ScatteringData& sd, Side side) {
    return FFunction(sd, z0).delta(z, side);
}

cplx f_function(cplx z, double z0, const ScatteringData& sd, Side side) {
    return FFunction(sd, z0).f(z, side);
}

cplx delta_boundary_eps(double u, double z0, const ScatteringData& sd, Side side, double eps) {
    if (side == Side::none) throw InputError("phase_functionals", "delta", "side required");
    FFunction F(sd, z0);
    const double s = side == Side::upper ? 1.0 : -1.0;
    const cplx d1 = F.log_delta(cplx(u, s * eps));
    const cplx d2 = F.log_delta(cplx(u, 2.0 * s * eps));
    return std::exp(2.0 * d1 - d2);
}

cplx c_constant(double z0, const ScatteringData& sd) { return FFunction(sd, z0).c(); }

cplx c_constant_stieltjes(double z0, const ScatteringData& sd) {
    const double A = sd.support_min();
    if (sd.is_zero() || !(z0 > A)) return 1.0;
    const double top = std::min(z0, sd.support_max());
    numerics::QuadOptions q = quad_opts(PhaseOptions{});
    q.endpoint = top == z0 ? numerics::Endpoint::log_right : numerics::Endpoint::smooth;
    auto fn = [&](double s) { return std::log(z0 - s) * sd.dg(s); };
    const double S = numerics::adaptive_quad_t(fn, A, top, q).value.real();
    // exp((2 pi i)^{-1} S)
    return std::polar(1.0, -S / (2.0 * pi));
}

PhaseData phase_data(double z0, const ScatteringData& sd) {
    PhaseData p;
    p.z0 = z0;
    FFunction F(sd, z0);
    p.nu = F.nu();
    p.c = F.c();
    const cplx r0 = sd.r(z0);
    if (r0 == 0.0 || p.nu == 0.0) {
        p.phase_defined = false;
        p.alpha = 0.0;
        return p;
    }
    p.omega = std::arg(r0);
    p.arg_alpha = -F.split_integral() / pi + pi / 4 +
                  numerics::log_gamma(cplx(0.0, p.nu)).imag() - p.omega;
    p.alpha = std::polar(std::sqrt(0.5 * p.nu), p.arg_alpha);
    p.phase_defined = true;
    return p;
}

std::optional<double> arg_alpha(double z0, const ScatteringData& sd) {
    const PhaseData p = phase_data(z0, sd);
    if (!p.phase_defined) return std::nullopt;
    return p.arg_alpha;
}

cplx alpha(double z0, const ScatteringData& sd) { return phase_data(z0, sd).alpha; }

std::string to_json_row(const PhaseData& p) {
    nlohmann::json j;
    j["z0"] = p.z0;
    j["nu"] = p.nu;
    j["c"] = {p.c.real(), p.c.imag()};
    j["omega"] = p.omega;
    j["arg_alpha"] = p.phase_defined ? nlohmann::json(p.arg_alpha) : nlohmann::json(nullptr);
    j["alpha"] = {p.alpha.real(), p.alpha.imag()};
    j["phase_defined"] = p.phase_defined;
    return j.dump();
}

}  // namespace nlsdbar::phase
