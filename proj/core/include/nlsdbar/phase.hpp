#pragma once

#include <optional>
#include <string>

#include "nlsdbar/scattering.hpp"
#include "nlsdbar/types.hpp"

namespace nlsdbar::phase {

cplx theta(cplx z, double z0);

// -ln(1 - r^2) / (2 pi)
double nu(double r_abs);

// Boundary side for points on the cut (-inf, z0].
enum class Side { none, upper, lower };

struct PhaseOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
};

// Scalar functions delta(z; z0) and f(z; z0) for fixed z0. The Cauchy integral
// is regularised by subtracting the first-order Taylor polynomial of
// g = ln(1 - |r|^2) at the projection of z onto the integration interval; the
// subtracted part is integrated in closed form.
class FFunction {
public:
    FFunction(const ScatteringData& sd, double z0, PhaseOptions opt = {});

    double z0() const { return z0_; }
    double nu() const { return nu_; }
    cplx c() const { return c_; }
    // Real exponent S with c = exp(i S / (2 pi)).
    double split_integral() const { return split_; }

    cplx log_delta(cplx z, Side side = Side::none) const;
    cplx delta(cplx z, Side side = Side::none) const { return std::exp(log_delta(z, side)); }
    cplx log_f(cplx z, Side side = Side::none) const;
    cplx f(cplx z, Side side = Side::none) const { return std::exp(log_f(z, side)); }

private:
    // int_A^{z0} g(s) / (s - z) ds for z off the cut or on it with a side.
    cplx cauchy(cplx z, Side side) const;

    const ScatteringData* sd_;
    double z0_;
    double A_;
    double g0_;
    double nu_;
    double split_;
    cplx c_;
    PhaseOptions opt_;
};

cplx delta(cplx z, double z0, const ScatteringData& sd, Side side = Side::none);
cplx f_function(cplx z, double z0, const ScatteringData& sd, Side side = Side::none);

// Boundary value on the cut from z +- i eps with Richardson extrapolation in
// eps; kept as a cross-check of the exact one-sided evaluation.
cplx delta_boundary_eps(double u, double z0, const ScatteringData& sd, Side side,
                        double eps = 1e-6);

// Split representation of c(z0).
cplx c_constant(double z0, const ScatteringData& sd);
// Stieltjes representation exp((2 pi i)^{-1} int ln(z0 - s) dg(s)).
cplx c_constant_stieltjes(double z0, const ScatteringData& sd);

struct PhaseData {
    double z0 = 0.0;
    double nu = 0.0;
    cplx c{1.0};
    double omega = 0.0;
    double arg_alpha = 0.0;
    cplx alpha{0.0};
    bool phase_defined = false;  // false when r(z0) = 0
};

PhaseData phase_data(double z0, const ScatteringData& sd);
std::optional<double> arg_alpha(double z0, const ScatteringData& sd);
cplx alpha(double z0, const ScatteringData& sd);

std::string to_json_row(const PhaseData& p);

}  // namespace nlsdbar::phase
