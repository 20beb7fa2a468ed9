#include "nlsdbar/linear.hpp"

#include <cmath>

namespace nlsdbar::evolution {

namespace {

void check_resolution(const Potential& q, double z, const char* op) {
    if (!std::isfinite(z)) throw InputError("evolution", op, "z must be finite");
    // At least four samples per period of e^{2izx}.
    if (2.0 * std::abs(z) * q.dx > pi / 2)
        throw InputError("evolution", op, "grid too coarse for the requested z (aliasing)");
}

// Trapezoid sum of q0(x) x^k e^{2izx}; end samples are negligible by validation,
// so all weights are dx.
cplx trapezoid(const Potential& q, double z, int k) {
    const cplx step = std::polar(1.0, 2.0 * z * q.dx);
    cplx e = std::polar(1.0, 2.0 * z * q.x_min);
    cplx s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        // Refresh the recurrence periodically to bound round-off drift.
        if ((i & 255u) == 0) e = std::polar(1.0, 2.0 * z * q.x(i));
        s += (k == 0 ? q.samples[i] : q.samples[i] * q.x(i)) * e;
        e *= step;
    }
    return s * q.dx;
}

}  // namespace

cplx fourier_hat(const Potential& q, double z) {
    check_resolution(q, z, "fourier_hat");
    return trapezoid(q, z, 0);
}

cplx fourier_hat_derivative(const Potential& q, double z) {
    check_resolution(q, z, "fourier_hat");
    return 2.0 * I * trapezoid(q, z, 1);
}

FourierTable::FourierTable(const Potential& q, double dz, double floor) {
    if (!(dz > 0.0)) throw InputError("evolution", "fourier_hat", "table step must be positive");
    const double nyq = pi / (4.0 * q.dx);
    const double ref = floor * std::max(q.l1_norm(), 1e-300);
    // Grow the range until the transform stays below the floor over a full unit.
    double zmax = 1.0;
    while (zmax < nyq) {
        bool small = true;
        for (double z = zmax; z <= zmax + 1.0 && small; z += 0.125)
            small = std::abs(trapezoid(q, z, 0)) < ref && std::abs(trapezoid(q, -z, 0)) < ref;
        if (small) break;
        zmax += 1.0;
    }
    zmax_ = std::min(zmax, nyq);
    const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * zmax_ / dz)) + 1;
    const double h = 2.0 * zmax_ / static_cast<double>(n - 1);
    std::vector<cplx> y(n), dy(n), d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = -zmax_ + h * static_cast<double>(i);
        y[i] = trapezoid(q, z, 0);
        dy[i] = 2.0 * I * trapezoid(q, z, 1);
        // Second derivative for the derivative table.
        cplx s = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double x = q.x(k);
            s += q.samples[k] * x * x * std::polar(1.0, 2.0 * z * x);
        }
        d2[i] = -4.0 * s * q.dx;
    }
    table_ = numerics::UniformHermite<cplx>(-zmax_, h, y, dy);
    dtable_ = numerics::UniformHermite<cplx>(-zmax_, h, dy, d2);
}

cplx linear_exact(const Potential& q, double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t)) throw InputError("evolution", "linear_exact", "non-finite input");
    if (t < 0.0) throw InputError("evolution", "linear_exact", "t must be nonnegative");
    if (t == 0.0) return q(x);
    // Phase gradient of the kernel across the support must be resolved.
    const double reach = std::max(std::abs(x - q.x_min), std::abs(x - q.x_max()));
    if (reach / (2.0 * t) * q.dx > 0.5)
        throw NumericalError("evolution", "linear_exact", "grid too coarse for the kernel at this t");
    cplx s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double d = x - q.x(k);
        s += q.samples[k] * std::polar(1.0, d * d / (4.0 * t));
    }
    return s * q.dx / std::sqrt(4.0 * pi * I * t);
}

cplx linear_leading(cplx qh, double x, double t) {
    if (!(t > 0.0)) throw InputError("evolution", "linear_leading", "t must be positive");
    return qh * std::polar(1.0 / (2.0 * std::sqrt(pi * t)), -pi / 4 + x * x / (4.0 * t));
}

cplx linear_leading(const Potential& q, double x, double t) {
    if (!(t > 0.0)) throw InputError("evolution", "linear_leading", "t must be positive");
    return linear_leading(fourier_hat(q, -x / (4.0 * t)), x, t);
}

StokesTerms stokes_terms(const Potential& q, double x, double t) {
    if (!(t > 0.0)) throw InputError("evolution", "stokes_residual", "t must be positive");
    StokesTerms out;
    out.exact = linear_exact(q, x, t);
    const double z0 = -x / (4.0 * t);
    const FourierTable tab(q);
    const cplx q00 = std::abs(z0) <= tab.z_max() ? fourier_hat(q, z0) : cplx(0.0);
    out.diagonal = linear_leading(q00, x, t);

    // Rescaled polar rule about z0 with zeta = 2 t^{1/2}(z - z0); the radius
    // covers the support of q0hat plus a margin for the decaying vertex term.
    const double s = 2.0 * std::sqrt(t);
    numerics::PolarRuleOptions ro;
    ro.rho_max = s * (tab.z_max() + std::abs(z0)) + 20.0;
    const auto rule = numerics::polar_wedge_rule(ro);
    cplx sum = 0.0;
    for (int side : {+1, -1}) {  // Omega_+ (3pi/4, pi) and Omega_- (-pi/4, 0)
        cplx part = 0.0;
        for (const auto& nd : rule) {
            const double phi = side > 0 ? pi - nd.psi : -nd.psi;
            const double rz = nd.rho / s;
            const double u = z0 + rz * std::cos(phi);
            const cplx dE = 0.5 * std::cos(2.0 * phi) * tab.derivative(u) +
                            (tab(u) - q00) * (-I * std::polar(1.0, phi) * std::sin(2.0 * phi) / rz);
            const cplx zeta = std::polar(nd.rho, phi);
            part += nd.w * dE * std::exp(-I * zeta * zeta);
        }
        sum += side > 0 ? part : -part;
    }
    // e^{-2it theta(z)} = e^{4itz0^2} e^{-i zeta^2}, dA_z = dA_zeta / s^2
    out.area = 2.0 * I / pi * std::polar(1.0, 4.0 * t * z0 * z0) * sum / (s * s);
    out.residual = std::abs(out.exact - out.diagonal - out.area);
    return out;
}

double stokes_residual(const Potential& q, double x, double t) { return stokes_terms(q, x, t).residual; }

}  // namespace nlsdbar::evolution
