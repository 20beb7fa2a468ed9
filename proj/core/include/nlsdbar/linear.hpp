#pragma once

#include "nlsdbar/numerics.hpp"
#include "nlsdbar/scattering.hpp"

namespace nlsdbar::evolution {

// q0hat(z) = int q0(x) e^{2izx} dx by the trapezoid rule on the samples.
// Throws InputError when the grid cannot resolve e^{2izx}.
cplx fourier_hat(const Potential& q, double z);
// d/dz of the same transform.
cplx fourier_hat_derivative(const Potential& q, double z);

// Tabulated q0hat with Hermite interpolation, covering the range where
// |q0hat| exceeds floor * int |q0|; zero beyond.
class FourierTable {
public:
    explicit FourierTable(const Potential& q, double dz = 0.01, double floor = 1e-15);
    cplx operator()(double z) const { return table_(z); }
    cplx derivative(double z) const { return dtable_(z); }
    double z_max() const { return zmax_; }

private:
    double zmax_;
    numerics::UniformHermite<cplx> table_;
    numerics::UniformHermite<cplx> dtable_;
};

// Free linear evolution i q_t + q_xx = 0 by convolution with the Fresnel
// kernel e^{i(x-y)^2/(4t)} / sqrt(4 pi i t); t = 0 returns q0(x).
cplx linear_exact(const Potential& q, double x, double t);

// Stationary-phase term t^{-1/2} q0hat(z0) e^{-i pi/4} e^{i x^2/(4t)} / (2 sqrt(pi)).
cplx linear_leading(const Potential& q, double x, double t);
cplx linear_leading(cplx q0hat_z0, double x, double t);

struct StokesTerms {
    cplx exact;     // linear_exact
    cplx diagonal;  // Gaussian integral along the diagonal path
    cplx area;      // (1/pi) int int 2i dbar(E e^{-2it theta}) over Omega_+ minus Omega_-
    double residual;
};

StokesTerms stokes_terms(const Potential& q, double x, double t);
double stokes_residual(const Potential& q, double x, double t);

}  // namespace nlsdbar::evolution
