#pragma once

#include "nlsdbar/types.hpp"

namespace nlsdbar::pc {

// |beta|^2 = -ln(1 - m^2)/pi, arg beta = pi/4 + ln2 ln(1-m^2)/(2 pi) - arg Gamma(i ln(1-m^2)/(2 pi)).
cplx beta(double m);

struct Coefficients {
    cplx B1_0, A2_0, B1_1, A2_m1;
};

Coefficients pc_coefficients(double m);

// Angular sectors of the complement of the five rays arg zeta in
// {pi/4, 3pi/4, pi, -3pi/4, -pi/4}:
//   0: (-pi/4, pi/4)   1: (pi/4, 3pi/4)   2: (3pi/4, pi)
//  -1: (-3pi/4, -pi/4) -2: (-pi, -3pi/4)
int sector_of(cplx zeta);

// Solution P(zeta; m) of the parabolic-cylinder model problem.
class Parametrix {
public:
    explicit Parametrix(double m);

    double m() const { return m_; }
    cplx a() const { return a_; }
    cplx beta() const { return beta_; }
    double nu() const { return nu_; }
    const Coefficients& coefficients() const { return coef_; }
    bool trivial() const { return trivial_; }

    // Throws InputError on a ray; use the sector overload there.
    Mat2 P(cplx zeta) const;
    // Formula of the given sector continued to zeta (used for boundary values).
    Mat2 P(cplx zeta, int sector) const;
    // First row only (P11, P12); cheaper.
    void P_row1(cplx zeta, int sector, cplx& p11, cplx& p12) const;
    // The same without the e^{i zeta^2 sigma3/2} factor: P = U e^{i zeta^2 sigma3/2}.
    Mat2 U(cplx zeta, int sector) const;
    void U_row1(cplx zeta, int sector, cplx& u11, cplx& u12) const;

    // Off-diagonal part of the 1/zeta coefficient: P1_12 = beta/(2i), P1_21 = conj.
    cplx P1_12() const { return beta_ / (2.0 * I); }
    cplx P1_21() const { return std::conj(P1_12()); }

    // Jump matrix on ray 1..5 (arg pi/4, 3pi/4, pi, -3pi/4, -pi/4) at zeta,
    // with the + and - sectors it relates: P(+) = P(-) V.
    Mat2 jump(int ray, cplx zeta, int& plus_sector, int& minus_sector) const;

private:
    double m_;
    double nu_;
    cplx a_;
    cplx beta_;
    Coefficients coef_;
    bool trivial_;
    // beta*B1, h*B1 with h = a - 1/2, formed without dividing by beta.
    cplx bB10_, hB10_, bB11_, hB11_;
};

Mat2 parametrix_P(cplx zeta, double m);

// Ray direction angles for ray indices 1..5.
double ray_angle(int ray);

// Spectral norm of P(+) - P(-) V at radius on the given ray.
double jump_residual(int ray, double radius, double m);

}  // namespace nlsdbar::pc
