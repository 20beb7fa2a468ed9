#pragma once

#include "nlsdbar/types.hpp"

namespace nlsdbar::weber {

// Region boundaries for U(a, y).
inline constexpr double series_radius = 3.0;
inline constexpr double asymptotic_radius = 12.0;

// Parabolic cylinder function U(a, y), entire in y.
//   |y| <= 3                      Maclaurin series
//   |y| >= 12, |arg y| <= 2pi/3   asymptotic expansion, optimally truncated
//   |y| >= 12, |arg y| >  2pi/3   connection formula onto the asymptotic region
//   3 < |y| < 12, |arg y| > 3pi/4 connection formula onto |arg y| < pi/4
//   otherwise                     Taylor integration of Weber's equation along
//                                 the ray from |y| = 12 (|arg y| <= pi/4) or
//                                 from |y| = 3
cplx U(cplx a, cplx y);

// U and dU/dy together.
void U_and_derivative(cplx a, cplx y, cplx& u, cplx& du);

// Individual methods, exposed for overlap checks. Each throws
// NumericalError if it cannot deliver its accuracy target at y.
cplx U_series(cplx a, cplx y);
cplx U_asymptotic(cplx a, cplx y);
cplx U_connection(cplx a, cplx y);
cplx U_bridge(cplx a, cplx y);

// 1 / Gamma(w), zero at the poles.
cplx rgamma(cplx w);

}  // namespace nlsdbar::weber
