#include "nlsdbar/parametrix.hpp"

#include <cmath>

#include "nlsdbar/numerics.hpp"
#include "nlsdbar/weber.hpp"

namespace nlsdbar::pc {

namespace {

void check_m(double m, const char* op) {
    if (!(m >= 0.0 && m < 1.0)) throw InputError("pc_parametrix", op, "m must lie in [0, 1)");
}

}  // namespace

cplx beta(double m) {
    check_m(m, "beta");
    if (m == 0.0) return 0.0;
    const double L = std::log1p(-m * m);
    const double nu = -L / (2.0 * pi);
    const double arg = pi / 4 + L * std::log(2.0) / (2.0 * pi) -
                       numerics::log_gamma(cplx(0.0, L / (2.0 * pi))).imag();
    return std::polar(std::sqrt(2.0 * nu), arg);
}

Coefficients pc_coefficients(double m) {
    if (!(m > 0.0 && m < 1.0)) throw InputError("pc_parametrix", "pc_coefficients", "m must lie in (0, 1)");
    const double L = std::log1p(-m * m);
    const double om = 1.0 - m * m;
    const cplx e1 = std::polar(1.0, std::log(2.0) * L / (4.0 * pi));
    const cplx b = beta(m);
    Coefficients c;
    c.B1_0 = e1 * std::pow(om, -0.125) / b;
    c.A2_0 = std::pow(om, -0.125) * std::polar(1.0, -3.0 * pi / 4) / e1 / std::sqrt(2.0);
    c.B1_1 = e1 * std::pow(om, 0.375) / b;
    c.A2_m1 = std::pow(om, 0.375) * std::polar(1.0, pi / 4) / e1 / std::sqrt(2.0);
    return c;
}

int sector_of(cplx zeta) {
    if (zeta == 0.0) throw InputError("pc_parametrix", "parametrix_P", "zeta = 0 lies on all rays");
    const double t = std::arg(zeta);
    const double q = pi / 4;
    if (t == q || t == 3 * q || t == -q || t == -3 * q || t == pi || t == -pi)
        throw InputError("pc_parametrix", "parametrix_P", "zeta on a ray; designate a side");
    if (zeta.imag() == 0.0 && zeta.real() < 0.0)
        throw InputError("pc_parametrix", "parametrix_P", "zeta on a ray; designate a side");
    if (t > -q && t < q) return 0;
    if (t > q && t < 3 * q) return 1;
    if (t > 3 * q) return 2;
    if (t < -q && t > -3 * q) return -1;
    return -2;
}

Parametrix::Parametrix(double m) : m_(m) {
    check_m(m, "parametrix_P");
    trivial_ = m == 0.0;
    const double L = std::log1p(-m * m);
    nu_ = -L / (2.0 * pi);
    a_ = cplx(0.5, nu_);
    beta_ = pc::beta(m);
    if (trivial_ || nu_ == 0.0) {
        trivial_ = true;
        coef_ = {};
        bB10_ = hB10_ = bB11_ = hB11_ = 0.0;
        return;
    }
    coef_ = pc_coefficients(m);
    const double om = 1.0 - m * m;
    const cplx e1 = std::polar(1.0, std::log(2.0) * L / (4.0 * pi));
    bB10_ = e1 * std::pow(om, -0.125);
    bB11_ = e1 * std::pow(om, 0.375);
    // h / beta = i nu / beta = i sqrt(nu/2) e^{-i arg beta}
    const cplx h_over_b = I * std::sqrt(0.5 * nu_) * std::polar(1.0, -std::arg(beta_));
    hB10_ = h_over_b * bB10_;
    hB11_ = h_over_b * bB11_;
}

void Parametrix::U_row1(cplx zeta, int sector, cplx& u11, cplx& u12) const {
    if (trivial_) {
        u11 = 1.0;
        u12 = 0.0;
        return;
    }
    const cplx y = std::sqrt(2.0) * std::polar(1.0, -pi / 4) * zeta;
    const cplx a = a_;
    const double k = 1.0 / (1.0 - m_ * m_);
    switch (sector) {
        case 0:
            u11 = bB10_ * weber::U(-a, I * y);
            u12 = beta_ * coef_.A2_0 * weber::U(a, y);
            break;
        case 1:
            u11 = bB11_ * weber::U(-a, -I * y);
            u12 = beta_ * coef_.A2_0 * weber::U(a, y);
            break;
        case -1:
            u11 = bB10_ * weber::U(-a, I * y);
            u12 = beta_ * coef_.A2_m1 * weber::U(a, -y);
            break;
        case 2:
            u11 = bB11_ * weber::U(-a, -I * y);
            u12 = k * beta_ * coef_.A2_m1 * weber::U(a, -y);
            break;
        case -2:
            u11 = k * bB11_ * weber::U(-a, -I * y);
            u12 = beta_ * coef_.A2_m1 * weber::U(a, -y);
            break;
        default:
            throw InputError("pc_parametrix", "parametrix_P", "bad sector index");
    }
}

void Parametrix::P_row1(cplx zeta, int sector, cplx& p11, cplx& p12) const {
    U_row1(zeta, sector, p11, p12);
    if (trivial_) return;
    const cplx e = std::exp(0.5 * I * zeta * zeta);
    p11 *= e;
    p12 /= e;
}

Mat2 Parametrix::U(cplx zeta, int sector) const {
    if (trivial_) return Mat2::identity();
    const cplx y = std::sqrt(2.0) * std::polar(1.0, -pi / 4) * zeta;
    const cplx a = a_;
    const double s2 = std::sqrt(2.0);
    const double k = 1.0 / (1.0 - m_ * m_);
    Mat2 u;
    // Column 1 uses the B coefficients, column 2 the A coefficients.
    auto col1_0 = [&] {
        u.a11 = bB10_ * weber::U(-a, I * y);
        u.a21 = s2 * std::polar(1.0, pi / 4) * hB10_ * weber::U(1.0 - a, I * y);
    };
    auto col1_1 = [&](double f) {
        u.a11 = f * bB11_ * weber::U(-a, -I * y);
        u.a21 = f * s2 * std::polar(1.0, -3.0 * pi / 4) * hB11_ * weber::U(1.0 - a, -I * y);
    };
    auto col2_0 = [&] {
        u.a12 = beta_ * coef_.A2_0 * weber::U(a, y);
        u.a22 = s2 * std::polar(1.0, 3.0 * pi / 4) * coef_.A2_0 * weber::U(a - 1.0, y);
    };
    auto col2_m1 = [&](double f) {
        u.a12 = f * beta_ * coef_.A2_m1 * weber::U(a, -y);
        u.a22 = f * s2 * std::polar(1.0, -pi / 4) * coef_.A2_m1 * weber::U(a - 1.0, -y);
    };
    switch (sector) {
        case 0: col1_0(); col2_0(); break;
        case 1: col1_1(1.0); col2_0(); break;
        case -1: col1_0(); col2_m1(1.0); break;
        case 2: col1_1(1.0); col2_m1(k); break;
        case -2: col1_1(k); col2_m1(1.0); break;
        default: throw InputError("pc_parametrix", "parametrix_P", "bad sector index");
    }
    return u;
}

Mat2 Parametrix::P(cplx zeta, int sector) const {
    if (trivial_) return Mat2::identity();
    const Mat2 u = U(zeta, sector);
    const cplx e = std::exp(0.5 * I * zeta * zeta);
    return {u.a11 * e, u.a12 / e, u.a21 * e, u.a22 / e};
}

Mat2 Parametrix::P(cplx zeta) const {
    if (trivial_) return Mat2::identity();
    return P(zeta, sector_of(zeta));
}

Mat2 Parametrix::jump(int ray, cplx zeta, int& plus, int& minus) const {
    const double m = m_;
    const double k = 1.0 / (1.0 - m * m);
    const cplx e = std::exp(I * zeta * zeta);
    switch (ray) {
        case 1: plus = 1; minus = 0; return {1.0, 0.0, m * e, 1.0};
        case 2: plus = 1; minus = 2; return {1.0, -m * k / e, 0.0, 1.0};
        case 3: plus = 2; minus = -2; return {1.0 - m * m, 0.0, 0.0, k};
        case 4: plus = -2; minus = -1; return {1.0, 0.0, m * k * e, 1.0};
        case 5: plus = 0; minus = -1; return {1.0, -m / e, 0.0, 1.0};
        default: throw InputError("pc_parametrix", "jump_residual", "ray index must be 1..5");
    }
}

Mat2 parametrix_P(cplx zeta, double m) { return Parametrix(m).P(zeta); }

double ray_angle(int ray) {
    switch (ray) {
        case 1: return pi / 4;
        case 2: return 3 * pi / 4;
        case 3: return pi;
        case 4: return -3 * pi / 4;
        case 5: return -pi / 4;
        default: throw InputError("pc_parametrix", "jump_residual", "ray index must be 1..5");
    }
}

double jump_residual(int ray, double radius, double m) {
    if (!(radius > 0.0)) throw InputError("pc_parametrix", "jump_residual", "radius must be positive");
    const Parametrix p(m);
    const double ang = ray_angle(ray);
    if (p.trivial()) return 0.0;
    const cplx zeta = std::polar(radius, ang);
    int plus = 0, minus = 0;
    const Mat2 V = p.jump(ray, zeta, plus, minus);
    // Each sector formula is entire in zeta, so its boundary value on the ray
    // is the formula evaluated there.
    return spectral_norm(p.P(zeta, plus) - p.P(zeta, minus) * V);
}

}  // namespace nlsdbar::pc
