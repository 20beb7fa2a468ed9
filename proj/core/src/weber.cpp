#include "nlsdbar/weber.hpp"

#include <cmath>
#include <string>

#include "nlsdbar/numerics.hpp"

namespace nlsdbar::weber {

namespace {

constexpr double sqrt_pi = 1.772453850905516027298167483341145;

// U(a, 0) and U'(a, 0).
void initial_values(cplx a, cplx& u0, cplx& du0) {
    u0 = sqrt_pi * std::exp(-(0.5 * a + 0.25) * std::log(2.0)) * rgamma(0.75 + 0.5 * a);
    du0 = -sqrt_pi * std::exp(-(0.5 * a - 0.25) * std::log(2.0)) * rgamma(0.25 + 0.5 * a);
}

// Taylor step of u'' = (y^2/4 + a) u about y0 by t; updates (u, du).
void taylor_step(cplx a, cplx y0, cplx t, cplx& u, cplx& du) {
    const cplx y02 = y0 * y0;
    cplx val = u + du * t;
    cplx der = du;
    double scale = std::abs(u) + std::abs(du * t);
    cplx prev2 = 0.0, prev1 = 0.0, cur = u, next = du;  // c_{k-2}, c_{k-1}, c_k, c_{k+1}
    cplx tp = t;
    int small = 0;
    for (int k = 0; k < 400; ++k) {
        const cplx cn = (a * cur + 0.25 * (y02 * cur + 2.0 * y0 * prev1 + prev2)) /
                        (static_cast<double>(k + 2) * static_cast<double>(k + 1));
        der += static_cast<double>(k + 2) * cn * tp;
        tp *= t;
        const cplx term = cn * tp;
        val += term;
        scale = std::max(scale, std::abs(term));
        prev2 = prev1;
        prev1 = cur;
        cur = next;
        next = cn;
        small = std::abs(term) <= 1e-17 * scale ? small + 1 : 0;
        if (small >= 3) break;
    }
    u = val;
    du = der;
}

}  // namespace

cplx rgamma(cplx w) {
    if (w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real())) return 0.0;
    return std::exp(-numerics::log_gamma(w));
}

cplx U_series(cplx a, cplx y) {
    cplx u0, du0;
    initial_values(a, u0, du0);
    cplx u = u0, du = du0;
    taylor_step(a, 0.0, y, u, du);
    return u;
}

namespace {

void series_with_derivative(cplx a, cplx y, cplx& u, cplx& du) {
    cplx u0, du0;
    initial_values(a, u0, du0);
    u = u0;
    du = du0;
    taylor_step(a, 0.0, y, u, du);
}

}  // namespace

cplx U_asymptotic(cplx a, cplx y) {
    if (y == 0.0) throw NumericalError("pc_parametrix", "weber_U", "asymptotic series at y = 0");
    const cplx w = 2.0 * y * y;
    const cplx b = 0.5 + a;
    cplx term = 1.0, sum = 1.0;
    double last = 1.0;
    bool ok = false;
    for (int s = 0; s < 500; ++s) {
        const cplx next = -term * (b + 2.0 * s) * (b + 2.0 * s + 1.0) / (static_cast<double>(s + 1) * w);
        const double an = std::abs(next);
        if (an > last && s > 0) break;  // optimal truncation
        sum += next;
        term = next;
        last = an;
        if (an <= 1e-17 * std::abs(sum)) {
            ok = true;
            break;
        }
    }
    if (!ok && last > 1e-13 * std::abs(sum))
        throw NumericalError("pc_parametrix", "weber_U",
                             "asymptotic series cannot reach accuracy at |y| = " +
                                 std::to_string(std::abs(y)));
    return std::exp(-0.25 * y * y - (a + 0.5) * std::log(y)) * sum;
}

cplx U_connection(cplx a, cplx y) {
    // U(a, -w) from U(-a, +-iw) and U(a, w); the rotated argument is kept in
    // |arg| <= pi/2.
    const cplx w = -y;
    const cplx c = 0.5 * a - 0.25;
    const cplx ga = rgamma(0.5 + a);
    const cplx sq2pi = std::sqrt(2.0 * pi);
    if (std::arg(w) >= 0.0) {
        const cplx e = std::exp(I * pi * c);
        return e * (sq2pi * U(-a, -I * w) * ga - e * U(a, w));
    }
    const cplx e = std::exp(-I * pi * c);
    return e * (sq2pi * U(-a, I * w) * ga - e * U(a, w));
}

namespace {

void march(cplx a, cplx y_from, cplx y_to, cplx& u, cplx& du) {
    cplx y0 = y_from;
    const double len = std::abs(y_to - y_from);
    if (len == 0.0) return;
    const cplx dir = (y_to - y_from) / len;
    double done = 0.0;
    while (done < len) {
        const double h = std::min({0.5, 2.0 / std::max(1.0, std::abs(y0)), len - done});
        taylor_step(a, y0, h * dir, u, du);
        done += h;
        y0 = y_from + done * dir;
    }
}

}  // namespace

cplx U_bridge(cplx a, cplx y) {
    cplx u, du;
    const double r = std::abs(y);
    if (r == 0.0) return U_series(a, y);
    const cplx e = y / r;
    const double ay = std::abs(std::arg(y));
    if (ay <= pi / 4) {
        const cplx ys = asymptotic_radius * e;
        u = U_asymptotic(a, ys);
        du = 0.5 * ys * u - U_asymptotic(a - 1.0, ys);
        march(a, ys, y, u, du);
    } else {
        const cplx ys = series_radius * e;
        series_with_derivative(a, ys, u, du);
        march(a, ys, y, u, du);
    }
    return u;
}

cplx U(cplx a, cplx y) {
    const double r = std::abs(y);
    if (r <= series_radius) return U_series(a, y);
    if (r >= asymptotic_radius) {
        if (std::abs(std::arg(y)) <= 2.0 * pi / 3.0) return U_asymptotic(a, y);
        return U_connection(a, y);
    }
    // Marching out along |arg y| near pi loses the recessive part.
    if (std::abs(std::arg(y)) > 0.75 * pi) return U_connection(a, y);
    return U_bridge(a, y);
}

void U_and_derivative(cplx a, cplx y, cplx& u, cplx& du) {
    u = U(a, y);
    du = 0.5 * y * u - U(a - 1.0, y);
}

}  // namespace nlsdbar::weber
