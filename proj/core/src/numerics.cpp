#include "nlsdbar/numerics.hpp"

#include <cmath>

namespace nlsdbar {

double spectral_norm(const Mat2& m) {
    const double f2 = std::norm(m.a11) + std::norm(m.a12) + std::norm(m.a21) + std::norm(m.a22);
    const double d = std::abs(m.det());
    const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

}  // namespace nlsdbar

namespace nlsdbar::numerics {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InputError("numerics", "gauss_legendre", "n must be positive");
    if (!(a < b)) throw InputError("numerics", "gauss_legendre", "degenerate interval");
    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = c - h * x;
        rule.nodes[n - 1 - i] = c + h * x;
        rule.weights[i] = h * w;
        rule.weights[n - 1 - i] = h * w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = c;
    return rule;
}

cplx log_gamma(cplx w) {
    if (w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::floor(w.real()))
        throw InputError("numerics", "log_gamma", "pole at nonpositive integer");
    // Upward recurrence to Re w >= 15, then Stirling. Summing principal logs
    // keeps the result on the principal branch.
    cplx shift{0.0};
    cplx z = w;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    static constexpr std::array<double, 10> b2k = {
        1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,   -1.0 / 30.0,    5.0 / 66.0,
        -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};
    const cplx zi = 1.0 / z;
    const cplx zi2 = zi * zi;
    cplx series{0.0};
    cplx p = zi;
    for (int k = 1; k <= 10; ++k) {
        series += b2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
        p *= zi2;
    }
    const cplx lg = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series;
    return lg - shift;
}

QuadResult adaptive_quad(const std::function<cplx(double)>& f, double a, double b,
                         const QuadOptions& opt) {
    return adaptive_quad_t(f, a, b, opt);
}

QuadResult adaptive_quad_to_inf(const std::function<cplx(double)>& f, double a,
                                const QuadOptions& opt) {
    auto g = [&](double u) {
        const double om = 1.0 - u;
        if (!(om > 0.0)) return cplx(0.0);
        const cplx v = f(a + u / om);
        // An underflowed integrand stays zero under the Jacobian.
        return v == 0.0 ? v : v / (om * om);
    };
    QuadOptions o = opt;
    o.breakpoints = {0.5, 0.75, 0.9, 0.97};
    if (o.endpoint == Endpoint::log_left) {
        o.endpoint = Endpoint::log_both;
        o.breakpoints.clear();
    } else if (o.endpoint == Endpoint::smooth) {
        o.endpoint = Endpoint::log_right;
        o.breakpoints.clear();
    }
    if (o.endpoint == Endpoint::log_right) {
        // tau map near u = 1 handles the algebraic blow-up of the Jacobian
        // when f decays fast; split off the bulk first.
        QuadOptions ob = opt;
        ob.endpoint = Endpoint::smooth;
        ob.breakpoints = {0.25};
        QuadResult bulk = adaptive_quad_t(g, 0.0, 0.5, ob);
        QuadResult tail = adaptive_quad_t(g, 0.5, 1.0, o);
        return {bulk.value + tail.value, bulk.error + tail.error,
                bulk.evaluations + tail.evaluations, bulk.converged && tail.converged};
    }
    return adaptive_quad_t(g, 0.0, 1.0, o);
}

void validate_sector(const SectorSpec& s) {
    const double open = s.phi2 - s.phi1;
    if (!(open > 0.0 && open <= pi / 2 + 1e-15))
        throw InputError("numerics", "sector_quad", "opening must lie in (0, pi/2]");
    if (!(s.R > 0.0) || !std::isfinite(s.R))
        throw InputError("numerics", "sector_quad", "radial cutoff must be finite and positive");
    if (s.damping_sign != 0) {
        // (u - z0) v = rho^2 sin(2 phi)/2 must keep one sign on the open sector.
        const int n = 64;
        for (int k = 1; k < n; ++k) {
            const double phi = s.phi1 + open * k / n;
            const double sg = std::sin(2.0 * phi);
            if (sg * s.damping_sign <= 0.0)
                throw InputError("numerics", "sector_quad",
                                 "damping descriptor inconsistent with sector");
        }
    }
}

QuadResult sector_quad(const std::function<cplx(double, double)>& f, const SectorSpec& sector,
                       double tol) {
    validate_sector(sector);
    if (!(tol > 0.0)) throw InputError("numerics", "sector_quad", "tolerance must be positive");
    const double sR = std::sqrt(sector.R);
    const double open = sector.phi2 - sector.phi1;
    int evals = 0;
    bool ok = true;
    auto inner = [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        auto g = [&](double q) {
            const double rho = q * q;
            return f(sector.vertex + rho * c, rho * s) * (2.0 * q * rho);
        };
        QuadOptions o;
        o.abs_tol = 0.25 * tol / open;
        o.rel_tol = 1e-13;
        o.breakpoints = {0.25 * sR, 0.5 * sR};
        QuadResult r = adaptive_quad_t(g, 0.0, sR, o);
        evals += r.evaluations;
        ok = ok && r.converged;
        return r.value;
    };
    QuadOptions o;
    o.abs_tol = 0.5 * tol;
    o.rel_tol = 1e-13;
    QuadResult res = adaptive_quad_t(inner, sector.phi1, sector.phi2, o);
    res.evaluations = evals;
    res.converged = res.converged && ok;
    return res;
}

double default_sector_radius(double t, double tol, double area) {
    if (!(t > 0.0) || !(tol > 0.0) || !(area > 0.0))
        throw InputError("numerics", "default_sector_radius", "t, tol and area must be positive");
    const double depth = std::max(std::log(area / tol), 0.0);
    return std::sqrt(std::sqrt(2.0) * depth / (8.0 * t));
}

std::vector<PolarNode> polar_wedge_rule(const PolarRuleOptions& opt) {
    if (!(opt.rho_max >= 1.0))
        throw InputError("numerics", "polar_wedge_rule", "rho_max must be at least 1");
    std::vector<std::pair<double, double>> radial;  // (rho, weight incl. rho)
    const QuadratureRule gr = gauss_legendre(opt.radial_nodes, 0.0, 1.0);
    // Vertex cell [0, rho1] with rho = rho1 w^2.
    const double rho1 = std::ldexp(1.0, -opt.vertex_levels);
    for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double w = gr.nodes[i];
        radial.emplace_back(rho1 * w * w, gr.weights[i] * 2.0 * rho1 * rho1 * w * w * w);
    }
    for (int k = opt.vertex_levels; k >= 1; --k) {
        const double a = std::ldexp(1.0, -k), b = 2.0 * a;
        for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
            const double rho = a + (b - a) * gr.nodes[i];
            radial.emplace_back(rho, gr.weights[i] * (b - a) * rho);
        }
    }
    if (opt.radial_ratio > 1.0) {
        const int npan = std::max(
            1, static_cast<int>(std::ceil(std::log(opt.rho_max) / std::log(opt.radial_ratio))));
        const double q = std::pow(opt.rho_max, 1.0 / npan);
        double a = 1.0;
        for (int p = 0; p < npan; ++p) {
            const double b = a * q;
            for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
                const double rho = a + (b - a) * gr.nodes[i];
                radial.emplace_back(rho, gr.weights[i] * (b - a) * rho);
            }
            a = b;
        }
    }
    const double smax = opt.radial_ratio > 1.0 ? 1.0 : opt.rho_max * opt.rho_max;
    const int npan = smax > 1.0 ? std::max(1, static_cast<int>(std::ceil((smax - 1.0) / opt.sigma_panel))) : 0;
    const double ds = npan > 0 ? (smax - 1.0) / npan : 0.0;
    for (int p = 0; p < npan; ++p) {
        const double a = 1.0 + p * ds;
        for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
            const double sigma = a + ds * gr.nodes[i];
            radial.emplace_back(std::sqrt(sigma), 0.5 * ds * gr.weights[i]);
        }
    }

    const QuadratureRule gl = gauss_legendre(opt.layer_nodes, 0.0, 1.0);
    const QuadratureRule gb = gauss_legendre(opt.bulk_nodes, 0.0, 1.0);
    static constexpr double tau_cuts[] = {0.0, 1.0, 3.0, 7.0, 15.0, 25.0, 40.0, 60.0, 90.0};
    std::vector<PolarNode> nodes;
    nodes.reserve(radial.size() * 48);
    for (auto [rho, wr] : radial) {
        const double lam = rho * rho;
        const double tau_c = std::min(opt.tau_max, 0.5 * lam);
        const double psi_c = 0.5 * std::asin(tau_c / lam);
        for (std::size_t k = 0; k + 1 < std::size(tau_cuts); ++k) {
            const double a = tau_cuts[k];
            const double b = std::min(tau_cuts[k + 1], tau_c);
            if (!(b > a)) break;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double tau = a + (b - a) * gl.nodes[i];
                const double psi = 0.5 * std::asin(tau / lam);
                const double jac = 0.5 / std::sqrt(lam * lam - tau * tau);
                nodes.push_back({rho, psi, wr * gl.weights[i] * (b - a) * jac});
            }
        }
        if (tau_c < opt.tau_max) {
            // Bulk of the wedge; panel count follows the angular phase variation.
            const int nb = 1 + static_cast<int>(0.87 * lam / 8.0);
            const double span = (pi / 4 - psi_c) / nb;
            for (int p = 0; p < nb; ++p) {
                const double a = psi_c + p * span;
                for (std::size_t i = 0; i < gb.nodes.size(); ++i)
                    nodes.push_back({rho, a + span * gb.nodes[i], wr * gb.weights[i] * span});
            }
        }
    }
    return nodes;
}

double smooth_cutoff(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double e1 = std::exp(-1.0 / x);
    const double e2 = std::exp(-1.0 / (1.0 - x));
    return e2 / (e1 + e2);
}

}  // namespace nlsdbar::numerics
