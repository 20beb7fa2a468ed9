#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "nlsdbar/types.hpp"

namespace nlsdbar::numerics {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = -1.0;
    double b = 1.0;

    template <class F>
    auto apply(F&& f) const -> decltype(f(0.0)) {
        decltype(f(0.0)) s{};
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

QuadratureRule gauss_legendre(int n, double a, double b);

// Principal branch of ln Gamma(w), continuous on C minus (-inf, 0].
cplx log_gamma(cplx w);

enum class Endpoint { smooth, log_left, log_right, log_both };

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
    Endpoint endpoint = Endpoint::smooth;
    std::vector<double> breakpoints;  // optional interior split points
    bool throw_on_failure = true;
};

struct QuadResult {
    cplx value{0.0};
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 10/21 on [-1,1].
inline constexpr std::array<double, 11> gk21_x = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> gk21_wk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525398527, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> gk21_wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Interval {
    double a, b;
    cplx value;
    double error;
};

template <class F>
Interval gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    using R = decltype(f(c));
    R fc = f(c);
    R k = gk21_wk[10] * fc;
    R g{};
    for (int j = 0; j < 10; ++j) {
        const double dx = h * gk21_x[j];
        R f1 = f(c - dx);
        R f2 = f(c + dx);
        k += gk21_wk[j] * (f1 + f2);
        if (j % 2 == 1) g += gk21_wg[j / 2] * (f1 + f2);
    }
    const cplx kv = cplx(k) * h;
    const cplx gv = cplx(g) * h;
    return {a, b, kv, std::abs(kv - gv)};
}

template <class F>
QuadResult adaptive_on(F& f, const std::vector<double>& cuts, const QuadOptions& opt,
                       const char* op) {
    std::vector<Interval> heap;
    heap.reserve(64);
    auto cmp = [](const Interval& x, const Interval& y) { return x.error < y.error; };
    QuadResult res;
    cplx total{0.0};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        Interval iv = gk21(f, cuts[i], cuts[i + 1]);
        res.evaluations += 21;
        total += iv.value;
        err += iv.error;
        heap.push_back(iv);
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals) {
            res.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Interval worst = heap.back();
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            res.converged = false;
            heap.push_back(worst);
            break;
        }
        Interval l = gk21(f, worst.a, m);
        Interval r = gk21(f, m, worst.b);
        res.evaluations += 42;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    // Re-sum to avoid drift from incremental updates.
    total = 0.0;
    err = 0.0;
    for (const auto& iv : heap) {
        total += iv.value;
        err += iv.error;
    }
    res.value = total;
    res.error = err;
    if (!res.converged && opt.throw_on_failure)
        throw NumericalError("numerics", op,
                             "adaptive quadrature did not converge (error estimate " +
                                 std::to_string(err) + ")");
    return res;
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of a real- or complex-valued integrand.
// Logarithmic (or weaker algebraic) endpoint singularities declared in opt are
// removed with s = a + (b-a) e^{-tau}.
template <class F>
QuadResult adaptive_quad_t(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (!(a < b)) {
        if (a == b) return {};
        throw InputError("numerics", "adaptive_quad", "interval must satisfy a < b");
    }
    if (opt.endpoint == Endpoint::smooth) {
        std::vector<double> cuts{a};
        for (double c : opt.breakpoints)
            if (c > a && c < b) cuts.push_back(c);
        std::sort(cuts.begin() + 1, cuts.end());
        cuts.push_back(b);
        return detail::adaptive_on(f, cuts, opt, "adaptive_quad");
    }
    if (opt.endpoint == Endpoint::log_both) {
        const double m = 0.5 * (a + b);
        QuadOptions o = opt;
        o.breakpoints.clear();
        o.endpoint = Endpoint::log_left;
        QuadResult l = adaptive_quad_t(f, a, m, o);
        o.endpoint = Endpoint::log_right;
        QuadResult r = adaptive_quad_t(f, m, b, o);
        return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations,
                l.converged && r.converged};
    }
    const bool left = opt.endpoint == Endpoint::log_left;
    const double L = b - a;
    // tau range: the mapped integrand carries e^{-tau}; stop before the
    // abscissa rounds onto the singular endpoint.
    const double end = std::abs(left ? a : b);
    const double tau_max =
        end > 0.0 ? std::min(80.0, std::log(L / (8.0 * std::numeric_limits<double>::epsilon() * end))) : 80.0;
    auto g = [&](double tau) {
        const double e = std::exp(-tau);
        const double s = left ? a + L * e : b - L * e;
        return cplx(f(s)) * (L * e);
    };
    std::vector<double> cuts{0.0};
    for (double c : {0.5, 1.5, 3.0, 6.0, 12.0, 24.0, 48.0})
        if (c < tau_max) cuts.push_back(c);
    cuts.push_back(tau_max);
    QuadResult res = detail::adaptive_on(g, cuts, opt, "adaptive_quad");
    // Beyond tau_max the mapped integrand decays like e^{-tau}: first-order tail.
    const cplx tail = g(tau_max);
    res.value += tail;
    res.error += std::abs(tail);
    return res;
}

QuadResult adaptive_quad(const std::function<cplx(double)>& f, double a, double b,
                         const QuadOptions& opt = {});

// Integral over [a, +inf) via s = a + u/(1-u).
QuadResult adaptive_quad_to_inf(const std::function<cplx(double)>& f, double a,
                                const QuadOptions& opt = {});

struct SectorSpec {
    double vertex = 0.0;  // z0 on the real axis
    double phi1 = 0.0;
    double phi2 = pi / 4;
    double R = 1.0;
    // Sign of (u - z0) v inside the sector for which the integrand decays
    // (+1, -1), or 0 when no damping is claimed.
    int damping_sign = 0;
};

// Validates a SectorSpec, throwing InputError when inconsistent.
void validate_sector(const SectorSpec& s);

// Nested adaptive polar quadrature: integral of f(u, v) dA over the sector
// truncated at radius R. rho = s^2 removes |z - z0|^{-1/2} vertex behaviour.
QuadResult sector_quad(const std::function<cplx(double, double)>& f, const SectorSpec& sector,
                       double tol);

// Default truncation radius: smallest R with e^{-8 t R^2 / sqrt 2} <= tol / area.
double default_sector_radius(double t, double tol, double area = 1.0);

// Fixed polar rule for integrands carrying |e^{\pm i zeta^2}| = e^{-rho^2 sin 2psi}
// in a pi/4 wedge, psi measured from the undamped (real-axis) edge. rho is a
// rescaled radius. Nodes are reused across many integrands.
struct PolarNode {
    double rho;
    double psi;
    double w;  // includes the rho Jacobian
};

struct PolarRuleOptions {
    double rho_max = 10.0;
    double sigma_panel = 3.0;  // radial panel width in sigma = rho^2
    // If > 1, panels beyond rho = 1 are geometric with this ratio instead
    // (for non-oscillatory integrands such as norms).
    double radial_ratio = 0.0;
    int radial_nodes = 8;
    int vertex_levels = 10;    // geometric cells below rho = 1
    double tau_max = 40.0;     // damping depth kept in the edge layer
    int layer_nodes = 6;
    int bulk_nodes = 8;
};

std::vector<PolarNode> polar_wedge_rule(const PolarRuleOptions& opt);

// Smooth step: 1 for x <= 0, 0 for x >= 1, C-infinity in between.
double smooth_cutoff(double x);

// Natural cubic spline on a uniform grid.
template <class T>
class UniformSpline {
public:
    UniformSpline() = default;
    UniformSpline(double x0, double h, std::vector<T> y) : x0_(x0), h_(h), y_(std::move(y)) {
        const std::size_t n = y_.size();
        if (n < 4) throw InputError("numerics", "UniformSpline", "need at least 4 points");
        // Second derivatives via tridiagonal solve (natural end conditions).
        m_.assign(n, T{});
        std::vector<double> c(n, 0.0);
        std::vector<T> d(n, T{});
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const T rhs = (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) * (6.0 / (h_ * h_));
            const double denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs - d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    bool empty() const { return y_.empty(); }
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * static_cast<double>(y_.size() - 1); }

    // Value; zero outside the grid.
    T operator()(double x) const {
        std::size_t i;
        double t;
        if (!locate(x, i, t)) return T{};
        const double u = 1.0 - t;
        return u * y_[i] + t * y_[i + 1] +
               (h_ * h_ / 6.0) * ((u * u * u - u) * m_[i] + (t * t * t - t) * m_[i + 1]);
    }

    T derivative(double x) const {
        std::size_t i;
        double t;
        if (!locate(x, i, t)) return T{};
        const double u = 1.0 - t;
        return (y_[i + 1] - y_[i]) / h_ +
               (h_ / 6.0) * (-(3.0 * u * u - 1.0) * m_[i] + (3.0 * t * t - 1.0) * m_[i + 1]);
    }

private:
    bool locate(double x, std::size_t& i, double& t) const {
        const double s = (x - x0_) / h_;
        const double n1 = static_cast<double>(y_.size() - 1);
        if (!(s >= 0.0 && s <= n1)) return false;
        double fl = std::floor(s);
        if (fl >= n1) fl = n1 - 1.0;
        i = static_cast<std::size_t>(fl);
        t = s - fl;
        return true;
    }

    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<T> y_;
    std::vector<T> m_;
};

// Cubic Hermite interpolation on a uniform grid from values and exact slopes.
template <class T>
class UniformHermite {
public:
    UniformHermite() = default;
    UniformHermite(double x0, double h, std::vector<T> y, std::vector<T> dy)
        : x0_(x0), h_(h), y_(std::move(y)), dy_(std::move(dy)) {
        if (y_.size() < 2 || y_.size() != dy_.size())
            throw InputError("numerics", "UniformHermite", "bad table sizes");
    }
    bool empty() const { return y_.empty(); }
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * static_cast<double>(y_.size() - 1); }

    T operator()(double x) const {
        const double s = (x - x0_) / h_;
        const double n1 = static_cast<double>(y_.size() - 1);
        if (!(s >= 0.0 && s <= n1)) return T{};
        double fl = std::floor(s);
        if (fl >= n1) fl = n1 - 1.0;
        const std::size_t i = static_cast<std::size_t>(fl);
        const double t = s - fl;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[i] + (h10 * h_) * dy_[i] + h01 * y_[i + 1] + (h11 * h_) * dy_[i + 1];
    }

private:
    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<T> y_;
    std::vector<T> dy_;
};

}  // namespace nlsdbar::numerics
