#include "nlsdbar/scattering.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "nlsdbar/parallel.hpp"

namespace nlsdbar {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

cplx Potential::operator()(double x) const {
    if (exact) return exact(x);
    const std::size_t n = samples.size();
    if (n == 0) return 0.0;
    const double s = (x - x_min) / dx;
    const double n1 = static_cast<double>(n - 1);
    if (!(s >= 0.0 && s <= n1)) return 0.0;
    if (n < 4) {
        const double fl = std::min(std::floor(s), n1 - 1.0);
        const std::size_t k = static_cast<std::size_t>(fl);
        const double t = s - fl;
        return (1.0 - t) * samples[k] + t * samples[k + 1];
    }
    const long k = static_cast<long>(std::floor(s));
    const long i0 = std::clamp(k - 1, 0L, static_cast<long>(n) - 4);
    const double t = s - static_cast<double>(i0);
    // Lagrange basis on nodes 0, 1, 2, 3.
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return l0 * samples[i0] + l1 * samples[i0 + 1] + l2 * samples[i0 + 2] + l3 * samples[i0 + 3];
}

double Potential::l1_norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double w = (k == 0 || k + 1 == samples.size()) ? 0.5 : 1.0;
        s += w * std::abs(samples[k]);
    }
    return s * dx;
}

double Potential::l2_norm_sq() const {
    double s = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double w = (k == 0 || k + 1 == samples.size()) ? 0.5 : 1.0;
        s += w * std::norm(samples[k]);
    }
    return s * dx;
}

void Potential::validate(double threshold) const {
    if (samples.size() < 2) throw InputError("zs_scattering", "potential", "need at least 2 samples");
    if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min))
        throw InputError("zs_scattering", "potential", "grid spacing must be positive and finite");
    double peak = 0.0;
    for (const cplx& v : samples) {
        if (!finite(v)) throw InputError("zs_scattering", "potential", "non-finite sample");
        peak = std::max(peak, std::abs(v));
    }
    const double tail = std::max(std::abs(samples.front()), std::abs(samples.back()));
    if (tail > threshold * peak)
        throw InputError("zs_scattering", "potential",
                         "samples do not decay at the grid ends (|q0| end/peak = " +
                             std::to_string(tail / peak) + ")");
}

Potential Potential::sampled(double x_min, double x_max, std::size_t n,
                             const std::function<cplx(double)>& q, bool keep_exact) {
    if (n < 2 || !(x_max > x_min))
        throw InputError("zs_scattering", "potential", "bad sampling grid");
    Potential p;
    p.x_min = x_min;
    p.dx = (x_max - x_min) / static_cast<double>(n - 1);
    p.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) p.samples[k] = q(p.x(k));
    if (keep_exact) p.exact = q;
    return p;
}

Potential Potential::gaussian(cplx amplitude, double sigma, double half_width, double dx) {
    if (!(sigma > 0.0)) throw InputError("zs_scattering", "potential", "sigma must be positive");
    if (half_width <= 0.0) half_width = 7.0 * sigma;
    const std::size_t cells = static_cast<std::size_t>(std::ceil(2.0 * half_width / dx));
    auto q = [amplitude, sigma](double x) { return amplitude * std::exp(-(x * x) / (sigma * sigma)); };
    Potential p = sampled(-half_width, half_width, cells + 1, q);
    p.decay_pad = half_width - 6.0 * sigma;
    return p;
}

Potential Potential::box(cplx amplitude, double length, double pad, double dx) {
    if (!(length > 0.0)) throw InputError("zs_scattering", "potential", "box length must be positive");
    // Place both edges on grid points.
    const double cells_box = std::max(1.0, std::round(length / dx));
    const double h = length / cells_box;
    const double cells_pad = std::max(1.0, std::round(pad / h));
    const std::size_t n = static_cast<std::size_t>(cells_box + 2.0 * cells_pad) + 1;
    auto q = [amplitude, length](double x) {
        return (x >= 0.0 && x <= length) ? amplitude : cplx(0.0);
    };
    Potential p;
    p.x_min = -cells_pad * h;
    p.dx = h;
    p.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double rel = static_cast<double>(k) - cells_pad;
        p.samples[k] = (rel >= 0.0 && rel <= cells_box) ? amplitude : cplx(0.0);
    }
    p.samples.front() = 0.0;
    p.samples.back() = 0.0;
    p.exact = q;
    p.decay_pad = cells_pad * h;
    return p;
}

Potential Potential::sech(cplx amplitude, double half_width, double dx) {
    const std::size_t cells = static_cast<std::size_t>(std::ceil(2.0 * half_width / dx));
    auto q = [amplitude](double x) { return amplitude / std::cosh(x); };
    return sampled(-half_width, half_width, cells + 1, q);
}

namespace {

// M m with M = [[0, p], [conj(p), 0]].
inline Mat2 apply_M(cplx p, const Mat2& m) {
    const cplx pc = std::conj(p);
    return {p * m.a21, p * m.a22, pc * m.a11, pc * m.a12};
}

Mat2 integrate(const Potential& q, double z, int s) {
    const std::size_t n = q.size();
    const double h = q.dx / s;
    // Cell ends are sampled just inside the cell so that discontinuities on
    // grid points are seen from the correct side.
    const double inset = 1e-10 * q.dx;
    Mat2 m = Mat2::identity();
    std::vector<cplx> qv(2 * static_cast<std::size_t>(s) + 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double xk = q.x(k);
        bool nonzero = false;
        for (int j = 0; j <= 2 * s; ++j) {
            double x = xk + 0.5 * h * j;
            if (j == 0) x = xk + inset;
            if (j == 2 * s) x = xk + q.dx - inset;
            const cplx v = q(x);
            qv[j] = v * std::polar(1.0, 2.0 * z * (xk + 0.5 * h * j));
            nonzero = nonzero || v != 0.0;
        }
        if (!nonzero) continue;
        for (int j = 0; j < s; ++j) {
            const cplx p0 = qv[2 * j], p1 = qv[2 * j + 1], p2 = qv[2 * j + 2];
            const Mat2 k1 = apply_M(p0, m);
            const Mat2 k2 = apply_M(p1, m + (0.5 * h) * k1);
            const Mat2 k3 = apply_M(p1, m + (0.5 * h) * k2);
            const Mat2 k4 = apply_M(p2, m + h * k3);
            m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return m;
}

double max_entry_diff(const Mat2& x, const Mat2& y) {
    return std::max({std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12), std::abs(x.a21 - y.a21),
                     std::abs(x.a22 - y.a22)});
}

}  // namespace

Mat2 transfer_matrix(const Potential& q, double z, const TransferOptions& opt) {
    if (q.size() < 2) throw InputError("zs_scattering", "transfer_matrix", "empty potential");
    if (!std::isfinite(z)) throw InputError("zs_scattering", "transfer_matrix", "z must be finite");
    if (opt.substeps < 1) throw InputError("zs_scattering", "transfer_matrix", "substeps must be >= 1");
    int s = opt.substeps;
    Mat2 coarse = integrate(q, z, s);
    Mat2 fine;
    bool ok = false;
    for (int d = 0; d <= opt.max_doublings; ++d) {
        fine = integrate(q, z, 2 * s);
        // RK4: the fine-run error is about diff / 15.
        if (max_entry_diff(fine, coarse) / 15.0 <= opt.tol) {
            ok = true;
            break;
        }
        coarse = fine;
        s *= 2;
    }
    if (!ok)
        throw NumericalError("zs_scattering", "transfer_matrix",
                             "step-size control failed at z = " + std::to_string(z));
    const double defect = std::abs(std::norm(fine.a11) - std::norm(fine.a21) - 1.0);
    if (defect > opt.unimodular_tol)
        throw NumericalError("zs_scattering", "transfer_matrix",
                             "|a|^2 - |b|^2 deviates from 1 by " + std::to_string(defect));
    return fine;
}

BoxScattering box_reflection_oracle(cplx A, double L, double z) {
    if (!(L > 0.0)) throw InputError("zs_scattering", "box_reflection_oracle", "L must be positive");
    const cplx k = std::sqrt(cplx(std::norm(A) - z * z));
    const cplx ch = std::cosh(k * L);
    const cplx sh = std::abs(k) * L < 1e-8 ? cplx(L) : std::sinh(k * L) / k;
    // exp(L [[-iz, A], [conj A, iz]]) = cosh(kL) I + sinh(kL)/k M
    const Mat2 E{ch - I * z * sh, A * sh, std::conj(A) * sh, ch + I * z * sh};
    const cplx ph = std::polar(1.0, z * L);
    const Mat2 T{ph * E.a11, ph * E.a12, E.a21 / ph, E.a22 / ph};
    return {T.a11, T.a21, T.a21 / T.a11, T};
}

ScatteringData ScatteringData::zero() {
    ScatteringData d;
    d.zero_ = true;
    d.z_min_ = -8.0;
    d.dz_ = 16.0 / 1024.0;
    d.n_ = 1025;
    d.r_.assign(d.n_, 0.0);
    d.finish();
    return d;
}

ScatteringData ScatteringData::from_samples(double z_min, double dz, std::vector<cplx> r,
                                            std::vector<cplx> a, std::vector<cplx> b) {
    if (r.size() < 4) throw InputError("zs_scattering", "scattering_data", "need at least 4 z points");
    if (!(dz > 0.0)) throw InputError("zs_scattering", "scattering_data", "dz must be positive");
    if ((!a.empty() && a.size() != r.size()) || (!b.empty() && b.size() != r.size()))
        throw InputError("zs_scattering", "scattering_data", "a/b size mismatch");
    ScatteringData d;
    d.z_min_ = z_min;
    d.dz_ = dz;
    d.n_ = r.size();
    d.r_ = std::move(r);
    d.a_ = std::move(a);
    d.b_ = std::move(b);
    d.spline_ = numerics::UniformSpline<cplx>(z_min, dz, d.r_);
    d.finish();
    return d;
}

ScatteringData ScatteringData::from_function(std::function<cplx(double)> r,
                                             std::function<cplx(double)> dr, double z_min,
                                             double z_max, std::size_t n) {
    if (n < 4 || !(z_max > z_min))
        throw InputError("zs_scattering", "scattering_data", "bad z grid");
    ScatteringData d;
    d.z_min_ = z_min;
    d.dz_ = (z_max - z_min) / static_cast<double>(n - 1);
    d.n_ = n;
    d.r_.resize(n);
    for (std::size_t k = 0; k < n; ++k) d.r_[k] = r(d.z(k));
    d.rf_ = std::move(r);
    d.drf_ = std::move(dr);
    d.finish();
    return d;
}

void ScatteringData::finish() {
    sup_r_ = 0.0;
    bool all_zero = true;
    for (const cplx& v : r_) {
        if (!finite(v)) throw InputError("zs_scattering", "scattering_data", "non-finite r");
        sup_r_ = std::max(sup_r_, std::abs(v));
        all_zero = all_zero && v == 0.0;
    }
    if (sup_r_ >= 1.0)
        throw InputError("zs_scattering", "scattering_data",
                         "sup|r| = " + std::to_string(sup_r_) + " is not below 1");
    if (all_zero && !rf_) zero_ = true;
    // Unimodular completion when a and b were not supplied.
    if (a_.empty()) {
        a_.resize(n_);
        b_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            a_[k] = 1.0 / std::sqrt(1.0 - std::norm(r_[k]));
            b_[k] = r_[k] * a_[k];
        }
    }
}

cplx ScatteringData::r(double z) const {
    if (zero_) return 0.0;
    if (!(z >= support_min() && z <= support_max())) return 0.0;
    return rf_ ? rf_(z) : spline_(z);
}

cplx ScatteringData::dr(double z) const {
    if (zero_) return 0.0;
    if (!(z >= support_min() && z <= support_max())) return 0.0;
    return drf_ ? drf_(z) : spline_.derivative(z);
}

double ScatteringData::g(double z) const {
    if (zero_) return 0.0;
    return std::log1p(-std::norm(r(z)));
}

double ScatteringData::dg(double z) const {
    if (zero_) return 0.0;
    const cplx rv = r(z);
    return -2.0 * std::real(std::conj(rv) * dr(z)) / (1.0 - std::norm(rv));
}

std::string ScatteringData::to_csv() const {
    std::ostringstream os;
    os << "z,re_r,im_r,re_a,im_a,re_b,im_b\n";
    char buf[256];
    for (std::size_t k = 0; k < n_; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", z(k),
                      r_[k].real(), r_[k].imag(), a_[k].real(), a_[k].imag(), b_[k].real(),
                      b_[k].imag());
        os << buf;
    }
    return os.str();
}

namespace {

nlohmann::json cvec(const std::vector<cplx>& v) {
    nlohmann::json j = nlohmann::json::array();
    for (const cplx& c : v) j.push_back({c.real(), c.imag()});
    return j;
}

std::vector<cplx> parse_cvec(const nlohmann::json& j) {
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const auto& e : j) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return v;
}

}  // namespace

std::string ScatteringData::to_json() const {
    nlohmann::json j;
    j["kind"] = "scattering_data";
    j["convention"] = "m=exp(izx sigma3)psi, T=m(+inf), a=T11, b=T21, r=b/a";
    j["z_min"] = z_min_;
    j["dz"] = dz_;
    j["n"] = n_;
    j["sup_r"] = sup_r_;
    j["r"] = cvec(r_);
    j["a"] = cvec(a_);
    j["b"] = cvec(b_);
    return j.dump();
}

ScatteringData ScatteringData::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        return from_samples(j.at("z_min").get<double>(), j.at("dz").get<double>(),
                            parse_cvec(j.at("r")), parse_cvec(j.at("a")), parse_cvec(j.at("b")));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("zs_scattering", "from_json", e.what());
    }
}

ScatteringData reflection_coefficient(const Potential& q, const ScatterOptions& opt) {
    q.validate();
    if (opt.n < 4 || !(opt.z_max > opt.z_min))
        throw InputError("zs_scattering", "reflection_coefficient", "bad z grid");
    const double dz = (opt.z_max - opt.z_min) / static_cast<double>(opt.n - 1);
    double zlo = opt.z_min, zhi = opt.z_max;
    std::size_t n = opt.n;
    for (int ext = 0;; ++ext) {
        std::vector<cplx> r(n), a(n), b(n);
        parallel_for(n, [&](std::size_t k) {
            const Mat2 T = transfer_matrix(q, zlo + dz * static_cast<double>(k), opt.transfer);
            a[k] = T.a11;
            b[k] = T.a21;
            r[k] = T.a21 / T.a11;
        });
        const double end = std::max(std::abs(r.front()), std::abs(r.back()));
        if (end < opt.end_threshold) {
            double sup = 0.0;
            for (const cplx& v : r) sup = std::max(sup, std::abs(v));
            if (sup >= 1.0)
                throw NumericalError("zs_scattering", "reflection_coefficient",
                                     "sup|r| >= 1 (focusing-type data or integration error)");
            return ScatteringData::from_samples(zlo, dz, std::move(r), std::move(a), std::move(b));
        }
        if (ext >= opt.max_extensions)
            throw InputError("zs_scattering", "reflection_coefficient",
                             "|r| at the z-grid ends stays above threshold; z-range insufficient");
        // Widen the grid by half its width, keeping dz.
        const std::size_t add = (n - 1) / 4;
        zlo -= dz * static_cast<double>(add);
        zhi += dz * static_cast<double>(add);
        n += 2 * add;
    }
}

}  // namespace nlsdbar
