#include "nlsdbar/nls.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <mutex>

#include "json.hpp"

namespace nlsdbar::evolution {

namespace {

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

class FftPair {
public:
    explicit FftPair(std::size_t n) : n_(n) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_) throw NumericalError("evolution", "split_step_nls", "FFT buffer allocation failed");
        std::lock_guard<std::mutex> lock(plan_mutex());
        const int ni = static_cast<int>(n);
        fwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }

private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

FieldSnapshot make_snapshot(const cplx* q, std::size_t n, double L, double dx, double t, double dt,
                            const SplitStepOptions& opt) {
    FieldSnapshot s;
    s.x_min = -L;
    s.dx = dx;
    s.values.assign(q, q + n);
    s.t = t;
    s.method = "strang-split-step-fft";
    s.dt = dt;
    s.half_width = L;
    double total = 0.0, edge = 0.0;
    const double band = (1.0 - opt.edge_band) * L;
    for (std::size_t k = 0; k < n; ++k) {
        const double m = std::norm(q[k]);
        total += m;
        if (std::abs(s.x(k)) >= band) edge += m;
    }
    s.edge_mass = total > 0.0 ? edge / total : 0.0;
    s.wrapped = s.edge_mass > opt.wrap_threshold;
    return s;
}

}  // namespace

double FieldSnapshot::mass() const {
    double m = 0.0;
    for (const auto& v : values) m += std::norm(v);
    return m * dx;
}

cplx FieldSnapshot::at(double xq) const {
    if (values.empty()) throw InputError("evolution", "snapshot_at", "empty snapshot");
    const double s = (xq - x_min) / dx;
    const double k = std::round(s);
    const double n = static_cast<double>(values.size());
    if (std::abs(s - k) < 1e-9) {
        double idx = std::fmod(k, n);
        if (idx < 0) idx += n;
        return values[static_cast<std::size_t>(idx)];
    }
    // Periodic sinc kernel for even n: sin(pi s) / (n tan(pi s / n)).
    cplx sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double d = s - static_cast<double>(j);
        sum += values[j] * (std::sin(pi * d) / (n * std::tan(pi * d / n)));
    }
    return sum;
}

std::string FieldSnapshot::to_csv() const {
    std::string out = "x,re_q,im_q\n";
    char buf[96];
    for (std::size_t k = 0; k < values.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x(k), values[k].real(), values[k].imag());
        out += buf;
    }
    return out;
}

std::string FieldSnapshot::sidecar_json() const {
    nlohmann::json j;
    j["t"] = t;
    j["method"] = method;
    j["dt"] = dt;
    j["dx"] = dx;
    j["domain"] = {x_min, x_min + dx * static_cast<double>(values.size())};
    j["n"] = values.size();
    j["edge_mass"] = edge_mass;
    j["wrapped"] = wrapped;
    return j.dump(2);
}

std::vector<FieldSnapshot> split_step_nls(const Potential& q, const std::vector<double>& times, double dt,
                                          const SplitStepOptions& opt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("evolution", "split_step_nls", "dt must be positive");
    if (opt.n < 16 || (opt.n & (opt.n - 1)) != 0)
        throw InputError("evolution", "split_step_nls", "grid size must be a power of two");
    if (!(opt.half_width > 0.0)) throw InputError("evolution", "split_step_nls", "domain must be positive");
    if (q.size() > 0 && (q.x_min < -opt.half_width || q.x_max() > opt.half_width))
        throw InputError("evolution", "split_step_nls", "initial datum exceeds the periodic domain");
    std::vector<long> steps;
    double prev = 0.0;
    for (double T : times) {
        if (!(T > prev)) throw InputError("evolution", "split_step_nls", "times must be positive and increasing");
        const double ns = std::round(T / dt);
        if (std::abs(ns * dt - T) > 1e-9 * T)
            throw InputError("evolution", "split_step_nls", "times must be multiples of dt");
        steps.push_back(static_cast<long>(ns));
        prev = T;
    }

    const std::size_t n = opt.n;
    const double L = opt.half_width;
    const double dx = 2.0 * L / static_cast<double>(n);
    FftPair fft(n);
    cplx* u = fft.data();
    for (std::size_t k = 0; k < n; ++k) u[k] = q(-L + dx * static_cast<double>(k));

    // Linear propagators e^{-i k^2 h} in transform space, with the 1/n of the
    // unnormalised inverse folded in.
    std::vector<cplx> half(n), full(n);
    const double dk = pi / L;
    for (std::size_t j = 0; j < n; ++j) {
        const double kk = dk * (j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n));
        half[j] = std::polar(1.0 / static_cast<double>(n), -kk * kk * dt / 2.0);
        full[j] = std::polar(1.0 / static_cast<double>(n), -kk * kk * dt);
    }
    auto linear = [&](const std::vector<cplx>& prop) {
        fft.forward();
        for (std::size_t j = 0; j < n; ++j) u[j] *= prop[j];
        fft.backward();
    };
    auto nonlinear = [&] {
        for (std::size_t k = 0; k < n; ++k) u[k] *= std::polar(1.0, -2.0 * std::norm(u[k]) * dt);
    };

    std::vector<FieldSnapshot> out;
    long done = 0;
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const long todo = steps[s] - done;
        // Consecutive half steps merge into full ones between snapshots.
        linear(half);
        for (long i = 0; i < todo; ++i) {
            nonlinear();
            linear(i + 1 < todo ? full : half);
        }
        for (std::size_t k = 0; k < n; ++k)
            if (!std::isfinite(u[k].real()) || !std::isfinite(u[k].imag()))
                throw NumericalError("evolution", "split_step_nls", "non-finite field");
        done = steps[s];
        out.push_back(make_snapshot(u, n, L, dx, times[s], dt, opt));
    }
    return out;
}

FieldSnapshot split_step_nls(const Potential& q, double T, double dt, const SplitStepOptions& opt) {
    return split_step_nls(q, std::vector<double>{T}, dt, opt).front();
}

cplx nls_leading(const phase::PhaseData& pd, double x, double t) {
    if (!(t > 0.0)) throw InputError("evolution", "nls_leading", "t must be positive");
    if (!pd.phase_defined) return 0.0;
    return pd.alpha * std::polar(1.0 / std::sqrt(t), x * x / (4.0 * t) - pd.nu * std::log(8.0 * t));
}

cplx nls_leading(const ScatteringData& sd, double x, double t) {
    if (!(t > 0.0) || !std::isfinite(x)) throw InputError("evolution", "nls_leading", "t must be positive");
    return nls_leading(phase::phase_data(-x / (4.0 * t), sd), x, t);
}

}  // namespace nlsdbar::evolution
