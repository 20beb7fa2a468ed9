#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlsdbar/numerics.hpp"
#include "nlsdbar/types.hpp"

namespace nlsdbar {

// Samples of q0 on a uniform grid x_k = x_min + k dx. An optional exact
// profile replaces interpolation inside the ODE integrator; it is evaluated
// strictly inside each sample cell so jump discontinuities placed on grid
// points are integrated exactly.
struct Potential {
    double x_min = 0.0;
    double dx = 1.0;
    std::vector<cplx> samples;
    double decay_pad = 0.0;
    std::function<cplx(double)> exact;

    std::size_t size() const { return samples.size(); }
    double x(std::size_t k) const { return x_min + dx * static_cast<double>(k); }
    double x_max() const { return x(samples.size() - 1); }

    // q0 at arbitrary x: exact profile if present, else 4-point Lagrange
    // interpolation (zero outside the grid).
    cplx operator()(double x) const;

    double l1_norm() const;
    double l2_norm_sq() const;

    // Throws InputError unless N >= 2, dx > 0, all samples finite and the end
    // samples fall below threshold * max|q0|.
    void validate(double threshold = 1e-6) const;

    static Potential sampled(double x_min, double x_max, std::size_t n,
                             const std::function<cplx(double)>& q, bool keep_exact = true);
    static Potential gaussian(cplx amplitude, double sigma, double half_width = 0.0,
                              double dx = 0.01);
    static Potential box(cplx amplitude, double length, double pad = 2.0, double dx = 0.01);
    static Potential sech(cplx amplitude, double half_width = 20.0, double dx = 0.01);
};

struct TransferOptions {
    int substeps = 8;         // RK4 steps per sample cell
    double tol = 1e-10;       // Richardson error target on T entries
    int max_doublings = 5;
    double unimodular_tol = 1e-8;
};

// T(z) = m(x_max) for m' = [[0, q e^{2izx}], [conj(q) e^{-2izx}, 0]] m,
// m(x_min) = I. a = T11, b = T21, r = b/a.
Mat2 transfer_matrix(const Potential& q, double z, const TransferOptions& opt = {});

struct BoxScattering {
    cplx a, b, r;
    Mat2 T;
};

// Closed form for q0 = A on [0, L], zero elsewhere.
BoxScattering box_reflection_oracle(cplx A, double L, double z);

class ScatteringData {
public:
    ScatteringData() = default;

    // r = 0 everywhere.
    static ScatteringData zero();

    static ScatteringData from_samples(double z_min, double dz, std::vector<cplx> r,
                                       std::vector<cplx> a = {}, std::vector<cplx> b = {});

    // Analytic reflection coefficient; the grid is kept for serialisation.
    static ScatteringData from_function(std::function<cplx(double)> r,
                                        std::function<cplx(double)> dr, double z_min,
                                        double z_max, std::size_t n);

    bool is_zero() const { return zero_; }
    cplx r(double z) const;
    cplx dr(double z) const;
    // g = ln(1 - |r|^2) and its derivative.
    double g(double z) const;
    double dg(double z) const;

    // Interval outside which r is treated as zero.
    double support_min() const { return z_min_; }
    double support_max() const { return z_min_ + dz_ * static_cast<double>(n_ - 1); }

    double z_min() const { return z_min_; }
    double dz() const { return dz_; }
    std::size_t size() const { return n_; }
    double z(std::size_t k) const { return z_min_ + dz_ * static_cast<double>(k); }
    const std::vector<cplx>& r_values() const { return r_; }
    const std::vector<cplx>& a_values() const { return a_; }
    const std::vector<cplx>& b_values() const { return b_; }
    double sup_r() const { return sup_r_; }

    std::string to_csv() const;
    std::string to_json() const;
    static ScatteringData from_json(const std::string& text);

private:
    void finish();

    bool zero_ = false;
    double z_min_ = 0.0, dz_ = 1.0;
    std::size_t n_ = 0;
    std::vector<cplx> r_, a_, b_;
    double sup_r_ = 0.0;
    numerics::UniformSpline<cplx> spline_;
    std::function<cplx(double)> rf_, drf_;
};

struct ScatterOptions {
    double z_min = -8.0;
    double z_max = 8.0;
    std::size_t n = 1025;
    double end_threshold = 1e-6;
    int max_extensions = 4;
    TransferOptions transfer;
};

ScatteringData reflection_coefficient(const Potential& q, const ScatterOptions& opt = {});

}  // namespace nlsdbar
