#pragma once

#include <string>
#include <vector>

#include "nlsdbar/phase.hpp"
#include "nlsdbar/scattering.hpp"

namespace nlsdbar::evolution {

// q(., t) on the periodic grid x_k = x_min + k dx.
struct FieldSnapshot {
    double x_min = 0.0;
    double dx = 1.0;
    std::vector<cplx> values;
    double t = 0.0;
    std::string method;
    double dt = 0.0;
    double half_width = 0.0;
    // Fraction of the mass found in the outer edge band; wrapped is set when it
    // exceeds the solver threshold, and the snapshot should not be trusted.
    double edge_mass = 0.0;
    bool wrapped = false;

    std::size_t size() const { return values.size(); }
    double x(std::size_t k) const { return x_min + dx * static_cast<double>(k); }
    double mass() const;
    // Sample at a grid point, or band-limited (periodic sinc) interpolation.
    cplx at(double x) const;

    std::string to_csv() const;
    std::string sidecar_json() const;
};

struct SplitStepOptions {
    std::size_t n = 65536;
    double half_width = 4096.0;
    double edge_band = 0.1;        // outer fraction of the domain watched for wrap-around
    double wrap_threshold = 1e-5;  // allowed mass fraction in the band
};

// Strang splitting for i q_t + q_xx - 2|q|^2 q = 0 on [-L, L) with exact
// linear (Fourier) and nonlinear (pointwise phase) substeps. Snapshots are
// returned at each requested time, which must be positive multiples of dt in
// increasing order.
std::vector<FieldSnapshot> split_step_nls(const Potential& q, const std::vector<double>& times,
                                          double dt, const SplitStepOptions& opt = {});
FieldSnapshot split_step_nls(const Potential& q, double T, double dt, const SplitStepOptions& opt = {});

// t^{-1/2} alpha(z0) e^{i x^2/(4t) - i nu(z0) ln(8t)}, z0 = -x/(4t).
cplx nls_leading(const ScatteringData& sd, double x, double t);
// Same with the phase data of z0 = -x/(4t) already computed.
cplx nls_leading(const phase::PhaseData& pd, double x, double t);

}  // namespace nlsdbar::evolution
