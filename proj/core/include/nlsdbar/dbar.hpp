#pragma once

#include <memory>
#include <vector>

#include "nlsdbar/numerics.hpp"
#include "nlsdbar/parametrix.hpp"
#include "nlsdbar/phase.hpp"
#include "nlsdbar/scattering.hpp"

namespace nlsdbar::dbar {

// Point of the z-plane tagged with one of the six sectors about z0:
//   1: 0 <= phi <= pi/4        2: pi/4 < phi < 3pi/4    3: 3pi/4 <= phi <= pi
//   4: -pi <= phi <= -3pi/4    5: -3pi/4 < phi < -pi/4  6: -pi/4 <= phi <= 0
// Points on the real axis carry their sector explicitly (1 or 6 right of z0,
// 3 or 4 left of it), which also selects the boundary value of f.
struct SectorPoint {
    double u = 0.0, v = 0.0;
    int sector = 1;
    double rho = 0.0, phi = 0.0;  // polar coordinates about z0
};

// Sector from arg(z - z0); real-axis points go to 1 (right) or 3 (left).
SectorPoint sector_point(double u, double v, double z0);
// Explicit sector; throws InputError unless the point lies in its closure.
SectorPoint sector_point(double u, double v, double z0, int sector);

struct CorrectionOptions {
    // Smooth radial cutoff of the oscillatory q1 integrand in the rescaled
    // variable |zeta| = 2 t^{1/2} |z - z0|.
    double cutoff_inner = 6.0;
    double cutoff_outer = 12.0;
    numerics::PolarRuleOptions rule{};
    // Rule for the L1 norm of W: geometric radial panels out to the support of r.
    double norm_ratio = 1.15;
    int norm_radial_nodes = 8;
    phase::PhaseOptions phase{};
};

// Everything that depends on (x, t) only through z0, plus t itself.
class CorrectionContext {
public:
    CorrectionContext(const ScatteringData& sd, double x, double t, CorrectionOptions opt = {});

    const ScatteringData& data() const { return *sd_; }
    double x() const { return x_; }
    double t() const { return t_; }
    double z0() const { return z0_; }
    double m() const { return m_; }
    const phase::FFunction& f() const { return *f_; }
    const phase::PhaseData& phase() const { return pd_; }
    const pc::Parametrix& pc() const { return *pc_; }
    const CorrectionOptions& options() const { return opt_; }
    // e^{-i omega}, with omega = 0 where r(z0) = 0.
    cplx rotation() const { return rot_; }

private:
    const ScatteringData* sd_;
    double x_, t_, z0_, m_;
    CorrectionOptions opt_;
    std::shared_ptr<phase::FFunction> f_;
    std::shared_ptr<pc::Parametrix> pc_;
    phase::PhaseData pd_;
    cplx rot_;
};

// Extension E_j into sector j in {1, 3, 4, 6}; throws InputError otherwise.
cplx extension_E(int j, const SectorPoint& p, const CorrectionContext& ctx);
// Closed-form dbar of E_j; throws InputError at the vertex.
cplx dbar_E(int j, const SectorPoint& p, const CorrectionContext& ctx);

// Nilpotent matrix carrying dbar E_j and e^{+-2it(theta - theta(z0; z0))};
// zero in sectors 2 and 5.
Mat2 Delta_matrix(const SectorPoint& p, const CorrectionContext& ctx);
// W = P Delta P^{-1} with P evaluated at 2 t^{1/2}(z - z0).
Mat2 W_matrix(const SectorPoint& p, const CorrectionContext& ctx);

// Unimodular prefactor e^{-i omega} e^{-2it theta(z0; z0)} c^{-2} (2 t^{1/2})^{-2 i nu}.
cplx reconstruction_prefactor(const CorrectionContext& ctx);
// Leading term assembled from the parametrix: prefactor (beta/2) t^{-1/2}.
cplx leading_from_parametrix(const CorrectionContext& ctx);

// Reusable evaluator for a fixed z0: the parametrix values at the rescaled
// quadrature nodes do not depend on t.
class CorrectionIntegrator {
public:
    CorrectionIntegrator(const ScatteringData& sd, double z0, CorrectionOptions opt = {});

    double z0() const { return z0_; }
    // Integral of W12 over the plane.
    cplx W12_integral(double t) const;
    // First correction q1 at x = -4 t z0.
    cplx q1(double t) const;
    // Integral of the spectral norm of W over the plane.
    double W_L1(double t) const;
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        double rho, psi, w;
        int sector;
        cplx uu;  // squared first-row entry of U that multiplies dbar E
    };
    const ScatteringData* sd_;
    double z0_;
    CorrectionOptions opt_;
    std::shared_ptr<phase::FFunction> f_;
    std::shared_ptr<pc::Parametrix> pc_;
    std::vector<Node> nodes_;
};

cplx q1_correction(double x, double t, const ScatteringData& sd, const CorrectionOptions& opt = {});
double W_L1(double x, double t, const ScatteringData& sd, const CorrectionOptions& opt = {});
// q0 + q1.
cplx corrected_q(double x, double t, const ScatteringData& sd, const CorrectionOptions& opt = {});

}  // namespace nlsdbar::dbar
