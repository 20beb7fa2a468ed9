#include <cmath>

#include "doctest.h"
#include "golden.hpp"
#include "nlsdbar/fit.hpp"
#include "nlsdbar/phase.hpp"
#include "synthetic.hpp"

using namespace nlsdbar;
using namespace nlsdbar::phase;

TEST_CASE("theta and nu") {
    CHECK(std::abs(theta(1.0, 1.0) + 2.0) < 1e-15);
    CHECK(std::abs(theta(0.0, 0.7)) == 0.0);
    CHECK(std::abs(theta(2.0, 1.0)) == 0.0);
    CHECK(nu(0.0) == 0.0);
    CHECK(std::abs(nu(std::sqrt(1 - std::exp(-2 * pi))) - 1.0) < 1e-12);
    CHECK(std::abs(nu(0.5) - golden::data()["nu_half"].get<double>()) < 1e-15);
    CHECK_THROWS_AS(nu(1.0), InputError);
    CHECK_THROWS_AS(nu(-0.1), InputError);
}

TEST_CASE("zero data gives trivial functionals") {
    const ScatteringData z = ScatteringData::zero();
    CHECK(std::abs(delta(cplx(0.3, 0.4), 0.1, z) - 1.0) < 1e-15);
    CHECK(std::abs(f_function(cplx(-0.3, 0.4), 0.1, z) - 1.0) < 1e-15);
    CHECK(std::abs(c_constant(0.2, z) - 1.0) < 1e-15);
    CHECK(alpha(0.2, z) == 0.0);
    CHECK_FALSE(arg_alpha(0.2, z).has_value());
}

TEST_CASE("synthetic data against mpmath") {
    const ScatteringData sd = synthetic_data();
    for (const auto& e : golden::data()["synthetic"]) {
        const double z0 = e["z0"].get<double>();
        const PhaseData p = phase_data(z0, sd);
        CHECK(p.phase_defined);
        CHECK(std::abs(p.nu - e["nu"].get<double>()) < 1e-13);
        CHECK(std::abs(wrap_angle(p.arg_alpha - e["arg_alpha"].get<double>())) < 1e-9);
        CHECK(std::abs(p.alpha - golden::c(e["alpha"])) < 1e-9);
        CHECK(std::abs(p.c - golden::c(e["c"])) < 1e-9);
        CHECK(std::abs(std::norm(p.alpha) - p.nu / 2) < 1e-10);
        CHECK(std::abs(std::abs(p.c) - 1.0) < 1e-10);
        CHECK(std::abs(c_constant_stieltjes(z0, sd) - p.c) < 1e-8);
    }
    const auto& d = golden::data()["synthetic_delta"];
    CHECK(std::abs(delta(golden::c(d["z"]), d["z0"].get<double>(), sd) - golden::c(d["delta"])) < 1e-9);
}

TEST_CASE("PhaseData invariants on a 41-point sweep") {
    const ScatteringData sd = synthetic_data();
    for (int k = 0; k <= 40; ++k) {
        const double z0 = -2.0 + 0.1 * k;
        const PhaseData p = phase_data(z0, sd);
        CHECK(p.nu >= 0.0);
        CHECK(std::abs(std::abs(p.c) - 1.0) < 1e-10);
        CHECK(std::abs(std::norm(p.alpha) - p.nu / 2) < 1e-10);
    }
}

TEST_CASE("delta jump and bounds") {
    const ScatteringData sd = synthetic_data();
    const double z0 = 0.4;
    const FFunction F(sd, z0);
    const double rho = sd.sup_r();
    for (int k = 0; k < 20; ++k) {
        const double u = z0 - 0.05 - 0.15 * k;
        const cplx dp = F.delta(u, Side::upper), dm = F.delta(u, Side::lower);
        CHECK(std::abs(dp - dm * (1.0 - std::norm(sd.r(u)))) < 1e-6);
        // Richardson cross-check from u +- i eps.
        CHECK(std::abs(delta_boundary_eps(u, z0, sd, Side::upper) - dp) < 1e-6);
        // f jump with the normalising power.
        const double m2 = std::norm(sd.r(z0));
        const cplx fp = F.f(u, Side::upper), fm = F.f(u, Side::lower);
        CHECK(std::abs(fp - fm * (1.0 - std::norm(sd.r(u))) / (1.0 - m2)) < 1e-6);
    }
    for (cplx z : {cplx(0.1, 0.2), cplx(-1, -0.5), cplx(3, 1), cplx(0.4, 1e-3)}) {
        const double ad = std::abs(F.delta(z));
        CHECK(ad >= std::sqrt(1 - rho * rho) - 1e-12);
        CHECK(ad <= 1 / std::sqrt(1 - rho * rho) + 1e-12);
        const double af = std::abs(F.f(z));
        CHECK(af <= 1 / (1 - rho * rho));
        CHECK(1 / af <= 1 / (1 - rho * rho));
    }
    CHECK_THROWS_AS(F.delta(-1.0), InputError);
    CHECK_THROWS_AS(F.f(z0), InputError);
    CHECK_THROWS_AS(delta_boundary_eps(-1.0, z0, sd, Side::none), InputError);
}

TEST_CASE("f normalisation at infinity and Holder trend at the vertex") {
    const ScatteringData sd = synthetic_data();
    const double z0 = 0.2;
    const FFunction F(sd, z0);
    const cplx w(0.0, 1e3);
    const cplx lhs = F.f(z0 + w) * std::exp(I * F.nu() * std::log(w));
    CHECK(std::abs(lhs - F.c()) < 1e-4);

    std::vector<std::pair<double, double>> pts;
    for (double d : {1e-4, 1e-3, 1e-2, 1e-1}) {
        const cplx f = F.f(z0 + cplx(0, d));
        pts.emplace_back(d, std::abs(f * f - 1.0));
    }
    CHECK(std::abs(pts[0].second) < std::abs(pts[1].second));
    const auto fit = evolution::decay_fit(pts);
    CHECK(fit.slope >= 0.45);
    const cplx f2 = F.f(z0 + cplx(0, 1e-3));
    CHECK(std::abs(f2 * f2 - 1.0) < 0.1);
}

TEST_CASE("ramp data: arg alpha tends to -pi/4 as nu tends to zero") {
    // Small modulus with zero phase near z0. The integral term vanishes with nu
    // but arg Gamma(i nu) tends to -pi/2, leaving the linear phase -pi/4.
    double prev = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        auto r = [eps](double z) { return cplx(eps * std::exp(-z * z / 50)); };
        auto dr = [eps](double z) { return cplx(-eps * z / 25 * std::exp(-z * z / 50)); };
        const ScatteringData sd = ScatteringData::from_function(r, dr, -40, 40, 2049);
        const double a = *arg_alpha(0.0, sd);
        const double dev = std::abs(wrap_angle(a + pi / 4));
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("json rows") {
    const PhaseData p = phase_data(0.5, synthetic_data());
    const std::string row = to_json_row(p);
    CHECK(row.find("\"z0\"") != std::string::npos);
    CHECK(row.find("\"arg_alpha\"") != std::string::npos);
}
