#include <cmath>

#include "doctest.h"
#include "golden.hpp"
#include "nlsdbar/scattering.hpp"

using namespace nlsdbar;

namespace {

double defect(const Mat2& T) { return std::abs(std::norm(T.a11) - std::norm(T.a21) - 1.0); }

double mat_diff(const Mat2& a, const Mat2& b) { return frobenius_norm(a - b); }

}  // namespace

TEST_CASE("potential validation and builtins") {
    const Potential g = Potential::gaussian(1.0, 1.0);
    CHECK_NOTHROW(g.validate());
    CHECK(std::abs(g(0.3) - std::exp(-0.09)) < 1e-14);
    CHECK(std::abs(g.samples[g.size() / 2] - 1.0) < 1e-15);

    const Potential b = Potential::box(0.5, 2.0);
    CHECK_NOTHROW(b.validate());
    // Piecewise-constant samples with both edges on the grid.
    for (std::size_t k = 1; k + 1 < b.size(); ++k) {
        const double x = b.x(k);
        const cplx expect = (x > -1e-12 && x < 2.0 + 1e-12) ? cplx(0.5) : cplx(0.0);
        CHECK(b.samples[k] == expect);
    }

    Potential bad = g;
    bad.samples.front() = 1.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = g;
    bad.samples[3] = cplx(NAN, 0);
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = g;
    bad.dx = -1;
    CHECK_THROWS_AS(bad.validate(), InputError);
    CHECK_THROWS_AS(Potential::gaussian(1.0, -1.0), InputError);
    CHECK_THROWS_AS(Potential::box(1.0, 0.0), InputError);
}

TEST_CASE("transfer matrix of the zero potential is the identity") {
    Potential z = Potential::sampled(-5, 5, 101, [](double) { return cplx(0.0); }, false);
    for (double k : {-3.0, 0.0, 1.7}) CHECK(mat_diff(transfer_matrix(z, k), Mat2::identity()) < 1e-15);
}

TEST_CASE("box oracle against mpmath matrix exponentials") {
    for (const char* key : {"box", "box2"}) {
        const auto& f = golden::data()[key];
        const auto o = box_reflection_oracle(f["A"].get<double>(), f["L"].get<double>(), f["z"].get<double>());
        CHECK(std::abs(o.a - golden::c(f["a"])) < 1e-13);
        CHECK(std::abs(o.b - golden::c(f["b"])) < 1e-13);
        CHECK(std::abs(o.r - golden::c(f["r"])) < 1e-13);
    }
    const auto z0 = box_reflection_oracle(0.0, 2.0, 0.7);
    CHECK(std::abs(z0.a - 1.0) < 1e-15);
    CHECK(std::abs(z0.b) < 1e-15);
    for (double z : {-3.0, -0.2, 0.0, 0.5, 0.5 + 1e-10, 4.0}) CHECK(defect(box_reflection_oracle(0.5, 2, z).T) < 1e-12);
    // Riemann-Lebesgue decay.
    CHECK(std::abs(box_reflection_oracle(0.5, 2, 1e4).r) < 1e-4);
    CHECK_THROWS_AS(box_reflection_oracle(0.5, 0.0, 1.0), InputError);
}

TEST_CASE("box potential transfer matrix matches the oracle") {
    const Potential b = Potential::box(0.7, 1.0);
    for (double z : {-2.0, -1.1, 0.0, 0.4, 3.0}) {
        const Mat2 T = transfer_matrix(b, z);
        CHECK(mat_diff(T, box_reflection_oracle(0.7, 1.0, z).T) < 1e-8);
        CHECK(defect(T) < 1e-8);
    }
    const Potential b2 = Potential::box(0.5, 2.0);
    const Mat2 T = transfer_matrix(b2, 0.3);
    CHECK(std::abs(T.a21 / T.a11 - golden::c(golden::data()["box"]["r"])) < 1e-6);
}

TEST_CASE("sampled box converges to the oracle under refinement") {
    // Samples only (linear interpolation of the steps): error shrinks with dx.
    double prev = 1e9;
    for (double dx : {0.04, 0.02, 0.01}) {
        Potential b = Potential::box(0.5, 2.0, 2.0, dx);
        b.exact = nullptr;
        const Mat2 T = transfer_matrix(b, 0.3);
        const double err = std::abs(T.a21 / T.a11 - box_reflection_oracle(0.5, 2.0, 0.3).r);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("step refinement order") {
    const Potential g = Potential::gaussian(0.8, 1.0, 7.0, 0.05);
    // tol = 1 accepts the first doubled pass, i.e. exactly 2s RK4 steps per cell.
    const Mat2 T1 = transfer_matrix(g, 1.3, TransferOptions{1, 1.0, 0});
    const Mat2 T2 = transfer_matrix(g, 1.3, TransferOptions{2, 1.0, 0});
    const Mat2 T4 = transfer_matrix(g, 1.3, TransferOptions{4, 1.0, 0});
    const Mat2 ref = transfer_matrix(g, 1.3, TransferOptions{64, 1.0, 0});
    const double e1 = mat_diff(T1, ref), e2 = mat_diff(T2, ref), e4 = mat_diff(T4, ref);
    CHECK(std::log2(e1 / e2) > 2.0);
    CHECK(std::log2(e2 / e4) > 2.0);
}

TEST_CASE("reflection coefficient of a Gaussian") {
    const Potential g = Potential::gaussian(0.8, 1.0);
    const ScatteringData sd = reflection_coefficient(g);
    CHECK(sd.sup_r() < 1.0);
    CHECK(std::abs(sd.r(8.0)) < 1e-6);
    CHECK(std::abs(sd.r(-8.0)) < 1e-6);
    for (std::size_t k = 0; k < sd.size(); ++k)
        CHECK(std::abs(std::norm(sd.a_values()[k]) - std::norm(sd.b_values()[k]) - 1.0) < 1e-8);
    CHECK(sd.r(100.0) == 0.0);
}

TEST_CASE("Born regime is linear in the amplitude") {
    ScatterOptions o;
    o.n = 65;
    const ScatteringData s1 = reflection_coefficient(Potential::gaussian(1e-3, 1.0), o);
    const ScatteringData s2 = reflection_coefficient(Potential::gaussian(2e-3, 1.0), o);
    for (double z : {-1.0, 0.0, 0.5, 1.5}) {
        const cplx ratio = s2.r(z) / s1.r(z);
        CHECK(std::abs(ratio - 2.0) < 0.02);
        // Leading Born term: conj of the transform, sqrt(pi) eps e^{-z^2} for real data.
        CHECK(std::abs(s1.r(z) - 1e-3 * std::sqrt(pi) * std::exp(-z * z)) < 1e-2 * 1e-3);
    }
}

TEST_CASE("zero data and serialisation") {
    const ScatteringData z = ScatteringData::zero();
    CHECK(z.is_zero());
    CHECK(z.r(0.3) == 0.0);
    CHECK(reflection_coefficient(Potential::sampled(-5, 5, 101, [](double) { return cplx(0.0); }, false))
              .sup_r() == 0.0);

    ScatterOptions o;
    o.n = 129;
    const ScatteringData sd = reflection_coefficient(Potential::gaussian(cplx(0.5, 0.2), 1.0), o);
    const ScatteringData back = ScatteringData::from_json(sd.to_json());
    REQUIRE(back.size() == sd.size());
    CHECK(back.z_min() == sd.z_min());
    CHECK(back.dz() == sd.dz());
    for (std::size_t k = 0; k < sd.size(); ++k) {
        CHECK(back.r_values()[k] == sd.r_values()[k]);
        CHECK(back.a_values()[k] == sd.a_values()[k]);
        CHECK(back.b_values()[k] == sd.b_values()[k]);
    }
    const std::string csv = sd.to_csv();
    CHECK(csv.rfind("z,re_r,im_r,re_a,im_a,re_b,im_b\n", 0) == 0);
    CHECK_THROWS_AS(ScatteringData::from_json("{bad"), InputError);
}

TEST_CASE("scattering data rejects invalid input") {
    std::vector<cplx> r(10, 0.0);
    r[4] = 1.0;
    CHECK_THROWS_AS(ScatteringData::from_samples(0, 0.1, r), InputError);
    CHECK_THROWS_AS(ScatteringData::from_samples(0, 0.1, std::vector<cplx>(3, 0.0)), InputError);
    // Box data decay like 1/z, so the default range fails the end test.
    ScatterOptions o;
    o.n = 65;
    o.max_extensions = 1;
    CHECK_THROWS_AS(reflection_coefficient(Potential::box(0.5, 2.0), o), InputError);
}
