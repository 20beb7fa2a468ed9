#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nlsdbar {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx I{0.0, 1.0};

// Library failures carry the module and operation that raised them so the
// CLI can report them and map them to exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string op, const std::string& what)
        : std::runtime_error(module + "::" + op + ": " + what),
          module_(std::move(module)), op_(std::move(op)) {}
    const std::string& module() const noexcept { return module_; }
    const std::string& op() const noexcept { return op_; }

private:
    std::string module_;
    std::string op_;
};

// Precondition violated by the caller.
class InputError : public Error {
public:
    using Error::Error;
};

// Algorithm could not reach its accuracy target.
class NumericalError : public Error {
public:
    using Error::Error;
};

// 2x2 complex matrix, row major.
struct Mat2 {
    cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

    static Mat2 identity() { return {}; }
    static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    cplx det() const { return a11 * a22 - a12 * a21; }
    cplx trace() const { return a11 + a22; }
    Mat2 inverse_unimodular() const { return {a22, -a12, -a21, a11}; }
    Mat2 inverse() const {
        const cplx d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}
inline Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
}
inline Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
}
inline Mat2 operator*(cplx s, const Mat2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
}

// Spectral norm (largest singular value).
double spectral_norm(const Mat2& m);

// Frobenius norm, cheap upper bound for the spectral norm.
inline double frobenius_norm(const Mat2& m) {
    return std::sqrt(std::norm(m.a11) + std::norm(m.a12) + std::norm(m.a21) + std::norm(m.a22));
}

}  // namespace nlsdbar
