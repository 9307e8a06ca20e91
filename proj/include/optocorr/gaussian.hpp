#pragma once

// Gaussian covariance-matrix machinery.
//
// Convention: quadratures q = (a^dag + a)/sqrt(2), p = i(a^dag - a)/sqrt(2),
// so the vacuum has variance 1/2 in every quadrature (hbar = 1). The
// uncertainty relation reads V + i Omega / 2 >= 0 and every symplectic
// eigenvalue of a physical state is >= 1/2. Formulas written for the
// "vacuum = 1" convention differ from the ones here by factors of 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "optocorr/error.hpp"

namespace optocorr {

using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;
using Matrix8 = Eigen::Matrix<double, 8, 8>;

/// Default tolerance on nu_minus >= 1/2 used by physicality checks.
inline constexpr double kPhysicalityTol = 1e-10;

/// Two-mode CM in standard form:
///
///     [ nu1   0    nu3   0   ]
///     [ 0     nu1  0     nu3p]
///     [ nu3   0    nu2   0   ]
///     [ 0     nu3p 0     nu2 ]
///
/// over the ordering (q_A, p_A, q_B, p_B).
struct TwoModeCM {
    double nu1 = 0.5;
    double nu2 = 0.5;
    double nu3 = 0.0;
    double nu3p = 0.0;

    Matrix4 matrix() const {
        Matrix4 v = Matrix4::Zero();
        v(0, 0) = v(1, 1) = nu1;
        v(2, 2) = v(3, 3) = nu2;
        v(0, 2) = v(2, 0) = nu3;
        v(1, 3) = v(3, 1) = nu3p;
        return v;
    }

    /// Same state with the two modes relabelled.
    TwoModeCM swapped() const { return {nu2, nu1, nu3, nu3p}; }

    bool finite() const {
        return std::isfinite(nu1) && std::isfinite(nu2) && std::isfinite(nu3) &&
               std::isfinite(nu3p);
    }

    friend bool operator==(const TwoModeCM &, const TwoModeCM &) = default;
};

/// Steady covariance matrix of the four-mode system, ordered
/// (q1m, p1m, q2m, p2m, q1op, p1op, q2op, p2op).
struct FullCM {
    Matrix8 v = Matrix8::Zero();
};

struct SymplecticSpectrum {
    double nu_minus = 0.5;
    double nu_plus = 0.5;
};

namespace detail {

/// a*b - c*d with one rounding (Kahan).
inline double diff_of_products(double a, double b, double c, double d) {
    const double w = c * d;
    const double err = std::fma(-c, d, w);
    const double x = std::fma(a, b, -w);
    return x + err;
}

/// Error-free a + b (Knuth TwoSum): returns the rounded sum, sets err.
inline double two_sum(double a, double b, double &err) {
    const double s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
}

/// nu_+^2 = (delta + sqrt(disc)) / 2, nu_-^2 = det V / nu_+^2. The caller
/// supplies disc = delta^2 - 4 det V, ideally in a cancellation-free form.
inline SymplecticSpectrum two_mode_spectrum(double delta, double det_v, double disc) {
    if (!std::isfinite(delta) || !std::isfinite(det_v) || !std::isfinite(disc))
        throw InvalidInputError("symplectic_eigenvalues: non-finite covariance matrix");
    if (disc < 0.0) {
        if (disc < -1e-12 * std::max(1.0, delta * delta))
            throw NumericalDegeneracyError("symplectic_eigenvalues: negative discriminant " +
                                           std::to_string(disc));
        disc = 0.0;
    }
    const double plus_sq = 0.5 * (delta + std::sqrt(disc));
    // Dividing avoids the cancellation in (delta - root).
    const double minus_sq = plus_sq > 0.0 ? det_v / plus_sq : 0.0;
    if (!(minus_sq > 0.0))
        throw NumericalDegeneracyError("symplectic_eigenvalues: non-positive determinant");
    return {std::sqrt(minus_sq), std::sqrt(plus_sq)};
}

} // namespace detail

// "+ 0.0" turns the -0 of 0 * -0 into +0 for clean output.
inline double det_offdiag(const TwoModeCM &cm) { return cm.nu3 * cm.nu3p + 0.0; }

/// det V of the standard-form matrix, factored as (nu1 nu2 - nu3^2)(nu1 nu2 - nu3p^2).
inline double determinant(const TwoModeCM &cm) {
    return detail::diff_of_products(cm.nu1, cm.nu2, cm.nu3, cm.nu3) *
           detail::diff_of_products(cm.nu1, cm.nu2, cm.nu3p, cm.nu3p);
}

inline SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM &cm) {
    if (!cm.finite())
        throw InvalidInputError("symplectic_eigenvalues: non-finite covariance matrix");
    if (!(cm.nu1 > 0.0) || !(cm.nu2 > 0.0))
        throw InvalidInputError("symplectic_eigenvalues: diagonal blocks must be positive");
    const double n1 = cm.nu1, n2 = cm.nu2, c = cm.nu3, d = cm.nu3p;
    // delta = n1^2 + n2^2 + 2 c d, compensated: it cancels badly for
    // strongly squeezed states.
    const double p1 = n1 * n1, p2 = n2 * n2, p3 = 2.0 * c * d;
    const double e1 = std::fma(n1, n1, -p1), e2 = std::fma(n2, n2, -p2), e3 = std::fma(2.0 * c, d, -p3);
    double s12_err = 0.0, s_err = 0.0;
    const double s12 = detail::two_sum(p1, p2, s12_err);
    const double s = detail::two_sum(s12, p3, s_err);
    const double delta = s + (s12_err + s_err + e1 + e2 + e3);
    // delta^2 - 4 det V = (n1^2 - n2^2)^2 + 4 (n1 c + n2 d)(n1 d + n2 c).
    const double diff = (n1 - n2) * (n1 + n2);
    const double disc = diff * diff + 4.0 * (n1 * c + n2 * d) * (n1 * d + n2 * c);
    return detail::two_mode_spectrum(delta, determinant(cm), disc);
}

/// General (not necessarily standard-form) 4x4 two-mode CM.
inline SymplecticSpectrum symplectic_eigenvalues(const Matrix4 &v) {
    if (!v.allFinite())
        throw InvalidInputError("symplectic_eigenvalues: non-finite covariance matrix");
    const Matrix2 a = v.topLeftCorner<2, 2>();
    const Matrix2 b = v.bottomRightCorner<2, 2>();
    const Matrix2 c = v.topRightCorner<2, 2>();
    if (!(a(0, 0) > 0.0) || !(b(0, 0) > 0.0) || !(a.determinant() > 0.0) ||
        !(b.determinant() > 0.0))
        throw InvalidInputError("symplectic_eigenvalues: diagonal blocks must be positive");
    const double delta = a.determinant() + b.determinant() + 2.0 * c.determinant();
    const double det_v = v.determinant();
    return detail::two_mode_spectrum(delta, det_v, delta * delta - 4.0 * det_v);
}

/// Symplectic eigenvalues of an 8x8 CM in ascending order, from the spectrum of Omega V.
inline std::array<double, 4> symplectic_eigenvalues(const FullCM &cm) {
    if (!cm.v.allFinite())
        throw InvalidInputError("symplectic_eigenvalues: non-finite covariance matrix");
    Matrix8 omega = Matrix8::Zero();
    for (int k = 0; k < 4; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    Eigen::EigenSolver<Matrix8> solver(omega * cm.v, false);
    if (solver.info() != Eigen::Success)
        throw NumericalDegeneracyError("symplectic_eigenvalues: eigensolver failed");
    std::array<double, 8> mags{};
    for (int k = 0; k < 8; ++k)
        mags[k] = std::abs(solver.eigenvalues()[k].imag());
    std::sort(mags.begin(), mags.end());
    // Eigenvalues come in pairs +/- i nu.
    return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3]), 0.5 * (mags[4] + mags[5]),
            0.5 * (mags[6] + mags[7])};
}

inline bool is_physical(const TwoModeCM &cm, double tol = kPhysicalityTol) {
    if (!(tol >= 0.0))
        throw InvalidInputError("is_physical: tolerance must be >= 0");
    // V splits into the q block [[nu1, nu3], [nu3, nu2]] and the p block
    // [[nu1, nu3p], [nu3p, nu2]]; a matrix that is not positive definite is
    // rejected before the spectrum is taken.
    if (cm.finite() && cm.nu1 > 0.0 && cm.nu2 > 0.0 &&
        (!(detail::diff_of_products(cm.nu1, cm.nu2, cm.nu3, cm.nu3) > 0.0) ||
         !(detail::diff_of_products(cm.nu1, cm.nu2, cm.nu3p, cm.nu3p) > 0.0)))
        return false;
    return symplectic_eigenvalues(cm).nu_minus >= 0.5 - tol;
}

inline bool is_physical(const FullCM &cm, double tol = kPhysicalityTol) {
    if (!(tol >= 0.0))
        throw InvalidInputError("is_physical: tolerance must be >= 0");
    Eigen::SelfAdjointEigenSolver<Matrix8> eig(cm.v, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0))
        return false;
    return symplectic_eigenvalues(cm)[0] >= 0.5 - tol;
}

/// S_2 = -ln Tr rho^2 = n ln 2 + (1/2) ln det V for an n-mode CM; zero on pure states.
inline double renyi2_entropy(const Eigen::MatrixXd &v) {
    if (v.rows() != v.cols() || v.rows() == 0 || v.rows() % 2 != 0)
        throw InvalidInputError("renyi2_entropy: CM must be square with even dimension");
    if (!v.allFinite())
        throw InvalidInputError("renyi2_entropy: non-finite covariance matrix");
    const double det = v.determinant();
    if (!(det > 0.0))
        throw InvalidInputError("renyi2_entropy: det V must be positive");
    const auto modes = static_cast<double>(v.rows() / 2);
    return modes * std::numbers::ln2 + 0.5 * std::log(det);
}

/// Single-mode S_2 of a diag(nu, nu) marginal.
inline double renyi2_entropy_single(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw InvalidInputError("renyi2_entropy: det V must be positive");
    return std::log(2.0 * nu);
}

inline double renyi2_entropy(const TwoModeCM &cm) {
    if (!cm.finite())
        throw InvalidInputError("renyi2_entropy: non-finite covariance matrix");
    const double det = determinant(cm);
    if (!(det > 0.0))
        throw InvalidInputError("renyi2_entropy: det V must be positive");
    return 2.0 * std::numbers::ln2 + 0.5 * std::log(det);
}

/// I_2 = S_2(A) + S_2(B) - S_2(AB).
inline double mutual_information_r2(const TwoModeCM &cm) {
    if (cm.nu3 == 0.0 && cm.nu3p == 0.0)
        return 0.0;
    const double det = determinant(cm);
    if (!(det > 0.0) || !(cm.nu1 > 0.0) || !(cm.nu2 > 0.0))
        throw InvalidInputError("mutual_information_r2: det V must be positive");
    // (nu1^2 nu2^2) / det V, written as a ratio to keep precision.
    const double i2 = 0.5 * (std::log(cm.nu1 * cm.nu2 /
                                      detail::diff_of_products(cm.nu1, cm.nu2, cm.nu3, cm.nu3)) +
                             std::log(cm.nu1 * cm.nu2 /
                                      detail::diff_of_products(cm.nu1, cm.nu2, cm.nu3p, cm.nu3p)));
    return std::max(i2, 0.0);
}

/// Rotation of a single mode's phase space by angle theta.
inline Matrix2 phase_rotation(double theta) {
    Matrix2 r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

/// Apply independent local rotations to modes A and B of a 4x4 CM.
inline Matrix4 rotate_locally(const Matrix4 &v, double theta_a, double theta_b) {
    Matrix4 s = Matrix4::Zero();
    s.topLeftCorner<2, 2>() = phase_rotation(theta_a);
    s.bottomRightCorner<2, 2>() = phase_rotation(theta_b);
    return s * v * s.transpose();
}

} // namespace optocorr
