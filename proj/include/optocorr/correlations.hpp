#pragma once

// Gaussian Renyi-2 entanglement and discord of standard-form two-mode CMs,
// plus a direct optimization over pure Gaussian measurements that serves as
// an independent check of the discord closed form. All values in nats.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "optocorr/error.hpp"
#include "optocorr/gaussian.hpp"
#include "optocorr/nelder_mead.hpp"

namespace optocorr {

/// Which mode of a bipartition the local Gaussian measurement acts on.
enum class Measured { A, B };

struct GaussianMeasurement {
    double lambda = 1.0; ///< seed squeezing, > 0
    double theta = 0.0;  ///< basis angle, rad

    /// R(theta) diag(lambda, 1/lambda) R(theta)^T / 2
    Matrix2 seed_cm() const {
        const Matrix2 r = phase_rotation(theta);
        Matrix2 d = Matrix2::Zero();
        d(0, 0) = 0.5 * lambda;
        d(1, 1) = 0.5 / lambda;
        return r * d * r.transpose();
    }
};

struct CorrelationReport {
    double e2 = 0.0;
    double d2_a_given_b = 0.0; ///< measurement on B
    double d2_b_given_a = 0.0; ///< measurement on A
    double i2 = 0.0;
    double j2 = 0.0; ///< i2 - d2_a_given_b
    double det_v3 = 0.0;
    double nu_minus = 0.5;
    bool entangled = false;
};

namespace detail {

inline void require_physical(const TwoModeCM &cm, const char *who) {
    if (!cm.finite())
        throw InvalidInputError(std::string(who) + ": non-finite covariance matrix");
    const double nu_minus = symplectic_eigenvalues(cm).nu_minus;
    if (nu_minus < 0.5 - kPhysicalityTol)
        throw NonPhysicalError(std::string(who) + ": CM is not physical (nu_minus = " +
                               std::to_string(nu_minus) + ")");
}

/// Clamps rounding-level negatives of a quantity that must be >= 0.
inline double clamp_nonnegative(double x, double scale, const char *who) {
    if (x >= 0.0)
        return x;
    if (x < -1e-12 * std::max(1.0, scale))
        throw NumericalDegeneracyError(std::string(who) + ": negative value " + std::to_string(x));
    return 0.0;
}

} // namespace detail

/// E_2 for the squeezed-thermal class (nu3 nu3p <= 0), with s = (nu1+nu2)/2,
/// d = (nu1-nu2)/2, f = sqrt(det V). Zero on the separable side 4f >= 4s - 1.
inline double gr2_entanglement(const TwoModeCM &cm) {
    detail::require_physical(cm, "gr2_entanglement");
    if (det_offdiag(cm) > 0.0)
        throw OutOfClassError("gr2_entanglement: closed form requires nu3 * nu3p <= 0");
    const double s = 0.5 * (cm.nu1 + cm.nu2);
    const double d = 0.5 * (cm.nu1 - cm.nu2);
    const double f = std::sqrt(determinant(cm));
    if (4.0 * f >= 4.0 * s - 1.0)
        return 0.0;
    const double a = (4.0 * f - 1.0) * (4.0 * f - 1.0) - 16.0 * d * d;
    const double b = cm.nu1 * cm.nu2 - f; // s^2 - d^2 - f
    const double rad =
        detail::clamp_nonnegative(a, 16.0 * f * f, "gr2_entanglement") *
        detail::clamp_nonnegative(b, cm.nu1 * cm.nu2, "gr2_entanglement");
    const double g = ((4.0 * f + 1.0) * s - std::sqrt(rad)) / (4.0 * (d * d + f));
    return detail::clamp_nonnegative(std::log(g), 1.0, "gr2_entanglement");
}

/// One-way Renyi-2 discord with the measurement on `measured`.
inline double gr2_discord(const TwoModeCM &cm, Measured measured = Measured::B) {
    detail::require_physical(cm, "gr2_discord");
    if (cm.nu3 == 0.0 && cm.nu3p == 0.0)
        return 0.0;
    // Formula is written for measurement on the second mode.
    const TwoModeCM v = measured == Measured::B ? cm : cm.swapped();
    const double n1 = v.nu1, n2 = v.nu2;
    // A quarter-turn of both modes exchanges nu3 and nu3p, so the formula
    // may take |nu3| >= |nu3p|; its first branch relies on that ordering.
    const double c2 = std::max(v.nu3 * v.nu3, v.nu3p * v.nu3p);
    const double d2 = std::min(v.nu3 * v.nu3, v.nu3p * v.nu3p);

    const double b2m1 = 4.0 * n2 * n2 - 1.0;
    if (b2m1 <= 1e-14)
        return 0.0; // pure measured marginal admits no correlations

    const double lhs = 4.0 * n1 * n2 * n2 * d2 - c2 * (n1 + 4.0 * n2 * d2);
    const double rhs = 4.0 * n1 * n2 * n2 * c2 - d2 * (n1 + 4.0 * n2 * c2);
    double eps = 0.0;
    if (lhs * rhs < 0.0) {
        eps = 4.0 * n1 * (n1 - c2 / n2);
    } else {
        const double u = n1 * b2m1 - 4.0 * n2 * d2;
        const double w = n1 * b2m1 - 4.0 * n2 * c2;
        const double rad = detail::clamp_nonnegative(u * w, n1 * n1 * b2m1 * b2m1, "gr2_discord");
        const double root = (4.0 * std::abs(v.nu3 * v.nu3p) + 2.0 * std::sqrt(rad)) / b2m1;
        eps = root * root;
    }
    const double d = std::log(2.0 * n2) - 0.5 * std::log(16.0 * determinant(v)) + 0.5 * std::log(eps);
    return detail::clamp_nonnegative(d, 1.0, "gr2_discord");
}

inline double classical_correlations(const TwoModeCM &cm, Measured measured = Measured::B) {
    const double j = mutual_information_r2(cm) - gr2_discord(cm, measured);
    if (j < -1e-10)
        throw NumericalDegeneracyError("classical_correlations: J_2 = " + std::to_string(j));
    return std::max(j, 0.0);
}

/// Conditional CM of the unmeasured mode after a Gaussian measurement with
/// seed `m` on the measured mode.
inline Matrix2 conditional_cm(const TwoModeCM &cm, Measured measured,
                              const GaussianMeasurement &m) {
    const Matrix4 v = (measured == Measured::B ? cm : cm.swapped()).matrix();
    const Matrix2 kept = v.topLeftCorner<2, 2>();
    const Matrix2 probed = v.bottomRightCorner<2, 2>();
    const Matrix2 cross = v.topRightCorner<2, 2>();
    const Matrix2 sum = probed + m.seed_cm();
    return kept - cross * sum.inverse() * cross.transpose();
}

struct MeasurementOptimum {
    double j2 = 0.0; ///< max over measurements of S_2(kept) - S_2(conditional)
    GaussianMeasurement measurement;
};

/// Coarse (log lambda, theta) grid followed by Nelder-Mead refinement until
/// the parameter step is below tol.
inline MeasurementOptimum optimize_measurement(const TwoModeCM &cm, Measured measured, double tol) {
    if (!(tol > 1e-10 && tol < 1e-3))
        throw InvalidInputError("discord_oracle: tol must lie in (1e-10, 1e-3)");
    detail::require_physical(cm, "discord_oracle");

    const TwoModeCM v = measured == Measured::B ? cm : cm.swapped();
    const double kept_half_log_det = std::log(v.nu1);

    auto objective = [&](const std::array<double, 2> &x) {
        const double log_lambda = std::clamp(x[0], -30.0, 30.0);
        const GaussianMeasurement m{std::exp(log_lambda), x[1]};
        const Matrix2 probe = v.matrix().bottomRightCorner<2, 2>() + m.seed_cm();
        if (!(probe.determinant() > 0.0))
            return std::numeric_limits<double>::infinity();
        const double det = conditional_cm(v, Measured::B, m).determinant();
        if (!(det > 0.0))
            return std::numeric_limits<double>::infinity();
        return 0.5 * std::log(det);
    };

    constexpr int kLambdaPoints = 33;
    constexpr int kThetaPoints = 24;
    std::array<double, 2> best{0.0, 0.0};
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kLambdaPoints; ++i) {
        const double ll = -8.0 + 16.0 * i / (kLambdaPoints - 1);
        for (int j = 0; j < kThetaPoints; ++j) {
            const std::array<double, 2> x{ll, std::numbers::pi * j / kThetaPoints};
            const double val = objective(x);
            if (val < best_val) {
                best_val = val;
                best = x;
            }
        }
    }
    const auto res = nelder_mead<2>(objective, best, {0.25, std::numbers::pi / kThetaPoints}, tol);

    MeasurementOptimum out;
    const double min_half_log_det = std::min(res.value, best_val);
    out.j2 = kept_half_log_det - min_half_log_det;
    const auto &xb = res.value <= best_val ? res.x : best;
    out.measurement = {std::exp(std::clamp(xb[0], -30.0, 30.0)),
                       std::fmod(std::fmod(xb[1], std::numbers::pi) + std::numbers::pi,
                                 std::numbers::pi)};
    return out;
}

/// I_2 minus the numerically maximized one-way classical correlations.
inline double discord_oracle(const TwoModeCM &cm, Measured measured = Measured::B,
                             double tol = 1e-9) {
    const MeasurementOptimum opt = optimize_measurement(cm, measured, tol);
    return mutual_information_r2(cm) - opt.j2;
}

inline CorrelationReport analyze(const TwoModeCM &cm) {
    CorrelationReport rep;
    rep.nu_minus = symplectic_eigenvalues(cm).nu_minus;
    rep.e2 = gr2_entanglement(cm);
    rep.d2_a_given_b = gr2_discord(cm, Measured::B);
    rep.d2_b_given_a = gr2_discord(cm, Measured::A);
    rep.i2 = mutual_information_r2(cm);
    rep.j2 = std::max(rep.i2 - rep.d2_a_given_b, 0.0);
    rep.det_v3 = det_offdiag(cm);
    rep.entangled = rep.e2 > 0.0;
    return rep;
}

} // namespace optocorr
