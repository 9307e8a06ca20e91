#pragma once

// Independent reconstructions of the four-mode steady CM from the linearized
// red-sideband dynamics (rotating frame, RWA):
//
//     d/dt b = -gamma/2 b + G c + sqrt(gamma) zeta
//     d/dt c = -kappa/2 c - G b + sqrt(kappa) F
//
// once through the stationary Lyapunov equation and once by integrating the
// spectral densities of the frequency-domain solution. Time is measured in
// units of 1/kappa.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optocorr/error.hpp"
#include "optocorr/gaussian.hpp"
#include "optocorr/model.hpp"
#include "optocorr/quadrature.hpp"

namespace optocorr {

/// Positions in the frozen quadrature ordering of FullCM.
namespace quad {
inline constexpr int q1m = 0, p1m = 1, q2m = 2, p2m = 3;
inline constexpr int q1op = 4, p1op = 5, q2op = 6, p2op = 7;

/// Index of mode `cavity` (0 or 1), quadrature `p` (0 = q, 1 = p).
inline constexpr int mirror(int cavity, int p) { return 2 * cavity + p; }
inline constexpr int field(int cavity, int p) { return 4 + 2 * cavity + p; }
} // namespace quad

struct CavityRates {
    double gamma = 0.0;
    double kappa = 1.0;
    double G = 0.0;
};

struct LinearDynamics {
    Matrix8 drift = Matrix8::Zero();
    Matrix8 diffusion = Matrix8::Zero();
    /// Unit-rate symmetrized covariance of the input noises, same ordering;
    /// diffusion = R noise R with R = diag(sqrt(rate)).
    Matrix8 noise = Matrix8::Zero();
    CavityRates rates;
};

/// Frequency response of one cavity, denominator
/// Xi(w) = G^2 + (gamma/2 + i w)(kappa/2 + i w).
struct TransferSolution {
    CavityRates rates;

    std::complex<double> xi(double w) const {
        using namespace std::complex_literals;
        return rates.G * rates.G + (0.5 * rates.gamma + 1i * w) * (0.5 * rates.kappa + 1i * w);
    }

    /// Gains from (zeta, F) to (b, c), rate prefactors included:
    /// row 0 = b, row 1 = c; column 0 = mirror noise, column 1 = optical noise.
    Eigen::Matrix2cd gains(double w) const {
        using namespace std::complex_literals;
        const std::complex<double> inv = 1.0 / xi(w);
        const double sg = std::sqrt(rates.gamma);
        const double sk = std::sqrt(rates.kappa);
        Eigen::Matrix2cd h;
        h(0, 0) = (0.5 * rates.kappa + 1i * w) * sg * inv;
        h(0, 1) = rates.G * sk * inv;
        h(1, 0) = -rates.G * sg * inv;
        h(1, 1) = (0.5 * rates.gamma + 1i * w) * sk * inv;
        return h;
    }
};

inline LinearDynamics build_dynamics(const ReducedParams &rp) {
    validate(rp);
    LinearDynamics dyn;
    dyn.rates.kappa = 1.0;
    dyn.rates.gamma = rp.Gamma;
    // 4 G^2 / (gamma kappa) = C
    dyn.rates.G = std::sqrt(rp.C * rp.Gamma) * 0.5;
    const auto &[gamma, kappa, G] = dyn.rates;

    const double mirror_var = 0.5 * (2.0 * rp.n_th + 1.0);
    const double field_var = 0.5 * std::cosh(2.0 * rp.r); // (2N + 1)/2, N = sinh^2 r
    const double cross = 0.5 * std::sinh(2.0 * rp.r);     // M = sinh r cosh r

    for (int j = 0; j < 2; ++j) {
        for (int p = 0; p < 2; ++p) {
            const int b = quad::mirror(j, p);
            const int c = quad::field(j, p);
            dyn.drift(b, b) = -0.5 * gamma;
            dyn.drift(b, c) = G;
            dyn.drift(c, c) = -0.5 * kappa;
            dyn.drift(c, b) = -G;
            dyn.noise(b, b) = mirror_var;
            dyn.noise(c, c) = field_var;
        }
    }
    // Two-mode squeezed input: +M on q1-q2, -M on p1-p2.
    dyn.noise(quad::q1op, quad::q2op) = dyn.noise(quad::q2op, quad::q1op) = cross;
    dyn.noise(quad::p1op, quad::p2op) = dyn.noise(quad::p2op, quad::p1op) = -cross;

    Eigen::Matrix<double, 8, 1> root_rate;
    for (int k = 0; k < 4; ++k)
        root_rate(k) = std::sqrt(gamma);
    for (int k = 4; k < 8; ++k)
        root_rate(k) = std::sqrt(kappa);
    dyn.diffusion = root_rate.asDiagonal() * dyn.noise * root_rate.asDiagonal();
    return dyn;
}

inline bool is_hurwitz(const Matrix8 &a) {
    Eigen::EigenSolver<Matrix8> solver(a, false);
    if (solver.info() != Eigen::Success)
        return false;
    return solver.eigenvalues().real().maxCoeff() < 0.0;
}

namespace detail {

inline constexpr int kSymEntries = 36;

inline int sym_index(int i, int j) {
    if (i > j)
        std::swap(i, j);
    // Row-major upper triangle.
    return i * 8 - i * (i - 1) / 2 + (j - i);
}

inline Matrix8 lyapunov_residual(const Matrix8 &a, const Matrix8 &v, const Matrix8 &d) {
    return a * v + v * a.transpose() + d;
}

} // namespace detail

/// Unique symmetric V with A V + V A^T + D = 0, solved directly over the 36
/// upper-triangular unknowns.
inline FullCM lyapunov_cm(const LinearDynamics &dyn) {
    if (!is_hurwitz(dyn.drift))
        throw NoSteadyStateError("lyapunov_cm: drift matrix is not Hurwitz");
    using Sym = Eigen::Matrix<double, detail::kSymEntries, detail::kSymEntries>;
    using SymVec = Eigen::Matrix<double, detail::kSymEntries, 1>;

    Sym op = Sym::Zero();
    for (int i = 0; i < 8; ++i) {
        for (int j = i; j < 8; ++j) {
            Matrix8 e = Matrix8::Zero();
            e(i, j) = e(j, i) = 1.0;
            const Matrix8 image = dyn.drift * e + e * dyn.drift.transpose();
            const int col = detail::sym_index(i, j);
            for (int k = 0; k < 8; ++k)
                for (int l = k; l < 8; ++l)
                    op(detail::sym_index(k, l), col) = image(k, l);
        }
    }
    auto pack = [](const Matrix8 &m) {
        SymVec x;
        for (int k = 0; k < 8; ++k)
            for (int l = k; l < 8; ++l)
                x(detail::sym_index(k, l)) = m(k, l);
        return x;
    };
    auto unpack = [](const SymVec &x) {
        Matrix8 m;
        for (int k = 0; k < 8; ++k)
            for (int l = k; l < 8; ++l)
                m(k, l) = m(l, k) = x(detail::sym_index(k, l));
        return m;
    };

    const Eigen::FullPivLU<Sym> lu(op);
    if (!lu.isInvertible())
        throw NoSteadyStateError("lyapunov_cm: singular Lyapunov operator");
    SymVec x = lu.solve(-pack(dyn.diffusion));
    // One step of iterative refinement.
    x += lu.solve(-pack(detail::lyapunov_residual(dyn.drift, unpack(x), dyn.diffusion)));

    FullCM cm{unpack(x)};
    const double res = detail::lyapunov_residual(dyn.drift, cm.v, dyn.diffusion).norm();
    if (res > 1e-10 * dyn.diffusion.norm())
        throw NumericalDegeneracyError("lyapunov_cm: residual " + std::to_string(res) +
                                       " exceeds 1e-10 |D|");
    return cm;
}

inline double lyapunov_relative_residual(const LinearDynamics &dyn, const FullCM &cm) {
    return detail::lyapunov_residual(dyn.drift, cm.v, dyn.diffusion).norm() /
           dyn.diffusion.norm();
}

/// Symmetrized spectral density matrix S(w) = Re[H(w) N H(w)^dag] assembled
/// from the per-cavity transfer gains.
inline Matrix8 spectral_density(const LinearDynamics &dyn, double w) {
    const Eigen::Matrix2cd g = TransferSolution{dyn.rates}.gains(w);
    Eigen::Matrix<std::complex<double>, 8, 8> h = Eigen::Matrix<std::complex<double>, 8, 8>::Zero();
    for (int j = 0; j < 2; ++j) {
        for (int p = 0; p < 2; ++p) {
            const int b = quad::mirror(j, p);
            const int c = quad::field(j, p);
            h(b, b) = g(0, 0);
            h(b, c) = g(0, 1);
            h(c, b) = g(1, 0);
            h(c, c) = g(1, 1);
        }
    }
    return (h * dyn.noise.cast<std::complex<double>>() * h.adjoint()).real();
}

/// V = (1/2 pi) int S(w) dw. S is even in w (A and N are real), so the
/// integral over [0, W] is doubled; beyond W the density is modelled by its
/// 1/w^2 asymptote, which integrates in closed form.
inline FullCM spectral_cm(const LinearDynamics &dyn, double tol = 1e-9) {
    if (!(tol > 1e-12 && tol < 1e-3))
        throw InvalidInputError("spectral_cm: tol must lie in (1e-12, 1e-3)");
    if (!is_hurwitz(dyn.drift))
        throw NoSteadyStateError("spectral_cm: drift matrix is not Hurwitz");

    const auto &[gamma, kappa, G] = dyn.rates;
    const double window = 1e3 * std::max({1.0, G, gamma, kappa});
    const double smallest = std::min({gamma, kappa, G > 0.0 ? G : kappa});

    // Geometric breakpoints resolve the narrow mechanical peak around w = 0.
    std::vector<double> breaks{0.0};
    for (double x = 1e-2 * smallest; x < window; x *= std::sqrt(10.0))
        breaks.push_back(x);
    breaks.push_back(window);

    using Vec = quadrature::Vec<36>;
    auto integrand = [&](double w) {
        const Matrix8 s = spectral_density(dyn, w);
        Vec out;
        for (int k = 0; k < 8; ++k)
            for (int l = k; l < 8; ++l)
                out(detail::sym_index(k, l)) = s(k, l);
        return out;
    };

    quadrature::Options opt;
    opt.rel_tol = 0.1 * tol;
    opt.max_intervals = 20000;
    quadrature::Result<36> res;
    try {
        res = quadrature::integrate<36>(integrand, breaks, opt);
    } catch (const IntegrationFailureError &e) {
        // Re-express the packed index as row * 8 + col.
        int row = 0, col = 0;
        for (int k = 0; k < 8; ++k)
            for (int l = k; l < 8; ++l)
                if (detail::sym_index(k, l) == static_cast<int>(e.worst_entry()))
                    row = k, col = l;
        throw IntegrationFailureError("spectral_cm: quadrature did not converge (worst entry " +
                                          std::to_string(row) + "," + std::to_string(col) + ")",
                                      static_cast<std::size_t>(row * 8 + col));
    }

    // Tail: S(w) ~ L / w^2 for |w| > W, so int_W^inf = L / W.
    const Vec tail = integrand(window) * window;

    const Vec total = (res.value + tail) / std::numbers::pi; // 2 * (1 / 2 pi)
    FullCM cm;
    for (int k = 0; k < 8; ++k)
        for (int l = k; l < 8; ++l)
            cm.v(k, l) = cm.v(l, k) = total(detail::sym_index(k, l));
    return cm;
}

/// 4x4 sub-block of the selected mode pair, re-expressed in standard form.
inline TwoModeCM extract_bipartition(const FullCM &full, Subsystem which) {
    const int off = which == Subsystem::mechanical ? 0 : 4;
    const Matrix4 s = full.v.block<4, 4>(off, off);
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;
    auto check = [&](bool ok, const char *what) {
        if (!ok)
            throw FormViolationError(std::string("extract_bipartition(") + to_string(which) +
                                     "): " + what);
    };
    check(std::abs(s(0, 1)) <= tol && std::abs(s(2, 3)) <= tol,
          "local blocks have q-p correlations");
    check(std::abs(s(0, 0) - s(1, 1)) <= tol && std::abs(s(2, 2) - s(3, 3)) <= tol,
          "local blocks have unequal q/p variances");
    check(std::abs(s(0, 3)) <= tol && std::abs(s(1, 2)) <= tol,
          "off-diagonal block is not diagonal");
    return {0.5 * (s(0, 0) + s(1, 1)), 0.5 * (s(2, 2) + s(3, 3)), s(0, 2), s(1, 3)};
}

/// Writes a standard-form CM into the selected 4x4 block of `full`.
inline void embed_bipartition(FullCM &full, Subsystem which, const TwoModeCM &cm) {
    const int off = which == Subsystem::mechanical ? 0 : 4;
    full.v.block<4, 4>(off, off) = cm.matrix();
}

} // namespace optocorr
