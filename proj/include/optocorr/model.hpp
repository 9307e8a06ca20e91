#pragma once

// Double-cavity optomechanical model on the red sideband: physical
// parameters, their reduction to (Gamma, C, n_th, r), and the closed-form
// steady-state CMs of the mechanical and optical mode pairs.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "optocorr/error.hpp"
#include "optocorr/gaussian.hpp"

namespace optocorr {

namespace constants {
// CODATA 2018 exact values.
inline constexpr double hbar = 1.054571817e-34; // J s
inline constexpr double k_B = 1.380649e-23;     // J / K
} // namespace constants

/// SI parameters of one of the two identical cavities.
struct PhysicalParams {
    double omega_mu = 0.0; ///< mechanical angular frequency, rad/s
    double m_mu = 0.0;     ///< effective mirror mass, kg
    double gamma = 0.0;    ///< mechanical damping, rad/s
    double l = 0.0;        ///< cavity length, m
    double omega_c = 0.0;  ///< cavity angular frequency, rad/s
    double kappa = 0.0;    ///< cavity decay, rad/s
    double omega_L = 0.0;  ///< laser angular frequency, rad/s
    double power = 0.0;    ///< input laser power, W
    double T = 0.0;        ///< bath temperature, K
    double r = 0.0;        ///< squeezing parameter
};

/// Membrane/cavity values of the reference experiment (1.5 mW drive, T = 0).
inline PhysicalParams experimental_params() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    PhysicalParams p;
    p.omega_mu = two_pi * 947e3;
    p.m_mu = 145e-12;
    p.gamma = two_pi * 140.0;
    p.l = 25e-3;
    p.omega_c = two_pi * 5.26e14;
    p.kappa = two_pi * 172e3;
    p.omega_L = two_pi * 2.82e14;
    p.power = 1.5e-3;
    p.T = 0.0;
    p.r = 0.0;
    return p;
}

/// Default mechanical frequency used for temperature -> n_th conversion.
inline constexpr double kDefaultOmegaMu = 2.0 * std::numbers::pi * 947e3;

/// Throws InvalidInputError on invalid values; returns soft warnings
/// (low quality factor, unresolved sideband).
inline std::vector<std::string> validate(const PhysicalParams &p) {
    const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(p.omega_mu) || !positive(p.m_mu) || !positive(p.gamma) || !positive(p.l) ||
        !positive(p.omega_c) || !positive(p.kappa) || !positive(p.omega_L))
        throw InvalidInputError("PhysicalParams: rates, frequencies, mass and length must be > 0");
    if (!std::isfinite(p.power) || p.power < 0.0)
        throw InvalidInputError("PhysicalParams: power must be >= 0");
    if (!std::isfinite(p.T) || p.T < 0.0)
        throw InvalidInputError("PhysicalParams: T must be >= 0");
    if (!std::isfinite(p.r) || p.r < 0.0)
        throw InvalidInputError("PhysicalParams: r must be >= 0");
    std::vector<std::string> warnings;
    if (p.omega_mu / p.gamma < 1e3)
        warnings.emplace_back("mechanical quality factor omega_mu/gamma below 1e3");
    if (!(p.omega_mu > p.kappa))
        warnings.emplace_back("sideband not resolved (omega_mu <= kappa); RWA is not justified");
    return warnings;
}

struct ReducedParams {
    double Gamma = 0.01; ///< damping ratio gamma/kappa
    double C = 0.0;      ///< optomechanical cooperativity
    double n_th = 0.0;   ///< mean thermal phonon number
    double r = 0.0;      ///< squeezing parameter
};

inline void validate(const ReducedParams &rp) {
    if (!std::isfinite(rp.Gamma) || !(rp.Gamma > 0.0))
        throw InvalidInputError("ReducedParams: Gamma must be > 0");
    if (!std::isfinite(rp.C) || rp.C < 0.0)
        throw InvalidInputError("ReducedParams: C must be >= 0");
    if (!std::isfinite(rp.n_th) || rp.n_th < 0.0)
        throw InvalidInputError("ReducedParams: n_th must be >= 0");
    if (!std::isfinite(rp.r) || rp.r < 0.0)
        throw InvalidInputError("ReducedParams: r must be >= 0");
}

/// Bose occupation 1/(exp(hbar omega / k_B T) - 1); exactly 0 at T = 0.
inline double thermal_occupation(double omega_mu, double T) {
    if (!(omega_mu > 0.0) || !(T >= 0.0))
        throw InvalidInputError("thermal_occupation: need omega_mu > 0 and T >= 0");
    if (T == 0.0)
        return 0.0;
    const double x = constants::hbar * omega_mu / (constants::k_B * T);
    return 1.0 / std::expm1(x); // expm1 -> inf gives 0 for large x
}

/// Inverse of thermal_occupation.
inline double temperature_for_occupation(double omega_mu, double n_th) {
    if (!(omega_mu > 0.0) || !(n_th >= 0.0))
        throw InvalidInputError("temperature_for_occupation: need omega_mu > 0 and n_th >= 0");
    if (n_th == 0.0)
        return 0.0;
    return constants::hbar * omega_mu / (constants::k_B * std::log1p(1.0 / n_th));
}

/// 8 omega_c^2 P / (gamma m omega_mu omega_L l^2 [(kappa/2)^2 + omega_mu^2]).
inline double cooperativity(const PhysicalParams &p) {
    validate(p);
    const double k2 = 0.5 * p.kappa;
    return 8.0 * p.omega_c * p.omega_c * p.power /
           (p.gamma * p.m_mu * p.omega_mu * p.omega_L * p.l * p.l *
            (k2 * k2 + p.omega_mu * p.omega_mu));
}

inline ReducedParams reduce(const PhysicalParams &p) {
    validate(p);
    return {p.gamma / p.kappa, cooperativity(p), thermal_occupation(p.omega_mu, p.T), p.r};
}

struct SteadyState {
    std::complex<double> c_s;  ///< cavity amplitude
    std::complex<double> b_s;  ///< mirror amplitude
    double delta_prime = 0.0;  ///< effective detuning, rad/s
    double delta = 0.0;        ///< bare detuning omega_L - omega_c, rad/s
    double n_cav = 0.0;        ///< intracavity photon number |c_s|^2
    double G = 0.0;            ///< many-photon coupling g0 |c_s|, rad/s
    double g0 = 0.0;           ///< vacuum coupling, rad/s
    double epsilon = 0.0;      ///< drive amplitude, rad/s
    double phi = 0.0;          ///< laser phase, rad
};

/// Mean-field amplitudes with the laser phase chosen so that c_s = -i|c_s|.
/// With red_sideband the effective detuning is pinned to -omega_mu; otherwise
/// it is taken as the bare omega_L - omega_c and the bare value is reported as-is.
inline SteadyState steady_state(const PhysicalParams &p, bool red_sideband = true) {
    using namespace std::complex_literals;
    validate(p);
    SteadyState s;
    s.delta_prime = red_sideband ? -p.omega_mu : p.omega_L - p.omega_c;
    s.epsilon = std::sqrt(2.0 * p.kappa * p.power / (constants::hbar * p.omega_L));
    s.g0 = (p.omega_c / p.l) * std::sqrt(constants::hbar / (p.m_mu * p.omega_mu));
    s.phi = -std::atan(2.0 * s.delta_prime / p.kappa);
    s.c_s = -1i * s.epsilon * std::exp(1i * s.phi) / (0.5 * p.kappa - 1i * s.delta_prime);
    s.n_cav = std::norm(s.c_s);
    s.G = s.g0 * std::sqrt(s.n_cav);
    s.b_s = -1i * s.g0 * s.n_cav / (0.5 * p.gamma + 1i * p.omega_mu);
    s.delta = red_sideband ? s.delta_prime + s.g0 * 2.0 * s.b_s.real() : s.delta_prime;
    return s;
}

/// Steady CM of the two mirrors.
inline TwoModeCM mechanical_cm(const ReducedParams &rp) {
    validate(rp);
    const double g = rp.Gamma;
    const double c = rp.C;
    const double den = 2.0 * (1.0 + g) * (1.0 + c);
    const double nu1 = ((2.0 * rp.n_th + 1.0) * (1.0 + g + g * c) + c * std::cosh(2.0 * rp.r)) / den;
    const double nu3 = c * std::sinh(2.0 * rp.r) / den;
    return {nu1, nu1, nu3, -nu3};
}

/// Steady CM of the two intracavity fields.
inline TwoModeCM optical_cm(const ReducedParams &rp) {
    validate(rp);
    const double g = rp.Gamma;
    const double c = rp.C;
    const double den = 2.0 * (1.0 + g) * (1.0 + c);
    const double nu1 = ((2.0 * rp.n_th + 1.0) * g * c + (1.0 + g + c) * std::cosh(2.0 * rp.r)) / den;
    const double nu3 = (1.0 + g + c) * std::sinh(2.0 * rp.r) / den;
    return {nu1, nu1, nu3, -nu3};
}

enum class Subsystem { mechanical, optical };

inline const char *to_string(Subsystem s) {
    return s == Subsystem::mechanical ? "mechanical" : "optical";
}

inline TwoModeCM subsystem_cm(const ReducedParams &rp, Subsystem which) {
    return which == Subsystem::mechanical ? mechanical_cm(rp) : optical_cm(rp);
}

} // namespace optocorr
