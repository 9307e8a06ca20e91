#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "optocorr/model.hpp"
#include "test_support.hpp"

using namespace optocorr;

namespace {

const ReducedParams kFig2{0.01, 34.0, 0.0, 2.0};

// Bose occupation written out directly as an independent reference.
double bose(double omega, double T) {
    return 1.0 / (std::exp(constants::hbar * omega / (constants::k_B * T)) - 1.0);
}

} // namespace

TEST(thermal_occupation, zero_temperature) {
    EXPECT_EQ(thermal_occupation(kDefaultOmegaMu, 0.0), 0.0);
    EXPECT_EQ(thermal_occupation(1.0, 0.0), 0.0);
}

TEST(thermal_occupation, unit_occupation) {
    const double T = constants::hbar * kDefaultOmegaMu / (constants::k_B * std::log(2.0));
    EXPECT_NEAR(T, 6.56e-5, 1e-7);
    EXPECT_NEAR(thermal_occupation(kDefaultOmegaMu, T), 1.0, 1e-12);
}

TEST(thermal_occupation, high_temperature) {
    const double approx = constants::k_B * 0.1 / (constants::hbar * kDefaultOmegaMu) - 0.5;
    const double n = thermal_occupation(kDefaultOmegaMu, 0.1);
    EXPECT_NEAR(n / approx, 1.0, 1e-3);
    EXPECT_NEAR(n, bose(kDefaultOmegaMu, 0.1), 1e-9 * n);
}

TEST(thermal_occupation, very_cold_underflows_to_zero) {
    EXPECT_EQ(thermal_occupation(kDefaultOmegaMu, 1e-9), 0.0);
}

TEST(thermal_occupation, round_trip) {
    for (double n : {1e-3, 0.5, 1.0, 10.0, 1e3}) {
        const double T = temperature_for_occupation(kDefaultOmegaMu, n);
        EXPECT_NEAR(thermal_occupation(kDefaultOmegaMu, T), n, 1e-12 * std::max(1.0, n));
    }
}

TEST(thermal_occupation, rejects_invalid) {
    EXPECT_THROW(thermal_occupation(0.0, 1.0), InvalidInputError);
    EXPECT_THROW(thermal_occupation(1.0, -1.0), InvalidInputError);
    EXPECT_THROW(thermal_occupation(1.0, std::nan("")), InvalidInputError);
}

TEST(physical_params, validation) {
    PhysicalParams p = experimental_params();
    EXPECT_TRUE(validate(p).empty());
    p.gamma = -1.0;
    EXPECT_THROW(validate(p), InvalidInputError);
    p = experimental_params();
    p.T = -1.0;
    EXPECT_THROW(validate(p), InvalidInputError);
    p = experimental_params();
    p.r = -0.1;
    EXPECT_THROW(validate(p), InvalidInputError);
}

TEST(physical_params, soft_warnings) {
    PhysicalParams p = experimental_params();
    p.gamma = p.omega_mu / 10.0;
    EXPECT_EQ(validate(p).size(), 1u);
    p = experimental_params();
    p.kappa = 2.0 * p.omega_mu;
    EXPECT_EQ(validate(p).size(), 1u);
}

TEST(cooperativity, zero_power) {
    PhysicalParams p = experimental_params();
    p.power = 0.0;
    EXPECT_EQ(cooperativity(p), 0.0);
}

TEST(cooperativity, matches_coupling_path) {
    // Two independent routes: the closed formula, and 4 G^2 / (gamma kappa)
    // from the mean-field amplitudes.
    const PhysicalParams p = experimental_params();
    const SteadyState s = steady_state(p);
    const double via_G = 4.0 * s.G * s.G / (p.gamma * p.kappa);
    EXPECT_NEAR(cooperativity(p) / via_G, 1.0, 1e-12);
    // Far from the caption value 34.
    EXPECT_GT(cooperativity(p), 1e3);
}

TEST(cooperativity, linear_in_power) {
    PhysicalParams p = experimental_params();
    const double c1 = cooperativity(p);
    p.power *= 3.0;
    EXPECT_NEAR(cooperativity(p), 3.0 * c1, 1e-12 * c1);
}

TEST(reduce, damping_ratio) {
    PhysicalParams p = experimental_params();
    EXPECT_NEAR(reduce(p).Gamma, 140.0 / 172e3, 1e-15);
    EXPECT_NEAR(reduce(p).Gamma, 8.14e-4, 1e-6);
    EXPECT_EQ(reduce(p).n_th, 0.0);
    p.gamma = p.kappa;
    EXPECT_EQ(reduce(p).Gamma, 1.0);
    p.T = 0.01;
    p.r = 1.5;
    const ReducedParams rp = reduce(p);
    EXPECT_DOUBLE_EQ(rp.n_th, thermal_occupation(p.omega_mu, 0.01));
    EXPECT_EQ(rp.r, 1.5);
}

TEST(steady_state, zero_power) {
    PhysicalParams p = experimental_params();
    p.power = 0.0;
    const SteadyState s = steady_state(p);
    EXPECT_EQ(std::abs(s.c_s), 0.0);
    EXPECT_EQ(std::abs(s.b_s), 0.0);
    EXPECT_EQ(s.G, 0.0);
}

TEST(steady_state, invariants) {
    const PhysicalParams p = experimental_params();
    const SteadyState s = steady_state(p);
    EXPECT_DOUBLE_EQ(s.delta_prime, -p.omega_mu);
    EXPECT_NEAR(s.n_cav, std::norm(s.c_s), 1e-12 * s.n_cav);
    EXPECT_NEAR(s.G, s.g0 * std::sqrt(s.n_cav), 1e-12 * s.G);
    EXPECT_LT(std::abs(s.c_s.real()), 1e-12 * std::abs(s.c_s));
    EXPECT_LT(s.c_s.imag(), 0.0);
}

TEST(steady_state, golden_values) {
    // Independent evaluation of |c_s|^2 = eps^2 / ((kappa/2)^2 + omega_mu^2)
    // with eps^2 = 2 kappa P / (hbar omega_L).
    const PhysicalParams p = experimental_params();
    const double eps2 = 2.0 * p.kappa * p.power / (constants::hbar * p.omega_L);
    const double n_cav = eps2 / (0.25 * p.kappa * p.kappa + p.omega_mu * p.omega_mu);
    const double g0 = p.omega_c / p.l * std::sqrt(constants::hbar / (p.m_mu * p.omega_mu));
    const SteadyState s = steady_state(p);
    EXPECT_NEAR(s.n_cav / n_cav, 1.0, 1e-12);
    EXPECT_NEAR(s.g0 / g0, 1.0, 1e-12);
    // Frozen after the cross-check above.
    EXPECT_NEAR(s.n_cav, 4.860688517856366e8, 1e-6 * s.n_cav);
    EXPECT_NEAR(s.G, 1.0189752962515671e6, 1e-6 * s.G);
}

TEST(mechanical_cm, decoupled) {
    for (double n : {0.0, 1.0, 7.5}) {
        const TwoModeCM cm = mechanical_cm({0.01, 0.0, n, 2.0});
        EXPECT_NEAR(cm.nu1, n + 0.5, 1e-15);
        EXPECT_EQ(cm.nu3, 0.0);
    }
}

TEST(mechanical_cm, reference_point) {
    const TwoModeCM cm = mechanical_cm(kFig2);
    EXPECT_NEAR(cm.nu1, 13.151766851832539, 1e-12);
    EXPECT_NEAR(cm.nu3, 13.12386399861872, 1e-12);
    EXPECT_EQ(cm.nu1, cm.nu2);
    EXPECT_EQ(cm.nu3p, -cm.nu3);
}

TEST(mechanical_cm, zero_squeezing) {
    EXPECT_EQ(mechanical_cm({0.01, 34.0, 3.0, 0.0}).nu3, 0.0);
}

TEST(optical_cm, vacuum_limit) {
    const TwoModeCM cm = optical_cm({0.01, 0.0, 5.0, 0.0});
    EXPECT_DOUBLE_EQ(cm.nu1, 0.5);
    EXPECT_EQ(cm.nu3, 0.0);
}

TEST(optical_cm, squeezing_imprinted_without_coupling) {
    for (double r : {0.5, 1.0, 3.0}) {
        const TwoModeCM cm = optical_cm({0.05, 0.0, 2.0, r});
        EXPECT_NEAR(cm.nu1, 0.5 * std::cosh(2 * r), 1e-12 * cm.nu1);
        EXPECT_NEAR(cm.nu3, 0.5 * std::sinh(2 * r), 1e-12 * cm.nu1);
        EXPECT_EQ(cm.nu3p, -cm.nu3);
    }
}

TEST(optical_cm, reference_point) {
    const TwoModeCM cm = optical_cm(kFig2);
    EXPECT_NEAR(cm.nu1, 13.527598749489918, 1e-12);
    EXPECT_NEAR(cm.nu3, 13.513719958577688, 1e-12);
}

TEST(reduced_params, validation) {
    EXPECT_THROW(mechanical_cm({0.0, 1.0, 0.0, 0.0}), InvalidInputError);
    EXPECT_THROW(mechanical_cm({0.01, -1.0, 0.0, 0.0}), InvalidInputError);
    EXPECT_THROW(optical_cm({0.01, 1.0, -1.0, 0.0}), InvalidInputError);
    EXPECT_THROW(optical_cm({0.01, 1.0, 0.0, -1.0}), InvalidInputError);
    EXPECT_THROW(optical_cm({0.01, INFINITY, 0.0, 0.0}), InvalidInputError);
}

TEST(model_properties, standard_form_symmetry_and_physicality) {
    for (double g : {1e-4, 1e-3, 0.01, 0.1, 1.0})
        for (double c : {0.0, 0.5, 1.0, 34.0, 100.0, 200.0})
            for (double n : {0.0, 0.1, 1.0, 10.0, 100.0})
                for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
                    const ReducedParams rp{g, c, n, r};
                    for (const TwoModeCM &cm : {mechanical_cm(rp), optical_cm(rp)}) {
                        EXPECT_EQ(cm.nu1, cm.nu2);
                        EXPECT_EQ(cm.nu3p, -cm.nu3);
                        EXPECT_TRUE(is_physical(cm, 1e-10)) << optocorr::testing::describe_point(rp);
                    }
                }
}

TEST(model_properties, mechanical_monotone_in_occupation) {
    for (double c : {0.0, 1.0, 34.0})
        for (double r : {0.0, 1.0, 3.0}) {
            double prev = -1.0;
            const double nu3 = mechanical_cm({0.01, c, 0.0, r}).nu3;
            for (double n = 0.0; n <= 50.0; n += 0.5) {
                const TwoModeCM cm = mechanical_cm({0.01, c, n, r});
                EXPECT_GT(cm.nu1, prev);
                EXPECT_EQ(cm.nu3, nu3);
                prev = cm.nu1;
            }
        }
}

TEST(model_properties, large_cooperativity_limit) {
    for (double g : {1e-3, 0.01, 0.1})
        for (double r : {0.5, 1.0, 2.0}) {
            const ReducedParams rp{g, 1e6, 1.0, r};
            const double limit = std::sinh(2 * r) / (2 * (1 + g));
            EXPECT_NEAR(optical_cm(rp).nu3, limit, 1e-4);
            EXPECT_NEAR(mechanical_cm(rp).nu3, limit, 1e-4);
        }
}
