// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_oracle.cpp
//! Brute-force basis sums against the fast form-function kernels.
//---------------------------------------------------------------------------//
#include "oracle/reference.hpp"

#include <cmath>
#include <random>
#include <gtest/gtest.h>

#include "fermiscatter/formfunc.hpp"

using namespace fermiscatter;
using oracle::SmallTrapBasis;
using oracle::Vec3;

namespace
{
constexpr auto fermi = Statistics::FermiDirac;

ScatterPoint point_of(Vec3 const& dk)
{
    ScatterPoint p;
    p.x_x = dk[0] * dk[0] + dk[1] * dk[1];
    p.x_z = dk[2] * dk[2];
    p.x_total = p.x_x + p.x_z;
    return p;
}

double rel(double a, double b)
{
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0 : std::abs(a - b) / scale;
}
}  // namespace

TEST(Oracle, DisplacementBasics)
{
    // <0|D|0> = e^{-|alpha|^2/2}; <1|D|0> = alpha e^{-|alpha|^2/2}
    std::complex<long double> alpha(0.3L, -1.1L);
    long double g = std::exp(-std::norm(alpha) / 2);
    EXPECT_NEAR(std::abs(oracle::displacement_element(0, 0, alpha) - g), 0, 1e-17);
    EXPECT_NEAR(std::abs(oracle::displacement_element(1, 0, alpha) - alpha * g), 0, 1e-17);
    EXPECT_NEAR(std::abs(oracle::displacement_element(0, 1, alpha) + std::conj(alpha) * g), 0, 1e-17);
    EXPECT_THROW(oracle::displacement_element(-1, 0, alpha), std::invalid_argument);
}

TEST(Oracle, ZeroTransfer)
{
    auto s = ThermalState::from_fugacity(0.5, 0.8, fermi).truncated(5);
    SmallTrapBasis basis(s, 5);
    Vec3 zero{0, 0, 0};
    double total = basis.total();
    EXPECT_NEAR(oracle::brute_coherent(basis, zero), total * total, 1e-12 * total * total);
    double squares = 0;
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j)
            for (int k = 0; k <= 5; ++k)
                squares += basis.occupation(i, j, k) * basis.occupation(i, j, k);
    auto br = oracle::brute_incoherent(basis, zero);
    EXPECT_NEAR(br.pair_form, squares, 1e-12 * squares);
}

TEST(Oracle, SingleAtom)
{
    std::vector<double> table(27, 0.0);
    table[0] = 1;
    SmallTrapBasis basis(2, table);
    auto one = ThermalState::from_occupations({1.0});
    for (Vec3 dk : {Vec3{0.2, 0.0, 0.5}, Vec3{1.0, 0.4, -0.7}, Vec3{0.0, 0.0, 2.0}})
    {
        double x = dk[0] * dk[0] + dk[1] * dk[1] + dk[2] * dk[2];
        EXPECT_LT(rel(oracle::brute_coherent(basis, dk), std::exp(-x)), 1e-14);
        auto br = oracle::brute_incoherent(basis, dk, 40);
        EXPECT_LT(rel(br.pair_form, std::exp(-x)), 1e-14);
        EXPECT_NEAR(br.hole_form, 1 - std::exp(-x), 1e-10);
        EXPECT_NEAR(br.completeness, 1, 1e-10);
        auto p = point_of(dk);
        EXPECT_LT(rel(coherent_form({one, p, Method::LaguerreSum}), std::exp(-x)), 1e-14);
        EXPECT_LT(rel(incoherent_form({one, p, Method::ShellSum}), std::exp(-x)), 1e-14);
    }
}

TEST(Oracle, SumRuleClosure)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 30; ++trial)
    {
        std::array<int, 3> n{trial % 7, (trial * 3) % 7, (trial * 5) % 7};
        Vec3 dk{u(rng), u(rng), u(rng)};
        double len = 3 * std::abs(u(rng)) / std::sqrt(dk[0] * dk[0] + dk[1] * dk[1] + dk[2] * dk[2]);
        for (double& c : dk)
            c *= len;
        EXPECT_NEAR(oracle::sum_rule(n, dk, 45), 1, 1e-6);
    }
}

TEST(Oracle, HoleFormIdentity)
{
    // Sum N(1-N')|eta|^2 = Sum N |eta|^2 - Sum N N' |eta|^2 with completeness
    auto s = ThermalState::from_fugacity(1.5, 0.6, fermi).truncated(4);
    SmallTrapBasis basis(s, 4);
    for (Vec3 dk : {Vec3{0.3, 0, 0.8}, Vec3{1.2, 0.5, 0.1}})
    {
        auto br = oracle::brute_incoherent(basis, dk, 30);
        EXPECT_NEAR(br.hole_form, br.completeness - br.pair_form, 1e-12 * br.atoms);
        EXPECT_NEAR(br.completeness, br.atoms, 1e-9 * br.atoms);
    }
}

TEST(Oracle, CoherentMatchesFastPaths)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial)
    {
        double z = 0.05 + 0.9 * u(rng);
        double tau = 0.1 + 0.1 * u(rng);
        auto s = ThermalState::from_fugacity(std::log(z), tau, fermi);
        // Shells past the basis are negligible at double precision
        int const cut = SmallTrapBasis::max_n;
        ASSERT_LT(s.occupation(cut + 1), 1e-16 * s.atoms());
        SmallTrapBasis basis(s, cut);
        Vec3 dk{2 * u(rng), 2 * u(rng), 2 * u(rng)};
        auto p = point_of(dk);
        double brute = oracle::brute_coherent(basis, dk);
        double lag = coherent_form({s, p, Method::LaguerreSum, 1e-13});
        double series = coherent_form({s, p, Method::PowerSeries, 1e-13});
        worst = std::max({worst, rel(brute, lag), rel(brute, series)});
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Oracle, CoherentMatchesTruncatedStates)
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto s = ThermalState::from_fugacity(std::log(0.3 + 5 * u(rng)), 0.5 + 4 * u(rng), fermi)
                     .truncated(6);
        SmallTrapBasis basis(s, 6);
        Vec3 dk{1.5 * u(rng), 1.5 * u(rng), 1.5 * u(rng)};
        double brute = oracle::brute_coherent(basis, dk);
        EXPECT_LT(rel(brute, coherent_form({s, point_of(dk), Method::LaguerreSum})), 1e-10);
    }
}

TEST(Oracle, IncoherentMatchesFastPaths)
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial)
    {
        double z = std::exp(std::log(0.3) + u(rng) * std::log(10.0 / 0.3));
        double tau = 0.5 + 4.5 * u(rng);
        auto s = ThermalState::from_fugacity(std::log(z), tau, fermi).truncated(6);
        SmallTrapBasis basis(s, 6);
        Vec3 dk{2.5 * u(rng), 0, 2.5 * u(rng)};
        auto p = point_of(dk);
        double brute = oracle::brute_incoherent(basis, dk).pair_form;
        for (auto m : {Method::QuadSum, Method::ConvolutionSum, Method::ShellSum})
        {
            double fast = incoherent_form({s, p, m});
            worst = std::max(worst, rel(brute, fast));
            EXPECT_LT(rel(brute, fast), 1e-10) << to_string(m) << " z=" << z << " tau=" << tau;
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Oracle, ShellSumIsRotationInvariant)
{
    // ShellSum only sees |dk|; the brute sum with dk_y != 0 must agree
    auto s = ThermalState::from_fugacity(1.0, 1.2, fermi).truncated(5);
    SmallTrapBasis basis(s, 5);
    Vec3 dk{0.7, 0.9, -0.4};
    double brute = oracle::brute_incoherent(basis, dk).pair_form;
    EXPECT_LT(rel(brute, incoherent_form({s, point_of(dk), Method::ShellSum})), 1e-10);
}

TEST(Oracle, RejectsBadBasis)
{
    auto s = ThermalState::from_fugacity(0, 1, fermi);
    EXPECT_THROW(SmallTrapBasis(s, 9), std::invalid_argument);
    EXPECT_THROW(SmallTrapBasis(1, std::vector<double>(7, 0.5)), std::invalid_argument);
    EXPECT_THROW(SmallTrapBasis(1, std::vector<double>(8, 1.5)), std::invalid_argument);
}
