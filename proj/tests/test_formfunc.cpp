// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_formfunc.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/formfunc.hpp"

#include <cmath>
#include <random>
#include <vector>
#include <gtest/gtest.h>

#include "fermiscatter/errors.hpp"
#include "fermiscatter/model.hpp"
#include "fermiscatter/statmech.hpp"

using namespace fermiscatter;

namespace
{
constexpr auto fermi = Statistics::FermiDirac;
constexpr auto boltzmann = Statistics::MaxwellBoltzmann;

ScatterPoint point(double x_x, double x_z)
{
    ScatterPoint p;
    p.x_x = x_x;
    p.x_z = x_z;
    p.x_total = x_x + x_z;
    return p;
}

ScatterPoint point(double x)
{
    return point(0.3 * x, 0.7 * x);
}

double coh(ThermalState const& s, ScatterPoint const& p, Method m, double tol = 1e-12)
{
    return coherent_form({s, p, m, tol});
}

double inc(ThermalState const& s, ScatterPoint const& p, Method m, double tol = 1e-12)
{
    return incoherent_form({s, p, m, tol});
}

//! Sum g(n) P(n)^2 straight from the occupation table
double peak_incoherent(ThermalState const& s)
{
    long double sum = 0;
    for (int n = 0; n <= s.n_max(); ++n)
    {
        long double p = s.occupation(n);
        sum += 0.5L * (n + 1) * (n + 2) * p * p;
    }
    return static_cast<double>(sum);
}

std::vector<double> x_grid()
{
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i)
        xs.push_back(625.0 * i / 19);
    return xs;
}

::testing::AssertionResult close(double a, double b, double rel, double abs = 0)
{
    double diff = std::abs(a - b);
    if (diff <= rel * std::max(std::abs(a), std::abs(b)) + abs)
        return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure()
           << a << " vs " << b << " (rel diff " << diff / std::max(std::abs(a), std::abs(b))
           << ")";
}
}  // namespace

//---------------------------------------------------------------------------//
TEST(MethodNames, RoundTrip)
{
    for (auto m : {Method::Auto,
                   Method::PowerSeries,
                   Method::LaguerreSum,
                   Method::ClosedFormMB,
                   Method::QuadSum,
                   Method::ConvolutionSum,
                   Method::ShellSum})
    {
        EXPECT_EQ(method_from_string(to_string(m)), m);
    }
    EXPECT_EQ(method_from_string("laguerresum"), Method::LaguerreSum);
    EXPECT_THROW(method_from_string("simpson"), std::invalid_argument);
}

TEST(CoherentForm, NormalizationAtZero)
{
    for (std::int64_t n : {100, 10'000})
    {
        double ef = fermi_energy(n);
        for (double t : {0.0016, 0.5, 1.36, 5.0})
        {
            auto s = ThermalState::solve(n, t * ef, fermi);
            double n2 = static_cast<double>(n) * n;
            EXPECT_TRUE(close(coh(s, point(0), Method::LaguerreSum), n2, 1e-10)) << n << " " << t;
            EXPECT_TRUE(close(coh(s, point(0), Method::Auto), n2, 1e-10)) << n << " " << t;
            if (s.fugacity() < 1)
            {
                EXPECT_TRUE(close(coh(s, point(0), Method::PowerSeries), n2, 1e-10));
            }
            auto mb = ThermalState::solve(n, t * ef, boltzmann);
            EXPECT_TRUE(close(coh(mb, point(0), Method::ClosedFormMB), n2, 1e-15));
            EXPECT_TRUE(close(coh(mb, point(0), Method::LaguerreSum), n2, 1e-10));
        }
    }
}

TEST(CoherentForm, SeriesMatchesLaguerreHotDilute)
{
    auto s = ThermalState::from_fugacity(std::log(0.5), 50, fermi);
    double n = s.atoms();
    // At x = 10 the value sits near 1e-30 N^2, so compare on the N^2 scale
    double a = coh(s, point(10), Method::PowerSeries);
    double b = coh(s, point(10), Method::LaguerreSum);
    EXPECT_LT(a, 1e-25 * n * n);
    EXPECT_TRUE(close(a, b, 0, 1e-8 * n * n));
    for (double x : {0.0, 1e-3, 0.01, 0.05})
    {
        EXPECT_TRUE(close(coh(s, point(x), Method::PowerSeries),
                          coh(s, point(x), Method::LaguerreSum),
                          1e-8))
            << x;
    }
}

TEST(CoherentForm, MethodAgreement)
{
    for (double z : {0.1, 0.5, 0.9})
    {
        auto s = ThermalState::from_fugacity(std::log(z), 0.15, fermi);
        for (double x : x_grid())
        {
            EXPECT_TRUE(close(coh(s, point(x), Method::PowerSeries),
                              coh(s, point(x), Method::LaguerreSum),
                              1e-6))
                << z << " " << x;
        }
    }
}

TEST(CoherentForm, ClosedFormMatchesSums)
{
    for (double tau : {0.3, 2.0, 40.0})
    {
        auto mb = ThermalState::solve(1000, tau, boltzmann);
        double n = mb.atoms();
        for (double x : {0.0, 0.01, 0.5, 3.0})
        {
            double closed = coh(mb, point(x), Method::ClosedFormMB);
            EXPECT_TRUE(close(closed, coh(mb, point(x), Method::LaguerreSum), 1e-9, 1e-14 * n * n))
                << tau << " " << x;
            EXPECT_TRUE(close(closed, coh(mb, point(x), Method::PowerSeries), 1e-12)) << tau << " " << x;
        }
    }
}

TEST(CoherentForm, ClassicalCrossover)
{
    auto fd = ThermalState::solve(10'000, 5 * fermi_energy(10'000), fermi);
    auto mb = ThermalState::solve(10'000, 5 * fermi_energy(10'000), boltzmann);
    for (double x : {0.0, 1e-4, 1e-3, 3e-3})
    {
        EXPECT_TRUE(close(coh(fd, point(x), Method::Auto), coh(mb, point(x), Method::Auto), 1e-2))
            << x;
    }
}

TEST(CoherentForm, DecaysByFarMoreThanTwentyDecades)
{
    auto s = ThermalState::solve(1'000'000, 1.36 * fermi_energy(1'000'000), fermi);
    double peak = coh(s, point(0), Method::Auto);
    double tail = coh(s, point(625), Method::Auto);
    EXPECT_LT(tail / peak, 1e-20);
    double prev = peak;
    for (double x = 1e-3; x < 1; x *= 2)
    {
        double v = coh(s, point(x), Method::Auto);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(CoherentForm, Errors)
{
    auto dense = ThermalState::from_fugacity(std::log(2.0), 0.5, fermi);
    try
    {
        coh(dense, point(1), Method::PowerSeries);
        FAIL() << "expected SeriesDivergence";
    }
    catch (SeriesDivergence const& e)
    {
        EXPECT_EQ(e.kind(), "SeriesDivergence");
    }
    auto fd = ThermalState::solve(100, 3, fermi);
    EXPECT_THROW(coh(fd, point(1), Method::ClosedFormMB), std::invalid_argument);
    EXPECT_THROW(coh(fd, point(1), Method::QuadSum), std::invalid_argument);
    EXPECT_THROW(coh(fd.truncated(5), point(1), Method::PowerSeries), std::invalid_argument);
    EXPECT_THROW(coh(fd, point(-1), Method::LaguerreSum), std::invalid_argument);
    EXPECT_THROW(coherent_form({fd, point(1), Method::LaguerreSum, 0}), std::invalid_argument);
}

TEST(AutoSelection, Regimes)
{
    auto hot = ThermalState::solve(1000, 100, fermi);
    auto cold = ThermalState::solve(1000, 0.5, fermi);
    auto mb = ThermalState::solve(1000, 0.5, boltzmann);
    EXPECT_EQ(resolve_coherent({hot, point(0)}), Method::PowerSeries);
    EXPECT_EQ(resolve_incoherent({hot, point(0)}), Method::PowerSeries);
    EXPECT_EQ(resolve_coherent({cold, point(0)}), Method::LaguerreSum);
    EXPECT_EQ(resolve_incoherent({cold, point(0)}), Method::ShellSum);
    EXPECT_EQ(resolve_coherent({mb, point(0)}), Method::ClosedFormMB);
    EXPECT_EQ(resolve_incoherent({mb, point(0)}), Method::ClosedFormMB);
    EXPECT_EQ(resolve_incoherent({hot.truncated(5), point(0)}), Method::ShellSum);
    EXPECT_EQ(resolve_incoherent({hot, point(0), Method::QuadSum}), Method::QuadSum);
}

//---------------------------------------------------------------------------//
TEST(IncoherentWeight, DiluteLimit)
{
    double const tau = 2;
    double const z = 1e-7;
    auto s = ThermalState::from_fugacity(std::log(z), tau, fermi);
    for (auto [n, m] : {std::pair{0, 0}, {1, 3}, {5, 2}, {7, 7}})
    {
        double expect = z * z * std::exp(-(n + m) / tau) / (1 - std::exp(-2 / tau));
        EXPECT_TRUE(close(incoherent_weight(n, m, s), expect, 1e-6)) << n << " " << m;
    }
}

TEST(IncoherentWeight, FilledSea)
{
    auto s = ThermalState::solve(4, 0.02, fermi);
    EXPECT_NEAR(incoherent_weight(0, 0, s), 2, 1e-9);
    EXPECT_NEAR(incoherent_weight(0, 1, s), 1, 1e-9);
    EXPECT_NEAR(incoherent_weight(2, 2, s), 0, 1e-9);
}

TEST(IncoherentWeight, Symmetric)
{
    auto s = ThermalState::solve(500, 3, fermi);
    for (int n = 0; n < 15; ++n)
        for (int m = 0; m < 15; ++m)
            EXPECT_EQ(incoherent_weight(n, m, s), incoherent_weight(m, n, s));
    EXPECT_THROW(incoherent_weight(-1, 0, s), std::invalid_argument);
}

//---------------------------------------------------------------------------//
TEST(IncoherentForm, PeakIsSumOfSquaredOccupations)
{
    for (double t : {0.001, 0.1, 0.5, 1.36})
    {
        auto s = ThermalState::solve(10'000, t * fermi_energy(10'000), fermi);
        double direct = peak_incoherent(s);
        EXPECT_LE(direct, s.atoms() * (1 + 1e-12));
        EXPECT_TRUE(close(inc(s, point(0), Method::ShellSum), direct, 1e-12)) << t;
        EXPECT_TRUE(close(inc(s, point(0), Method::Auto), direct, 1e-8)) << t;
        if (s.n_max() <= convolution_max_n)
        {
            EXPECT_TRUE(close(inc(s, point(0), Method::ConvolutionSum), direct, 1e-10)) << t;
        }
    }
}

TEST(IncoherentForm, PaperPeakValues)
{
    std::int64_t const n = 1'000'000;
    auto hot = ThermalState::solve(n, 1.36 * fermi_energy(n), fermi);
    double ratio = inc(hot, point(0), Method::Auto) / hot.atoms();
    EXPECT_GE(ratio, 7.6e-3);
    EXPECT_LE(ratio, 8.4e-3);

    auto cold = ThermalState::solve(n, 0.0016 * fermi_energy(n), fermi);
    EXPECT_GE(inc(cold, point(0), Method::Auto) / cold.atoms(), 0.98);
}

TEST(IncoherentForm, ClosedFormMatchesSums)
{
    for (double tau : {0.3, 2.0, 15.0})
    {
        auto mb = ThermalState::solve(1000, tau, boltzmann);
        double n = mb.atoms();
        for (double x : {0.0, 0.2, 2.0, 9.0})
        {
            double closed = inc(mb, point(x), Method::ClosedFormMB);
            EXPECT_TRUE(close(closed, inc(mb, point(x), Method::ShellSum), 1e-9, 1e-14 * n))
                << tau << " " << x;
            EXPECT_TRUE(close(closed, inc(mb, point(x), Method::PowerSeries), 1e-12)) << tau << " " << x;
            if (mb.n_max() <= convolution_max_n)
            {
                EXPECT_TRUE(close(closed, inc(mb, point(x), Method::ConvolutionSum), 1e-9, 1e-14 * n))
                    << tau << " " << x;
            }
        }
    }
}

TEST(IncoherentForm, MethodAgreement)
{
    for (double z : {0.1, 0.5, 0.9})
    {
        auto s = ThermalState::from_fugacity(std::log(z), 0.15, fermi);
        ASSERT_LE(s.n_max(), quad_sum_max_n);
        for (double x : x_grid())
        {
            double series = inc(s, point(x), Method::PowerSeries);
            EXPECT_TRUE(close(series, inc(s, point(x), Method::QuadSum), 1e-5)) << z << " " << x;
            EXPECT_TRUE(close(series, inc(s, point(x), Method::ShellSum), 1e-5)) << z << " " << x;
        }
    }
}

TEST(IncoherentForm, DirectSumsAgree)
{
    // Dense degenerate state where the series does not apply
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (double log_z : {1.0, 6.0, 15.0})
    {
        auto s = ThermalState::from_fugacity(log_z, 0.7, fermi);
        ASSERT_LE(s.n_max(), quad_sum_max_n);
        for (int i = 0; i < 8; ++i)
        {
            auto p = point(40 * u(rng), 40 * u(rng));
            double quad = inc(s, p, Method::QuadSum);
            EXPECT_TRUE(close(quad, inc(s, p, Method::ConvolutionSum), 1e-10, 1e-13 * s.atoms()));
            EXPECT_TRUE(close(quad, inc(s, p, Method::ShellSum), 1e-10, 1e-13 * s.atoms()));
        }
    }
}

TEST(IncoherentForm, ShellSumMatchesConvolutionLarge)
{
    auto s = ThermalState::solve(100'000, 0.2 * fermi_energy(100'000), fermi);
    ASSERT_GT(s.n_max(), quad_sum_max_n);
    ASSERT_LE(s.n_max(), convolution_max_n);
    for (auto [xx, xz] : {std::pair{0.01, 0.0}, {0.5, 2.0}, {30.0, 70.0}, {300.0, 250.0}})
    {
        auto p = point(xx, xz);
        EXPECT_TRUE(close(inc(s, p, Method::ShellSum), inc(s, p, Method::ConvolutionSum), 1e-9, 1e-13 * s.atoms()))
            << xx << " " << xz;
    }
}

TEST(IncoherentForm, PositiveEverywhere)
{
    auto s = ThermalState::from_fugacity(std::log(0.6), 0.4, fermi);
    for (double x : x_grid())
    {
        for (auto m : {Method::PowerSeries, Method::QuadSum, Method::ConvolutionSum, Method::ShellSum})
        {
            EXPECT_GE(inc(s, point(x), m), 0) << to_string(m) << " " << x;
        }
    }
}

TEST(IncoherentForm, HighTemperatureDecay)
{
    std::int64_t const n = 1'000'000;
    auto s = ThermalState::solve(n, 1.36 * fermi_energy(n), fermi);
    double const t = std::tanh(1 / (2 * s.tau()));
    double peak = inc(s, point(0), Method::Auto);
    double prev = peak;
    for (double x : x_grid())
    {
        double v = inc(s, point(x), Method::Auto);
        EXPECT_LE(v, prev * (1 + 1e-12));
        prev = v;
        EXPECT_TRUE(close(v / peak, std::exp(-x * t), 5e-2)) << x;
    }
}

TEST(IncoherentForm, Errors)
{
    auto big = ThermalState::solve(100'000, 0.2 * fermi_energy(100'000), fermi);
    try
    {
        inc(big, point(1), Method::QuadSum);
        FAIL() << "expected BudgetExceeded";
    }
    catch (BudgetExceeded const& e)
    {
        EXPECT_EQ(e.kind(), "BudgetExceeded");
    }
    auto huge = ThermalState::solve(1'000'000, 0.5 * fermi_energy(1'000'000), fermi);
    ASSERT_GT(huge.n_max(), convolution_max_n);
    EXPECT_THROW(inc(huge, point(1), Method::ConvolutionSum), BudgetExceeded);
    EXPECT_THROW(inc(huge, point(1), Method::PowerSeries), SeriesDivergence);
    EXPECT_THROW(inc(huge, point(1), Method::LaguerreSum), std::invalid_argument);
}
