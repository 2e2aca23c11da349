// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_pulse.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/pulse.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <gtest/gtest.h>

using namespace fermiscatter;
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

namespace
{
//! Trapezoid integral of the envelope from -40 to t
double envelope_integral(PulseShape shape, double t)
{
    double const lo = -40;
    int const steps = 400000;
    double const h = (t - lo) / steps;
    double sum = 0;
    for (int i = 0; i <= steps; ++i)
    {
        double s = lo + i * h;
        double f = shape == PulseShape::Sech ? 1 / std::cosh(s) : std::exp(-s * s);
        sum += (i == 0 || i == steps) ? f / 2 : f;
    }
    return sum * h;
}

//! Composite Simpson over [-L, L]
template<class F>
double simpson(F f, double lim, int steps)
{
    double h = 2 * lim / steps;
    double sum = f(-lim) + f(lim);
    for (int i = 1; i < steps; ++i)
        sum += (i % 2 ? 4 : 2) * f(-lim + i * h);
    return sum * h / 3;
}
}  // namespace

TEST(PulseArea, SechExamples)
{
    PulseModel p(PulseShape::Sech, 4);
    EXPECT_NEAR(pulse_area(p, inf), 2 * pi, 1e-15);
    EXPECT_NEAR(pulse_area(p, 0), pi, 1e-15);
    EXPECT_EQ(pulse_area(PulseModel(PulseShape::Sech, 0), 3), 0);
    EXPECT_EQ(pulse_area(PulseModel(PulseShape::Gaussian, 0), 3), 0);
    EXPECT_TRUE(PulseModel::two_pi().is_two_pi_k());
    EXPECT_TRUE(PulseModel::two_pi(3).is_two_pi_k());
    EXPECT_NEAR(PulseModel::two_pi(3).total_area(), 6 * pi, 1e-14);
    EXPECT_FALSE(PulseModel(PulseShape::Sech, 3).is_two_pi_k());
}

TEST(PulseArea, MatchesEnvelopeIntegral)
{
    for (auto shape : {PulseShape::Sech, PulseShape::Gaussian})
    {
        PulseModel p(shape, 2.7);
        for (double t : {-3.0, -0.5, 0.0, 1.2, 6.0})
        {
            EXPECT_NEAR(pulse_area(p, t), 2.7 / 2 * envelope_integral(shape, t), 1e-8);
        }
    }
    EXPECT_NEAR(PulseModel(PulseShape::Gaussian, 2).total_area(), std::sqrt(pi), 1e-15);
}

TEST(RabiEvolve, Examples)
{
    std::complex<double> g0(0.6, 0.2);
    std::complex<double> f0(-0.3, 0.5);
    auto r = rabi_evolve(g0, f0, 2 * pi);
    EXPECT_NEAR(std::abs(r.ground - g0), 0, 1e-15);
    EXPECT_NEAR(std::abs(r.excited - f0), 0, 1e-15);
    auto flip = rabi_evolve(g0, 0, pi);
    EXPECT_NEAR(std::abs(flip.ground + g0), 0, 1e-15);
    EXPECT_NEAR(std::abs(flip.excited), 0, 1e-15);
    auto half = rabi_evolve(1, 0, pi / 2);
    EXPECT_NEAR(std::abs(half.ground), 0, 1e-16);
    EXPECT_NEAR(std::abs(half.excited - std::complex<double>(0, -1)), 0, 1e-16);
}

TEST(RabiEvolve, PreservesNorm)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    std::uniform_real_distribution<double> a(-50, 50);
    double worst = 0;
    for (int i = 0; i < 1'000'000; ++i)
    {
        std::complex<double> g(n(rng), n(rng));
        std::complex<double> f(n(rng), n(rng));
        double before = std::norm(g) + std::norm(f);
        auto r = rabi_evolve(g, f, a(rng));
        double after = std::norm(r.ground) + std::norm(r.excited);
        worst = std::max(worst, std::abs(after - before) / before);
    }
    EXPECT_LT(worst, 1e-14);
}

TEST(SingleAtomSpectra, Examples)
{
    auto s0 = single_atom_spectra(0);
    EXPECT_EQ(s0.coherent, 0);
    EXPECT_NEAR(s0.incoherent, 4 / pi, 1e-15);
    auto s1 = single_atom_spectra(1);
    EXPECT_NEAR(s1.coherent, pi / std::pow(std::cosh(pi / 2), 2), 1e-15);
    EXPECT_NEAR(s1.coherent, 0.4990, 5e-5);
    EXPECT_NEAR(s1.incoherent, pi / std::pow(std::sinh(pi / 2), 2), 1e-15);
    auto sm = single_atom_spectra(-1);
    EXPECT_EQ(sm.coherent, s1.coherent);
    EXPECT_EQ(sm.incoherent, s1.incoherent);
}

TEST(SingleAtomSpectra, EvenPositiveOrdered)
{
    for (double w = 1e-9; w < 300; w *= 1.37)
    {
        auto p = single_atom_spectra(w);
        auto m = single_atom_spectra(-w);
        EXPECT_EQ(p.coherent, m.coherent);
        EXPECT_EQ(p.incoherent, m.incoherent);
        EXPECT_GE(p.coherent, 0);
        // cosh^2 and sinh^2 coincide in double precision for large |w|
        if (w < 10)
            EXPECT_LT(p.coherent, p.incoherent);
        else
            EXPECT_LE(p.coherent, p.incoherent);
        EXPECT_TRUE(std::isfinite(p.incoherent));
    }
}

TEST(SingleAtomSpectra, TaylorSwitchover)
{
    // Both branches against the direct formula in extended precision
    for (double u : {0.5e-4, 0.99e-4, 1.01e-4, 2e-4, 1e-3})
    {
        double w = 2 * u / pi;
        long double lu = static_cast<long double>(pi) * w / 2;
        long double direct = static_cast<long double>(pi) * w * w / (std::sinh(lu) * std::sinh(lu));
        EXPECT_NEAR(single_atom_spectra(w).incoherent / (double)direct, 1, 1e-8);
    }
}

TEST(SingleAtomSpectra, LineIntegrals)
{
    double coh = simpson([](double w) { return single_atom_spectra(w).coherent; }, 40, 200000);
    double inc = simpson([](double w) { return single_atom_spectra(w).incoherent; }, 40, 200000);
    EXPECT_NEAR(coh / (4.0 / 3), 1, 1e-6);
    EXPECT_NEAR(inc / (8.0 / 3), 1, 1e-6);
    EXPECT_EQ(coherent_line_integral, 4.0 / 3);
    EXPECT_EQ(incoherent_line_integral, 8.0 / 3);
}
