// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file pulse.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fermiscatter
{
//---------------------------------------------------------------------------//
PulseModel PulseModel::two_pi(int k)
{
    if (k < 1)
    {
        throw std::invalid_argument("two_pi: K must be >= 1");
    }
    // Sech area is pi * Omega / 2
    return PulseModel(PulseShape::Sech, 4.0 * k);
}

PulseModel::PulseModel(PulseShape shape, double peak_rabi)
    : shape_(shape), peak_rabi_(peak_rabi)
{
    if (!std::isfinite(peak_rabi))
    {
        throw std::invalid_argument("PulseModel: non-finite Rabi frequency");
    }
}

double PulseModel::total_area() const
{
    return pulse_area(*this, std::numeric_limits<double>::infinity());
}

bool PulseModel::is_two_pi_k(double tol) const
{
    double k = this->total_area() / (2 * std::numbers::pi);
    return k > 0.5 && std::abs(k - std::round(k)) <= tol * std::round(k);
}

//---------------------------------------------------------------------------//
/*!
 * A(t) = (Omega / 2) Int_{-inf}^{t} T(t') dt'.
 *
 * Sech: (Omega / 2) [arctan(sinh t) + pi / 2].
 * Gaussian: (Omega / 2) (sqrt(pi) / 2) [1 + erf(t)].
 */
double pulse_area(PulseModel const& pulse, double t)
{
    if (std::isnan(t))
    {
        throw std::invalid_argument("pulse_area: NaN time");
    }
    double const half = pulse.peak_rabi() / 2;
    constexpr double pi = std::numbers::pi;
    if (pulse.shape() == PulseShape::Sech)
    {
        if (std::isinf(t))
            return t > 0 ? half * pi : 0.0;
        return half * (std::atan(std::sinh(t)) + pi / 2);
    }
    double const root_pi = std::sqrt(pi);
    if (std::isinf(t))
        return t > 0 ? half * root_pi : 0.0;
    return half * root_pi / 2 * std::erfc(-t);
}

//---------------------------------------------------------------------------//
TwoLevelAmplitudes
rabi_evolve(std::complex<double> g0, std::complex<double> f0, double area)
{
    constexpr std::complex<double> i{0, 1};
    double const c = std::cos(area);
    double const s = std::sin(area);
    return {g0 * c - i * f0 * s, -i * g0 * s + f0 * c};
}

//---------------------------------------------------------------------------//
/*!
 * The incoherent shape has a removable singularity at varpi = 0; below
 * |pi varpi / 2| = 1e-4 its Taylor form (4 / pi)(1 - u^2 / 3) is used.
 * Both shapes are written with e^{-|u|} so large detunings do not overflow.
 */
SingleAtomSpectra single_atom_spectra(double varpi)
{
    if (!std::isfinite(varpi))
    {
        throw std::invalid_argument("single_atom_spectra: non-finite detuning");
    }
    constexpr double pi = std::numbers::pi;
    double const u = std::abs(pi * varpi / 2);
    double const e = std::exp(-u);
    double const w2 = varpi * varpi;

    SingleAtomSpectra result;
    // 1 / cosh^2(u) = 4 e^{-2u} / (1 + e^{-2u})^2
    double const ch = 1 + e * e;
    result.coherent = pi * w2 * 4 * e * e / (ch * ch);
    if (u < 1e-4)
    {
        result.incoherent = 4 / pi * (1 - u * u / 3);
    }
    else
    {
        double const sh = -std::expm1(-2 * u);
        result.incoherent = pi * w2 * 4 * e * e / (sh * sh);
    }
    return result;
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
