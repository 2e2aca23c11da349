// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file model.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fermiscatter
{
namespace
{
void require_positive(double value, char const* name)
{
    if (!(std::isfinite(value) && value > 0))
    {
        throw std::invalid_argument(std::string(name)
                                    + " must be finite and positive");
    }
}
}  // namespace

//---------------------------------------------------------------------------//
/*!
 * Parameter set used for every figure: k_L a = 12.5, tau_L = 10 ps,
 * gamma = 2 pi x 2.5 MHz, lambda = 800 nm.
 *
 * gamma_L / omega_L follows from gamma_L = 1 / tau_L and omega_L = 2 pi c /
 * lambda; it only sets how |k| moves with the detuning.
 */
TrapModel TrapModel::paper_defaults()
{
    constexpr double pulse_width = 10e-12;           // s
    constexpr double wavelength = 800e-9;            // m
    constexpr double speed_of_light = 299792458.0;   // m/s
    constexpr double linewidth = 2 * std::numbers::pi * 2.5e6;  // 1/s

    double const gamma_l = 1 / pulse_width;
    double const omega_l = 2 * std::numbers::pi * speed_of_light / wavelength;
    return TrapModel(12.5, gamma_l / omega_l, linewidth * pulse_width);
}

//---------------------------------------------------------------------------//
TrapModel::TrapModel(double kla, double gamma_ratio, double natural_width_ratio)
    : kla_(kla)
    , gamma_ratio_(gamma_ratio)
    , natural_width_ratio_(natural_width_ratio)
{
    require_positive(kla, "kla");
    require_positive(gamma_ratio, "gamma_ratio");
    require_positive(natural_width_ratio, "natural_width_ratio");
    if (gamma_ratio >= max_gamma_ratio)
    {
        throw std::invalid_argument(
            "gamma_ratio must be << 1 (got " + std::to_string(gamma_ratio)
            + ", limit " + std::to_string(max_gamma_ratio) + ")");
    }
}

//---------------------------------------------------------------------------//
/*!
 * Momentum transfer for scattering into angle theta at detuning varpi.
 *
 * With ka = kla (1 + gamma_ratio varpi):
 *   dk_x a = ka sin(theta),  dk_z a = ka cos(theta) - kla.
 * The longitudinal component is evaluated as
 *   kla gamma_ratio varpi - 2 ka sin^2(theta / 2)
 * so that forward scattering does not lose digits.
 *
 * Signed angles in [-pi, pi] are accepted as the mirror extension of the
 * azimuthally symmetric problem.
 */
ScatterPoint kinematics(TrapModel const& trap, double theta, double varpi)
{
    if (!std::isfinite(theta) || !std::isfinite(varpi))
    {
        throw std::invalid_argument("kinematics: non-finite angle or detuning");
    }
    if (std::abs(theta) > std::numbers::pi)
    {
        throw std::invalid_argument("kinematics: theta outside [-pi, pi]");
    }
    double const shift = trap.gamma_ratio() * varpi;
    if (!(1 + shift > 0))
    {
        throw std::invalid_argument(
            "kinematics: scattered wavenumber must be positive");
    }

    double const kla = trap.kla();
    double const ka = kla * (1 + shift);
    double const half_sin = std::sin(theta / 2);
    double const dkx = ka * std::sin(theta);
    double const dkz = kla * shift - 2 * ka * half_sin * half_sin;

    ScatterPoint result;
    result.theta = theta;
    result.varpi = varpi;
    result.x_x = dkx * dkx;
    result.x_z = dkz * dkz;
    result.x_total = result.x_x + result.x_z;
    return result;
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
