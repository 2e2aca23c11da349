// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/model.hpp
//! Trap/laser geometry and scattering kinematics in trap units.
//---------------------------------------------------------------------------//
#pragma once

namespace fermiscatter
{
//---------------------------------------------------------------------------//
/*!
 * Dimensionless description of an isotropic harmonic trap probed by a
 * resonant laser pulse.
 *
 * All quantities use trap units: hbar = omega_t = 1, lengths in the
 * ground-state size a = sqrt(1 / 2 M omega_t). Driving is always resonant,
 * omega_L = omega_0 + k_L^2 / 2M, so no detuning parameter exists.
 */
class TrapModel
{
  public:
    //! Largest accepted pulse bandwidth over laser frequency
    static constexpr double max_gamma_ratio = 0.1;

    // Defaults: k_L a = 12.5, 10 ps pulse at 800 nm, 2 pi x 2.5 MHz linewidth
    static TrapModel paper_defaults();

    // Construct and validate
    TrapModel(double kla, double gamma_ratio, double natural_width_ratio);

    //! Laser wavenumber times trap ground-state size, k_L a
    double kla() const { return kla_; }
    //! Pulse bandwidth over laser frequency, gamma_L / omega_L
    double gamma_ratio() const { return gamma_ratio_; }
    //! Natural linewidth over pulse bandwidth, gamma / gamma_L
    double natural_width_ratio() const { return natural_width_ratio_; }

  private:
    double kla_;
    double gamma_ratio_;
    double natural_width_ratio_;
};

//---------------------------------------------------------------------------//
/*!
 * Scattered-photon direction and detuning with the momentum transfer
 * (k - k_L)^2 a^2 split along and across the laser axis.
 *
 * The laser propagates along z and the azimuth is chosen so that the y
 * component of the transfer vanishes.
 */
struct ScatterPoint
{
    double theta{0};    //!< polar angle from k_L [rad]
    double varpi{0};    //!< detuning (ck - omega_L) / gamma_L
    double x_total{0};  //!< |k - k_L|^2 a^2
    double x_x{0};      //!< transverse part, dk_x^2 a^2
    double x_z{0};      //!< longitudinal part, dk_z^2 a^2
};

// Momentum transfer for a photon scattered at (theta, varpi)
ScatterPoint kinematics(TrapModel const& trap, double theta, double varpi);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
