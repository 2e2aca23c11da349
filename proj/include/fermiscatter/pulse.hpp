// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/pulse.hpp
//! Two-level pulse dynamics and single-atom emission shapes.
//---------------------------------------------------------------------------//
#pragma once

#include <complex>
#include <limits>

namespace fermiscatter
{
//---------------------------------------------------------------------------//
enum class PulseShape
{
    Sech,      //!< 1 / cosh(gamma_L t)
    Gaussian,  //!< exp(-(gamma_L t)^2)
};

//---------------------------------------------------------------------------//
/*!
 * Pulse envelope with peak Rabi frequency in units of gamma_L.
 *
 * Only the sech envelope has an emission spectrum; Gaussian pulses are
 * supported for area bookkeeping.
 */
class PulseModel
{
  public:
    // Sech pulse with total area 2 pi K
    static PulseModel two_pi(int k = 1);

    PulseModel(PulseShape shape, double peak_rabi);

    PulseShape shape() const { return shape_; }
    double peak_rabi() const { return peak_rabi_; }
    // A(infinity)
    double total_area() const;
    // True if the total area is 2 pi K for an integer K >= 1
    bool is_two_pi_k(double tol = 1e-12) const;

  private:
    PulseShape shape_;
    double peak_rabi_;
};

//---------------------------------------------------------------------------//
// Area accumulated up to gamma_L t (pass +infinity for the total)
double pulse_area(PulseModel const& pulse, double t);

//---------------------------------------------------------------------------//
struct TwoLevelAmplitudes
{
    std::complex<double> ground;
    std::complex<double> excited;
};

// Resonant Rabi rotation through the given area
TwoLevelAmplitudes
rabi_evolve(std::complex<double> g0, std::complex<double> f0, double area);

//---------------------------------------------------------------------------//
struct SingleAtomSpectra
{
    double coherent{0};    //!< pi w^2 / cosh^2(pi w / 2)
    double incoherent{0};  //!< pi w^2 / sinh^2(pi w / 2)
};

// Emission shapes of one atom driven by a 2 pi sech pulse
SingleAtomSpectra single_atom_spectra(double varpi);

//! Integral of the coherent shape over all detunings
inline constexpr double coherent_line_integral = 4.0 / 3.0;
//! Integral of the incoherent shape over all detunings
inline constexpr double incoherent_line_integral = 8.0 / 3.0;

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
