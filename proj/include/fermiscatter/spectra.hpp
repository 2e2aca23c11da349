// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/spectra.hpp
//! Differential, angular, frequency and total photon spectra.
//---------------------------------------------------------------------------//
#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "formfunc.hpp"
#include "model.hpp"
#include "pulse.hpp"
#include "quadrature.hpp"
#include "statmech.hpp"

namespace fermiscatter
{
//---------------------------------------------------------------------------//
//! How the detuning integral of the angular distribution is done
enum class AngularMode
{
    Auto,              //!< Frozen if gamma_ratio < 1e-6, else Full
    Full,              //!< adaptive quadrature over varpi
    FrozenFormFactor,  //!< form functions at varpi = 0, closed line integrals
};

char const* to_string(AngularMode m);

//! gamma_ratio below which Auto uses the frozen form factors
inline constexpr double frozen_gamma_ratio = 1e-6;
//! Detuning integration window [-w, w]
inline constexpr double varpi_window = 12;

struct SpectrumOptions
{
    Method method{Method::Auto};
    double form_tolerance{1e-8};
    QuadratureOptions quadrature{};
};

//! Coherent and incoherent parts of one spectral quantity
struct SpectrumPair
{
    double coherent{0};
    double incoherent{0};
};

//---------------------------------------------------------------------------//
// Differential spectrum without angular weight or normalization:
//   c_coh = s_coh F_coh,  c_in = N (s_coh + s_in) - s_coh F_in
SpectrumPair differential(ThermalState const& state,
                          TrapModel const& trap,
                          double theta,
                          double varpi,
                          SpectrumOptions const& options = {});

// Photons per unit polar angle
SpectrumPair angular_distribution(ThermalState const& state,
                                  TrapModel const& trap,
                                  double theta,
                                  AngularMode mode = AngularMode::Auto,
                                  SpectrumOptions const& options = {});

// Photons per unit detuning
SpectrumPair frequency_distribution(ThermalState const& state,
                                    TrapModel const& trap,
                                    double varpi,
                                    SpectrumOptions const& options = {});

// Total photons scattered by a 2 pi sech pulse
SpectrumPair total_photons(ThermalState const& state,
                           TrapModel const& trap,
                           PulseModel const& pulse,
                           AngularMode mode = AngularMode::Auto,
                           SpectrumOptions const& options = {});

// Methods used for the coherent and incoherent parts when one method is
// requested for both; a method that only evaluates one part leaves the other
// on Auto
std::pair<Method, Method> split_method(Method m);

// Prefactor 3 (gamma / gamma_L) / (8 pi^2)
double photon_normalization(TrapModel const& trap);

// Resolved angular mode for a trap
AngularMode resolve_mode(AngularMode mode, TrapModel const& trap);

// Fixed polar breakpoints refining toward the forward direction
std::vector<double> polar_breakpoints();

//---------------------------------------------------------------------------//
/*!
 * Differential spectrum sampled on a rectangular (theta, varpi) grid.
 */
struct SpectrumGrid
{
    std::vector<double> thetas;
    std::vector<double> varpis;
    std::vector<double> coherent;    //!< row major [theta][varpi]
    std::vector<double> incoherent;  //!< row major [theta][varpi]

    double coh(std::size_t i, std::size_t j) const
    {
        return coherent[i * varpis.size() + j];
    }
    double inc(std::size_t i, std::size_t j) const
    {
        return incoherent[i * varpis.size() + j];
    }

    // Columns theta_deg,varpi,c_coh,c_in at round-trip precision
    void write_csv(std::ostream& os) const;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

// Evaluate the differential spectrum at every grid point
SpectrumGrid evaluate_grid(ThermalState const& state,
                           TrapModel const& trap,
                           std::vector<double> thetas,
                           std::vector<double> varpis,
                           SpectrumOptions const& options = {},
                           int threads = 1,
                           ProgressCallback const& progress = {});

//---------------------------------------------------------------------------//
/*!
 * Run body(i) for i in [0, count) on up to \c threads workers.
 *
 * Indices are handed out in increasing order; callers store results by index
 * so output order never depends on scheduling. The first exception thrown by
 * any task is rethrown after all workers stop.
 */
void parallel_for(std::size_t count,
                  int threads,
                  std::function<void(std::size_t)> const& body,
                  ProgressCallback const& progress = {});

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
