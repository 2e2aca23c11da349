// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/statmech.hpp
//! Ideal Fermi (and classical) gas in an isotropic 3D harmonic trap.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fermiscatter
{
namespace detail
{
struct TableCache;
}

enum class Statistics
{
    FermiDirac,
    MaxwellBoltzmann
};

char const* to_string(Statistics s);

//---------------------------------------------------------------------------//
// Number of states in oscillator shell n: (n+1)(n+2)/2
std::int64_t degeneracy(int n);

// Fermi energy in units of hbar omega_t
double fermi_energy(std::int64_t n_atoms);

// Fermi-Dirac occupation of a level at energy e given ln z and k_B T
double fermi_dirac_occupation(double energy, double log_fugacity, double tau);

//---------------------------------------------------------------------------//
/*!
 * Equilibrium shell occupations P(n) of N atoms at reduced temperature
 * tau = k_B T / hbar omega_t.
 *
 * Instances are immutable and cheap to copy; copies share the occupation
 * table and the lazily built form-function weight tables. The occupation
 * table is cut at n_max, past which the analytic tail of the number sum is
 * below 1e-12 N.
 *
 * Besides solved thermal states, two test-oriented constructions exist:
 * states parameterized directly by the fugacity, and explicit shell
 * occupation tables (a single atom in the ground level, a filled shell).
 * \c truncated() cuts any state's table to a smaller n_max so that
 * brute-force sums over a small basis see exactly the same occupations.
 */
class ThermalState
{
  public:
    // Solve the number constraint for the fugacity
    static ThermalState
    solve(std::int64_t n_atoms, double tau, Statistics statistics);

    // Occupations for a prescribed ln z (mean atom number follows)
    static ThermalState
    from_fugacity(double log_fugacity, double tau, Statistics statistics);

    // Explicit per-shell occupations in [0, 1]; no fugacity is defined
    static ThermalState
    from_occupations(std::vector<double> shell_occupations, double tau = 0);

    // Copy with all shells above n_max emptied
    ThermalState truncated(int n_max) const;

    //!@{
    //! \name Accessors
    std::int64_t n_atoms() const;
    double atoms() const;
    double tau() const;
    Statistics statistics() const;
    bool has_fugacity() const;
    double log_fugacity() const;
    double fugacity() const;
    bool is_truncated() const;
    int n_max() const;
    std::span<double const> occupations() const;
    //!@}

    // Occupation of shell n (zero above n_max)
    double occupation(int n) const;

    // Sum of g(n) P(n) over the table
    double number_sum() const;

    // Lazily built per-state tables shared by the form-function kernels
    detail::TableCache& tables() const;

  private:
    struct Data;
    std::shared_ptr<Data const> data_;
    std::shared_ptr<detail::TableCache> tables_;

    explicit ThermalState(std::shared_ptr<Data const> data);
};

//---------------------------------------------------------------------------//
// Solve Sum_n g(n) P(n) = N for the fugacity
ThermalState
solve_fugacity(std::int64_t n_atoms, double tau, Statistics statistics);

// Mean occupation of shell n
double occupation(int n, ThermalState const& state);

// Fermi-Dirac number variance P(1 - P) of shell n
double occupation_variance(int n, ThermalState const& state);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
