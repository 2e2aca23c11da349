// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file oracle/reference.hpp
//! Brute-force level sums over an explicit 3D oscillator basis.
//!
//! Nothing here shares code with the fast kernels: matrix elements come from
//! the factorial series of the displacement operator in extended precision,
//! and every sum runs over individual (n_x, n_y, n_z) states.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "fermiscatter/statmech.hpp"

namespace fermiscatter::oracle
{
//---------------------------------------------------------------------------//
// <n| exp(alpha a^dag - alpha^* a) |m> from the finite factorial series
std::complex<long double>
displacement_element(int n, int m, std::complex<long double> alpha);

// <n| exp(i k (a + a^dag)) |m>: plane wave with k in units of 1/a
std::complex<long double> plane_wave_element(int n, int m, double k);

//---------------------------------------------------------------------------//
/*!
 * Occupations N(n_x, n_y, n_z) for 0 <= n_j <= n_max.
 */
class SmallTrapBasis
{
  public:
    static constexpr int max_n = 8;

    // Occupations P(n_x + n_y + n_z) taken from a state's shell table
    SmallTrapBasis(ThermalState const& state, int n_max);

    // Explicit table indexed [n_x][n_y][n_z], flattened
    SmallTrapBasis(int n_max, std::vector<double> occupations);

    int n_max() const { return n_max_; }
    double occupation(int nx, int ny, int nz) const
    {
        return occ_[(static_cast<std::size_t>(nx) * (n_max_ + 1) + ny)
                        * (n_max_ + 1)
                    + nz];
    }
    double total() const;

  private:
    int n_max_;
    std::vector<double> occ_;
};

using Vec3 = std::array<double, 3>;

//---------------------------------------------------------------------------//
// |Sum_n N_n <n| e^{i dk.R} |n>|^2 over the basis
double brute_coherent(SmallTrapBasis const& basis, Vec3 const& dk);

struct IncoherentBreakdown
{
    double pair_form{0};     //!< Sum N_n N_m |eta_nm|^2
    double hole_form{0};     //!< Sum N_n (1 - N_m) |eta_nm|^2
    double completeness{0};  //!< Sum N_n Sum_m |eta_nm|^2
    double atoms{0};         //!< Sum N_n
};

// Incoherent sums with final states m_j <= final_cutoff per axis
IncoherentBreakdown brute_incoherent(SmallTrapBasis const& basis,
                                     Vec3 const& dk,
                                     int final_cutoff = -1);

// Sum over final states of |<n|e^{i dk.R}|m>|^2 for one initial state
double sum_rule(std::array<int, 3> const& n, Vec3 const& dk, int final_cutoff);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter::oracle
