// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/specfun.hpp
//! Scaled generalized Laguerre polynomials and displacement-operator
//! (Franck-Condon) matrix elements of the 1D harmonic oscillator.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <span>
#include <vector>

namespace fermiscatter
{
//---------------------------------------------------------------------------//
// e^{-x/2} L_n^alpha(x) by forward recurrence
double laguerre_scaled(int n, int alpha, double x);

//---------------------------------------------------------------------------//
/*!
 * Scaled values e^{-x/2} L_n^alpha(x) for n = 0..n_max at fixed (alpha, x).
 *
 * The recurrence runs on the unscaled polynomials with a floating exponent,
 * so neither e^{x/2} nor the polynomial overflows for x and n up to 1e4.
 * Entries whose magnitude is below the double range come out as zero.
 */
class LaguerreTable
{
  public:
    LaguerreTable(int alpha, double x, int n_max);

    int alpha() const { return alpha_; }
    double x() const { return x_; }
    int n_max() const { return static_cast<int>(values_.size()) - 1; }
    std::span<double const> values() const { return values_; }
    double operator[](int n) const { return values_[n]; }

  private:
    int alpha_;
    double x_;
    std::vector<double> values_;
};

//---------------------------------------------------------------------------//
// |<n| D(xi) |m>|^2 with x = |xi|^2, via log-gamma and the Laguerre form
double franck_condon_sq(int n, int m, double x);

//---------------------------------------------------------------------------//
/*!
 * Walk one diagonal of the displacement matrix at fixed index difference d.
 *
 * Produces the normalized amplitudes
 *   a_m = sqrt(m! / (m+d)!) x^{d/2} e^{-x/2} L_m^d(x),   m = 0, 1, ...
 * with |a_m| = |<m+d| D |m>| <= 1, using the three-term recurrence
 *   sqrt((m+1)(m+d+1)) a_{m+1} = (2m+d+1-x) a_m - sqrt(m(m+d)) a_{m-1}.
 * Each call to \c next() returns the following amplitude.
 */
class DisplacementDiagonal
{
  public:
    DisplacementDiagonal(int d, double x);

    // Amplitude a_m for the current m, then advance
    double next();

  private:
    int d_;
    double x_;
    int m_{0};
    double prev_{0};
    double curr_{1};
    double log_scale_;
    double scale_;
};

//---------------------------------------------------------------------------//
/*!
 * Dense table of |<n| D |m>|^2 for 0 <= n, m <= n_max at fixed x.
 */
class FranckCondonTable
{
  public:
    FranckCondonTable(double x, int n_max);

    double x() const { return x_; }
    int n_max() const { return n_max_; }
    double operator()(int n, int m) const
    {
        return values_[static_cast<std::size_t>(n) * (n_max_ + 1) + m];
    }
    std::span<double const> values() const { return values_; }

  private:
    double x_;
    int n_max_;
    std::vector<double> values_;
};

//---------------------------------------------------------------------------//
// Relative residual of the Laguerre addition theorem for three arguments
double laguerre_addition_check(int n, std::array<double, 3> const& x);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
