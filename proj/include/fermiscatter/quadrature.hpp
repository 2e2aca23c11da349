// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/quadrature.hpp
//! Globally adaptive Simpson quadrature for pairs of integrands.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <functional>
#include <span>

namespace fermiscatter
{
//---------------------------------------------------------------------------//
struct QuadratureOptions
{
    double rel_tol{1e-6};
    double abs_tol{0};
    //! A component below pair_floor times the pair's total magnitude only
    //! needs accuracy relative to that floor
    double pair_floor{1e-10};
    int initial_panels{4};   //!< per breakpoint interval
    int max_panels{20000};   //!< refinement budget
};

struct QuadratureResult
{
    std::array<double, 2> value{0, 0};
    std::array<double, 2> error{0, 0};
    int evaluations{0};
};

using PairIntegrand = std::function<std::array<double, 2>(double)>;

//---------------------------------------------------------------------------//
/*!
 * Integrate two functions sampled together over [breaks.front(),
 * breaks.back()].
 *
 * Every interval between consecutive breakpoints starts with
 * \c initial_panels Simpson panels. The panel with the largest error
 * relative to its component's tolerance is bisected until each component
 * satisfies |error| <= rel_tol max(|value|, pair_floor (|v0| + |v1|)) +
 * abs_tol. Each panel's estimate is
 * the Richardson-corrected two-half Simpson sum. Evaluation order and
 * summation order depend only on the integrand values, so results are
 * reproducible.
 *
 * Throws QuadratureFailure naming the worst panel when the budget runs out.
 */
QuadratureResult integrate_pair(PairIntegrand const& f,
                                std::span<double const> breaks,
                                QuadratureOptions const& options = {});

// Scalar convenience wrapper
double integrate(std::function<double(double)> const& f,
                 std::span<double const> breaks,
                 QuadratureOptions const& options = {});

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
