// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/formfunc.hpp
//! Coherent and incoherent form functions of a trapped ideal gas.
//---------------------------------------------------------------------------//
#pragma once

#include <string_view>

#include "model.hpp"
#include "statmech.hpp"

namespace fermiscatter
{
//---------------------------------------------------------------------------//
/*!
 * Evaluation strategy.
 *
 * - PowerSeries: expansion in the fugacity, valid for z < 1.
 * - LaguerreSum: single shell sum over generalized Laguerre polynomials
 *   (coherent only).
 * - ClosedFormMB: analytic Maxwell-Boltzmann result.
 * - QuadSum: direct four-fold level sum (incoherent only, small n_max).
 * - ConvolutionSum: the same sum with the per-axis Franck-Condon matrices
 *   combined by FFT (incoherent only).
 * - ShellSum: double sum over shell pairs using rotational invariance of
 *   each shell (incoherent only).
 */
enum class Method
{
    Auto,
    PowerSeries,
    LaguerreSum,
    ClosedFormMB,
    QuadSum,
    ConvolutionSum,
    ShellSum,
};

char const* to_string(Method m);
// Parse a method name (case-insensitive); throws std::invalid_argument
Method method_from_string(std::string_view name);

//! Largest shell cutoff accepted by QuadSum
inline constexpr int quad_sum_max_n = 60;
//! Largest shell cutoff accepted by ConvolutionSum
inline constexpr int convolution_max_n = 1024;
//! Fugacity below which Auto selects the power series
inline constexpr double auto_series_fugacity = 0.8;

//---------------------------------------------------------------------------//
struct FormFunctionRequest
{
    ThermalState state;
    ScatterPoint point;
    Method method{Method::Auto};
    double tolerance{1e-8};
};

//---------------------------------------------------------------------------//
// |Sum_n N_n <n| e^{i dk.r} |n>|^2
double coherent_form(FormFunctionRequest const& req);

// Sum_{n,n'} N_n N_n' |<n| e^{i dk.r} |n'>|^2
double incoherent_form(FormFunctionRequest const& req);

// Sum_y P(n+y) P(m+y)
double incoherent_weight(int n, int m, ThermalState const& state);

// Strategy Auto resolves to for this request
Method resolve_coherent(FormFunctionRequest const& req);
Method resolve_incoherent(FormFunctionRequest const& req);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
