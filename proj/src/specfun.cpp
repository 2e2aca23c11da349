// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file specfun.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fermiscatter
{
namespace
{
//---------------------------------------------------------------------------//
constexpr double rescale_above = 1e100;
constexpr double rescale_factor = 1e-100;
double const log_rescale = std::log(rescale_factor);

void check_args(int n, int alpha, double x, char const* who)
{
    if (n < 0 || alpha < 0 || !(x >= 0) || !std::isfinite(x))
    {
        throw std::invalid_argument(std::string(who)
                                    + ": need n >= 0, alpha >= 0, finite x "
                                      ">= 0");
    }
}

//---------------------------------------------------------------------------//
/*!
 * Unscaled Laguerre recurrence with a floating exponent.
 *
 * Calls visit(n, value, log_scale) for every n with L_n = value * e^log_scale.
 */
template<class F>
void laguerre_walk(int n_max, int alpha, double x, F&& visit)
{
    double prev = 0;
    double curr = 1;
    double log_scale = 0;
    visit(0, curr, log_scale);
    if (n_max == 0)
        return;
    prev = curr;
    curr = 1 + alpha - x;
    visit(1, curr, log_scale);
    for (int k = 1; k < n_max; ++k)
    {
        double next = ((2 * k + alpha + 1 - x) * curr - (k + alpha) * prev)
                      / (k + 1);
        prev = curr;
        curr = next;
        if (std::abs(curr) > rescale_above)
        {
            curr *= rescale_factor;
            prev *= rescale_factor;
            log_scale -= log_rescale;
        }
        visit(k + 1, curr, log_scale);
    }
}

double scaled_value(double value, double log_scale, double x)
{
    if (value == 0)
        return 0;
    return std::copysign(std::exp(std::log(std::abs(value)) + log_scale - x / 2),
                         value);
}
}  // namespace

//---------------------------------------------------------------------------//
double laguerre_scaled(int n, int alpha, double x)
{
    check_args(n, alpha, x, "laguerre_scaled");
    double result = 0;
    laguerre_walk(n, alpha, x, [&](int k, double v, double s) {
        if (k == n)
            result = scaled_value(v, s, x);
    });
    return result;
}

//---------------------------------------------------------------------------//
LaguerreTable::LaguerreTable(int alpha, double x, int n_max)
    : alpha_(alpha), x_(x)
{
    check_args(n_max, alpha, x, "LaguerreTable");
    values_.resize(static_cast<std::size_t>(n_max) + 1);
    laguerre_walk(n_max, alpha, x, [&](int k, double v, double s) {
        values_[k] = scaled_value(v, s, x);
    });
}

//---------------------------------------------------------------------------//
/*!
 * Direct evaluation:
 *   (min! / max!) x^d e^{-x} [L_min^d(x)]^2,   d = |n - m|
 * assembled in log space.
 */
double franck_condon_sq(int n, int m, double x)
{
    if (n < 0 || m < 0 || !(x >= 0) || !std::isfinite(x))
    {
        throw std::invalid_argument(
            "franck_condon_sq: need n, m >= 0 and finite x >= 0");
    }
    int const lo = std::min(n, m);
    int const d = std::abs(n - m);
    if (x == 0)
    {
        return d == 0 ? 1.0 : 0.0;
    }
    double lag = 0;
    double lag_scale = 0;
    laguerre_walk(lo, d, x, [&](int k, double v, double s) {
        if (k == lo)
        {
            lag = v;
            lag_scale = s;
        }
    });
    if (lag == 0)
        return 0;
    double log_value = std::lgamma(lo + 1.0) - std::lgamma(lo + d + 1.0)
                       + d * std::log(x) - x
                       + 2 * (std::log(std::abs(lag)) + lag_scale);
    return std::exp(log_value);
}

//---------------------------------------------------------------------------//
DisplacementDiagonal::DisplacementDiagonal(int d, double x) : d_(d), x_(x)
{
    if (d < 0 || !(x >= 0) || !std::isfinite(x))
    {
        throw std::invalid_argument(
            "DisplacementDiagonal: need d >= 0 and finite x >= 0");
    }
    if (x == 0)
    {
        curr_ = (d == 0) ? 1 : 0;
        log_scale_ = 0;
    }
    else
    {
        log_scale_ = -x / 2 + 0.5 * d * std::log(x) - 0.5 * std::lgamma(d + 1.0);
    }
    scale_ = std::exp(log_scale_);
}

double DisplacementDiagonal::next()
{
    double result;
    if (scale_ > 1e-290 || curr_ == 0)
    {
        result = curr_ * scale_;
    }
    else if (log_scale_ - log_rescale < -746)
    {
        // |curr_| <= 1e100 so the amplitude is below the double range
        result = 0;
    }
    else
    {
        result = std::copysign(std::exp(std::log(std::abs(curr_)) + log_scale_),
                               curr_);
    }

    double const m = m_;
    double const d = d_;
    double next = ((2 * m + d + 1 - x_) * curr_
                   - std::sqrt(m * (m + d)) * prev_)
                  / std::sqrt((m + 1) * (m + d + 1));
    prev_ = curr_;
    curr_ = next;
    ++m_;
    if (std::abs(curr_) > rescale_above)
    {
        curr_ *= rescale_factor;
        prev_ *= rescale_factor;
        log_scale_ -= log_rescale;
        scale_ = std::exp(log_scale_);
    }
    return result;
}

//---------------------------------------------------------------------------//
FranckCondonTable::FranckCondonTable(double x, int n_max)
    : x_(x), n_max_(n_max)
{
    if (n_max < 0)
    {
        throw std::invalid_argument("FranckCondonTable: negative n_max");
    }
    auto const dim = static_cast<std::size_t>(n_max) + 1;
    values_.assign(dim * dim, 0.0);
    for (int d = 0; d <= n_max; ++d)
    {
        DisplacementDiagonal diag(d, x);
        for (int m = 0; m + d <= n_max; ++m)
        {
            double a = diag.next();
            double v = a * a;
            values_[static_cast<std::size_t>(m + d) * dim + m] = v;
            values_[static_cast<std::size_t>(m) * dim + m + d] = v;
        }
    }
}

//---------------------------------------------------------------------------//
/*!
 * Compare Sum_{a+b+c=n} L_a(x1) L_b(x2) L_c(x3) with L_n^(2)(x1+x2+x3).
 *
 * Both sides are evaluated with the common factor e^{-(x1+x2+x3)/2} applied,
 * so the residual |lhs - rhs| / max(1, |rhs|) of the unscaled identity becomes
 * |lhs' - rhs'| / max(e^{-X/2}, |rhs'|).
 */
double laguerre_addition_check(int n, std::array<double, 3> const& x)
{
    for (double xi : x)
    {
        check_args(n, 0, xi, "laguerre_addition_check");
    }
    LaguerreTable t1(0, x[0], n);
    LaguerreTable t2(0, x[1], n);
    LaguerreTable t3(0, x[2], n);
    double lhs = 0;
    for (int a = 0; a <= n; ++a)
    {
        for (int b = 0; a + b <= n; ++b)
        {
            lhs += t1[a] * t2[b] * t3[n - a - b];
        }
    }
    double const total = x[0] + x[1] + x[2];
    double const rhs = laguerre_scaled(n, 2, total);
    double const floor = std::exp(-total / 2);
    return std::abs(lhs - rhs) / std::max(floor, std::abs(rhs));
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
