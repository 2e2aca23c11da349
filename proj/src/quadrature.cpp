// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file quadrature.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>
#include <fmt/format.h>

#include "fermiscatter/errors.hpp"

namespace fermiscatter
{
namespace
{
using Pair = std::array<double, 2>;

struct Panel
{
    double a, b;
    Pair fa, fm, fb;  // ends and midpoint
    Pair fl, fr;      // quarter points
    Pair value;
    Pair error;
    double priority{0};
};

Panel make_panel(PairIntegrand const& f,
                 double a,
                 double b,
                 Pair fa,
                 Pair fm,
                 Pair fb,
                 int& evals)
{
    Panel p{a, b, fa, fm, fb, {}, {}, {}, {}, 0};
    double const h = b - a;
    p.fl = f(a + h / 4);
    p.fr = f(a + 3 * h / 4);
    evals += 2;
    for (int c = 0; c < 2; ++c)
    {
        double coarse = h / 6 * (fa[c] + 4 * fm[c] + fb[c]);
        double fine = h / 12 * (fa[c] + 4 * p.fl[c] + 2 * fm[c] + 4 * p.fr[c]
                                + fb[c]);
        p.value[c] = fine + (fine - coarse) / 15;
        p.error[c] = std::abs(fine - coarse) / 15;
        if (!std::isfinite(p.value[c]))
        {
            throw QuadratureFailure(
                fmt::format("non-finite integrand on [{:.17g}, {:.17g}]", a, b));
        }
    }
    return p;
}

//! Neumaier sum over panel values in position order
Pair totals(std::vector<Panel> const& panels, Pair Panel::*field)
{
    Pair result{0, 0};
    for (int c = 0; c < 2; ++c)
    {
        double sum = 0;
        double comp = 0;
        for (auto const& p : panels)
        {
            double term = (p.*field)[c];
            double t = sum + term;
            comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term
                                                       : (term - t) + sum;
            sum = t;
        }
        result[c] = sum + comp;
    }
    return result;
}
}  // namespace

//---------------------------------------------------------------------------//
QuadratureResult integrate_pair(PairIntegrand const& f,
                                std::span<double const> breaks,
                                QuadratureOptions const& options)
{
    if (breaks.size() < 2)
    {
        throw std::invalid_argument("integrate_pair: need two breakpoints");
    }
    if (!std::is_sorted(breaks.begin(), breaks.end())
        || std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end())
    {
        throw std::invalid_argument(
            "integrate_pair: breakpoints must be strictly increasing");
    }
    int const per_interval = std::max(1, options.initial_panels);

    QuadratureResult result;
    std::vector<Panel> panels;
    Pair f_left = f(breaks.front());
    result.evaluations = 1;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    {
        double const lo = breaks[i];
        double const hi = breaks[i + 1];
        for (int k = 0; k < per_interval; ++k)
        {
            double a = lo + (hi - lo) * k / per_interval;
            double b = (k + 1 == per_interval)
                           ? hi
                           : lo + (hi - lo) * (k + 1) / per_interval;
            Pair fm = f((a + b) / 2);
            Pair fb = f(b);
            result.evaluations += 2;
            panels.push_back(
                make_panel(f, a, b, f_left, fm, fb, result.evaluations));
            f_left = fb;
        }
    }

    auto tolerance = [&](Pair const& value) {
        double const floor
            = options.pair_floor * (std::abs(value[0]) + std::abs(value[1]));
        return Pair{
            options.rel_tol * std::max(std::abs(value[0]), floor) + options.abs_tol,
            options.rel_tol * std::max(std::abs(value[1]), floor) + options.abs_tol};
    };
    auto assign_priority = [](Panel& p, Pair const& tol) {
        p.priority = 0;
        for (int c = 0; c < 2; ++c)
        {
            double r = tol[c] > 0 ? p.error[c] / tol[c]
                                  : (p.error[c] > 0 ? HUGE_VAL : 0.0);
            p.priority = std::max(p.priority, r);
        }
    };

    while (true)
    {
        Pair value = totals(panels, &Panel::value);
        Pair error = totals(panels, &Panel::error);
        Pair tol = tolerance(value);
        if (error[0] <= tol[0] && error[1] <= tol[1])
        {
            result.value = value;
            result.error = error;
            return result;
        }
        // Refine the worst panels in one sweep: every panel whose error
        // exceeds its share of the tolerance budget
        for (auto& p : panels)
        {
            assign_priority(p, tol);
        }
        auto worst = std::max_element(
            panels.begin(), panels.end(), [](Panel const& x, Panel const& y) {
                return x.priority < y.priority;
            });
        if (static_cast<int>(panels.size()) >= options.max_panels
            || worst->b - worst->a
                   <= 4 * std::numeric_limits<double>::epsilon()
                          * std::max(std::abs(worst->a), std::abs(worst->b)))
        {
            throw QuadratureFailure(fmt::format(
                "budget exhausted after {} evaluations; worst panel "
                "[{:.17g}, {:.17g}] error ({:.3g}, {:.3g}) against tolerance "
                "({:.3g}, {:.3g})",
                result.evaluations,
                worst->a,
                worst->b,
                worst->error[0],
                worst->error[1],
                tol[0],
                tol[1]));
        }
        double const share = 1.0 / static_cast<double>(panels.size());
        std::vector<Panel> next;
        next.reserve(panels.size() + 16);
        for (auto const& p : panels)
        {
            if (p.priority > share * 0.5 || &p == &*worst)
            {
                double m = (p.a + p.b) / 2;
                next.push_back(make_panel(
                    f, p.a, m, p.fa, p.fl, p.fm, result.evaluations));
                next.push_back(make_panel(
                    f, m, p.b, p.fm, p.fr, p.fb, result.evaluations));
            }
            else
            {
                next.push_back(p);
            }
        }
        panels = std::move(next);
    }
}

//---------------------------------------------------------------------------//
double integrate(std::function<double(double)> const& f,
                 std::span<double const> breaks,
                 QuadratureOptions const& options)
{
    auto pair = [&f](double x) { return Pair{f(x), 0.0}; };
    return integrate_pair(pair, breaks, options).value[0];
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
