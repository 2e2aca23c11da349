// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file statmech.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/statmech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <boost/math/tools/toms748_solve.hpp>

#include "fermiscatter/errors.hpp"
#include "detail/tables.hpp"

namespace fermiscatter
{
//---------------------------------------------------------------------------//
struct ThermalState::Data
{
    std::int64_t n_atoms{0};
    double atoms{0};
    double tau{0};
    Statistics statistics{Statistics::FermiDirac};
    bool has_fugacity{false};
    double log_fugacity{0};
    bool truncated{false};
    std::vector<double> occupations;
};

namespace
{
//---------------------------------------------------------------------------//
constexpr double tail_tolerance = 1e-12;
constexpr double floor_width = 40;  // n_max >= E_F + 40 tau + floor_shells
constexpr double floor_shells = 16;
constexpr double solve_width = 60;  // occupations summed while solving

double shell_occupation(Statistics s, double log_z, double n, double tau)
{
    if (s == Statistics::MaxwellBoltzmann)
    {
        return std::exp(log_z - n / tau);
    }
    return fermi_dirac_occupation(n, log_z, tau);
}

//! Compensated sum of g(n) P(n) for n in [0, n_cut]
double shell_number_sum(Statistics s, double log_z, double tau, int n_cut)
{
    double sum = 0;
    double comp = 0;
    for (int n = 0; n <= n_cut; ++n)
    {
        double term = static_cast<double>(degeneracy(n))
                      * shell_occupation(s, log_z, n, tau);
        double t = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term
                                                   : (term - t) + sum;
        sum = t;
        if (term == 0 && n > log_z * tau)
            break;
    }
    return sum + comp;
}

//---------------------------------------------------------------------------//
/*!
 * Smallest n >= floor with Sum_{m>n} g(m) z e^{-m/tau} < tol * atoms.
 *
 * The tail is bounded by its first term times 1/(1-r), with r the largest
 * ratio of consecutive terms past n; P(m) <= z e^{-m/tau} for both
 * statistics.
 */
int tail_cutoff(double log_z, double tau, double atoms, double floor_n)
{
    double const target = std::log(tail_tolerance * std::max(atoms, 1e-300));
    double const decay = std::exp(-1 / tau);
    int n = static_cast<int>(std::ceil(std::max(floor_n, 0.0)));
    constexpr int ceiling = 50'000'000;
    for (; n < ceiling; ++n)
    {
        double r = (n + 3.0) / (n + 1.0) * decay;
        if (r >= 1)
            continue;
        double log_bound = log_z - (n + 1) / tau
                           + std::log(static_cast<double>(degeneracy(n + 1)))
                           - std::log1p(-r);
        if (log_bound < target)
            return n;
    }
    throw ConvergenceFailure("occupation tail does not decay (tau="
                             + std::to_string(tau) + ")");
}

std::vector<double>
occupation_table(Statistics s, double log_z, double tau, int n_max)
{
    std::vector<double> table(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
    {
        table[n] = shell_occupation(s, log_z, n, tau);
    }
    return table;
}

void validate_tau(double tau)
{
    if (!(std::isfinite(tau) && tau > 0))
    {
        throw std::invalid_argument("temperature tau must be finite and > 0");
    }
}

//---------------------------------------------------------------------------//
/*!
 * Root of Sum g(n) P(n) = N in ln z over shells [0, n_cut].
 *
 * The constraint is strictly increasing in ln z. The Maxwell-Boltzmann value
 * bounds the root from below because P_FD <= P_MB; the upper end is found by
 * doubling the step.
 */
double solve_log_fugacity(double n_atoms, double tau, double log_z_mb, int n_cut)
{
    auto residual = [&](double log_z) {
        return shell_number_sum(Statistics::FermiDirac, log_z, tau, n_cut) - n_atoms;
    };

    double lo = log_z_mb;
    double f_lo = residual(lo);
    double step = 1;
    int guard = 0;
    while (f_lo > 0)
    {
        lo -= step;
        step *= 2;
        f_lo = residual(lo);
        if (++guard > 200)
            throw ConvergenceFailure("could not bracket fugacity from below");
    }
    if (f_lo == 0)
        return lo;

    double hi = lo + 1;
    double f_hi = residual(hi);
    step = 1;
    guard = 0;
    while (f_hi < 0)
    {
        lo = hi;
        f_lo = f_hi;
        step *= 2;
        hi = lo + step;
        f_hi = residual(hi);
        if (++guard > 200)
            throw ConvergenceFailure("could not bracket fugacity from above");
    }
    if (f_hi == 0)
        return hi;

    std::uintmax_t max_iter = 400;
    auto [a, b] = boost::math::tools::toms748_solve(
        residual,
        lo,
        hi,
        f_lo,
        f_hi,
        boost::math::tools::eps_tolerance<double>(
            std::numeric_limits<double>::digits - 1),
        max_iter);
    double root = (std::abs(residual(a)) <= std::abs(residual(b))) ? a : b;
    if (max_iter >= 400)
    {
        throw ConvergenceFailure("fugacity refinement hit iteration limit");
    }
    return root;
}
}  // namespace

//---------------------------------------------------------------------------//
char const* to_string(Statistics s)
{
    return s == Statistics::FermiDirac ? "FD" : "MB";
}

//---------------------------------------------------------------------------//
std::int64_t degeneracy(int n)
{
    if (n < 0)
    {
        throw std::invalid_argument("degeneracy: negative shell index");
    }
    auto const m = static_cast<std::int64_t>(n);
    return (m + 1) * (m + 2) / 2;
}

//---------------------------------------------------------------------------//
/*!
 * Fermi energy for N atoms.
 *
 * Up to 1000 atoms the exact shell-filling value is used: the smallest n_F
 * whose cumulative degeneracy (n_F+1)(n_F+2)(n_F+3)/6 reaches N. Above that,
 * the continuum value (6N)^{1/3}.
 */
double fermi_energy(std::int64_t n_atoms)
{
    if (n_atoms < 1)
    {
        throw std::invalid_argument("fermi_energy: need at least one atom");
    }
    if (n_atoms > 1000)
    {
        return std::cbrt(6.0 * static_cast<double>(n_atoms));
    }
    std::int64_t n_f = 0;
    while ((n_f + 1) * (n_f + 2) * (n_f + 3) / 6 < n_atoms)
    {
        ++n_f;
    }
    return static_cast<double>(n_f);
}

//---------------------------------------------------------------------------//
double fermi_dirac_occupation(double energy, double log_fugacity, double tau)
{
    double const t = log_fugacity - energy / tau;
    if (t > 0)
    {
        return 1 / (1 + std::exp(-t));
    }
    double const e = std::exp(t);
    return e / (1 + e);
}

//---------------------------------------------------------------------------//
ThermalState::ThermalState(std::shared_ptr<Data const> data)
    : data_(std::move(data)), tables_(detail::make_table_cache())
{
}

//---------------------------------------------------------------------------//
ThermalState
ThermalState::solve(std::int64_t n_atoms, double tau, Statistics statistics)
{
    if (n_atoms < 1)
    {
        throw std::invalid_argument("solve_fugacity: need at least one atom");
    }
    validate_tau(tau);

    auto const big_n = static_cast<double>(n_atoms);
    double const log_z_mb = std::log(big_n) + 3 * std::log(-std::expm1(-1 / tau));

    auto data = std::make_shared<Data>();
    data->n_atoms = n_atoms;
    data->atoms = big_n;
    data->tau = tau;
    data->statistics = statistics;
    data->has_fugacity = true;

    if (statistics == Statistics::MaxwellBoltzmann)
    {
        data->log_fugacity = log_z_mb;
        int n_max = tail_cutoff(log_z_mb, tau, big_n, floor_width * tau + floor_shells);
        data->occupations = occupation_table(statistics, log_z_mb, tau, n_max);
        return ThermalState(std::move(data));
    }

    double const e_f = fermi_energy(n_atoms);
    int const wide_cut
        = static_cast<int>(std::ceil(e_f + solve_width * tau)) + 16;
    double log_z = solve_log_fugacity(big_n, tau, log_z_mb, wide_cut);

    double const mu = std::max(e_f, tau * log_z);
    int n_max = tail_cutoff(log_z, tau, big_n, mu + floor_width * tau + floor_shells);
    // Re-solve on exactly the stored shells so the table itself conserves N
    log_z = solve_log_fugacity(big_n, tau, log_z_mb, n_max);

    double const total = shell_number_sum(statistics, log_z, tau, n_max);
    if (!(std::abs(total - big_n) <= 1e-11 * big_n))
    {
        throw ConvergenceFailure("number constraint residual "
                                 + std::to_string(total - big_n)
                                 + " exceeds tolerance");
    }
    data->log_fugacity = log_z;
    data->occupations = occupation_table(statistics, log_z, tau, n_max);
    return ThermalState(std::move(data));
}

//---------------------------------------------------------------------------//
ThermalState ThermalState::from_fugacity(double log_fugacity,
                                         double tau,
                                         Statistics statistics)
{
    validate_tau(tau);
    if (!std::isfinite(log_fugacity))
    {
        throw std::invalid_argument("from_fugacity: ln z must be finite");
    }
    auto data = std::make_shared<Data>();
    data->tau = tau;
    data->statistics = statistics;
    data->has_fugacity = true;
    data->log_fugacity = log_fugacity;

    // The mean number is not known yet; bound the tail against the
    // ground-shell occupation instead, which never exceeds it.
    double const p0 = shell_occupation(statistics, log_fugacity, 0, tau);
    double const mu = std::max(0.0, tau * log_fugacity);
    int n_max = tail_cutoff(log_fugacity, tau, p0, mu + floor_width * tau + floor_shells);
    data->occupations = occupation_table(statistics, log_fugacity, tau, n_max);
    data->atoms = shell_number_sum(statistics, log_fugacity, tau, n_max);
    return ThermalState(std::move(data));
}

//---------------------------------------------------------------------------//
ThermalState
ThermalState::from_occupations(std::vector<double> shell_occupations, double tau)
{
    if (shell_occupations.empty())
    {
        throw std::invalid_argument("from_occupations: empty table");
    }
    if (!(std::isfinite(tau) && tau >= 0))
    {
        throw std::invalid_argument("from_occupations: tau must be >= 0");
    }
    double atoms = 0;
    for (std::size_t n = 0; n < shell_occupations.size(); ++n)
    {
        double p = shell_occupations[n];
        if (!(p >= 0 && p <= 1))
        {
            throw std::invalid_argument(
                "from_occupations: occupation outside [0, 1] at shell "
                + std::to_string(n));
        }
        atoms += static_cast<double>(degeneracy(static_cast<int>(n))) * p;
    }
    auto data = std::make_shared<Data>();
    data->atoms = atoms;
    data->tau = tau;
    data->statistics = Statistics::FermiDirac;
    data->occupations = std::move(shell_occupations);
    return ThermalState(std::move(data));
}

//---------------------------------------------------------------------------//
ThermalState ThermalState::truncated(int n_max) const
{
    if (n_max < 0)
    {
        throw std::invalid_argument("truncated: negative n_max");
    }
    auto data = std::make_shared<Data>(*data_);
    if (n_max < this->n_max())
    {
        data->occupations.resize(static_cast<std::size_t>(n_max) + 1);
    }
    data->truncated = true;
    data->atoms = 0;
    for (std::size_t n = 0; n < data->occupations.size(); ++n)
    {
        data->atoms += static_cast<double>(degeneracy(static_cast<int>(n)))
                       * data->occupations[n];
    }
    return ThermalState(std::move(data));
}

//---------------------------------------------------------------------------//
std::int64_t ThermalState::n_atoms() const
{
    return data_->n_atoms;
}

/*!
 * Atom number entering the spectra: exactly N for solved states, the table
 * sum otherwise.
 */
double ThermalState::atoms() const
{
    return data_->atoms;
}

double ThermalState::tau() const
{
    return data_->tau;
}

Statistics ThermalState::statistics() const
{
    return data_->statistics;
}

bool ThermalState::has_fugacity() const
{
    return data_->has_fugacity;
}

double ThermalState::log_fugacity() const
{
    if (!data_->has_fugacity)
    {
        throw std::logic_error("state built from explicit occupations has no "
                               "fugacity");
    }
    return data_->log_fugacity;
}

//! May overflow to +inf deep in the degenerate regime; prefer log_fugacity
double ThermalState::fugacity() const
{
    return std::exp(this->log_fugacity());
}

bool ThermalState::is_truncated() const
{
    return data_->truncated;
}

int ThermalState::n_max() const
{
    return static_cast<int>(data_->occupations.size()) - 1;
}

std::span<double const> ThermalState::occupations() const
{
    return data_->occupations;
}

double ThermalState::occupation(int n) const
{
    if (n < 0)
    {
        throw std::invalid_argument("occupation: negative shell index");
    }
    return n <= this->n_max() ? data_->occupations[n] : 0.0;
}

double ThermalState::number_sum() const
{
    double sum = 0;
    for (int n = 0; n <= this->n_max(); ++n)
    {
        sum += static_cast<double>(degeneracy(n)) * data_->occupations[n];
    }
    return sum;
}

detail::TableCache& ThermalState::tables() const
{
    return *tables_;
}

//---------------------------------------------------------------------------//
ThermalState
solve_fugacity(std::int64_t n_atoms, double tau, Statistics statistics)
{
    return ThermalState::solve(n_atoms, tau, statistics);
}

double occupation(int n, ThermalState const& state)
{
    return state.occupation(n);
}

double occupation_variance(int n, ThermalState const& state)
{
    if (state.statistics() != Statistics::FermiDirac)
    {
        throw std::invalid_argument(
            "occupation_variance: defined for Fermi-Dirac statistics only");
    }
    double p = state.occupation(n);
    return p * (1 - p);
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
