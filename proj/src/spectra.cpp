// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file spectra.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/spectra.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <fmt/format.h>

namespace fermiscatter
{
namespace
{
constexpr double pi = std::numbers::pi;

//! pi (1 + cos^2 theta) |sin theta|, the dipole weight summed over
//! polarizations and azimuth
double angular_weight(double theta)
{
    double const c = std::cos(theta);
    return pi * (1 + c * c) * std::abs(std::sin(theta));
}

void require_theta(double theta)
{
    if (!(std::abs(theta) <= pi))
    {
        throw std::invalid_argument("theta must lie in [-pi, pi]");
    }
}

std::pair<FormFunctionRequest, FormFunctionRequest>
make_requests(ThermalState const& state,
              ScatterPoint const& point,
              SpectrumOptions const& options)
{
    auto [coh, inc] = split_method(options.method);
    return {FormFunctionRequest{state, point, coh, options.form_tolerance},
            FormFunctionRequest{state, point, inc, options.form_tolerance}};
}

std::vector<double> detuning_breakpoints()
{
    double const w = varpi_window;
    return {-w, -6, -3, -1, 0, 1, 3, 6, w};
}

//! Angular distribution before the photon normalization
SpectrumPair angular_raw(ThermalState const& state,
                         TrapModel const& trap,
                         double theta,
                         AngularMode mode,
                         SpectrumOptions const& options)
{
    double const weight = angular_weight(theta);
    if (weight == 0)
        return {};
    double const n = state.atoms();
    if (mode == AngularMode::FrozenFormFactor)
    {
        auto [coh, inc]
            = make_requests(state, kinematics(trap, theta, 0), options);
        double const f_coh = coherent_form(coh);
        double const f_in = incoherent_form(inc);
        return {weight * coherent_line_integral * f_coh,
                weight
                    * (n * (coherent_line_integral + incoherent_line_integral)
                       - coherent_line_integral * f_in)};
    }
    auto breaks = detuning_breakpoints();
    auto result = integrate_pair(
        [&](double varpi) {
            auto d = differential(state, trap, theta, varpi, options);
            return std::array<double, 2>{d.coherent, d.incoherent};
        },
        breaks,
        options.quadrature);
    return {weight * result.value[0], weight * result.value[1]};
}
}  // namespace

//---------------------------------------------------------------------------//
char const* to_string(AngularMode m)
{
    switch (m)
    {
        case AngularMode::Auto:
            return "auto";
        case AngularMode::Full:
            return "full";
        case AngularMode::FrozenFormFactor:
            return "frozen";
    }
    return "?";
}

std::pair<Method, Method> split_method(Method m)
{
    switch (m)
    {
        case Method::LaguerreSum:
            return {m, Method::Auto};
        case Method::QuadSum:
        case Method::ConvolutionSum:
        case Method::ShellSum:
            return {Method::Auto, m};
        default:
            return {m, m};
    }
}

double photon_normalization(TrapModel const& trap)
{
    return 3 * trap.natural_width_ratio() / (8 * pi * pi);
}

AngularMode resolve_mode(AngularMode mode, TrapModel const& trap)
{
    if (mode != AngularMode::Auto)
        return mode;
    return trap.gamma_ratio() < frozen_gamma_ratio
               ? AngularMode::FrozenFormFactor
               : AngularMode::Full;
}

/*!
 * 0, pi 2^-16, ..., pi / 4, pi / 2, pi.
 *
 * The coherent cone has angular width ~ 1 / (k_L R) with R the cloud size,
 * which shrinks toward zero temperature; geometric panels resolve it for any
 * state without depending on it.
 */
std::vector<double> polar_breakpoints()
{
    std::vector<double> breaks{0};
    for (int k = 16; k >= 1; --k)
    {
        breaks.push_back(std::ldexp(pi, -k));
    }
    breaks.push_back(pi);
    return breaks;
}

//---------------------------------------------------------------------------//
/*!
 * At exactly zero detuning the coherent shape vanishes, which removes every
 * temperature-dependent term; the form functions are not evaluated there.
 */
SpectrumPair differential(ThermalState const& state,
                          TrapModel const& trap,
                          double theta,
                          double varpi,
                          SpectrumOptions const& options)
{
    require_theta(theta);
    auto const point = kinematics(trap, theta, varpi);
    auto const s = single_atom_spectra(varpi);
    double const n = state.atoms();
    if (s.coherent == 0)
    {
        return {0, n * s.incoherent};
    }
    auto const [coh, inc] = make_requests(state, point, options);
    double const f_coh = coherent_form(coh);
    double const f_in = incoherent_form(inc);
    return {s.coherent * f_coh,
            n * (s.coherent + s.incoherent) - s.coherent * f_in};
}

//---------------------------------------------------------------------------//
SpectrumPair angular_distribution(ThermalState const& state,
                                  TrapModel const& trap,
                                  double theta,
                                  AngularMode mode,
                                  SpectrumOptions const& options)
{
    require_theta(theta);
    auto raw = angular_raw(
        state, trap, theta, resolve_mode(mode, trap), options);
    double const norm = photon_normalization(trap);
    return {norm * raw.coherent, norm * raw.incoherent};
}

//---------------------------------------------------------------------------//
SpectrumPair frequency_distribution(ThermalState const& state,
                                    TrapModel const& trap,
                                    double varpi,
                                    SpectrumOptions const& options)
{
    auto breaks = polar_breakpoints();
    auto result = integrate_pair(
        [&](double theta) {
            double const w = angular_weight(theta);
            if (w == 0)
                return std::array<double, 2>{0, 0};
            auto d = differential(state, trap, theta, varpi, options);
            return std::array<double, 2>{w * d.coherent, w * d.incoherent};
        },
        breaks,
        options.quadrature);
    double const norm = photon_normalization(trap);
    return {norm * result.value[0], norm * result.value[1]};
}

//---------------------------------------------------------------------------//
SpectrumPair total_photons(ThermalState const& state,
                           TrapModel const& trap,
                           PulseModel const& pulse,
                           AngularMode mode,
                           SpectrumOptions const& options)
{
    if (pulse.shape() != PulseShape::Sech
        || std::abs(pulse.total_area() - 2 * pi) > 1e-9 * 2 * pi)
    {
        throw std::invalid_argument(
            "total_photons: spectra are defined for the 2 pi sech pulse only");
    }
    AngularMode const resolved = resolve_mode(mode, trap);
    auto breaks = polar_breakpoints();
    auto result = integrate_pair(
        [&](double theta) {
            auto a = angular_raw(state, trap, theta, resolved, options);
            return std::array<double, 2>{a.coherent, a.incoherent};
        },
        breaks,
        options.quadrature);
    double const norm = photon_normalization(trap);
    return {norm * result.value[0], norm * result.value[1]};
}

//---------------------------------------------------------------------------//
void SpectrumGrid::write_csv(std::ostream& os) const
{
    os << "theta_deg,varpi,c_coh,c_in\n";
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
        for (std::size_t j = 0; j < varpis.size(); ++j)
        {
            os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n",
                              thetas[i] * 180 / pi,
                              varpis[j],
                              this->coh(i, j),
                              this->inc(i, j));
        }
    }
}

SpectrumGrid evaluate_grid(ThermalState const& state,
                           TrapModel const& trap,
                           std::vector<double> thetas,
                           std::vector<double> varpis,
                           SpectrumOptions const& options,
                           int threads,
                           ProgressCallback const& progress)
{
    SpectrumGrid grid;
    grid.thetas = std::move(thetas);
    grid.varpis = std::move(varpis);
    std::size_t const cols = grid.varpis.size();
    std::size_t const total = grid.thetas.size() * cols;
    grid.coherent.assign(total, 0.0);
    grid.incoherent.assign(total, 0.0);
    parallel_for(
        total,
        threads,
        [&](std::size_t k) {
            auto d = differential(
                state, trap, grid.thetas[k / cols], grid.varpis[k % cols],
                options);
            grid.coherent[k] = d.coherent;
            grid.incoherent[k] = d.incoherent;
        },
        progress);
    return grid;
}

//---------------------------------------------------------------------------//
void parallel_for(std::size_t count,
                  int threads,
                  std::function<void(std::size_t)> const& body,
                  ProgressCallback const& progress)
{
    if (threads <= 1 || count <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            body(i);
            if (progress)
                progress(i + 1, count);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex mutex;

    auto worker = [&] {
        while (!failed.load())
        {
            std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true);
                return;
            }
            std::size_t finished = done.fetch_add(1) + 1;
            if (progress)
            {
                std::lock_guard lock(mutex);
                progress(finished, count);
            }
        }
    };
    std::size_t const pool
        = std::min(count, static_cast<std::size_t>(threads));
    std::vector<std::thread> workers;
    workers.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t)
    {
        workers.emplace_back(worker);
    }
    for (auto& w : workers)
    {
        w.join();
    }
    if (error)
        std::rethrow_exception(error);
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
