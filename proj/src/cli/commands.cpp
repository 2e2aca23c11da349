// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file cli/commands.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <ostream>
#include <CLI11.hpp>
#include <fmt/format.h>

#include "fermiscatter/errors.hpp"
#include "fermiscatter/pulse.hpp"

#ifndef FERMISCATTER_VERSION
#    define FERMISCATTER_VERSION "unknown"
#endif

namespace fermiscatter::cli
{
namespace
{
constexpr double pi = std::numbers::pi;
constexpr double default_spectrum_window = 6;

//---------------------------------------------------------------------------//
//! Numerical failure with the grid point attached
class PointFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
//! Rate-limited progress line on the log stream
class Progress
{
  public:
    Progress(std::ostream* log, std::string label)
        : log_(log), label_(std::move(label)), start_(clock::now())
    {
    }

    void operator()(std::size_t done, std::size_t total)
    {
        if (!log_)
            return;
        auto now = clock::now();
        if (done != total && now - last_ < std::chrono::milliseconds(500))
            return;
        last_ = now;
        double elapsed = std::chrono::duration<double>(now - start_).count();
        double rate = elapsed > 0 ? done / elapsed : 0;
        double eta = rate > 0 ? (total - done) / rate : 0;
        *log_ << fmt::format("\r[{}] {}/{} points  {:.1f} pts/s  ETA {:.0f} s",
                             label_, done, total, rate, eta);
        if (done == total)
            *log_ << '\n';
        log_->flush();
    }

  private:
    using clock = std::chrono::steady_clock;
    std::ostream* log_;
    std::string label_;
    clock::time_point start_;
    clock::time_point last_{};
};

//---------------------------------------------------------------------------//
std::vector<double> linspace(double lo, double hi, int count)
{
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
    {
        v[i] = (i + 1 == count) ? hi : lo + (hi - lo) * i / (count - 1);
    }
    return v;
}

std::vector<double> theta_grid(RunConfig const& cfg)
{
    return linspace(cfg.grid.mirror ? -pi : 0.0, pi, cfg.grid.thetas);
}

std::string fmt_value(double v)
{
    return fmt::format("{:.17g}", v);
}

void require_finite(double v, std::string const& where)
{
    if (!std::isfinite(v))
    {
        throw PointFailure("non-finite value at " + where);
    }
}

std::string point_label(double theta, double varpi)
{
    return fmt::format("theta_deg={:.17g}, varpi={:.17g}", theta * 180 / pi, varpi);
}

//! Run body, attaching the evaluation point to numerical failures
template<class F>
auto at_point(std::string const& where, Method method, F&& body)
{
    try
    {
        return body();
    }
    catch (NumericalError const& e)
    {
        throw PointFailure(fmt::format("{} (method {}) at {}: {}",
                                       e.kind(),
                                       to_string(method),
                                       where,
                                       e.what()));
    }
}

std::ofstream open_output(std::string const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    return out;
}

std::string header_comment(RunConfig const& cfg,
                           std::string const& command,
                           std::string const& extra)
{
    return fmt::format("# fermiscatter {} config={} command={}{}\n",
                       version(),
                       cfg.hash(),
                       command,
                       extra.empty() ? "" : " " + extra);
}

ThermalState make_state(RunConfig const& cfg, Temperature const& t, Statistics s)
{
    return ThermalState::solve(cfg.atoms, to_trap_units(t, cfg.atoms), s);
}

SpectrumOptions spectrum_options(RunConfig const& cfg)
{
    SpectrumOptions opts;
    opts.method = cfg.method;
    opts.form_tolerance = cfg.tolerance;
    return opts;
}
}  // namespace

//---------------------------------------------------------------------------//
char const* version()
{
    return FERMISCATTER_VERSION;
}

//---------------------------------------------------------------------------//
/*!
 * Coherent surfaces are scaled by N^2 and incoherent ones by N.
 */
void cmd_formfunc(RunConfig const& cfg, std::ostream& log)
{
    cfg.validate();
    auto const trap = cfg.trap();
    auto const thetas = theta_grid(cfg);
    double const window = cfg.grid.varpi_window.value_or(0.5 / cfg.gamma_ratio);
    auto const varpis = linspace(-window, window, cfg.grid.varpis);
    auto const [coh_method, inc_method] = split_method(cfg.method);
    std::size_t const cols = varpis.size();
    std::size_t const total = thetas.size() * cols;

    for (auto const& t : cfg.temperatures)
    {
        for (auto s : cfg.statistics_list())
        {
            auto const state = make_state(cfg, t, s);
            double const n = state.atoms();
            std::vector<ScatterPoint> points(total);
            std::vector<double> coh(total);
            std::vector<double> inc(total);
            Progress progress(&log,
                              fmt::format("formfunc {} {}", t.label(), to_string(s)));
            parallel_for(
                total,
                cfg.worker_count(),
                [&](std::size_t k) {
                    double theta = thetas[k / cols];
                    double varpi = varpis[k % cols];
                    auto where = point_label(theta, varpi);
                    points[k] = kinematics(trap, theta, varpi);
                    FormFunctionRequest req{state, points[k], coh_method,
                                            cfg.tolerance};
                    coh[k] = at_point(where, resolve_coherent(req),
                                      [&] { return coherent_form(req); })
                             / (n * n);
                    req.method = inc_method;
                    inc[k] = at_point(where, resolve_incoherent(req),
                                      [&] { return incoherent_form(req); })
                             / n;
                    require_finite(coh[k], where);
                    require_finite(inc[k], where);
                },
                std::ref(progress));

            for (int part = 0; part < 2; ++part)
            {
                char const* tag = part == 0 ? "coh" : "in";
                auto path = fmt::format("{}_formfunc_{}_{}_{}.csv",
                                        cfg.output, t.label(), to_string(s), tag);
                auto out = open_output(path);
                out << header_comment(
                    cfg,
                    "formfunc",
                    fmt::format("temperature={} statistics={} part={} scale={}",
                                t.label(), to_string(s),
                                part == 0 ? "coherent" : "incoherent",
                                part == 0 ? "N^2" : "N"));
                out << "theta_deg,varpi,x_total,value\n";
                auto const& values = part == 0 ? coh : inc;
                for (std::size_t k = 0; k < total; ++k)
                {
                    out << fmt_value(thetas[k / cols] * 180 / pi) << ','
                        << fmt_value(varpis[k % cols]) << ','
                        << fmt_value(points[k].x_total) << ','
                        << fmt_value(values[k]) << '\n';
                }
            }
        }
    }
}

//---------------------------------------------------------------------------//
void cmd_spectrum(RunConfig const& cfg, std::ostream& log)
{
    cfg.validate();
    auto const trap = cfg.trap();
    auto const opts = spectrum_options(cfg);
    auto const thetas = theta_grid(cfg);
    double const window = cfg.grid.varpi_window.value_or(default_spectrum_window);
    auto const varpis = linspace(-window, window, cfg.grid.varpis);
    AngularMode const mode = resolve_mode(cfg.mode, trap);

    for (auto const& t : cfg.temperatures)
    {
        for (auto s : cfg.statistics_list())
        {
            auto const state = make_state(cfg, t, s);
            auto label = fmt::format("{} {}", t.label(), to_string(s));

            std::vector<SpectrumPair> angular(thetas.size());
            Progress ang_progress(&log, "angular " + label);
            parallel_for(
                thetas.size(),
                cfg.worker_count(),
                [&](std::size_t i) {
                    auto where = fmt::format("theta_deg={:.17g}",
                                             thetas[i] * 180 / pi);
                    angular[i] = at_point(where, cfg.method, [&] {
                        return angular_distribution(
                            state, trap, thetas[i], mode, opts);
                    });
                    require_finite(angular[i].coherent, where);
                    require_finite(angular[i].incoherent, where);
                },
                std::ref(ang_progress));

            std::vector<SpectrumPair> frequency(varpis.size());
            Progress freq_progress(&log, "frequency " + label);
            parallel_for(
                varpis.size(),
                cfg.worker_count(),
                [&](std::size_t j) {
                    auto where = fmt::format("varpi={:.17g}", varpis[j]);
                    frequency[j] = at_point(where, cfg.method, [&] {
                        return frequency_distribution(state, trap, varpis[j], opts);
                    });
                    require_finite(frequency[j].coherent, where);
                    require_finite(frequency[j].incoherent, where);
                },
                std::ref(freq_progress));

            auto extra = fmt::format("temperature={} statistics={} mode={}",
                                     t.label(), to_string(s), to_string(mode));
            {
                auto out = open_output(fmt::format("{}_angular_{}_{}.csv",
                                                   cfg.output, t.label(),
                                                   to_string(s)));
                out << header_comment(cfg, "spectrum", extra);
                out << "theta_deg,dN_coh,dN_in\n";
                for (std::size_t i = 0; i < thetas.size(); ++i)
                {
                    out << fmt_value(thetas[i] * 180 / pi) << ','
                        << fmt_value(angular[i].coherent) << ','
                        << fmt_value(angular[i].incoherent) << '\n';
                }
            }
            {
                auto out = open_output(fmt::format("{}_frequency_{}_{}.csv",
                                                   cfg.output, t.label(),
                                                   to_string(s)));
                out << header_comment(cfg, "spectrum", extra);
                out << "varpi,dN_coh,dN_in\n";
                for (std::size_t j = 0; j < varpis.size(); ++j)
                {
                    out << fmt_value(varpis[j]) << ','
                        << fmt_value(frequency[j].coherent) << ','
                        << fmt_value(frequency[j].incoherent) << '\n';
                }
            }
        }
    }
}

//---------------------------------------------------------------------------//
/*!
 * One row per temperature and statistics; with both statistics requested the
 * FD and MB rows of each temperature are adjacent.
 */
void cmd_total(RunConfig const& cfg, std::ostream& log)
{
    cfg.validate();
    auto const trap = cfg.trap();
    auto const opts = spectrum_options(cfg);
    auto const pulse = PulseModel::two_pi(1);
    auto const stats = cfg.statistics_list();
    double const e_f = fermi_energy(cfg.atoms);

    struct Job
    {
        Temperature t;
        Statistics s;
    };
    std::vector<Job> jobs;
    for (auto const& t : cfg.temperatures)
        for (auto s : stats)
            jobs.push_back({t, s});

    std::vector<SpectrumPair> results(jobs.size());
    Progress progress(&log, "total");
    parallel_for(
        jobs.size(),
        cfg.worker_count(),
        [&](std::size_t k) {
            auto const& job = jobs[k];
            auto where = fmt::format("temperature={} statistics={}",
                                     job.t.label(), to_string(job.s));
            results[k] = at_point(where, cfg.method, [&] {
                auto state = make_state(cfg, job.t, job.s);
                return total_photons(state, trap, pulse, cfg.mode, opts);
            });
            require_finite(results[k].coherent, where);
            require_finite(results[k].incoherent, where);
        },
        std::ref(progress));

    auto out = open_output(cfg.output + "_total.csv");
    out << header_comment(cfg, "total",
                          fmt::format("mode={}", to_string(resolve_mode(cfg.mode, trap))));
    if (e_f == 0)
    {
        out << "# one atom has E_F = 0; kT_over_EF holds kT in trap units\n";
    }
    out << "kT_over_EF,N_coh,N_in,statistics\n";
    for (std::size_t k = 0; k < jobs.size(); ++k)
    {
        double tau = to_trap_units(jobs[k].t, cfg.atoms);
        double column = e_f > 0 ? tau / e_f : tau;
        out << fmt_value(column) << ',' << fmt_value(results[k].coherent) << ','
            << fmt_value(results[k].incoherent) << ',' << to_string(jobs[k].s)
            << '\n';
    }
}

//---------------------------------------------------------------------------//
void cmd_fugacity(RunConfig const& cfg, std::ostream& out)
{
    cfg.validate();
    double const e_f = fermi_energy(cfg.atoms);
    out << "temperature,tau,statistics,fugacity,log_fugacity,fermi_energy,n_max\n";
    for (auto const& t : cfg.temperatures)
    {
        for (auto s : cfg.statistics_list())
        {
            auto state = make_state(cfg, t, s);
            out << t.label() << ',' << fmt_value(state.tau()) << ','
                << to_string(s) << ',' << fmt_value(state.fugacity()) << ','
                << fmt_value(state.log_fugacity()) << ',' << fmt_value(e_f)
                << ',' << state.n_max() << '\n';
        }
    }
}

//---------------------------------------------------------------------------//
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Light scattering from a trapped ideal Fermi gas", "fermiscatter"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    std::string config_path;
    std::int64_t atoms = 0;
    std::vector<std::string> temperatures;
    double kla = 0;
    double gamma_ratio = 0;
    double width_ratio = 0;
    std::string statistics;
    std::string grid;
    double window = 0;
    bool mirror = false;
    std::string method;
    std::string mode;
    double tolerance = 0;
    std::string output;
    std::string threads;
    bool strict = false;
    bool quiet = false;

    auto* o_config = app.add_option("--config", config_path, "JSON config file");
    auto* o_atoms = app.add_option("--atoms", atoms, "Atom number N");
    auto* o_temp = app.add_option("--temperature", temperatures,
                                  "Temperature, e.g. 1.36EF or 0.5trap (repeatable)");
    auto* o_kla = app.add_option("--kla", kla, "Laser wavenumber times trap length");
    auto* o_gamma = app.add_option("--gamma-ratio", gamma_ratio,
                                   "Pulse bandwidth over laser frequency");
    auto* o_width = app.add_option("--natural-width-ratio", width_ratio,
                                   "Natural linewidth over pulse bandwidth");
    auto* o_stats = app.add_option("--statistics", statistics, "FD, MB or both");
    auto* o_grid = app.add_option("--grid", grid, "THETAxVARPI point counts");
    auto* o_window = app.add_option("--varpi-window", window,
                                    "Detuning half-width of the grid");
    auto* o_mirror = app.add_flag("--mirror", mirror,
                                  "Theta grid over [-180, 180] degrees");
    auto* o_method = app.add_option("--method", method, "Form-function method");
    auto* o_mode = app.add_option("--mode", mode,
                                  "Angular detuning integral: auto, full, frozen");
    auto* o_tol = app.add_option("--tolerance", tolerance, "Relative tolerance");
    auto* o_output = app.add_option("--output", output, "Output path prefix");
    auto* o_threads = app.add_option("--threads", threads, "Worker count or auto");
    auto* o_strict = app.add_flag("--strict", strict,
                                  "Single worker, reproducible output");
    app.add_flag("--quiet", quiet, "No progress reporting");

    auto* c_formfunc = app.add_subcommand("formfunc", "Form-function surfaces");
    auto* c_spectrum = app.add_subcommand("spectrum", "Angular and frequency spectra");
    auto* c_total = app.add_subcommand("total", "Total photon counts");
    auto* c_fugacity = app.add_subcommand("fugacity", "Solved thermal states");
    for (auto* c : {c_formfunc, c_spectrum, c_total, c_fugacity})
    {
        c->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (CLI::CallForAllHelp const&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (CLI::CallForVersion const&)
    {
        out << version() << '\n';
        return exit_ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    try
    {
        RunConfig cfg = o_config->count() ? config_from_file(config_path) : RunConfig{};
        auto flag_field = [](char const* field, auto&& f) {
            try
            {
                f();
            }
            catch (std::invalid_argument const& e)
            {
                throw ConfigError(fmt::format("flag --{}: {}", field, e.what()));
            }
        };
        if (o_atoms->count())
            cfg.atoms = atoms;
        if (o_temp->count())
        {
            flag_field("temperature", [&] {
                cfg.temperatures.clear();
                for (auto const& t : temperatures)
                    cfg.temperatures.push_back(Temperature::parse(t));
            });
        }
        if (o_kla->count())
            cfg.kla = kla;
        if (o_gamma->count())
            cfg.gamma_ratio = gamma_ratio;
        if (o_width->count())
            cfg.natural_width_ratio = width_ratio;
        if (o_stats->count())
            flag_field("statistics", [&] {
                cfg.statistics = parse_statistics_choice(statistics);
            });
        if (o_grid->count())
            flag_field("grid", [&] {
                std::tie(cfg.grid.thetas, cfg.grid.varpis) = parse_grid(grid);
            });
        if (o_window->count())
            cfg.grid.varpi_window = window;
        if (o_mirror->count())
            cfg.grid.mirror = mirror;
        if (o_method->count())
            flag_field("method", [&] { cfg.method = method_from_string(method); });
        if (o_mode->count())
            flag_field("mode", [&] { cfg.mode = parse_mode(mode); });
        if (o_tol->count())
            cfg.tolerance = tolerance;
        if (o_output->count())
            cfg.output = output;
        if (o_threads->count())
            flag_field("threads", [&] {
                if (threads == "auto")
                {
                    cfg.threads = 0;
                    return;
                }
                std::size_t pos = 0;
                int n = std::stoi(threads, &pos);
                if (pos != threads.size() || n < 1)
                    throw std::invalid_argument("expected a positive integer or auto");
                cfg.threads = n;
            });
        if (o_strict->count())
            cfg.strict = strict;
        cfg.validate();

        std::ostream* log = quiet ? nullptr : &err;
        std::ostream null_stream(nullptr);
        std::ostream& log_ref = log ? *log : null_stream;
        if (c_formfunc->parsed())
            cmd_formfunc(cfg, log_ref);
        else if (c_spectrum->parsed())
            cmd_spectrum(cfg, log_ref);
        else if (c_total->parsed())
            cmd_total(cfg, log_ref);
        else if (c_fugacity->parsed())
            cmd_fugacity(cfg, out);
    }
    catch (ConfigError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }
    catch (PointFailure const& e)
    {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (NumericalError const& e)
    {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (std::invalid_argument const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter::cli
