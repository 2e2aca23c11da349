// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file cli/config.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <fmt/format.h>
#include <json.hpp>

namespace fermiscatter::cli
{
namespace
{
using json = nlohmann::json;

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    });
    return s;
}

[[noreturn]] void field_error(std::string const& field, std::string const& what)
{
    throw ConfigError(fmt::format("field '{}': {}", field, what));
}

double get_number(json const& j, std::string const& field)
{
    if (!j.is_number())
        field_error(field, "expected a number");
    return j.get<double>();
}

std::int64_t get_integer(json const& j, std::string const& field)
{
    if (!j.is_number_integer())
        field_error(field, "expected an integer");
    return j.get<std::int64_t>();
}

std::string get_string(json const& j, std::string const& field)
{
    if (!j.is_string())
        field_error(field, "expected a string");
    return j.get<std::string>();
}

int get_int(json const& j, std::string const& field)
{
    auto v = get_integer(j, field);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        field_error(field, "out of range");
    return static_cast<int>(v);
}

//! Wrap a parser so its invalid_argument names the field
template<class F>
auto with_field(std::string const& field, F&& f)
{
    try
    {
        return f();
    }
    catch (std::invalid_argument const& e)
    {
        field_error(field, e.what());
    }
}

Temperature parse_temperature_json(json const& j, std::string const& field)
{
    if (j.is_number())
    {
        return {j.get<double>(), Temperature::Unit::FermiEnergy};
    }
    if (j.is_string())
    {
        return with_field(field,
                          [&] { return Temperature::parse(j.get<std::string>()); });
    }
    if (j.is_object())
    {
        Temperature t;
        for (auto const& [key, value] : j.items())
        {
            if (key == "value")
                t.value = get_number(value, field + ".value");
            else if (key == "unit")
            {
                auto u = lowercase(get_string(value, field + ".unit"));
                if (u == "ef")
                    t.unit = Temperature::Unit::FermiEnergy;
                else if (u == "trap")
                    t.unit = Temperature::Unit::Trap;
                else
                    field_error(field + ".unit", "expected 'EF' or 'trap'");
            }
            else
                field_error(field + "." + key, "unknown field");
        }
        return t;
    }
    field_error(field, "expected a number, string or {value, unit} object");
}

void apply_grid(json const& j, GridSpec& grid)
{
    if (j.is_string())
    {
        auto [nt, nv] = with_field("grid",
                                   [&] { return parse_grid(j.get<std::string>()); });
        grid.thetas = nt;
        grid.varpis = nv;
        return;
    }
    if (!j.is_object())
        field_error("grid", "expected \"THETAxVARPI\" or an object");
    for (auto const& [key, value] : j.items())
    {
        if (key == "thetas")
            grid.thetas = get_int(value, "grid.thetas");
        else if (key == "varpis")
            grid.varpis = get_int(value, "grid.varpis");
        else if (key == "varpi_window")
        {
            if (value.is_null())
                grid.varpi_window.reset();
            else
                grid.varpi_window = get_number(value, "grid.varpi_window");
        }
        else if (key == "mirror")
        {
            if (!value.is_boolean())
                field_error("grid.mirror", "expected true or false");
            grid.mirror = value.get<bool>();
        }
        else
            field_error("grid." + key, "unknown field");
    }
}
}  // namespace

//---------------------------------------------------------------------------//
Temperature Temperature::parse(std::string const& text)
{
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    std::size_t pos = 0;
    double value = 0;
    try
    {
        value = std::stod(s, &pos);
    }
    catch (std::exception const&)
    {
        throw std::invalid_argument("cannot parse temperature '" + text + "'");
    }
    auto suffix = lowercase(s.substr(pos));
    Temperature t;
    t.value = value;
    if (suffix.empty() || suffix == "ef")
        t.unit = Unit::FermiEnergy;
    else if (suffix == "trap")
        t.unit = Unit::Trap;
    else
        throw std::invalid_argument("unknown temperature unit '" + suffix
                                    + "' (use EF or trap)");
    return t;
}

std::string Temperature::label() const
{
    return fmt::format("{:g}{}", value, unit == Unit::FermiEnergy ? "EF" : "trap");
}

//---------------------------------------------------------------------------//
RunConfig::RunConfig()
{
    auto defaults = TrapModel::paper_defaults();
    kla = defaults.kla();
    gamma_ratio = defaults.gamma_ratio();
    natural_width_ratio = defaults.natural_width_ratio();
}

void RunConfig::validate() const
{
    if (atoms < 1)
        field_error("atoms", "must be >= 1");
    if (temperatures.empty())
        field_error("temperatures", "must not be empty");
    for (auto const& t : temperatures)
    {
        if (!(std::isfinite(t.value) && t.value > 0))
            field_error("temperatures", "every temperature must be > 0");
        if (t.unit == Temperature::Unit::FermiEnergy && fermi_energy(atoms) == 0)
            field_error("temperatures",
                        "Fermi energy is zero for a single atom; give the "
                        "temperature in trap units");
    }
    auto positive = [](double v, char const* name) {
        if (!(std::isfinite(v) && v > 0))
            field_error(name, "must be finite and positive");
    };
    positive(kla, "kla");
    positive(gamma_ratio, "gamma_ratio");
    positive(natural_width_ratio, "natural_width_ratio");
    with_field("gamma_ratio", [&] { return this->trap(); });
    if (grid.thetas < 2)
        field_error("grid.thetas", "need at least 2 points");
    if (grid.varpis < 2)
        field_error("grid.varpis", "need at least 2 points");
    if (grid.varpi_window)
    {
        double w = *grid.varpi_window;
        if (!(std::isfinite(w) && w > 0))
            field_error("grid.varpi_window", "must be finite and positive");
        if (!(1 - gamma_ratio * w > 0))
            field_error("grid.varpi_window",
                        "detuning would make the photon wavenumber negative");
    }
    if (!(tolerance > 0 && tolerance < 1))
        field_error("tolerance", "must lie in (0, 1)");
    if (output.empty())
        field_error("output", "must not be empty");
    if (threads < 0)
        field_error("threads", "must be >= 0 or \"auto\"");
}

std::string RunConfig::canonical_json() const
{
    json j;
    j["atoms"] = atoms;
    json temps = json::array();
    for (auto const& t : temperatures)
    {
        temps.push_back(t.label());
    }
    j["temperatures"] = temps;
    j["kla"] = kla;
    j["gamma_ratio"] = gamma_ratio;
    j["natural_width_ratio"] = natural_width_ratio;
    j["statistics"] = statistics == StatisticsChoice::Both ? "both"
                      : statistics == StatisticsChoice::FermiDirac ? "FD"
                                                                   : "MB";
    json g;
    g["thetas"] = grid.thetas;
    g["varpis"] = grid.varpis;
    g["varpi_window"] = grid.varpi_window ? json(*grid.varpi_window) : json();
    g["mirror"] = grid.mirror;
    j["grid"] = g;
    j["method"] = to_string(method);
    j["mode"] = to_string(mode);
    j["tolerance"] = tolerance;
    return j.dump();
}

std::string RunConfig::hash() const
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : this->canonical_json())
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

TrapModel RunConfig::trap() const
{
    return TrapModel(kla, gamma_ratio, natural_width_ratio);
}

std::vector<Statistics> RunConfig::statistics_list() const
{
    switch (statistics)
    {
        case StatisticsChoice::FermiDirac:
            return {Statistics::FermiDirac};
        case StatisticsChoice::MaxwellBoltzmann:
            return {Statistics::MaxwellBoltzmann};
        case StatisticsChoice::Both:
            return {Statistics::FermiDirac, Statistics::MaxwellBoltzmann};
    }
    return {};
}

int RunConfig::worker_count() const
{
    if (strict)
        return 1;
    if (threads > 0)
        return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

//---------------------------------------------------------------------------//
RunConfig config_from_json(std::string const& text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    RunConfig cfg;
    for (auto const& [key, value] : doc.items())
    {
        if (key == "atoms")
            cfg.atoms = get_integer(value, key);
        else if (key == "temperatures")
        {
            if (!value.is_array())
                field_error(key, "expected an array");
            cfg.temperatures.clear();
            for (std::size_t i = 0; i < value.size(); ++i)
            {
                cfg.temperatures.push_back(parse_temperature_json(
                    value[i], fmt::format("temperatures[{}]", i)));
            }
        }
        else if (key == "kla")
            cfg.kla = get_number(value, key);
        else if (key == "gamma_ratio")
            cfg.gamma_ratio = get_number(value, key);
        else if (key == "natural_width_ratio")
            cfg.natural_width_ratio = get_number(value, key);
        else if (key == "statistics")
            cfg.statistics = with_field(
                key, [&] { return parse_statistics_choice(get_string(value, key)); });
        else if (key == "grid")
            apply_grid(value, cfg.grid);
        else if (key == "method")
            cfg.method = with_field(
                key, [&] { return method_from_string(get_string(value, key)); });
        else if (key == "mode")
            cfg.mode = with_field(
                key, [&] { return parse_mode(get_string(value, key)); });
        else if (key == "tolerance")
            cfg.tolerance = get_number(value, key);
        else if (key == "output")
            cfg.output = get_string(value, key);
        else if (key == "threads")
        {
            if (value.is_string() && lowercase(value.get<std::string>()) == "auto")
                cfg.threads = 0;
            else
                cfg.threads = get_int(value, key);
        }
        else if (key == "strict")
        {
            if (!value.is_boolean())
                field_error(key, "expected true or false");
            cfg.strict = value.get<bool>();
        }
        else
            field_error(key, "unknown field");
    }
    return cfg;
}

RunConfig config_from_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try
    {
        return config_from_json(buffer.str());
    }
    catch (ConfigError const& e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

//---------------------------------------------------------------------------//
std::pair<int, int> parse_grid(std::string const& text)
{
    auto x = lowercase(text).find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("grid must look like 181x241");
    try
    {
        std::size_t p1 = 0;
        std::size_t p2 = 0;
        auto first = text.substr(0, x);
        auto second = text.substr(x + 1);
        int a = std::stoi(first, &p1);
        int b = std::stoi(second, &p2);
        if (p1 != first.size() || p2 != second.size())
            throw std::invalid_argument("trailing characters");
        return {a, b};
    }
    catch (std::exception const&)
    {
        throw std::invalid_argument("grid must look like 181x241, got '" + text
                                    + "'");
    }
}

Statistics parse_statistics_name(std::string const& text)
{
    auto s = lowercase(text);
    if (s == "fd" || s == "fermidirac" || s == "fermi-dirac")
        return Statistics::FermiDirac;
    if (s == "mb" || s == "maxwellboltzmann" || s == "maxwell-boltzmann")
        return Statistics::MaxwellBoltzmann;
    throw std::invalid_argument("unknown statistics '" + text + "'");
}

StatisticsChoice parse_statistics_choice(std::string const& text)
{
    if (lowercase(text) == "both")
        return StatisticsChoice::Both;
    return parse_statistics_name(text) == Statistics::FermiDirac
               ? StatisticsChoice::FermiDirac
               : StatisticsChoice::MaxwellBoltzmann;
}

AngularMode parse_mode(std::string const& text)
{
    auto s = lowercase(text);
    if (s == "auto")
        return AngularMode::Auto;
    if (s == "full")
        return AngularMode::Full;
    if (s == "frozen" || s == "frozenformfactor")
        return AngularMode::FrozenFormFactor;
    throw std::invalid_argument("unknown angular mode '" + text
                                + "' (auto, full, frozen)");
}

double to_trap_units(Temperature const& t, std::int64_t atoms)
{
    if (t.unit == Temperature::Unit::Trap)
        return t.value;
    return t.value * fermi_energy(atoms);
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter::cli
