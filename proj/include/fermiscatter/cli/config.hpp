// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/cli/config.hpp
//! Run configuration for the command-line front end.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "../formfunc.hpp"
#include "../spectra.hpp"

namespace fermiscatter::cli
{
//---------------------------------------------------------------------------//
//! Invalid configuration; maps to exit status 2
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
struct Temperature
{
    enum class Unit
    {
        FermiEnergy,
        Trap,
    };

    double value{0};
    Unit unit{Unit::FermiEnergy};

    // "1.36EF", "0.5trap", "2" (Fermi units)
    static Temperature parse(std::string const& text);
    std::string label() const;
};

enum class StatisticsChoice
{
    FermiDirac,
    MaxwellBoltzmann,
    Both,
};

struct GridSpec
{
    int thetas{91};
    int varpis{61};
    std::optional<double> varpi_window;  //!< half-width; command default
    bool mirror{false};                  //!< theta over [-180, 180] degrees
};

//---------------------------------------------------------------------------//
struct RunConfig
{
    std::int64_t atoms{1'000'000};
    std::vector<Temperature> temperatures{{1.36, Temperature::Unit::FermiEnergy}};
    double kla;
    double gamma_ratio;
    double natural_width_ratio;
    StatisticsChoice statistics{StatisticsChoice::FermiDirac};
    GridSpec grid;
    Method method{Method::Auto};
    AngularMode mode{AngularMode::Auto};
    double tolerance{1e-8};
    std::string output{"fermiscatter"};
    int threads{0};  //!< 0 selects the hardware concurrency
    bool strict{false};

    RunConfig();

    // Throws ConfigError naming the first invalid field
    void validate() const;

    // Canonical JSON of every field that affects results
    std::string canonical_json() const;

    // 64-bit FNV-1a of canonical_json(), as 16 hex digits
    std::string hash() const;

    TrapModel trap() const;
    std::vector<Statistics> statistics_list() const;
    int worker_count() const;
};

//---------------------------------------------------------------------------//
// Parse a JSON document, starting from defaults
RunConfig config_from_json(std::string const& text);

// Read and parse a JSON file
RunConfig config_from_file(std::string const& path);

// Parse "181x241"
std::pair<int, int> parse_grid(std::string const& text);

Statistics parse_statistics_name(std::string const& text);
StatisticsChoice parse_statistics_choice(std::string const& text);
AngularMode parse_mode(std::string const& text);

// Reduced temperature tau for an atom count
double to_trap_units(Temperature const& t, std::int64_t atoms);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter::cli
