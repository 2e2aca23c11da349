// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/cli/commands.hpp
//! Subcommands of the fermiscatter executable.
//---------------------------------------------------------------------------//
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace fermiscatter::cli
{
//---------------------------------------------------------------------------//
//! Process exit statuses
enum ExitStatus : int
{
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
};

// Library version string
char const* version();

// Form-function surfaces, one CSV per temperature, statistics and part
void cmd_formfunc(RunConfig const& cfg, std::ostream& log);

// Angular and frequency distributions per temperature and statistics
void cmd_spectrum(RunConfig const& cfg, std::ostream& log);

// Total photon counts over the temperature list
void cmd_total(RunConfig const& cfg, std::ostream& log);

// Print fugacity, Fermi energy and shell cutoff for each state
void cmd_fugacity(RunConfig const& cfg, std::ostream& out);

// Parse arguments (without the program name) and dispatch
int run(std::vector<std::string> const& args,
        std::ostream& out,
        std::ostream& err);

//---------------------------------------------------------------------------//
}  // namespace fermiscatter::cli
