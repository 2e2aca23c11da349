// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter.cpp
//! Command-line entry point.
//---------------------------------------------------------------------------//
#include <iostream>
#include <string>
#include <vector>

#include "fermiscatter/cli/commands.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return fermiscatter::cli::run(args, std::cout, std::cerr);
}
