// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file detail/tables.hpp
//! Per-state lazily built tables shared by the form-function kernels.
//---------------------------------------------------------------------------//
#pragma once

#include <memory>
#include <mutex>
#include <vector>

namespace fermiscatter
{
namespace detail
{
//---------------------------------------------------------------------------//
/*!
 * Storage owned by a ThermalState and filled on first use.
 *
 * Each table is built under its own once-flag, so concurrent evaluations
 * build it exactly once and then only read it.
 */
struct TableCache
{
    //! Dense pair weight table W(s, t) = Sum_y P(s+y) P(t+y), row major
    std::once_flag pair_once;
    std::vector<double> pair_weights;

    //! Single-point consistency checks of the fugacity series
    std::once_flag coherent_check_once;
    std::once_flag incoherent_check_once;
};

std::shared_ptr<TableCache> make_table_cache();

//---------------------------------------------------------------------------//
}  // namespace detail
}  // namespace fermiscatter
