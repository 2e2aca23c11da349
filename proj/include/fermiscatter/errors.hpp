// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file fermiscatter/errors.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>

namespace fermiscatter
{
//---------------------------------------------------------------------------//
/*!
 * Base class for numerical failures.
 *
 * Invalid arguments are reported with \c std::invalid_argument; everything
 * deriving from this class means the inputs were valid but the requested
 * accuracy could not be delivered.
 */
class NumericalError : public std::runtime_error
{
  public:
    NumericalError(std::string kind, std::string const& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind))
    {
    }

    //! Short machine-readable failure name, e.g. "SeriesDivergence"
    std::string const& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

//! Fugacity root could not be bracketed or refined.
struct ConvergenceFailure : NumericalError
{
    explicit ConvergenceFailure(std::string const& what)
        : NumericalError("ConvergenceFailure", what)
    {
    }
};

//! Fugacity power series requested for z >= 1.
struct SeriesDivergence : NumericalError
{
    explicit SeriesDivergence(std::string const& what)
        : NumericalError("SeriesDivergence", what)
    {
    }
};

//! Truncation or round-off bound could not be met.
struct ToleranceNotMet : NumericalError
{
    explicit ToleranceNotMet(std::string const& what)
        : NumericalError("ToleranceNotMet", what)
    {
    }
};

//! Direct summation requested beyond its size ceiling.
struct BudgetExceeded : NumericalError
{
    explicit BudgetExceeded(std::string const& what)
        : NumericalError("BudgetExceeded", what)
    {
    }
};

//! Adaptive quadrature did not converge.
struct QuadratureFailure : NumericalError
{
    explicit QuadratureFailure(std::string const& what)
        : NumericalError("QuadratureFailure", what)
    {
    }
};

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
