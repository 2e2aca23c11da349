// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file oracle/reference.cpp
//---------------------------------------------------------------------------//
#include "reference.hpp"

#include <cmath>
#include <stdexcept>

namespace fermiscatter::oracle
{
namespace
{
using cld = std::complex<long double>;

long double factorial(int n)
{
    long double f = 1;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

//! Dense per-axis matrix of plane-wave elements
std::vector<cld> axis_matrix(int rows, int cols, double k)
{
    std::vector<cld> m(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
    {
        for (int j = 0; j < cols; ++j)
        {
            m[static_cast<std::size_t>(i) * cols + j]
                = plane_wave_element(i, j, k);
        }
    }
    return m;
}
}  // namespace

//---------------------------------------------------------------------------//
/*!
 * D = e^{-|alpha|^2/2} e^{alpha a^dag} e^{-alpha^* a}, so
 *   <n|D|m> = e^{-|alpha|^2/2} Sum_k sqrt(n! m!) / (k! (n-k)! (m-k)!)
 *             alpha^{n-k} (-alpha^*)^{m-k}.
 */
cld displacement_element(int n, int m, cld alpha)
{
    if (n < 0 || m < 0)
        throw std::invalid_argument("displacement_element: negative index");
    long double const root = std::sqrt(factorial(n) * factorial(m));
    cld sum = 0;
    for (int k = 0; k <= std::min(n, m); ++k)
    {
        cld term = root / (factorial(k) * factorial(n - k) * factorial(m - k));
        term *= std::pow(alpha, n - k) * std::pow(-std::conj(alpha), m - k);
        sum += term;
    }
    return sum * std::exp(-std::norm(alpha) / 2);
}

cld plane_wave_element(int n, int m, double k)
{
    return displacement_element(n, m, cld(0, static_cast<long double>(k)));
}

//---------------------------------------------------------------------------//
SmallTrapBasis::SmallTrapBasis(ThermalState const& state, int n_max)
    : n_max_(n_max)
{
    if (n_max < 0 || n_max > max_n)
        throw std::invalid_argument("SmallTrapBasis: n_max must be in [0, 8]");
    auto const dim = static_cast<std::size_t>(n_max) + 1;
    occ_.resize(dim * dim * dim);
    for (int i = 0; i <= n_max; ++i)
        for (int j = 0; j <= n_max; ++j)
            for (int k = 0; k <= n_max; ++k)
                occ_[(i * dim + j) * dim + k] = state.occupation(i + j + k);
}

SmallTrapBasis::SmallTrapBasis(int n_max, std::vector<double> occupations)
    : n_max_(n_max), occ_(std::move(occupations))
{
    if (n_max < 0 || n_max > max_n)
        throw std::invalid_argument("SmallTrapBasis: n_max must be in [0, 8]");
    auto const dim = static_cast<std::size_t>(n_max) + 1;
    if (occ_.size() != dim * dim * dim)
        throw std::invalid_argument("SmallTrapBasis: table size mismatch");
    for (double p : occ_)
    {
        if (!(p >= 0 && p <= 1))
            throw std::invalid_argument("SmallTrapBasis: occupation not in [0,1]");
    }
}

double SmallTrapBasis::total() const
{
    long double sum = 0;
    for (double p : occ_)
        sum += p;
    return static_cast<double>(sum);
}

//---------------------------------------------------------------------------//
double brute_coherent(SmallTrapBasis const& basis, Vec3 const& dk)
{
    int const n = basis.n_max();
    int const dim = n + 1;
    auto mx = axis_matrix(dim, dim, dk[0]);
    auto my = axis_matrix(dim, dim, dk[1]);
    auto mz = axis_matrix(dim, dim, dk[2]);
    cld sum = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k)
            {
                sum += static_cast<long double>(basis.occupation(i, j, k))
                       * mx[i * dim + i] * my[j * dim + j] * mz[k * dim + k];
            }
    return static_cast<double>(std::norm(sum));
}

//---------------------------------------------------------------------------//
IncoherentBreakdown brute_incoherent(SmallTrapBasis const& basis,
                                     Vec3 const& dk,
                                     int final_cutoff)
{
    int const n = basis.n_max();
    int const cut = final_cutoff < 0 ? n : final_cutoff;
    if (cut < n)
        throw std::invalid_argument("brute_incoherent: cutoff below basis");
    int const dim = n + 1;
    int const fdim = cut + 1;
    auto mx = axis_matrix(dim, fdim, dk[0]);
    auto my = axis_matrix(dim, fdim, dk[1]);
    auto mz = axis_matrix(dim, fdim, dk[2]);

    long double pair = 0;
    long double hole = 0;
    long double complete = 0;
    long double atoms = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k)
            {
                long double const p = basis.occupation(i, j, k);
                atoms += p;
                if (p == 0)
                    continue;
                for (int a = 0; a <= cut; ++a)
                    for (int b = 0; b <= cut; ++b)
                        for (int c = 0; c <= cut; ++c)
                        {
                            long double eta = std::norm(mx[i * fdim + a])
                                              * std::norm(my[j * fdim + b])
                                              * std::norm(mz[k * fdim + c]);
                            long double q = 0;
                            if (a <= n && b <= n && c <= n)
                                q = basis.occupation(a, b, c);
                            pair += p * q * eta;
                            hole += p * (1 - q) * eta;
                            complete += p * eta;
                        }
            }
    return {static_cast<double>(pair),
            static_cast<double>(hole),
            static_cast<double>(complete),
            static_cast<double>(atoms)};
}

//---------------------------------------------------------------------------//
double sum_rule(std::array<int, 3> const& n, Vec3 const& dk, int final_cutoff)
{
    long double total = 1;
    for (int axis = 0; axis < 3; ++axis)
    {
        long double s = 0;
        for (int m = 0; m <= final_cutoff; ++m)
            s += std::norm(plane_wave_element(n[axis], m, dk[axis]));
        total *= s;
    }
    return static_cast<double>(total);
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter::oracle
