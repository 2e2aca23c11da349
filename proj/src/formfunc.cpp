// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file formfunc.cpp
//---------------------------------------------------------------------------//
#include "fermiscatter/formfunc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>
#include <fftw3.h>
#include <fmt/format.h>

#include "fermiscatter/errors.hpp"
#include "fermiscatter/specfun.hpp"
#include "detail/tables.hpp"

namespace fermiscatter
{
namespace detail
{
std::shared_ptr<TableCache> make_table_cache()
{
    return std::make_shared<TableCache>();
}
}  // namespace detail

namespace
{
//---------------------------------------------------------------------------//
constexpr int series_max_terms = 200'000;
constexpr int series_min_terms = 8;
constexpr double consistency_tolerance = 1e-6;

//! Compensated accumulator
constexpr double rescale_limit = 1e100;
double const log_rescale_limit = std::log(rescale_limit);

struct KahanSum
{
    double sum{0};
    double comp{0};

    void add(double term)
    {
        double t = sum + term;
        comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term
                                                   : (term - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void validate_request(FormFunctionRequest const& req)
{
    auto const& p = req.point;
    if (!(std::isfinite(p.x_total) && p.x_total >= 0 && p.x_x >= 0
          && p.x_z >= 0 && std::isfinite(p.x_x) && std::isfinite(p.x_z)))
    {
        throw std::invalid_argument(
            "form function: momentum transfer must be finite and >= 0");
    }
    if (!(req.tolerance > 0 && req.tolerance < 1))
    {
        throw std::invalid_argument(
            "form function: tolerance must lie in (0, 1)");
    }
}

//! -log(1 - e^{-a}) for a > 0
double neg_log1mexp(double a)
{
    return -std::log(-std::expm1(-a));
}

void require_series(ThermalState const& state)
{
    if (!state.has_fugacity() || state.is_truncated())
    {
        throw std::invalid_argument(
            "PowerSeries needs an untruncated state with a fugacity");
    }
    if (state.statistics() == Statistics::FermiDirac
        && !(state.log_fugacity() < 0))
    {
        throw SeriesDivergence(
            fmt::format("fugacity z = {:.6g} >= 1; the fugacity series "
                        "only converges for z < 1",
                        state.fugacity()));
    }
}

void require_mb(ThermalState const& state)
{
    if (state.statistics() != Statistics::MaxwellBoltzmann)
    {
        throw std::invalid_argument(
            "ClosedFormMB requires Maxwell-Boltzmann statistics");
    }
    if (state.is_truncated())
    {
        throw std::invalid_argument(
            "ClosedFormMB does not apply to truncated states");
    }
}

void reject_method(Method m, char const* what)
{
    throw std::invalid_argument(
        fmt::format("method {} does not evaluate the {} form function",
                    to_string(m),
                    what));
}

//---------------------------------------------------------------------------//
/*!
 * Sum_{l>=1} (-1)^{l-1} z^l (1 - e^{-l/tau})^{-3} e^{-(x/2) coth(l / 2 tau)}.
 *
 * Terms are bounded by z^l (1 - e^{-l/tau})^{-3} e^{-x/2}, which gives a
 * geometric bound on the remainder used as the stopping rule.
 */
double coherent_amplitude_series(ThermalState const& state,
                                 double x,
                                 double tol)
{
    double const tau = state.tau();
    double const log_z = state.log_fugacity();
    auto log_term = [&](int l) {
        double const half_arg = l / (2 * tau);
        double const coth = 1 / std::tanh(half_arg);
        return l * log_z + 3 * neg_log1mexp(l / tau) - x / 2 * coth;
    };
    if (state.statistics() == Statistics::MaxwellBoltzmann)
    {
        return std::exp(log_term(1));
    }

    double const z = std::exp(log_z);
    KahanSum sum;
    for (int l = 1; l <= series_max_terms; ++l)
    {
        double term = std::exp(log_term(l));
        sum.add((l % 2 == 1) ? term : -term);
        if (l >= series_min_terms)
        {
            double log_tail = (l + 1) * log_z - std::log1p(-z)
                              + 3 * neg_log1mexp((l + 1) / tau) - x / 2;
            double s = std::abs(sum.value());
            if (log_tail < std::log(tol) + std::log(s) || (s == 0 && term == 0
                                                           && log_tail < -745))
            {
                return sum.value();
            }
        }
    }
    throw ToleranceNotMet(fmt::format(
        "coherent fugacity series did not converge in {} terms (z = {:.6g}, "
        "x = {:.6g})",
        series_max_terms,
        z,
        x));
}

//---------------------------------------------------------------------------//
/*!
 * Sum_{l1,l2>=1} (-z)^{l1+l2} (1 - e^{-(l1+l2)/tau})^{-3} e^{-x f(l1,l2)}
 * with f = (1 - u1)(1 - u2) / (1 - u1 u2), u_i = e^{-l_i/tau}.
 *
 * Terms are grouped by L = l1 + l2. Since f >= tanh(1/2 tau), every term in
 * group L is bounded by z^L (1 - e^{-L/tau})^{-3} e^{-x tanh(1/2 tau)}.
 */
double incoherent_series(ThermalState const& state, double x, double tol)
{
    double const tau = state.tau();
    double const log_z = state.log_fugacity();
    auto f = [tau](int l1, int l2) {
        double a = -std::expm1(-l1 / tau);
        double b = -std::expm1(-l2 / tau);
        double c = -std::expm1(-(l1 + l2) / tau);
        return a * b / c;
    };
    auto group = [&](int big_l) {
        double const prefactor = big_l * log_z + 3 * neg_log1mexp(big_l / tau);
        KahanSum g;
        // Symmetric in (l1, l2): sum half and double
        for (int l1 = 1; 2 * l1 <= big_l; ++l1)
        {
            int const l2 = big_l - l1;
            double t = std::exp(prefactor - x * f(l1, l2));
            g.add(l1 == l2 ? t : 2 * t);
        }
        return g.value();
    };
    if (state.statistics() == Statistics::MaxwellBoltzmann)
    {
        return group(2);
    }

    double const z = std::exp(log_z);
    double const floor_exponent = -x * std::tanh(1 / (2 * tau));
    KahanSum sum;
    for (int big_l = 2; big_l <= series_max_terms; ++big_l)
    {
        double g = group(big_l);
        sum.add(big_l % 2 == 0 ? g : -g);
        if (big_l >= series_min_terms + 1)
        {
            // Sum_{k>=K} (k-1) z^k = z^K [(K-1)/(1-z) + z/(1-z)^2]
            int const k = big_l + 1;
            double const log_tail
                = k * log_z
                  + std::log((k - 1) / (1 - z) + z / ((1 - z) * (1 - z)))
                  + 3 * neg_log1mexp(k / tau) + floor_exponent;
            double s = std::abs(sum.value());
            if (log_tail < std::log(tol) + std::log(s)
                || (s == 0 && g == 0 && log_tail < -745))
            {
                return sum.value();
            }
        }
    }
    throw ToleranceNotMet(fmt::format(
        "incoherent fugacity series did not converge (z = {:.6g}, x = {:.6g})",
        z,
        x));
}

//---------------------------------------------------------------------------//
double coherent_laguerre(ThermalState const& state, double x)
{
    auto const occ = state.occupations();
    LaguerreTable table(2, x, state.n_max());
    KahanSum sum;
    for (int n = 0; n <= state.n_max(); ++n)
    {
        sum.add(occ[n] * table[n]);
    }
    double const amp = sum.value();
    return amp * amp;
}

//---------------------------------------------------------------------------//
//! One diagonal <m+d| D |m> = curr e^{log_scale}, m = 0, 1, ...
struct DiagonalLane
{
    int d;
    double const* q;
    double log_scale;
    double prev{0};
    double curr{1};
    double partial{0};
    double sum{0};

    void flush()
    {
        if (partial > 0)
            sum += std::exp(std::log(partial) + 2 * log_scale);
        partial = 0;
    }

    // Accumulate curr^2 q[m], then advance to m + 1
    void step(int m, double x, double const* root, double const* inv_root)
    {
        partial += curr * curr * q[m];
        double next = ((2 * m + d + 1 - x) * curr - root[m] * root[m + d] * prev)
                      * inv_root[m + 1] * inv_root[m + d + 1];
        prev = curr;
        curr = next;
        if (std::abs(curr) > rescale_limit)
        {
            flush();
            curr *= 1 / rescale_limit;
            prev *= 1 / rescale_limit;
            log_scale += log_rescale_limit;
        }
    }
};

/*!
 * Shell-pair sum.
 *
 * Each oscillator shell is invariant under rotations, so the summed squared
 * displacement matrix elements between two shells only depend on |dk|.
 * Aligning dk with one axis gives
 *   F_in = Sum_{u,v} |<u|D|v>|^2 Q(u, v),
 *   Q(u, v) = Sum_j (j + 1) P(u + j) P(v + j),
 * where (j + 1) counts the spectator states of the two other axes. Q is
 * built per diagonal from the top by
 *   R(u,v) = P(u)P(v) + R(u+1,v+1),  Q(u,v) = R(u,v) + Q(u+1,v+1).
 */
double incoherent_shell(ThermalState const& state, double x)
{
    auto const occ = state.occupations();
    int const n = state.n_max();
    auto const dim = static_cast<std::size_t>(n) + 1;
    std::vector<double> root(dim + 1);
    std::vector<double> inv_root(dim + 1);
    for (std::size_t k = 0; k < root.size(); ++k)
    {
        root[k] = std::sqrt(static_cast<double>(k));
        inv_root[k] = k ? 1 / root[k] : 0;
    }
    int const d_max = (x == 0) ? 0 : n;
    double const log_x = std::log(x);

    // Several diagonals are walked together so their recurrences overlap
    constexpr int width = 4;
    std::vector<double> q(width * dim);
    KahanSum total;
    for (int d0 = 0; d0 <= d_max; d0 += width)
    {
        int const lanes = std::min(width, d_max - d0 + 1);
        std::array<DiagonalLane, width> lane{};
        for (int k = 0; k < lanes; ++k)
        {
            int const d = d0 + k;
            double* qd = q.data() + k * dim;
            double r = 0;
            double acc = 0;
            for (int j = n - d; j >= 0; --j)
            {
                r += occ[j + d] * occ[j];
                acc += r;
                qd[j] = acc;
            }
            double const ls = (x == 0) ? 0
                                       : -x / 2 + 0.5 * d * log_x
                                             - 0.5 * std::lgamma(d + 1.0);
            lane[k] = DiagonalLane{d, qd, ls};
        }
        // Diagonal d has n - d + 1 entries; the last lane is shortest
        int const common = n - (d0 + lanes - 1) + 1;
        int m = 0;
        if (lanes == width)
        {
            for (; m < common; ++m)
            {
#pragma GCC unroll 4
                for (int k = 0; k < width; ++k)
                    lane[k].step(m, x, root.data(), inv_root.data());
            }
        }
        for (int k = 0; k < lanes; ++k)
        {
            int const len = n - (d0 + k) + 1;
            for (int j = m; j < len; ++j)
                lane[k].step(j, x, root.data(), inv_root.data());
            lane[k].flush();
            total.add(lane[k].d == 0 ? lane[k].sum : 2 * lane[k].sum);
        }
    }
    return total.value();
}

//---------------------------------------------------------------------------//
std::vector<double> const& pair_table(ThermalState const& state)
{
    auto& cache = state.tables();
    std::call_once(cache.pair_once, [&] {
        int const n = state.n_max();
        auto const dim = static_cast<std::size_t>(n) + 1;
        auto const occ = state.occupations();
        std::vector<double> w(dim * dim);
        for (int d = 0; d <= n; ++d)
        {
            double r = 0;
            for (int j = n - d; j >= 0; --j)
            {
                r += occ[j + d] * occ[j];
                w[(j + d) * dim + j] = r;
                w[j * dim + j + d] = r;
            }
        }
        cache.pair_weights = std::move(w);
    });
    return cache.pair_weights;
}

double incoherent_quad(ThermalState const& state, ScatterPoint const& pt)
{
    int const n = state.n_max();
    if (n > quad_sum_max_n)
    {
        throw BudgetExceeded(fmt::format(
            "QuadSum supports n_max <= {}, state has n_max = {}; use "
            "ConvolutionSum or ShellSum",
            quad_sum_max_n,
            n));
    }
    auto const& w = pair_table(state);
    auto const dim = static_cast<std::size_t>(n) + 1;
    FranckCondonTable mx(pt.x_x, n);
    FranckCondonTable mz(pt.x_z, n);
    KahanSum total;
    for (int nx = 0; nx <= n; ++nx)
    {
        for (int nz = 0; nx + nz <= n; ++nz)
        {
            double s = 0;
            for (int mx_i = 0; mx_i <= n; ++mx_i)
            {
                double const fx = mx(nx, mx_i);
                double row = 0;
                for (int mz_i = 0; mx_i + mz_i <= n; ++mz_i)
                {
                    row += w[(nx + nz) * dim + mx_i + mz_i] * mz(nz, mz_i);
                }
                s += fx * row;
            }
            total.add(s);
        }
    }
    return total.value();
}

//---------------------------------------------------------------------------//
// FFTW planning is not thread safe
std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

int fft_friendly_size(int minimum)
{
    for (int n = minimum;; ++n)
    {
        int r = n;
        for (int p : {2, 3, 5, 7})
        {
            while (r % p == 0)
                r /= p;
        }
        if (r == 1)
            return n;
    }
}

struct FftwBuffer
{
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes))
    {
        if (!ptr)
            throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(FftwBuffer const&) = delete;
    FftwBuffer& operator=(FftwBuffer const&) = delete;
    void* ptr;
};

/*!
 * K(s, t) = Sum_{a+b=s, c+e=t} Mx(a, c) Mz(b, e) via zero-padded 2D FFT.
 */
double incoherent_convolution(ThermalState const& state, ScatterPoint const& pt)
{
    int const n = state.n_max();
    if (n > convolution_max_n)
    {
        throw BudgetExceeded(fmt::format(
            "ConvolutionSum supports n_max <= {}, state has n_max = {}; use "
            "ShellSum",
            convolution_max_n,
            n));
    }
    auto const& w = pair_table(state);
    auto const dim = static_cast<std::size_t>(n) + 1;
    FranckCondonTable mx(pt.x_x, n);
    FranckCondonTable mz(pt.x_z, n);

    int const size = fft_friendly_size(2 * n + 1);
    auto const rows = static_cast<std::size_t>(size);
    auto const half = rows / 2 + 1;
    FftwBuffer a_buf(sizeof(double) * rows * rows);
    FftwBuffer b_buf(sizeof(double) * rows * rows);
    FftwBuffer fa_buf(sizeof(fftw_complex) * rows * half);
    FftwBuffer fb_buf(sizeof(fftw_complex) * rows * half);
    auto* a = static_cast<double*>(a_buf.ptr);
    auto* b = static_cast<double*>(b_buf.ptr);
    auto* fa = static_cast<fftw_complex*>(fa_buf.ptr);
    auto* fb = static_cast<fftw_complex*>(fb_buf.ptr);

    fftw_plan fwd_a;
    fftw_plan fwd_b;
    fftw_plan back;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fwd_a = fftw_plan_dft_r2c_2d(size, size, a, fa, FFTW_ESTIMATE);
        fwd_b = fftw_plan_dft_r2c_2d(size, size, b, fb, FFTW_ESTIMATE);
        back = fftw_plan_dft_c2r_2d(size, size, fa, a, FFTW_ESTIMATE);
    }
    std::fill(a, a + rows * rows, 0.0);
    std::fill(b, b + rows * rows, 0.0);
    double peak_input = 0;
    for (std::size_t i = 0; i < dim; ++i)
    {
        for (std::size_t j = 0; j < dim; ++j)
        {
            a[i * rows + j] = mx(static_cast<int>(i), static_cast<int>(j));
            b[i * rows + j] = mz(static_cast<int>(i), static_cast<int>(j));
        }
    }
    fftw_execute(fwd_a);
    fftw_execute(fwd_b);
    for (std::size_t k = 0; k < rows * half; ++k)
    {
        double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
        double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
        fa[k][0] = re;
        fa[k][1] = im;
    }
    fftw_execute(back);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_a);
        fftw_destroy_plan(fwd_b);
        fftw_destroy_plan(back);
    }

    // Round-off in each entry scales with the total weight of K, which is
    // the product of the input sums
    double const norm = 1.0 / (static_cast<double>(size) * size);
    double const mass = std::accumulate(mx.values().begin(), mx.values().end(), 0.0)
                        * std::accumulate(mz.values().begin(), mz.values().end(), 0.0);
    for (std::size_t s = 0; s < dim; ++s)
    {
        for (std::size_t t = 0; t < dim; ++t)
        {
            peak_input = std::max(peak_input, std::abs(a[s * rows + t]));
        }
    }
    double const clamp = 1e-12 * mass;
    KahanSum total;
    for (std::size_t s = 0; s < dim; ++s)
    {
        for (std::size_t t = 0; t < dim; ++t)
        {
            double k = a[s * rows + t] * norm;
            if (k < 0)
            {
                if (-k > clamp)
                {
                    throw ToleranceNotMet(fmt::format(
                        "convolution kernel K({}, {}) = {:.3g} is negative "
                        "beyond round-off (peak {:.3g}, total {:.3g})",
                        s,
                        t,
                        k,
                        peak_input * norm,
                        mass));
                }
                k = 0;
            }
            total.add(w[s * dim + t] * k);
        }
    }
    return total.value();
}

//---------------------------------------------------------------------------//
double incoherent_direct_peak(ThermalState const& state)
{
    KahanSum sum;
    auto const occ = state.occupations();
    for (int n = 0; n <= state.n_max(); ++n)
    {
        sum.add(static_cast<double>(degeneracy(n)) * occ[n] * occ[n]);
    }
    return sum.value();
}

void check_series(double series, double direct, char const* what)
{
    if (!(std::abs(series - direct) <= consistency_tolerance * direct))
    {
        throw ToleranceNotMet(
            fmt::format("{} fugacity series disagrees with the occupation "
                        "table at x = 0: {:.17g} vs {:.17g}",
                        what,
                        series,
                        direct));
    }
}
}  // namespace

//---------------------------------------------------------------------------//
char const* to_string(Method m)
{
    switch (m)
    {
        case Method::Auto:
            return "Auto";
        case Method::PowerSeries:
            return "PowerSeries";
        case Method::LaguerreSum:
            return "LaguerreSum";
        case Method::ClosedFormMB:
            return "ClosedFormMB";
        case Method::QuadSum:
            return "QuadSum";
        case Method::ConvolutionSum:
            return "ConvolutionSum";
        case Method::ShellSum:
            return "ShellSum";
    }
    return "?";
}

Method method_from_string(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    });
    for (auto m : {Method::Auto,
                   Method::PowerSeries,
                   Method::LaguerreSum,
                   Method::ClosedFormMB,
                   Method::QuadSum,
                   Method::ConvolutionSum,
                   Method::ShellSum})
    {
        std::string candidate = to_string(m);
        std::transform(candidate.begin(),
                       candidate.end(),
                       candidate.begin(),
                       [](char c) {
                           return static_cast<char>(
                               std::tolower(static_cast<unsigned char>(c)));
                       });
        if (candidate == lower)
            return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

//---------------------------------------------------------------------------//
namespace
{
bool series_preferred(ThermalState const& state)
{
    return state.has_fugacity() && !state.is_truncated()
           && state.log_fugacity() < std::log(auto_series_fugacity);
}
}  // namespace

Method resolve_coherent(FormFunctionRequest const& req)
{
    if (req.method != Method::Auto)
        return req.method;
    auto const& s = req.state;
    if (s.statistics() == Statistics::MaxwellBoltzmann && !s.is_truncated())
        return Method::ClosedFormMB;
    return series_preferred(s) ? Method::PowerSeries : Method::LaguerreSum;
}

Method resolve_incoherent(FormFunctionRequest const& req)
{
    if (req.method != Method::Auto)
        return req.method;
    auto const& s = req.state;
    if (s.statistics() == Statistics::MaxwellBoltzmann && !s.is_truncated())
        return Method::ClosedFormMB;
    return series_preferred(s) ? Method::PowerSeries : Method::ShellSum;
}

//---------------------------------------------------------------------------//
/*!
 * Coherent form function |Sum_n N_n eta_nn|^2.
 *
 * When Auto picks the fugacity series, the series is checked once per state
 * against the occupation table at zero momentum transfer.
 */
double coherent_form(FormFunctionRequest const& req)
{
    validate_request(req);
    auto const& state = req.state;
    double const x = req.point.x_total;
    Method const method = resolve_coherent(req);
    switch (method)
    {
        case Method::PowerSeries: {
            require_series(state);
            if (req.method == Method::Auto)
            {
                std::call_once(state.tables().coherent_check_once, [&] {
                    check_series(
                        coherent_amplitude_series(state, 0, 1e-12),
                        state.number_sum(),
                        "coherent");
                });
            }
            double amp = coherent_amplitude_series(state, x, req.tolerance);
            return amp * amp;
        }
        case Method::LaguerreSum:
            return coherent_laguerre(state, x);
        case Method::ClosedFormMB: {
            require_mb(state);
            double const n = state.atoms();
            return n * n * std::exp(-x / std::tanh(1 / (2 * state.tau())));
        }
        default:
            reject_method(method, "coherent");
    }
    return 0;
}

//---------------------------------------------------------------------------//
double incoherent_form(FormFunctionRequest const& req)
{
    validate_request(req);
    auto const& state = req.state;
    double const x = req.point.x_total;
    Method const method = resolve_incoherent(req);
    switch (method)
    {
        case Method::PowerSeries: {
            require_series(state);
            if (req.method == Method::Auto)
            {
                std::call_once(state.tables().incoherent_check_once, [&] {
                    check_series(incoherent_series(state, 0, 1e-12),
                                 incoherent_direct_peak(state),
                                 "incoherent");
                });
            }
            return incoherent_series(state, x, req.tolerance);
        }
        case Method::ClosedFormMB: {
            require_mb(state);
            double const n = state.atoms();
            double const t = std::tanh(1 / (2 * state.tau()));
            return n * n * t * t * t * std::exp(-x * t);
        }
        case Method::QuadSum:
            return incoherent_quad(state, req.point);
        case Method::ConvolutionSum:
            return incoherent_convolution(state, req.point);
        case Method::ShellSum:
            return incoherent_shell(state, x);
        default:
            reject_method(method, "incoherent");
    }
    return 0;
}

//---------------------------------------------------------------------------//
double incoherent_weight(int n, int m, ThermalState const& state)
{
    if (n < 0 || m < 0)
    {
        throw std::invalid_argument("incoherent_weight: negative index");
    }
    KahanSum sum;
    for (int y = 0; std::max(n, m) + y <= state.n_max(); ++y)
    {
        sum.add(state.occupation(n + y) * state.occupation(m + y));
    }
    return sum.value();
}

//---------------------------------------------------------------------------//
}  // namespace fermiscatter
