#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "casq/errors.hpp"

namespace casq::quad
{

struct QuadratureSpec
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    int max_subdivisions = 2000;

    void validate() const
    {
        if (!(rel_tol > 0.0 || abs_tol > 0.0))
            throw InvalidArgument("quadrature spec needs rel_tol > 0 or abs_tol > 0");
        if (max_subdivisions < 1)
            throw InvalidArgument("quadrature spec needs max_subdivisions >= 1");
    }

    double tolerance_for(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct IntegralResult
{
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail
{

// Gauss-Kronrod 7/15 pair, nodes on [-1, 1] (QUADPACK qk15 tables).
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a;
    double b;
    double value;
    double error;
};

template<class F>
double checked_eval(F& f, double x)
{
    const double y = f(x);
    if (!std::isfinite(y)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "integrand returned %g at x = %.17g", y, x);
        throw NonFiniteEvaluation(buf);
    }
    return y;
}

template<class F>
Panel gauss_kronrod_15(F& f, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    const double fc = checked_eval(f, center);
    double res_gauss = fc * gauss_weights[3];
    double res_kronrod = fc * kronrod_weights[7];
    double res_abs = std::abs(res_kronrod);

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        f1[j] = checked_eval(f, center - dx);
        f2[j] = checked_eval(f, center + dx);
        const double sum = f1[j] + f2[j];
        res_kronrod += kronrod_weights[j] * sum;
        res_abs += kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1)
            res_gauss += gauss_weights[j / 2] * sum;
    }

    const double mean = 0.5 * res_kronrod;
    double res_asc = kronrod_weights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        res_asc += kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > uflow / (50.0 * eps))
        err = std::max(50.0 * eps * res_abs, err);

    return {a, b, res_kronrod * half, err};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// error meets max(abs_tol, rel_tol |I|) or the subdivision budget runs out
/// (converged = false). Sums are taken in left-endpoint order so the result
/// is bit-reproducible. Throws NonFiniteEvaluation if f is not finite.
template<class F>
IntegralResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b))
        throw InvalidArgument("integrate_adaptive needs finite limits; use integrate_improper");
    if (a == b)
        return {0.0, 0.0, 0, true};

    std::vector<detail::Panel> panels;
    panels.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    panels.push_back(detail::gauss_kronrod_15(f, a, b));
    std::size_t evaluations = 15;

    auto totals = [&panels] {
        double v = 0.0;
        double e = 0.0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    bool converged = error <= spec.tolerance_for(value);
    int subdivisions = 1;

    while (!converged && subdivisions < spec.max_subdivisions) {
        // First panel with the largest error, so ties resolve deterministically.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error)
                worst = i;

        const detail::Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid == p.a || mid == p.b)
            break; // interval exhausted at machine resolution

        panels[worst] = detail::gauss_kronrod_15(f, p.a, mid);
        panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                      detail::gauss_kronrod_15(f, mid, p.b));
        evaluations += 30;
        ++subdivisions;

        std::tie(value, error) = totals();
        converged = error <= spec.tolerance_for(value);
    }

    return {value, error, evaluations, converged};
}

/// Integral of f over (-inf, inf) through t = center + scale tan(theta).
///
/// The caller certifies integrable decay; `scale` should match the width of
/// the integrand's support. Throws NonConvergent when the mapped integral
/// does not reach tolerance.
template<class F>
IntegralResult integrate_improper(F&& f, const QuadratureSpec& spec = {}, double center = 0.0,
                                  double scale = 1.0)
{
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(center))
        throw InvalidArgument("integrate_improper needs a finite center and positive scale");

    auto mapped = [&](double theta) {
        const double c = std::cos(theta);
        const double t = center + scale * std::tan(theta);
        if (!std::isfinite(t))
            return 0.0;
        return f(t) * scale / (c * c);
    };
    constexpr double half_pi = 0.5 * std::numbers::pi;
    IntegralResult r = integrate_adaptive(mapped, -half_pi, half_pi, spec);
    if (!r.converged) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "improper integral reached %.6g with error estimate %.3g after %zu evaluations",
                      r.value, r.error_estimate, r.evaluations);
        throw NonConvergent(buf);
    }
    return r;
}

/// Limits of one level of an iterated integral, given the values of all
/// enclosing (outer) variables.
using BoundsFn = std::function<std::pair<double, double>(std::span<const double> outer)>;

inline BoundsFn fixed_bounds(double lo, double hi)
{
    return [lo, hi](std::span<const double>) { return std::pair{lo, hi}; };
}

/// Nested adaptive integration; bounds[0] is the outermost variable.
///
/// Inner levels run at a quarter of the outer relative tolerance. The reported
/// error adds the outer estimate to the largest inner estimate times the outer
/// interval length.
inline IntegralResult integrate_iterated(const std::function<double(std::span<const double>)>& f,
                                         const std::vector<BoundsFn>& bounds,
                                         const QuadratureSpec& spec = {})
{
    spec.validate();
    if (bounds.empty() || bounds.size() > 3)
        throw InvalidArgument("integrate_iterated supports 1 to 3 dimensions");

    std::vector<double> point(bounds.size(), 0.0);
    std::size_t evaluations = 0;
    bool all_converged = true;

    std::function<IntegralResult(std::size_t, const QuadratureSpec&)> level =
        [&](std::size_t depth, const QuadratureSpec& s) -> IntegralResult {
        const auto [lo, hi] = bounds[depth](std::span<const double>(point.data(), depth));
        if (depth + 1 == bounds.size()) {
            auto leaf = [&](double x) {
                point[depth] = x;
                ++evaluations;
                return f(std::span<const double>(point));
            };
            IntegralResult r = integrate_adaptive(leaf, lo, hi, s);
            all_converged = all_converged && r.converged;
            return r;
        }

        const double width = std::max(std::abs(hi - lo), std::numeric_limits<double>::min());
        QuadratureSpec inner = s;
        inner.rel_tol = 0.25 * s.rel_tol;
        inner.abs_tol = std::max(0.25 * s.abs_tol / width, std::numeric_limits<double>::min());
        double worst_inner = 0.0;

        auto node = [&](double x) {
            point[depth] = x;
            IntegralResult in = level(depth + 1, inner);
            worst_inner = std::max(worst_inner, in.error_estimate);
            return in.value;
        };
        IntegralResult r = integrate_adaptive(node, lo, hi, s);
        all_converged = all_converged && r.converged;
        r.error_estimate += worst_inner * width;
        return r;
    };

    IntegralResult r = level(0, spec);
    r.evaluations = evaluations;
    r.converged = all_converged;
    return r;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n)
{
    if (n < 1)
        throw InvalidArgument("gauss_legendre needs n >= 1");
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

} // namespace casq::quad
