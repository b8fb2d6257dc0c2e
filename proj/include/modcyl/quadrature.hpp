#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "common.hpp"

namespace modcyl {

/// Gauss–Legendre rule on [-1, 1], nodes and weights computed once by
/// Newton iteration on the Legendre polynomial.
template <int N>
struct GaussLegendre {
    std::array<double, N> node{};
    std::array<double, N> weight{};

    GaussLegendre() {
        for (int i = 0; i < (N + 1) / 2; ++i) {
            // Chebyshev-based initial guess for the i-th positive root
            double x = std::cos(pi * (i + 0.75) / (N + 0.5));
            double p1 = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= N; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = N * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                p1 = p0;  // keep P_{N-1}(x) for the weight
                if (std::abs(dx) < 1e-16) {
                    // one more refinement pass, then stop
                    if (it > 2) break;
                }
            }
            double p0 = 1.0, pn = x;
            for (int k = 2; k <= N; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * pn - (k - 1.0) * p0) / k;
                p0 = pn;
                pn = p2;
            }
            double dp = N * (x * pn - p0) / (x * x - 1.0);
            node[i] = -x;
            node[N - 1 - i] = x;
            weight[i] = weight[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    static const GaussLegendre& get() {
        static const GaussLegendre rule;
        return rule;
    }
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    int max_depth = 44;
};

namespace detail {

template <class F>
complex gl15(F& f, double a, double b) {
    const auto& r = GaussLegendre<15>::get();
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    complex s = 0.0;
    for (int i = 0; i < 15; ++i) s += r.weight[i] * f(m + h * r.node[i]);
    return h * s;
}

template <class F>
complex adapt(F& f, double a, double b, complex whole, double tol, int depth, int max_depth,
              double& residual) {
    const double m = 0.5 * (a + b);
    const complex left = gl15(f, a, m);
    const complex right = gl15(f, m, b);
    const complex sum = left + right;
    const double err = std::abs(sum - whole);
    if (err <= tol || depth >= max_depth) {
        if (depth >= max_depth && err > tol) residual = std::max(residual, err);
        return sum;
    }
    return adapt(f, a, m, left, 0.5 * tol, depth + 1, max_depth, residual) +
           adapt(f, m, b, right, 0.5 * tol, depth + 1, max_depth, residual);
}

}  // namespace detail

struct IntegralResult {
    complex value;
    double residual = 0.0;  // worst unconverged panel error, 0 when fully converged
};

/// Adaptive Gauss–Legendre integration of a complex-valued integrand on [a, b].
template <class F>
IntegralResult integrate_full(F&& f, double a, double b, const QuadratureSpec& q = {}) {
    if (!(a < b)) return {0.0, 0.0};
    IntegralResult res;
    complex whole = detail::gl15(f, a, b);
    res.value = detail::adapt(f, a, b, whole, q.abs_tol, 0, q.max_depth, res.residual);
    return res;
}

template <class F>
complex integrate(F&& f, double a, double b, const QuadratureSpec& q = {}) {
    return integrate_full(std::forward<F>(f), a, b, q).value;
}

/// Composite fixed-panel rule for integrands with a known linear phase:
/// the panel count is budgeted from the total phase swing, so oscillations
/// never defeat the error estimator. Intended for smooth envelopes.
template <class F>
complex integrate_oscillatory(F&& f, double a, double b, double freq,
                              const QuadratureSpec& q = {}) {
    if (!(a < b)) return 0.0;
    const double swing = std::abs(freq) * (b - a);
    const int panels = std::max(6, static_cast<int>(swing / 12.0) + 6);
    const double h = (b - a) / panels;
    complex total = 0.0;
    double residual = 0.0;
    for (int k = 0; k < panels; ++k) {
        // one refinement level per panel as a safety estimate
        const double lo = a + k * h, hi = lo + h;
        const complex whole = detail::gl15(f, lo, hi);
        total += detail::adapt(f, lo, hi, whole, q.abs_tol / panels, 0,
                               std::min(q.max_depth, 18), residual);
    }
    return total;
}

/// Same, but the interval is pre-split at the given interior break points
/// (kernel singular loci, support edges, ...). Breaks outside (a, b) are ignored.
template <class F>
IntegralResult integrate_split(F&& f, double a, double b, std::span<const double> breaks,
                               const QuadratureSpec& q = {}) {
    if (!(a < b)) return {0.0, 0.0};
    std::vector<double> pts;
    pts.reserve(breaks.size() + 2);
    pts.push_back(a);
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    IntegralResult res;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-300) continue;
        auto part = integrate_full(f, pts[i], pts[i + 1], q);
        res.value += part.value;
        res.residual = std::max(res.residual, part.residual);
    }
    return res;
}

}  // namespace modcyl
