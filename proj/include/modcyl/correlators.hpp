#pragma once

#include <cmath>

#include "common.hpp"
#include "geometry.hpp"
#include "singular_kernel.hpp"
#include "states.hpp"
#include "test_functions.hpp"

namespace modcyl {

inline TestSpinor conjugate(const TestSpinor& f) {
    TestSpinor out;
    for (int a = 0; a < 2; ++a) {
        const TestFunction1D& c = f[a];
        out[a].support_lo = c.support_lo;
        out[a].support_hi = c.support_hi;
        out[a].smoothness = c.smoothness;
        if (c.f) {
            auto fn = c.f;
            out[a].f = [fn](double x) { return std::conj(fn(x)); };
        }
        if (c.df) {
            auto dfn = c.df;
            out[a].df = [dfn](double x) { return std::conj(dfn(x)); };
        }
    }
    return out;
}

/// Structured kernel of the equal-time two-point form on the given domain
/// ([0, L] for the full circle, [-ell, ell] for the restricted operator).
/// Component one carries the boundary value from below the real axis and
/// component two the one from above, which after the Sokhotski split leaves
/// both diagonal delta coefficients at +1/2.
inline SingularKernel1D two_point_kernel(const StateParams& state, const Geometry& g,
                                         double domain_lo, double domain_hi) {
    SingularKernel1D k;
    k.geo = &g;
    k.domain_lo = domain_lo;
    k.domain_hi = domain_hi;
    const complex c0 = 1.0 / (2i * g.L);

    for (int a = 0; a < 2; ++a) {
        PVTerm term;
        term.a = term.b = a;
        term.sing.family = PVSingularity::Family::inv_sin_diff;
        const complex c = (a == 0 ? c0 : -c0);
        if (state.is_ramond()) {
            term.prefactor = [c, &g](double x, double y) { return c * g.cos_pl(x - y); };
        } else {
            term.prefactor = [c](double, double) { return c; };
        }
        k.pv.push_back(std::move(term));
    }
    k.delta_diag = [](double) { return Mat2(0.5 * Mat2::Identity()); };
    if (state.is_ramond()) {
        const Mat2 h = build_h(state, g);
        k.smooth = [h](double, double) { return h; };
    }
    return k;
}

/// Kernel of 1 - G (same structure, complementary occupation).
inline SingularKernel1D two_point_complement_kernel(const StateParams& state, const Geometry& g,
                                                    double domain_lo, double domain_hi) {
    SingularKernel1D k = two_point_kernel(state, g, domain_lo, domain_hi);
    for (auto& term : k.pv) {
        auto p = term.prefactor;
        term.prefactor = [p](double x, double y) { return -p(x, y); };
    }
    k.delta_diag = [](double) { return Mat2(0.5 * Mat2::Identity()); };
    if (k.smooth) {
        auto s = k.smooth;
        k.smooth = [s](double x, double y) { return Mat2(-s(x, y)); };
    }
    return k;
}

/// omega(psi(f) psi(g)^dagger): the two-point kernel integrated against
/// f_a(x) and conj(g_b(y)) over the full circle.
inline complex two_point(const TestSpinor& f, const TestSpinor& gfun, const StateParams& state,
                         const Geometry& geo, const SmearSpec& spec = {}) {
    SingularKernel1D k = two_point_kernel(state, geo, 0.0, geo.L);
    const TestSpinor gc = conjugate(gfun);
    complex total = 0.0;
    for (int a = 0; a < 2; ++a) {
        const TestFunction1D& fa = f[a];
        if (!fa.f || fa.support_hi <= fa.support_lo) continue;
        auto integrand = [&](double x) -> complex {
            return fa.f(x) * smear(k, gc, x, spec).value[a];
        };
        total += integrate(integrand, std::max(0.0, fa.support_lo),
                           std::min(geo.L, fa.support_hi), spec.quad);
    }
    return total;
}

/// Fourier coefficient (1/sqrt L) int_0^L f(x) e^{i 2 pi n x / L} dx,
/// with half-integer n in the antiperiodic sector.
inline complex fourier_coefficient(const TestFunction1D& f, double n, const Geometry& g,
                                   const QuadratureSpec& q = {}) {
    if (!f.f) return 0.0;
    const double lo = std::max(0.0, f.support_lo), hi = std::min(g.L, f.support_hi);
    if (lo >= hi) return 0.0;
    auto integrand = [&](double x) {
        return f.f(x) * std::exp(1i * (2.0 * pi * n / g.L * x));
    };
    return integrate(integrand, lo, hi, q) / std::sqrt(g.L);
}

/// Truncated mode-sum of the two-point function. Modes are half-integer for
/// NS and integer for R; the R zero mode couples through the covariance
/// matrix g = h + 1/(2L). Converges to two_point as n_modes grows.
inline complex mode_sum_oracle(const TestSpinor& f, const TestSpinor& gfun,
                               const StateParams& state, const Geometry& geo, int n_modes,
                               const QuadratureSpec& q = {}) {
    if (n_modes < 1) throw std::invalid_argument("mode_sum_oracle: n_modes >= 1");
    complex total = 0.0;
    if (state.is_ramond()) {
        const Mat2 gz = g_covariance(state, geo);
        complex ft[2], gt[2];
        for (int a = 0; a < 2; ++a) {
            ft[a] = fourier_coefficient(f[a], 0.0, geo, q);
            gt[a] = fourier_coefficient(gfun[a], 0.0, geo, q);
        }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) total += geo.L * gz(a, b) * ft[a] * std::conj(gt[b]);
        for (int n = 1; n <= n_modes; ++n) {
            total += fourier_coefficient(f[0], -n, geo, q) *
                     std::conj(fourier_coefficient(gfun[0], -n, geo, q));
            total += fourier_coefficient(f[1], n, geo, q) *
                     std::conj(fourier_coefficient(gfun[1], n, geo, q));
        }
    } else {
        for (int n = 0; n < n_modes; ++n) {
            const double half = n + 0.5;
            total += fourier_coefficient(f[0], -half, geo, q) *
                     std::conj(fourier_coefficient(gfun[0], -half, geo, q));
            total += fourier_coefficient(f[1], half, geo, q) *
                     std::conj(fourier_coefficient(gfun[1], half, geo, q));
        }
    }
    return total;
}

/// Analytic continuation of G f off the interval: component a of the function
/// whose boundary values from below (component one) and above (component two)
/// reproduce the two-point kernel. z must stay off [-ell, ell] modulo L.
inline Vec2 analytic_continuation(const TestSpinor& f, complex z, const StateParams& state,
                                  const Geometry& g, const QuadratureSpec& q = {}) {
    const double dist_to_cut = [&] {
        const double xr = std::remainder(z.real(), g.L);
        if (std::abs(z.imag()) > 0.0) return std::abs(z.imag());
        return std::abs(xr) <= g.ell ? 0.0 : std::min(std::abs(xr - g.ell), std::abs(xr + g.ell));
    }();
    if (dist_to_cut <= 0.0)
        throw std::domain_error("analytic_continuation: z on the interval");

    Vec2 out = Vec2::Zero();
    Mat2 h = Mat2::Zero();
    if (state.is_ramond()) h = build_h(state, g);
    for (int a = 0; a < 2; ++a) {
        const double sign = a == 0 ? 1.0 : -1.0;
        for (int b = 0; b < 2; ++b) {
            const TestFunction1D& fb = f[b];
            if (!fb.f) continue;
            const double lo = std::max(-g.ell, fb.support_lo);
            const double hi = std::min(g.ell, fb.support_hi);
            if (lo >= hi) continue;
            auto integrand = [&](double y) -> complex {
                complex v = 0.0;
                if (state.is_ramond()) {
                    v += h(a, b) * fb.f(y);
                    if (a == b)
                        v += sign * fb.f(y) / (2i * g.L * std::tan(pi / g.L * (z - y)));
                } else if (a == b) {
                    v += sign * fb.f(y) / (2i * g.L * std::sin(pi / g.L * (z - y)));
                }
                return v;
            };
            out[a] += integrate(integrand, lo, hi, q);
        }
    }
    return out;
}

}  // namespace modcyl
