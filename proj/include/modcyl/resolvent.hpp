#pragma once

#include <cmath>

#include "common.hpp"
#include "correlators.hpp"
#include "geometry.hpp"
#include "singular_kernel.hpp"
#include "states.hpp"
#include "test_functions.hpp"

namespace modcyl {

// ---------------------------------------------------------------------------
// Scalar building blocks of the resolvent construction
// ---------------------------------------------------------------------------

inline void require_off_spectrum(complex mu) {
    const double d = (mu.real() < 0.0)   ? std::abs(mu)
                     : (mu.real() > 1.0) ? std::abs(mu - 1.0)
                                         : std::abs(mu.imag());
    if (!(d > 1e-12)) throw std::domain_error("resolvent: mu too close to [0, 1]");
}

/// Analytic function on the cut cylinder with unit jump across the interval:
/// (i/2pi) log of the ratio sin[(pi/L)(z-ell)] / sin[(pi/L)(z+ell)].
/// The principal branch is continuous off the cut; the boundary values are
/// -(i/2pi) Omega_1(x) -+ 1/2 and the limits at +-i infinity are -+ ell/L.
inline complex unit_jump_function(complex z, const Geometry& g) {
    const double xr = std::remainder(z.real(), g.L);
    if (z.imag() == 0.0 && std::abs(xr) <= g.ell)
        throw std::domain_error("unit_jump_function: z on the cut");
    const complex zz = complex(xr, z.imag());
    return 0.5i / pi * std::log(std::sin(pi / g.L * (zz - g.ell)) / std::sin(pi / g.L * (zz + g.ell)));
}

/// Boundary values of the unit-jump function on the cut; side = +1 from
/// above, -1 from below.
inline complex unit_jump_boundary(double x, int side, const Geometry& g) {
    g.require_inside(x, "unit_jump_boundary");
    return -0.5i / pi * flow_coordinate(Chirality::one, x, g) - 0.5 * side;
}

/// (1 - 1/mu)^{unit_jump_function(z)} with the principal branch of the power;
/// the multiplicative jump across the interval is 1 - 1/mu.
inline complex jump_factor(complex z, complex mu, const Geometry& g) {
    require_off_spectrum(mu);
    return std::exp(unit_jump_function(z, g) * std::log(1.0 - 1.0 / mu));
}

/// Unimodular-type power (1 - 1/mu)^{(i/2pi) d} for a real flow-coordinate
/// difference d, with the principal branch of the log.
inline complex coordinate_power(complex mu, double d) {
    return std::exp(0.5i / pi * d * std::log(1.0 - 1.0 / mu));
}

/// Same with base 1/mu - 1 (real positive on the spectral interval).
inline complex coordinate_power_flipped(complex mu, double d) {
    return std::exp(0.5i / pi * d * std::log(1.0 / mu - 1.0));
}

// ---------------------------------------------------------------------------
// The zero-mode matrix of the periodic resolvent
// ---------------------------------------------------------------------------

namespace detail {

inline Mat2 zero_mode_matrix_impl(const StateParams& p, const Geometry& g, complex r2w,
                                  const char* who) {
    // r2w = (1 - 1/mu)^{2 ell/L} or its boundary replacement
    const double q1p = 1.0 + 2.0 * g.L * p.h1, q1m = 1.0 - 2.0 * g.L * p.h1;
    const double q2p = 1.0 + 2.0 * g.L * p.h2, q2m = 1.0 - 2.0 * g.L * p.h2;
    const Mat2 h = build_h(p, g);
    const Mat2 traceless = 2.0 * h - h.trace() * Mat2::Identity();
    const complex num_scalar =
        q1p * q2p / (4.0 * g.L) * r2w - q1m * q2m / (4.0 * g.L) / r2w;
    const complex den = 1.0 - 4.0 * g.L * g.L * p.h1 * p.h2 + 0.5 * q1p * q2p * r2w +
                        0.5 * q1m * q2m / r2w;
    if (std::abs(den) < 1e-13)
        throw std::runtime_error(std::string(who) + ": degenerate denominator");
    return (traceless + num_scalar * Mat2::Identity()) / den;
}

}  // namespace detail

/// Closed-form zero-mode matrix entering the periodic resolvent kernel.
/// Tends to h for large |mu| and to +1/(2L) (resp. -1/(2L)) times the
/// identity as mu -> 0 (resp. 1).
inline Mat2 zero_mode_matrix(complex mu, const StateParams& p, const Geometry& g) {
    if (!p.is_ramond()) throw std::invalid_argument("zero_mode_matrix: periodic states only");
    require_off_spectrum(mu);
    const complex r2w = std::exp(2.0 * g.ell / g.L * std::log(1.0 - 1.0 / mu));
    return detail::zero_mode_matrix_impl(p, g, r2w, "zero_mode_matrix");
}

/// Boundary values on the spectral interval: the power of 1 - 1/mu is
/// replaced by (1/mu - 1)^{2 ell/L} e^{+- 2 pi i ell / L} per branch side.
inline Mat2 zero_mode_matrix_boundary(double mu, int side, const StateParams& p,
                                      const Geometry& g) {
    if (!p.is_ramond())
        throw std::invalid_argument("zero_mode_matrix_boundary: periodic states only");
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error("zero_mode_matrix_boundary: mu outside (0, 1)");
    const complex r2w = std::pow(1.0 / mu - 1.0, 2.0 * g.ell / g.L) *
                        std::exp(complex(0.0, side * 2.0 * pi * g.ell / g.L));
    return detail::zero_mode_matrix_impl(p, g, r2w, "zero_mode_matrix_boundary");
}

// ---------------------------------------------------------------------------
// Resolvent kernels and their application
// ---------------------------------------------------------------------------

/// Structured kernel of R(mu) = (G - mu)^{-1} on [-ell, ell]: a principal
/// value part dressed with the coordinate power, the identity delta part,
/// and (periodic case) the separable zero-mode part.
inline SingularKernel1D resolvent_kernel(complex mu, const StateParams& state,
                                         const Geometry& g) {
    require_off_spectrum(mu);
    SingularKernel1D k;
    k.geo = &g;
    k.domain_lo = -g.ell;
    k.domain_hi = g.ell;
    const complex pref = 1.0 / (mu * (1.0 - mu));
    const complex c0 = pref / (2i * g.L);
    const complex logbase = std::log(1.0 - 1.0 / mu);
    const bool ramond = state.is_ramond();

    for (int a = 0; a < 2; ++a) {
        PVTerm term;
        term.a = term.b = a;
        term.sing.family = PVSingularity::Family::inv_sin_diff;
        const complex c = (a == 0 ? c0 : -c0);
        const Chirality ca = a == 0 ? Chirality::one : Chirality::two;
        term.prefactor = [c, ca, logbase, ramond, &g](double x, double y) {
            const double d = flow_coordinate_diff(ca, x, ca, y, g);
            complex v = c * std::exp(0.5i / pi * d * logbase);
            if (ramond) v *= g.cos_pl(x - y);
            return v;
        };
        k.pv.push_back(std::move(term));
    }

    const complex delta_coeff = -(1.0 - 2.0 * mu) / (2.0 * mu * (1.0 - mu));
    k.delta_diag = [delta_coeff](double) { return Mat2(delta_coeff * Mat2::Identity()); };

    if (ramond) {
        const Mat2 gm = zero_mode_matrix(mu, state, g);
        k.smooth = [gm, pref, logbase, &g](double x, double y) {
            Mat2 m;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double d =
                        flow_coordinate_diff(a == 0 ? Chirality::one : Chirality::two, x,
                                             b == 0 ? Chirality::one : Chirality::two, y, g);
                    m(a, b) = pref * gm(a, b) * std::exp(0.5i / pi * d * logbase);
                }
            return m;
        };
    }
    return k;
}

/// Alternative algebraic form of the antiperiodic kernel, with the power of
/// 1/mu - 1 and an explicit branch-compensating exponential. Used as a
/// cross-check of branch handling; must agree with resolvent_kernel.
inline SingularKernel1D resolvent_kernel_flipped_branch(complex mu, const StateParams& state,
                                                        const Geometry& g) {
    require_off_spectrum(mu);
    if (state.is_ramond())
        throw std::invalid_argument("resolvent_kernel_flipped_branch: antiperiodic form only");
    SingularKernel1D k;
    k.geo = &g;
    k.domain_lo = -g.ell;
    k.domain_hi = g.ell;
    const complex pref = 1.0 / (mu * (1.0 - mu));
    const complex c0 = pref / (2i * g.L);
    const complex log_flip = std::log(1.0 / mu - 1.0);
    const double argdiff = std::arg(1.0 / mu - 1.0) - std::arg(1.0 - 1.0 / mu);

    for (int a = 0; a < 2; ++a) {
        PVTerm term;
        term.a = term.b = a;
        term.sing.family = PVSingularity::Family::inv_sin_diff;
        const complex c = (a == 0 ? c0 : -c0);
        const Chirality ca = a == 0 ? Chirality::one : Chirality::two;
        term.prefactor = [c, ca, log_flip, argdiff, &g](double x, double y) {
            const double d = flow_coordinate_diff(ca, x, ca, y, g);
            return c * std::exp(d / (2.0 * pi) * argdiff) * std::exp(0.5i / pi * d * log_flip);
        };
        k.pv.push_back(std::move(term));
    }
    const complex delta_coeff = -(1.0 - 2.0 * mu) / (2.0 * mu * (1.0 - mu));
    k.delta_diag = [delta_coeff](double) { return Mat2(delta_coeff * Mat2::Identity()); };
    return k;
}

/// R(mu) f evaluated at one point.
inline SmearResult resolvent_apply_at(complex mu, const TestSpinor& f, double x,
                                      const StateParams& state, const Geometry& g,
                                      const SmearSpec& spec = {}) {
    SingularKernel1D k = resolvent_kernel(mu, state, g);
    return smear(k, f, x, spec);
}

/// R(mu) f sampled on a grid.
inline SampledSpinor resolvent_apply(complex mu, const TestSpinor& f,
                                     const std::vector<double>& grid, const StateParams& state,
                                     const Geometry& g, const SmearSpec& spec = {}) {
    SingularKernel1D k = resolvent_kernel(mu, state, g);
    SampledSpinor out(grid);
    parallel_for(grid.size(), [&](std::size_t j) {
        const Vec2 v = smear(k, f, grid[j], spec).value;
        out.v1[j] = v[0];
        out.v2[j] = v[1];
    });
    return out;
}

/// R(mu) f as a callable spinor, interpolated on a grid uniform in the flow
/// coordinate: the image diverges algebraically at the interval ends, which
/// becomes a smooth exponential in that coordinate, so splines stay accurate
/// there (an x-space spline does not).
inline TestSpinor resolvent_interpolant(complex mu, const TestSpinor& f, const StateParams& state,
                                        const Geometry& g, int n = 400, double wmax = 20.0,
                                        const SmearSpec& spec = {}) {
    SingularKernel1D k = resolvent_kernel(mu, state, g);
    std::vector<double> w(n), xs(n);
    for (int j = 0; j < n; ++j) {
        w[j] = -wmax + (j + 0.5) * 2.0 * wmax / n;
        xs[j] = flow_coordinate_inverse(w[j], g);
    }
    std::vector<complex> v1(n), v2(n);
    parallel_for(n, [&](std::size_t j) {
        const Vec2 v = smear(k, f, xs[j], spec).value;
        v1[j] = v[0];
        v2[j] = v[1];
    });
    auto s1 = std::make_shared<detail::CubicSpline>(w, std::move(v1));
    auto s2 = std::make_shared<detail::CubicSpline>(std::move(w), std::move(v2));
    TestSpinor out;
    const double edge = g.ell * (1.0 - 1e-14);
    for (int a = 0; a < 2; ++a) {
        auto sp = a == 0 ? s1 : s2;
        out[a].f = [sp, &g](double x) {
            return sp->value(flow_coordinate(Chirality::one, x, g));
        };
        out[a].support_lo = -edge;
        out[a].support_hi = edge;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral density from the closed-form resolvent jump
// ---------------------------------------------------------------------------

namespace detail {

struct DensityFactors {
    // 1-d integrals entering the separable jump kernel
    complex gx[2], fy[2];            // plain-phase factors, per component
    complex gx_cos[2], fy_cos[2];    // cos(pi x / L)-weighted
    complex gx_sin[2], fy_sin[2];    // sin(pi x / L)-weighted
    complex gx_exp[2][2], fy_exp[2][2];  // e^{-+ Omega/2}-weighted (index: 0 -> -, 1 -> +)
};

/// All x- and y-side factor integrals at spectral parameter mu in (0, 1).
/// beta is the phase slope ln(1/mu - 1)/(2 pi); the common weight is
/// 1/sqrt(endpoint product).
inline DensityFactors density_factors(double beta, const TestSpinor& f, const TestSpinor& gf,
                                      const Geometry& g, bool ramond, const QuadratureSpec& q) {
    DensityFactors out{};
    for (int a = 0; a < 2; ++a) {
        const Chirality ca = a == 0 ? Chirality::one : Chirality::two;
        const double sgn = chirality_sign(ca);
        // weight(x, Omega_a(x)); the phase slope flips sign between the
        // conjugated x side and the plain y side
        auto run = [&](const TestFunction1D& fn, bool conj_side, auto weight) -> complex {
            if (!fn.f) return 0.0;
            const double lo = std::max(-g.ell, fn.support_lo);
            const double hi = std::min(g.ell, fn.support_hi);
            if (lo >= hi) return 0.0;
            auto integrand = [&](double x) -> complex {
                const double om = sgn * flow_coordinate(Chirality::one, x, g);
                const complex ph = std::exp(1i * ((conj_side ? beta : -beta) * om));
                const complex base = (conj_side ? std::conj(fn.f(x)) : fn.f(x)) * ph;
                return base * weight(x, om);
            };
            return integrate(integrand, lo, hi, q);
        };
        auto inv_sqrtp = [&](double x, double) {
            return 1.0 / std::sqrt(g.endpoint_product(x));
        };
        out.gx[a] = run(gf[a], true, inv_sqrtp);
        out.fy[a] = run(f[a], false, inv_sqrtp);
        if (ramond) {
            auto wcos = [&](double x, double) {
                return std::cos(pi * x / g.L) / std::sqrt(g.endpoint_product(x));
            };
            auto wsin = [&](double x, double) {
                return std::sin(pi * x / g.L) / std::sqrt(g.endpoint_product(x));
            };
            out.gx_cos[a] = run(gf[a], true, wcos);
            out.fy_cos[a] = run(f[a], false, wcos);
            out.gx_sin[a] = run(gf[a], true, wsin);
            out.fy_sin[a] = run(f[a], false, wsin);
            // the zero-mode part carries no endpoint-product weight
            for (int s = 0; s < 2; ++s) {
                const double e = s == 0 ? -0.5 : 0.5;
                auto wexp = [e](double, double om) { return std::exp(e * om); };
                out.gx_exp[a][s] = run(gf[a], true, wexp);
                out.fy_exp[a][s] = run(f[a], false, wexp);
            }
        }
    }
    return out;
}

}  // namespace detail

namespace detail {
complex spectral_density_impl(double mu, const TestSpinor& f, const TestSpinor& gf,
                              const StateParams& state, const Geometry& g,
                              const QuadratureSpec& q);
}

/// <g, dE(mu)/dmu f> from the closed-form jump of the resolvent across the
/// spectral interval. The kernel is separable in x and y, so the double
/// smearing reduces to products of one-dimensional integrals.
inline complex spectral_density(double mu, const TestSpinor& f, const TestSpinor& gf,
                                const StateParams& state, const Geometry& g,
                                const QuadratureSpec& q = {}) {
    if (!(mu > 1e-10 && mu < 1.0 - 1e-10))
        throw std::domain_error("spectral_density: mu too close to the endpoints");
    return detail::spectral_density_impl(mu, f, gf, state, g, q);
}

inline complex detail::spectral_density_impl(double mu, const TestSpinor& f, const TestSpinor& gf,
                                             const StateParams& state, const Geometry& g,
                                             const QuadratureSpec& q) {
    const double beta = std::log(1.0 / mu - 1.0) / (2.0 * pi);
    const bool ramond = state.is_ramond();
    const auto fac = detail::density_factors(beta, f, gf, g, ramond, q);
    const double coef = g.sin_interval() / (4.0 * pi * g.L * mu * (1.0 - mu));

    complex total = 0.0;
    if (!ramond) {
        for (int a = 0; a < 2; ++a) total += coef * fac.gx[a] * fac.fy[a];
        return total;
    }
    // diagonal part carries an extra cos[(pi/L)(x-y)] = cos cos + sin sin
    for (int a = 0; a < 2; ++a)
        total += coef * (fac.gx_cos[a] * fac.fy_cos[a] + fac.gx_sin[a] * fac.fy_sin[a]);
    // zero-mode boundary matrices
    const Mat2 gp = zero_mode_matrix_boundary(mu, +1, state, g);
    const Mat2 gm = zero_mode_matrix_boundary(mu, -1, state, g);
    const complex zpref = 1.0 / (2.0 * pi * 1i * mu * (1.0 - mu));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            total += zpref * (gp(a, b) * fac.gx_exp[a][0] * fac.fy_exp[b][1] -
                              gm(a, b) * fac.gx_exp[a][1] * fac.fy_exp[b][0]);
    return total;
}

/// int_0^1 w(mu) <g, dE(mu) f> dmu via the substitution
/// mu = 1/(1 + e^{-2 pi s}), which flattens the endpoint behavior.
template <class WeightFn>
complex spectral_integral(WeightFn&& w, const TestSpinor& f, const TestSpinor& gf,
                          const StateParams& state, const Geometry& g, double s_max = 30.0,
                          const QuadratureSpec& q = {}) {
    auto integrand = [&](double s) -> complex {
        const double mu = 1.0 / (1.0 + std::exp(-2.0 * pi * s));
        if (mu <= 0.0 || mu >= 1.0) return 0.0;
        const double jac = 2.0 * pi * mu * (1.0 - mu);
        return w(mu) * jac * detail::spectral_density_impl(mu, f, gf, state, g, q);
    };
    QuadratureSpec outer = q;
    outer.abs_tol = std::max(q.abs_tol, 1e-9);
    const double brk[1] = {0.0};
    return integrate_split(integrand, -s_max, s_max, brk, outer).value;
}

}  // namespace modcyl
